"""Arbitrary-precision real evaluation of the tangent/cotangent determinant
families and of every closed-form right-hand side.

Each determinant is evaluated twice, at the working precision and at twice
the working precision; the observed discrepancy plus a Hadamard-scaled
roundoff floor gives the certified error bound.  Values whose magnitude is
below 8x their bound are flagged unreliable rather than rejected.
"""

from __future__ import annotations

import functools
import os
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from . import ntheory, qmatrix, quadfield
from .errors import ConsistencyError

GUARD_BITS = 64


def default_prec(p: int) -> int:
    env = os.environ.get("QRDET_PRECISION_BITS")
    if env:
        return max(128, int(env))
    return max(256, 12 * p)


@dataclass(frozen=True)
class HPReal:
    """A real value with working precision and a certified absolute error."""

    value: object      # mpf
    prec_bits: int
    err_bound: object  # mpf, >= 0

    @property
    def unreliable(self) -> bool:
        return abs(self.value) < 8 * self.err_bound

    def __str__(self):
        return f"{mp.nstr(self.value, 24)} (err<={mp.nstr(self.err_bound, 3)})"


@dataclass(frozen=True)
class AffineReal:
    """The affine map x -> c + d*x."""

    c: HPReal
    d: HPReal


def trig_pi_frac(r: int, p: int, kind: str, prec_bits: int = 256) -> HPReal:
    """tan(pi r / p) or cot(pi r / p) with certified relative error."""
    r0 = ntheory.least_residue(r, p)
    if kind not in ("tan", "cot"):
        raise ValueError(f"kind must be 'tan' or 'cot', got {kind!r}")
    if kind == "cot" and r0 == 0:
        raise ValueError(f"cot(pi*{r}/{p}) is a pole")
    table = _trig_table(p, kind, prec_bits + GUARD_BITS)
    v = table[r0]
    with mp.workprec(prec_bits + GUARD_BITS):
        err = abs(v) * mpf(2) ** (4 - prec_bits)
    return HPReal(v, prec_bits, err)


@functools.lru_cache(maxsize=128)
def _trig_table(p: int, kind: str, prec_eff: int):
    """Values of tan/cot(pi r/p) for r = 0..p-1 at an effective precision."""
    with mp.workprec(prec_eff):
        out = []
        for r in range(p):
            t = mpf(r) / p
            s, c = mp.sinpi(t), mp.cospi(t)
            if kind == "tan":
                out.append(s / c)
            else:
                out.append(None if r == 0 else c / s)
        return tuple(out)


def _gauss_det(rows) -> mpf:
    n = len(rows)
    m = [list(r) for r in rows]
    det = mpf(1)
    for i in range(n):
        piv, best = i, abs(m[i][i])
        for r in range(i + 1, n):
            if abs(m[r][i]) > best:
                piv, best = r, abs(m[r][i])
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        if m[i][i] == 0:
            return mpf(0)
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] * inv
            if f:
                mr, mi = m[r], m[i]
                for c in range(i + 1, n):
                    mr[c] -= f * mi[c]
    return det


def det_hp(matrix_or_builder, prec_bits: int) -> HPReal:
    """Determinant with a two-precision error bound.

    Accepts either fixed rows of mpf/ints or a callable prec -> rows, so
    that trigonometric entries are rebuilt at the doubled precision.
    """
    if callable(matrix_or_builder):
        builder = matrix_or_builder
    else:
        rows_fixed = [list(r) for r in matrix_or_builder]
        builder = lambda _prec: rows_fixed
    p1 = prec_bits + GUARD_BITS
    p2 = 2 * prec_bits + GUARD_BITS
    with mp.workprec(p1):
        rows1 = builder(p1)
        n = len(rows1)
        v1 = _gauss_det(rows1)
    with mp.workprec(p2):
        rows2 = builder(p2)
        v2 = _gauss_det(rows2)
    with mp.workprec(p1):
        had = mpf(1)
        for r in rows2:
            had *= mp.sqrt(sum(mpf(abs(x)) ** 2 for x in r)) + mpf(2) ** (-2 * prec_bits)
        floor = had * mpf(2) ** (6 + n - 2 * prec_bits)
        err = 2 * abs(v1 - v2) + floor
    return HPReal(v2, prec_bits, err)


def affine_extract(evaluator, prec_bits: int) -> AffineReal:
    """Recover c, d of an affine-in-x determinant from x = 0, 1, -1.

    The third evaluation is an affinity certificate; failure indicates a
    matrix-builder bug, not roundoff.
    """
    f0 = evaluator(0)
    f1 = evaluator(1)
    fm1 = evaluator(-1)
    with mp.workprec(2 * prec_bits + GUARD_BITS):
        c = f0
        d = HPReal(f1.value - f0.value, prec_bits, f1.err_bound + f0.err_bound)
        scale = 1 + max(abs(f0.value), abs(f1.value), abs(fm1.value))
        tol = 8 * (fm1.err_bound + c.err_bound + d.err_bound) + scale * mpf(2) ** (-prec_bits // 2)
        resid = abs(fm1.value - (c.value - d.value))
        if resid > tol:
            raise ConsistencyError(
                f"affinity certificate failed: residual {mp.nstr(resid, 8)} > tol {mp.nstr(tol, 8)}")
    return AffineReal(c, d)


# ---------------------------------------------------------------------------
# The determinant families


_KIND_TAN = {"T0": True, "T1": True, "barT": True, "C": False, "barC": False}
_KIND_FULL = {"T0": True, "T1": False, "barT": True, "C": False, "barC": True}
_KIND_BAR = {"T0": False, "T1": False, "barT": True, "C": False, "barC": True}


def _family_rows(kind: str, p: int, a: int, b: int, x, prec_eff: int):
    rng = qmatrix.IndexRange.FULL if _KIND_FULL[kind] else qmatrix.IndexRange.POS
    res = qmatrix.trig_arguments(p, a, b, rng)
    trig = "tan" if _KIND_TAN[kind] else "cot"
    live = res[1:] if _KIND_BAR[kind] else res
    if trig == "cot" and (live == 0).any():
        raise ValueError(
            f"cot matrix has a pole: a j^2 + b k^2 = 0 (mod {p}) occurs; needs (-ab/p) = -1")
    table = _trig_table(p, trig, prec_eff)
    with mp.workprec(prec_eff):
        if isinstance(x, Fraction):
            xv = mpf(x.numerator) / x.denominator
        else:
            xv = mpf(x)
        rows = []
        for r_i, row in enumerate(res.tolist()):
            if _KIND_BAR[kind] and r_i == 0:
                rows.append([mpf(1)] * len(row))
            else:
                rows.append([xv + table[r] for r in row])
    return rows


def family_det(kind: str, p: int, a: int, b: int, x, prec_bits: int | None = None) -> HPReal:
    """Numeric determinant of one tangent/cotangent family member at a
    concrete x."""
    if kind not in _KIND_TAN:
        raise ValueError(f"unknown family kind {kind!r}")
    prec = prec_bits or default_prec(p)
    if isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1):
        return _family_det_cached(kind, p, a % p, b % p, int(x), prec)
    return det_hp(lambda pr: _family_rows(kind, p, a, b, x, pr), prec)


@functools.lru_cache(maxsize=4096)
def _family_det_cached(kind: str, p: int, a: int, b: int, x: int, prec: int) -> HPReal:
    return det_hp(lambda pr: _family_rows(kind, p, a, b, x, pr), prec)


def family_affine(kind: str, p: int, a: int, b: int, prec_bits: int | None = None) -> AffineReal:
    prec = prec_bits or default_prec(p)
    return affine_extract(lambda x: family_det(kind, p, a, b, x, prec), prec)


# ---------------------------------------------------------------------------
# Closed forms


def _hp_exact(v, prec: int) -> HPReal:
    return HPReal(v, prec, abs(v) * mpf(2) ** (6 - prec))


def _eps_power_value(p: int, k: int, prec: int):
    """Numeric eps_p^(k*h(p)) from the exact unit power."""
    return (quadfield.eps_h_power(p) ** k).embed(prec)


def _chi(p: int, v: int) -> int:
    return ntheory.prime_ctx(p).chi(v)


def _scaling_c(p: int, a: int, b: int) -> int:
    """c with a c^2 = b (mod p); defined when (ab/p) = 1."""
    return ntheory.sqrt_mod(b * pow(a, -1, p) % p, p)


def closed_form_affine(kind: str, p: int, a: int, b: int,
                       prec_bits: int | None = None) -> AffineReal:
    """The predicted exact value of a family determinant, as c + d*x.

    Raises ValueError naming the violated hypothesis when (p, a, b) is
    outside the statement's residue classes.
    """
    prec = prec_bits or default_prec(p)
    n = (p - 1) // 2
    ab = _chi(p, a * b)
    if ab == 0:
        raise ValueError("hypothesis violated: p | ab")
    with mp.workprec(prec + GUARD_BITS):
        zero = HPReal(mpf(0), prec, mpf(0))
        if kind == "T0":
            if p % 4 == 3:
                if p <= 3:
                    raise ValueError("hypothesis violated: needs p > 3")
                val = mp.power(p, mpf(p + 1) / 4)
                if ab == 1:
                    val *= mpf(2) ** n
                return AffineReal(_hp_exact(val, prec), zero)
            if ab == 1:
                c = _scaling_c(p, a, b)
                val = _chi(p, 2 * c) * mp.power(p, mpf(p + 1) / 4) \
                    * _eps_power_value(p, _chi(p, a) * (_chi(p, 2) - 2), prec + GUARD_BITS)
            else:
                val = -ntheory.delta_sign(a * b, p) * mpf(2) ** n * mp.power(p, mpf(p + 1) / 4)
            return AffineReal(zero, _hp_exact(val, prec))
        if kind == "T1":
            if p % 4 == 1:
                if ab == 1:
                    c = _scaling_c(p, a, b)
                    val = _chi(p, 2 * c) * mp.power(p, mpf(p - 3) / 4) \
                        * _eps_power_value(p, _chi(p, a) * (2 - _chi(p, 2)), prec + GUARD_BITS)
                else:
                    val = -ntheory.delta_sign(a * b, p) * mpf(2) ** n * mp.power(p, mpf(p - 3) / 4)
                return AffineReal(_hp_exact(val, prec), zero)
            if p <= 3:
                raise ValueError("hypothesis violated: needs p > 3")
            val = mp.power(p, mpf(p - 3) / 4)
            if ab == 1:
                val *= -(mpf(2) ** n)
            return AffineReal(zero, _hp_exact(val, prec))
        if kind == "C":
            if _chi(p, -a * b) != -1:
                raise ValueError("hypothesis violated: needs (-ab/p) = -1")
            if p <= 3:
                raise ValueError("hypothesis violated: needs p > 3")
            base = mpf(2) ** n / mp.sqrt(p)
            if p % 4 == 1:
                sign = (-1) ** ((p + 3) // 4) * ntheory.delta_sign(a * b, p)
                val = sign * base
            else:
                sign = (-1) ** ((class_number_imag_cached(p) + 1) // 2) * _chi(p, a)
                val = sign * base
            return AffineReal(_hp_exact(val, prec), zero)
        if kind == "barT":
            if p <= 3:
                raise ValueError("hypothesis violated: needs p > 3")
            if p % 4 == 1:
                if ab == 1:
                    c = _scaling_c(p, a, b)
                    val = _chi(p, 2 * c) * mp.power(p, mpf(p - 1) / 4)
                else:
                    val = -ntheory.delta_sign(a * b, p) * mpf(2) ** n \
                        * mp.power(p, mpf(p - 1) / 4) \
                        * _eps_power_value(p, _chi(p, 2 * a), prec + GUARD_BITS)
            else:
                e = (p + 1) // 4 + (class_number_imag_cached(p) + 1) // 2
                val = (-1) ** e * _chi(p, a) * mpf(2) ** ((1 + ab) * (p - 1) // 4) \
                    * mp.power(p, mpf(p - 1) / 4)
            return AffineReal(_hp_exact(val, prec), zero)
        if kind == "barC":
            if _chi(p, -a * b) != -1:
                raise ValueError("hypothesis violated: needs (-ab/p) = -1")
            if p <= 3:
                raise ValueError("hypothesis violated: needs p > 3")
            base = mpf(2) ** n / mp.sqrt(p)
            if p % 4 == 1:
                val = (-1) ** ((p + 3) // 4) * ntheory.delta_sign(a * b, p) * base \
                    * _eps_power_value(p, 2 * _chi(p, a), prec + GUARD_BITS)
            else:
                val = (-1) ** ((class_number_imag_cached(p) - 1) // 2) * _chi(p, a) * base
            return AffineReal(_hp_exact(val, prec), zero)
    raise ValueError(f"unknown closed form {kind!r}")


def class_number_imag_cached(p: int) -> int:
    return quadfield.class_number_imag(p)


# ---------------------------------------------------------------------------
# Tangent shift identity (general odd modulus)


def tan_shift_identity(nmod: int, a_seq, b_seq, x, prec_bits: int = 256):
    """Both sides of the rank-one tangent shift identity, as HPReals.

    Needs odd nmod and a_seq[0] + b_seq[0] = 0; returns (lhs, rhs) where
    lhs = det[x + tan]_0..m - det[tan]_0..m and rhs is x times the trailing
    determinant times the border tangent products.
    """
    if nmod % 2 == 0 or nmod < 3:
        raise ValueError("modulus must be odd and >= 3")
    if (a_seq[0] + b_seq[0]) % nmod:
        raise ValueError("needs a_0 + b_0 = 0 (mod n)")
    m1 = len(a_seq)
    if len(b_seq) != m1:
        raise ValueError("sequences must have equal length")

    def rows_at(xv, lo, prec_eff):
        table = _trig_table(nmod, "tan", prec_eff)
        with mp.workprec(prec_eff):
            xm = mpf(xv)
            return [[xm + table[(aj + bk) % nmod] for bk in b_seq[lo:]]
                    for aj in a_seq[lo:]]

    full_x = det_hp(lambda pr: rows_at(x, 0, pr), prec_bits)
    full_0 = det_hp(lambda pr: rows_at(0, 0, pr), prec_bits)
    inner = det_hp(lambda pr: rows_at(0, 1, pr), prec_bits)
    with mp.workprec(prec_bits + GUARD_BITS):
        table = _trig_table(nmod, "tan", prec_bits + GUARD_BITS)
        border = mpf(1)
        for k in range(1, m1):
            border *= table[(a_seq[k] + b_seq[0]) % nmod]
            border *= table[(a_seq[0] + b_seq[k]) % nmod]
        lhs = HPReal(full_x.value - full_0.value, prec_bits,
                     full_x.err_bound + full_0.err_bound)
        rv = mpf(x) * inner.value * border
        rerr = abs(mpf(x) * border) * inner.err_bound + abs(rv) * mpf(2) ** (4 - prec_bits)
        rhs = HPReal(rv, prec_bits, rerr)
    return lhs, rhs
