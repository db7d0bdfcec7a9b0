"""Exact arithmetic in the p-th cyclotomic field and the exact evaluation of
the half-period products and tangent determinants that live there.

Elements are dense rational coefficient vectors on the power basis
1, zeta, ..., zeta^(p-2); sqrt(p) (p = 1 mod 4) and i*sqrt(p) (p = 3 mod 4)
enter exactly through the quadratic Gauss sum.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from . import ntheory
from .errors import ConsistencyError, ResourceLimitError
from .quadfield import QuadUnit

MAX_EXACT_P = 31  # dense Fraction vectors stay cheap up to here

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _canon(p: int, acc: list[Fraction]) -> tuple[Fraction, ...]:
    # acc indexes exponents 0..p-1; fold zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
    top = acc[p - 1]
    return tuple(acc[t] - top for t in range(p - 1))


@dataclass(frozen=True)
class CycloElt:
    """An element of Q(zeta_p) in canonical power-basis coordinates."""

    p: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.p - 1:
            raise ValueError("coefficient vector must have length p - 1")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(p: int) -> "CycloElt":
        return CycloElt(p, tuple([_ZERO] * (p - 1)))

    @staticmethod
    def from_rational(p: int, q) -> "CycloElt":
        c = [_ZERO] * (p - 1)
        c[0] = Fraction(q)
        return CycloElt(p, tuple(c))

    @staticmethod
    def one(p: int) -> "CycloElt":
        return CycloElt.from_rational(p, 1)

    @staticmethod
    def zeta_pow(p: int, e: int) -> "CycloElt":
        acc = [_ZERO] * p
        acc[e % p] = _ONE
        return CycloElt(p, _canon(p, acc))

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "CycloElt":
        if isinstance(other, CycloElt):
            if other.p != self.p:
                raise ValueError("mismatched cyclotomic fields")
            return other
        return CycloElt.from_rational(self.p, other)

    def __add__(self, other) -> "CycloElt":
        o = self._coerce(other)
        return CycloElt(self.p, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other) -> "CycloElt":
        o = self._coerce(other)
        return CycloElt(self.p, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other) -> "CycloElt":
        return self._coerce(other) - self

    def __neg__(self) -> "CycloElt":
        return CycloElt(self.p, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "CycloElt":
        if not isinstance(other, CycloElt):
            q = Fraction(other)
            return CycloElt(self.p, tuple(a * q for a in self.coeffs))
        o = self._coerce(other)
        p = self.p
        acc = [_ZERO] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        acc[(i + j) % p] += a * b
        return CycloElt(p, _canon(p, acc))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "CycloElt":
        if not isinstance(other, CycloElt):
            q = Fraction(other)
            if q == 0:
                raise ZeroDivisionError("division by zero rational")
            return CycloElt(self.p, tuple(a / q for a in self.coeffs))
        return self * other.inverse()

    def __pow__(self, k: int) -> "CycloElt":
        if k < 0:
            return self.inverse() ** (-k)
        out = CycloElt.one(self.p)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def inverse(self) -> "CycloElt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        inv = _inverse_coeffs(list(self.coeffs), self.p)
        return CycloElt(self.p, tuple(inv))

    # -- field symmetries ----------------------------------------------------

    def conjugate(self) -> "CycloElt":
        """Complex conjugation, zeta -> zeta^(-1)."""
        p = self.p
        acc = [_ZERO] * p
        for t, c in enumerate(self.coeffs):
            if c:
                acc[(-t) % p] += c
        return CycloElt(p, _canon(p, acc))

    def is_real(self) -> bool:
        return self.conjugate() == self

    def rational_value(self) -> Fraction:
        """The element as a rational number; raises if it is irrational."""
        if any(c for c in self.coeffs[1:]):
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def to_mpc(self, prec_bits: int = 128):
        """Numeric embedding with zeta = exp(2 pi i / p)."""
        with mp.workprec(prec_bits + 32):
            total = mp.mpc(0)
            for t, c in enumerate(self.coeffs):
                if c:
                    val = mpf(c.numerator) / c.denominator
                    total += val * mp.expjpi(mpf(2 * t) / self.p)
            return total


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = num[:]
    q = [_ZERO] * max(0, len(num) - len(den) + 1)
    inv_lead = 1 / den[-1]
    for i in range(len(num) - len(den), -1, -1):
        f = num[i + len(den) - 1] * inv_lead
        if f:
            q[i] = f
            for j, d in enumerate(den):
                num[i + j] -= f * d
    return q, _poly_trim(num)


def _inverse_coeffs(a: list[Fraction], p: int) -> list[Fraction]:
    # extended Euclid against Phi_p = 1 + X + ... + X^(p-1)
    phi = [_ONE] * p
    r_prev, r = phi, _poly_trim(a[:])
    s_prev, s = [_ZERO], [_ONE]
    while r:
        q, rem = _poly_divmod(r_prev, r)
        r_prev, r = r, rem
        s_new = s_prev[:]
        s_new += [_ZERO] * (len(q) + len(s) - 1 - len(s_new))
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s):
                    s_new[i + j] -= qi * sj
        s_prev, s = s, _poly_trim(s_new)
    if len(r_prev) != 1:
        raise ConsistencyError("gcd with Phi_p is not constant; Phi_p reducible?")
    g = r_prev[0]
    inv = [c / g for c in s_prev]
    if len(inv) >= p:
        _, inv = _poly_divmod(inv, phi)
    inv += [_ZERO] * (p - 1 - len(inv))
    return inv[:p - 1]


# ---------------------------------------------------------------------------
# Gauss sums and embeddings of sqrt(p), eps_p^h


@functools.lru_cache(maxsize=None)
def gauss_sum(p: int) -> CycloElt:
    """g = sum chi(t) zeta^t; g^2 = (-1)^((p-1)/2) p exactly.

    In the embedding zeta = exp(2 pi i/p) this is +sqrt(p) for p = 1 (mod 4)
    and +i sqrt(p) for p = 3 (mod 4).
    """
    ctx = ntheory.prime_ctx(p)
    acc = [_ZERO] * p
    for t in range(1, p):
        acc[t] = Fraction(int(ctx.legendre_table[t]))
    g = CycloElt(p, _canon(p, acc))
    sq = g * g
    want = Fraction(p if p % 4 == 1 else -p)
    if sq != CycloElt.from_rational(p, want):
        raise ConsistencyError(f"Gauss sum square is not {want} for p={p}")
    return g


def quad_unit_elt(qu: QuadUnit, k: int = 1) -> CycloElt:
    """Embed qu^k = (u + v sqrt(p))/2 into Q(zeta_p); needs p = 1 (mod 4)."""
    p = qu.p
    if p % 4 != 1:
        raise ValueError("sqrt(p) lies in Q(zeta_p) only for p = 1 (mod 4)")
    w = qu ** k
    g = gauss_sum(p)
    return (CycloElt.from_rational(p, w.u) + g * Fraction(w.v)) * Fraction(1, 2)


# ---------------------------------------------------------------------------
# The half-period products


def _check_exact_size(p: int) -> None:
    if p > MAX_EXACT_P:
        raise ResourceLimitError(f"exact cyclotomic work is capped at p <= {MAX_EXACT_P}")


def product_one_minus(p: int, a: int) -> CycloElt:
    """prod over k = 1..(p-1)/2 of (1 - zeta^(a k^2))."""
    _check_exact_size(p)
    if a % p == 0:
        raise ValueError("a must be coprime to p")
    out = CycloElt.one(p)
    for k in range(1, (p - 1) // 2 + 1):
        out = out * (CycloElt.one(p) - CycloElt.zeta_pow(p, a * k * k))
    return out


def pair_products(p: int, a: int, kind: str) -> CycloElt:
    """prod over 1 <= j < k <= (p-1)/2 of (zeta^(a j^2) -+ zeta^(a k^2));
    kind is "diff" or "sum"."""
    _check_exact_size(p)
    if a % p == 0:
        raise ValueError("a must be coprime to p")
    if kind not in ("diff", "sum"):
        raise ValueError(f"kind must be 'diff' or 'sum', got {kind!r}")
    n = (p - 1) // 2
    out = CycloElt.one(p)
    for j in range(1, n + 1):
        zj = CycloElt.zeta_pow(p, a * j * j)
        for k in range(j + 1, n + 1):
            zk = CycloElt.zeta_pow(p, a * k * k)
            out = out * (zj - zk if kind == "diff" else zj + zk)
    return out


def grid_product(p: int, a: int, b: int) -> CycloElt:
    """prod over the full (j, k) grid of (1 - zeta^(a j^2 + b k^2));
    defined for p = 3 (mod 4) and (ab/p) = 1 so no factor vanishes."""
    _check_exact_size(p)
    ctx = ntheory.prime_ctx(p)
    if p % 4 != 3:
        raise ValueError(f"grid product needs p = 3 (mod 4), got {p}")
    if ctx.chi(a * b) != 1:
        raise ValueError(f"grid product needs (ab/p) = 1, got a={a}, b={b}")
    n = (p - 1) // 2
    out = CycloElt.one(p)
    for j in range(1, n + 1):
        for k in range(1, n + 1):
            out = out * (CycloElt.one(p) - CycloElt.zeta_pow(p, a * j * j + b * k * k))
    return out


# ---------------------------------------------------------------------------
# Exact tangent determinants via x = i


def _det_cyclo(rows: list[list[CycloElt]], p: int) -> CycloElt:
    n = len(rows)
    m = [row[:] for row in rows]
    det = CycloElt.one(p)
    sign = 1
    for i in range(n):
        piv = next((r for r in range(i, n) if not m[r][i].is_zero()), None)
        if piv is None:
            return CycloElt.zero(p)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            sign = -sign
        det = det * m[i][i]
        inv = m[i][i].inverse()
        for r in range(i + 1, n):
            f = m[r][i] * inv
            if not f.is_zero():
                m[r] = [m[r][c] - f * m[i][c] for c in range(n)]
    return det if sign == 1 else -det


def tan_det_exact(p: int, a: int, b: int, full_range: bool = False
                  ) -> tuple[CycloElt, CycloElt]:
    """Exact affine coefficients (c, d) of det[x + tan(pi (a j^2 + b k^2)/p)].

    Evaluates the determinant at x = i, where each entry becomes
    2i/(zeta^(a j^2 + b k^2) + 1); pulling out (2i)^N leaves a determinant D
    in Q(zeta_p) that must be fixed by conjugation.  The phase i^N routes
    2^N D into c or d; the other coefficient is exactly zero.
    """
    _check_exact_size(p)
    if (a * b) % p == 0:
        raise ValueError("a and b must be coprime to p")
    n = (p - 1) // 2
    start = 0 if full_range else 1
    idx = list(range(start, n + 1))
    cache: dict[int, CycloElt] = {}

    def entry(r: int) -> CycloElt:
        if r not in cache:
            cache[r] = (CycloElt.zeta_pow(p, r) + 1).inverse()
        return cache[r]

    rows = [[entry((a * j * j + b * k * k) % p) for k in idx] for j in idx]
    D = _det_cyclo(rows, p)
    if not D.is_real():
        raise ConsistencyError(
            f"determinant over Q(zeta_{p}) is not conjugation-fixed (a={a}, b={b})")
    N = len(idx)
    scaled = D * Fraction(2 ** N)
    zero = CycloElt.zero(p)
    phase = N % 4
    if phase == 0:
        return scaled, zero
    if phase == 1:
        return zero, scaled
    if phase == 2:
        return -scaled, zero
    return zero, -scaled
