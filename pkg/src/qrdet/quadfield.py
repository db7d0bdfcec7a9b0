"""Invariants of the quadratic fields Q(sqrt(p)) and Q(sqrt(-p)).

Class number of the imaginary field by reduced-form count cross-checked
against the Dirichlet character sum; fundamental unit of the real field by
continued fractions; the exact h-th power of the unit recovered from the
half-period cyclotomic product.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import gmpy2
from mpmath import mp, mpf

from . import ntheory
from .errors import ConsistencyError, PrecisionError

_EMBED_GUARD = 64


@dataclass(frozen=True)
class QuadUnit:
    """The unit (u + v*sqrt(p))/2 of Q(sqrt(p)); u = v (mod 2), norm +-1."""

    u: int
    v: int
    p: int

    def __post_init__(self):
        if (self.u - self.v) % 2:
            raise ValueError("u and v must share parity")
        if self.norm not in (1, -1):
            raise ValueError(f"(u^2 - p v^2)/4 must be a unit norm, got {self.norm4 / 4}")

    @property
    def norm4(self) -> int:
        return self.u * self.u - self.p * self.v * self.v

    @property
    def norm(self) -> int:
        q, r = divmod(self.norm4, 4)
        return q if r == 0 else 0

    def __mul__(self, other: "QuadUnit") -> "QuadUnit":
        if self.p != other.p:
            raise ValueError("mismatched fields")
        u = self.u * other.u + self.p * self.v * other.v
        v = self.u * other.v + self.v * other.u
        if u % 2 or v % 2:
            raise ConsistencyError("product left the half-integer lattice")
        return QuadUnit(u // 2, v // 2, self.p)

    def inverse(self) -> "QuadUnit":
        s = self.norm
        return QuadUnit(s * self.u, -s * self.v, self.p)

    def __pow__(self, k: int) -> "QuadUnit":
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadUnit(2, 0, self.p)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def embed(self, prec_bits: int = 128) -> mpf:
        """Numeric value (u + v*sqrt(p))/2 at the requested precision."""
        with mp.workprec(prec_bits + _EMBED_GUARD):
            return (mpf(self.u) + mpf(self.v) * mp.sqrt(self.p)) / 2


# ---------------------------------------------------------------------------
# Imaginary quadratic field Q(sqrt(-p)), p = 3 (mod 4)


def _h_imag_forms(p: int) -> int:
    # count reduced forms a x^2 + b xy + c y^2 of discriminant -p
    count = 0
    amax = math.isqrt(p // 3) + 1
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            if (b * b + p) % (4 * a):
                continue
            c = (b * b + p) // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b <= 0:
                continue
            count += 1
    return count


def _h_imag_dirichlet(p: int) -> int:
    ctx = ntheory.prime_ctx(p)
    s = int(ctx.legendre_table[1:ctx.n + 1].sum())
    den = 2 - ctx.chi(2)
    if s % den:
        raise ConsistencyError(f"Dirichlet sum {s} not divisible by {den} for p={p}")
    return s // den


@functools.lru_cache(maxsize=None)
def class_number_imag(p: int) -> int:
    """h(-p) for a prime p = 3 (mod 4), p > 3; two methods must agree."""
    ntheory.prime_ctx(p)
    if p % 4 != 3 or p <= 3:
        raise ValueError(f"class_number_imag needs a prime p = 3 (mod 4), p > 3; got {p}")
    forms = _h_imag_forms(p)
    dirichlet = _h_imag_dirichlet(p)
    if forms != dirichlet:
        raise ConsistencyError(
            f"h(-{p}): reduced-form count {forms} != Dirichlet value {dirichlet}")
    return forms


# ---------------------------------------------------------------------------
# Real quadratic field Q(sqrt(p)), p = 1 (mod 4)


def _pell_min_integral(p: int) -> tuple[int, int, int]:
    """Smallest (x, y), y >= 1, with x^2 - p y^2 = +-1 (continued fractions)."""
    a0 = math.isqrt(p)
    m, d, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    while True:
        t = h * h - p * k * k
        if t in (1, -1):
            return h, k, t
        m = d * a - m
        d = (p - m * m) // d
        a = (a0 + m) // d
        h, h_prev = a * h + h_prev, h
        k, k_prev = a * k + k_prev, k


def _half_unit_cube_root(x: int, y: int, p: int) -> QuadUnit | None:
    # a half-integral unit e0 with e0^3 = x + y*sqrt(p) satisfies
    # p v^3 + 3 s v = 2 y and u^2 = p v^2 + 4 s, with u, v odd
    v_approx = int(gmpy2.iroot(gmpy2.mpz(max(1, (2 * y) // p)), 3)[0])
    for s in (-1, 1):
        for v in range(max(1, v_approx - 2), v_approx + 3):
            if p * v ** 3 + 3 * s * v != 2 * y:
                continue
            usq = p * v * v + 4 * s
            u = math.isqrt(usq)
            if u * u == usq and u % 2 == 1 and v % 2 == 1:
                cand = QuadUnit(u, v, p)
                if cand * cand * cand == QuadUnit(2 * x, 2 * y, p):
                    return cand
    return None


@functools.lru_cache(maxsize=None)
def fundamental_unit(p: int) -> QuadUnit:
    """Fundamental unit of Q(sqrt(p)) for a prime p = 1 (mod 4)."""
    ntheory.prime_ctx(p)
    if p % 4 != 1:
        raise ValueError(f"fundamental_unit needs p = 1 (mod 4), got {p}")
    x, y, _ = _pell_min_integral(p)
    half = _half_unit_cube_root(x, y, p)
    return half if half is not None else QuadUnit(2 * x, 2 * y, p)


def fundamental_unit_scan(p: int, vmax: int = 200_000) -> QuadUnit:
    """Reference search: scan v = 1, 2, ... for p v^2 +- 4 a perfect square."""
    if p % 4 != 1:
        raise ValueError(f"fundamental_unit_scan needs p = 1 (mod 4), got {p}")
    for v in range(1, vmax + 1):
        pv2 = p * v * v
        for s in (-1, 1):
            usq = pv2 + 4 * s
            if usq <= 0:
                continue
            u = math.isqrt(usq)
            if u * u == usq and (u - v) % 2 == 0:
                return QuadUnit(u, v, p)
    raise PrecisionError(f"no unit found for p={p} with v <= {vmax}")


def _eps_h_attempt(p: int, prec_bits: int) -> QuadUnit:
    n = (p - 1) // 2
    with mp.workprec(prec_bits + _EMBED_GUARD):
        prod = mp.mpc(1)
        for k in range(1, n + 1):
            r = k * k % p
            prod *= 1 - mp.expjpi(mpf(2 * r) / p)
        if abs(prod.imag) > abs(prod.real) * mpf(2) ** (-prec_bits // 2):
            raise PrecisionError(f"half-period product not real for p={p}")
        val = mp.sqrt(p) / prod.real  # = eps^h, a real number > 1
        tol = mpf(2) ** (-(prec_bits // 4))
        for s in (-1, 1):
            uf = val + s / val
            vf = (val - s / val) / mp.sqrt(p)
            u, v = int(mp.nint(uf)), int(mp.nint(vf))
            if abs(uf - u) < tol and abs(vf - v) < tol and u * u - p * v * v == 4 * s:
                return QuadUnit(u, v, p)
    raise PrecisionError(f"could not round eps^h to exact coordinates for p={p}")


@functools.lru_cache(maxsize=None)
def eps_h_power(p: int, precision_bits: int | None = None) -> QuadUnit:
    """Exact eps_p^h(p), recovered from prod(1 - zeta^(k^2)) = sqrt(p)/eps^h.

    Retries with doubled precision up to three times before giving up.
    """
    if p % 4 != 1:
        raise ValueError(f"eps_h_power needs p = 1 (mod 4), got {p}")
    prec = precision_bits or max(256, 12 * p)
    last = None
    for _ in range(4):
        try:
            return _eps_h_attempt(p, prec)
        except PrecisionError as exc:
            last = exc
            prec *= 2
    raise last


@functools.lru_cache(maxsize=None)
def class_number_real(p: int) -> int:
    """h(p) for a prime p = 1 (mod 4), verified by exact unit exponentiation."""
    eps = fundamental_unit(p)
    eh = eps_h_power(p)
    with mp.workprec(256):
        h = int(mp.nint(mp.log(eh.embed(192)) / mp.log(eps.embed(192))))
    if h < 1 or eps ** h != eh:
        raise ConsistencyError(f"h({p}): log-ratio {h} fails exact verification")
    return h
