"""Elementary modular number theory: Legendre/Jacobi symbols, residue
orderings, factorials and quadratic character sums.

Everything here is exact integer arithmetic.  ``PrimeCtx`` caches the per-prime
tables that the matrix builders hit in O(p^2) loops.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError

# Deterministic Miller-Rabin witness set for n < 3.3e24 (covers 64-bit).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (valid for 64-bit inputs)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def odd_primes_in(lo: int, hi: int, mod4: int | None = None) -> list[int]:
    """Odd primes in [lo, hi], optionally restricted to one class mod 4."""
    ps = [p for p in primes_in(max(lo, 3), hi) if p % 2 == 1]
    if mod4 is not None:
        ps = [p for p in ps if p % 4 == mod4]
    return ps


@functools.lru_cache(maxsize=None)
def _checked_odd_prime(p: int) -> int:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"expected an odd prime, got {p}")
    return p


@dataclass(frozen=True)
class PrimeCtx:
    """Per-prime precomputed data.

    ``legendre_table[a]`` holds chi(a) for 0 <= a < p; ``half_fact`` is
    ((p-1)/2)! mod p.  The table is shared and must not be mutated.
    """

    p: int
    n: int
    legendre_table: np.ndarray
    half_fact: int
    p_mod4: int
    p_mod8: int

    def chi(self, a: int) -> int:
        return int(self.legendre_table[a % self.p])


@functools.lru_cache(maxsize=None)
def prime_ctx(p: int) -> PrimeCtx:
    _checked_odd_prime(p)
    n = (p - 1) // 2
    table = np.full(p, -1, dtype=np.int64)
    table[0] = 0
    a = np.arange(1, p, dtype=np.int64)
    table[(a * a) % p] = 1
    half_fact = 1
    for k in range(2, n + 1):
        half_fact = half_fact * k % p
    return PrimeCtx(p, n, table, half_fact, p % 4, p % 8)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p): 0 if p | a, +1 on nonzero squares, else -1."""
    if p <= (1 << 22):
        return prime_ctx(p).chi(a)
    _checked_odd_prime(p)
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n >= 1 (n need not be prime)."""
    if n <= 0 or n % 2 == 0:
        raise ValueError(f"Jacobi symbol needs odd n >= 1, got {n}")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def least_residue(m: int, p: int) -> int:
    """Least nonnegative residue of m modulo p (correct for negative m)."""
    _checked_odd_prime(p)
    return m % p


def inverse_mod(a: int, p: int) -> int:
    return pow(a, -1, p)


def jacobsthal_sum(d: int, p: int) -> int:
    """Sum over x = 1..(p-1)/2 of chi(x * (x^2 + d))."""
    ctx = prime_ctx(p)
    x = np.arange(1, ctx.n + 1, dtype=np.int64)
    vals = x * ((x * x + d % p) % p) % p
    return int(ctx.legendre_table[vals].sum())


def delta_sign(c: int, p: int) -> int:
    """+1 if c^((p-1)/4) is congruent to ((p-1)/2)! mod p, else -1.

    Defined only for p = 1 (mod 4) and (c/p) = -1, where the fourth power
    residue is forced to be one of the two square roots of -1.
    """
    ctx = prime_ctx(p)
    if ctx.p_mod4 != 1:
        raise ValueError(f"delta sign needs p = 1 (mod 4), got p={p}")
    if ctx.chi(c) != -1:
        raise ValueError(f"delta sign needs (c/p) = -1, got c={c}, p={p}")
    r = pow(c % p, (p - 1) // 4, p)
    if r == ctx.half_fact:
        return 1
    if r == p - ctx.half_fact:
        return -1
    raise ConsistencyError(f"c^((p-1)/4) mod p is not a square root of -1 (c={c}, p={p})")


def sp_sign(a: int, p: int) -> int:
    """Parity sign of the sequence {a*j^2 mod p}, j = 1..(p-1)/2.

    Returns (-1)^(number of pairs j < k whose residues are out of order).
    """
    ctx = prime_ctx(p)
    if a % p == 0:
        raise ValueError(f"sp_sign needs p coprime to a, got a={a}, p={p}")
    j = np.arange(1, ctx.n + 1, dtype=np.int64)
    r = (a % p) * (j * j % p) % p
    idx = np.arange(ctx.n)
    inversions = int(np.count_nonzero((r[:, None] > r[None, :]) & (idx[:, None] < idx[None, :])))
    return -1 if inversions % 2 else 1


def quad_poly_char_sum(a: int, b: int, c: int, p: int) -> int:
    """Sum over x = 0..p-1 of chi(a*x^2 + b*x + c), cross-checked against the
    closed form (p-1)*(a/p) when p | b^2-4ac and -(a/p) otherwise."""
    ctx = prime_ctx(p)
    if a % p == 0:
        raise ValueError(f"leading coefficient must be nonzero mod p, got a={a}")
    x = np.arange(p, dtype=np.int64)
    vals = ((a % p) * (x * x % p) + (b % p) * x + c % p) % p
    direct = int(ctx.legendre_table[vals].sum())
    chi_a = ctx.chi(a)
    closed = (p - 1) * chi_a if (b * b - 4 * a * c) % p == 0 else -chi_a
    if direct != closed:
        raise ConsistencyError(
            f"character sum mismatch for ({a},{b},{c}) mod {p}: {direct} vs {closed}")
    return direct


def sqrt_mod(a: int, p: int) -> int:
    """A square root of a modulo p (Tonelli-Shanks); requires (a/p) != -1."""
    ctx = prime_ctx(p)
    a %= p
    if a == 0:
        return 0
    if ctx.chi(a) != 1:
        raise ValueError(f"{a} is not a square mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@functools.lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic nonresidue modulo p."""
    ctx = prime_ctx(p)
    for r in range(2, p):
        if ctx.chi(r) == -1:
            return r
    raise ConsistencyError(f"no nonresidue found mod {p}")


def nonresidues(p: int) -> list[int]:
    """All quadratic nonresidues in 1..p-1."""
    ctx = prime_ctx(p)
    return [d for d in range(1, p) if ctx.legendre_table[d] == -1]


def factor_trial(n: int) -> list[tuple[int, int]]:
    """Prime-power factorization by trial division (display-scale inputs)."""
    if n <= 0:
        raise ValueError("factor_trial needs a positive integer")
    out = []
    for q in range(2, math.isqrt(n) + 1):
        if n % q == 0:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            out.append((q, e))
        if n == 1:
            break
    if n > 1:
        out.append((n, 1))
    return out
