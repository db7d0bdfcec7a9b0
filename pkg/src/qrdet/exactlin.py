"""Exact linear algebra engines.

Determinants over the integers use fraction-free Bareiss elimination (gmpy2
bigints), determinants and Pfaffians mod p use Gaussian elimination with
modular inverses (numpy, lazy reduction), permanents use Ryser's
inclusion-exclusion.  All results are exact ring elements; nothing here is
floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
import numpy as np

from .errors import ConsistencyError, ResourceLimitError

_PERMANENT_CAP = 24  # Ryser is Theta(2^n * n); refuse beyond this


# ---------------------------------------------------------------------------
# Matrix containers


def _to_rows(m) -> list[list]:
    rows = m.rows if hasattr(m, "rows") else m
    out = [list(r) for r in rows]
    n = len(out)
    if any(len(r) != n for r in out):
        raise ValueError("matrix must be square")
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of arbitrary-precision integers."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("IntMatrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_rows(rows) -> "IntMatrix":
        return IntMatrix(tuple(tuple(int(x) for x in r) for r in rows))


@dataclass(frozen=True)
class ModMatrix:
    """Square matrix over Z/pZ with entries reduced to [0, p)."""

    rows: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("ModMatrix must be square")
        if any(not 0 <= x < self.p for r in self.rows for x in r):
            raise ValueError("ModMatrix entries must lie in [0, p)")

    @property
    def n(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_rows(rows, p: int) -> "ModMatrix":
        return ModMatrix(tuple(tuple(int(x) % p for x in r) for r in rows), p)


@dataclass(frozen=True)
class RatMatrix:
    """Square matrix of exact rationals."""

    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise ValueError("RatMatrix must be square")

    @property
    def n(self) -> int:
        return len(self.rows)

    @staticmethod
    def from_rows(rows) -> "RatMatrix":
        return RatMatrix(tuple(tuple(Fraction(x) for x in r) for r in rows))


# ---------------------------------------------------------------------------
# Exact integer determinant (Bareiss)


def det_exact(m) -> int:
    """Exact determinant of an integer matrix via fraction-free elimination.

    Every interior division is exact; a nonzero remainder means corrupted
    input (non-integers) and raises ConsistencyError.
    """
    rows = _to_rows(m)
    n = len(rows)
    if n == 0:
        return 1
    a = [[gmpy2.mpz(x) for x in r] for r in rows]
    sign = 1
    prev = gmpy2.mpz(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                q, r = divmod(pk * row_i[j] - aik * row_k[j], prev)
                if r:
                    raise ConsistencyError("inexact division in Bareiss elimination")
                row_i[j] = q
            row_i[k] = gmpy2.mpz(0)
        prev = pk
    return int(sign * a[n - 1][n - 1])


def det_rat(m) -> Fraction:
    """Exact rational determinant: clear denominators per row, then Bareiss."""
    rows = [[Fraction(x) for x in r] for r in _to_rows(m)]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    scale = 1
    cleared = []
    for r in rows:
        l = math.lcm(*(f.denominator for f in r))
        scale *= l
        cleared.append([int(f * l) for f in r])
    return Fraction(det_exact(cleared), scale)


# ---------------------------------------------------------------------------
# Determinants mod p


def _det_mod_python(rows, p: int) -> int:
    m = [[x % p for x in r] for r in rows]
    n = len(m)
    det = 1
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i]), None)
        if piv is None:
            return 0
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det = det * m[i][i] % p
        inv = pow(m[i][i], -1, p)
        for r in range(i + 1, n):
            f = m[r][i] * inv % p
            if f:
                mr, mi = m[r], m[i]
                for c in range(i, n):
                    mr[c] = (mr[c] - f * mi[c]) % p
    return det % p


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    inv[1] = 1
    for x in range(2, p):
        # inv[x] = -(p // x) * inv[p % x] mod p
        inv[x] = (p - (p // x)) * inv[p % x] % p
    return inv


def det_mod_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of matrices, shape (B, N, N).

    Elimination keeps entries unreduced between pivot steps; the worst-case
    magnitude p + N*(p-1)^2 picks the integer width.
    """
    mats = np.asarray(mats)
    if mats.ndim == 2:
        mats = mats[None, :, :]
    B, N, N2 = mats.shape
    if N != N2:
        raise ValueError("matrices must be square")
    if N == 0:
        return np.ones(B, dtype=np.int64)
    bound = p + N * (p - 1) ** 2
    if bound < (1 << 30):
        dtype = np.int32
    elif bound < (1 << 62):
        dtype = np.int64
    else:
        return np.array([_det_mod_python(mm.tolist(), p) for mm in mats], dtype=object)
    M = (mats % p).astype(dtype)
    inv = _inverse_table(p).astype(dtype)
    sign = np.ones(B, dtype=np.int64)
    zero = np.zeros(B, dtype=bool)
    piv_prod = np.ones(B, dtype=np.int64)
    for i in range(N):
        col = M[:, i:, i] % p
        M[:, i:, i] = col
        pivzero = col[:, 0] == 0
        if pivzero.any():
            for b in np.nonzero(pivzero)[0]:
                nz = np.nonzero(col[b, 1:])[0]
                if len(nz) == 0:
                    zero[b] = True
                    M[b, i, i] = 1
                else:
                    j = i + 1 + int(nz[0])
                    M[b, [i, j], :] = M[b, [j, i], :]
                    sign[b] = -sign[b]
        M[:, i, i:] %= p
        piv = M[:, i, i]
        piv_prod = piv_prod * piv % p
        if i + 1 < N:
            f = (M[:, i + 1:, i] % p) * inv[piv][:, None] % p
            M[:, i + 1:, i + 1:] -= f[:, :, None] * M[:, None, i, i + 1:]
    dets = piv_prod * sign % p
    dets[zero] = 0
    return dets


def det_mod(m, p: int | None = None) -> int:
    """Determinant mod p, reduced to [0, p)."""
    if p is None:
        p = m.p
    rows = _to_rows(m)
    n = len(rows)
    if n == 0:
        return 1 % p
    if n <= 4 or p + n * (p - 1) ** 2 >= (1 << 62):
        return _det_mod_python(rows, p)
    return int(det_mod_batch(np.array(rows, dtype=np.int64), p)[0])


# ---------------------------------------------------------------------------
# Permanents (Ryser)


def _permanent_gray(rows, reduce=lambda v: v):
    """Ryser's formula with Gray-code column updates; works in any
    commutative ring whose elements support +, -, *."""
    n = len(rows)
    zero = rows[0][0] - rows[0][0] if n else 0
    row_sums = [zero for _ in range(n)]
    total = zero
    size = 0
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        if (k ^ (k >> 1)) >> j & 1:
            for i in range(n):
                row_sums[i] = reduce(row_sums[i] + rows[i][j])
            size += 1
        else:
            for i in range(n):
                row_sums[i] = reduce(row_sums[i] - rows[i][j])
            size -= 1
        prod = row_sums[0]
        for i in range(1, n):
            prod = reduce(prod * row_sums[i])
        total = reduce(total + prod if (n - size) % 2 == 0 else total - prod)
    return total


def _permanent_mod_subsets(rows, p: int) -> int:
    """Vectorized Ryser mod p: subset row-sums built by doubling."""
    a = np.array(rows, dtype=np.int64) % p
    n = len(rows)
    R = np.zeros((1, n), dtype=np.int64)
    sizes = np.zeros(1, dtype=np.int64)
    for j in range(n):
        R = np.concatenate([R, (R + a[:, j]) % p])
        sizes = np.concatenate([sizes, sizes + 1])
    prod = np.ones(1 << n, dtype=np.int64)
    for i in range(n):
        prod = prod * R[:, i] % p
    signs = np.where((n - sizes) % 2 == 0, 1, -1)
    return int((prod[1:] * signs[1:]).sum() % p)


def permanent_ryser(m, p: int | None = None):
    """Permanent of a square matrix, exact in its ring.

    With ``p`` (or a ModMatrix) the computation runs mod p; otherwise the
    entries' own ring (int, Fraction) is used.  Dimension is capped at 24.
    """
    if p is None and hasattr(m, "p"):
        p = m.p
    rows = _to_rows(m)
    n = len(rows)
    if n > _PERMANENT_CAP:
        raise ResourceLimitError(f"permanent of size {n} exceeds cap {_PERMANENT_CAP}")
    if n == 0:
        return 1 if p is None else 1 % p
    if p is not None:
        if n <= 20:
            return _permanent_mod_subsets(rows, p)
        return _permanent_gray([[x % p for x in r] for r in rows],
                               reduce=lambda v: v % p) % p
    return _permanent_gray(rows)


# ---------------------------------------------------------------------------
# Pfaffians mod p


def _check_skew_mod(rows, p: int) -> None:
    n = len(rows)
    for i in range(n):
        if rows[i][i] % p:
            raise ValueError("matrix is not skew-symmetric mod p (nonzero diagonal)")
        for j in range(i + 1, n):
            if (rows[i][j] + rows[j][i]) % p:
                raise ValueError("matrix is not skew-symmetric mod p")


def pfaffian_mod(m, p: int | None = None) -> int:
    """Pfaffian mod p of a skew-symmetric matrix of even dimension.

    Convention: Pf([[0, a], [-a, 0]]) = a.  Satisfies Pf^2 = det (mod p).
    """
    if p is None:
        p = m.p
    rows = _to_rows(m)
    n = len(rows)
    if n % 2:
        raise ValueError("Pfaffian needs even dimension")
    _check_skew_mod(rows, p)
    if n == 0:
        return 1 % p
    M = np.array(rows, dtype=np.int64) % p
    inv = _inverse_table(p)
    pf = 1
    for k in range(0, n, 2):
        if M[k, k + 1] % p == 0:
            js = np.nonzero(M[k, k + 2:] % p)[0]
            if len(js) == 0:
                return 0
            j = k + 2 + int(js[0])
            M[[k + 1, j], :] = M[[j, k + 1], :]
            M[:, [k + 1, j]] = M[:, [j, k + 1]]
            pf = -pf
        a = int(M[k, k + 1] % p)
        pf = pf * a % p
        if k + 2 < n:
            ainv = int(inv[a])
            rk = M[k, k + 2:] % p
            rk1 = M[k + 1, k + 2:] % p
            upd = (np.outer(rk, rk1) - np.outer(rk1, rk)) % p * ainv % p
            M[k + 2:, k + 2:] = (M[k + 2:, k + 2:] - upd) % p
    return pf % p


# ---------------------------------------------------------------------------
# Misc exact helpers


def integer_sqrt_exact(v: int):
    """r with r*r == v, or None when v is not a perfect square."""
    if v < 0:
        raise ValueError("integer_sqrt_exact needs a nonnegative integer")
    r = math.isqrt(v)
    return r if r * r == v else None


def cauchy_det_closed(x, y) -> Fraction:
    """Closed-form determinant of [1/(x_j + y_k)], cross-checked against the
    direct rational determinant."""
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    n = len(x)
    if len(y) != n:
        raise ValueError("x and y must have equal length")
    for xj in x:
        for yk in y:
            if xj + yk == 0:
                raise ValueError(f"zero denominator: x={xj}, y={-xj}")
    num = Fraction(1)
    for j in range(n):
        for k in range(j + 1, n):
            num *= (x[j] - x[k]) * (y[j] - y[k])
    den = Fraction(1)
    for xj in x:
        for yk in y:
            den *= xj + yk
    closed = num / den
    direct = det_rat([[1 / (xj + yk) for yk in y] for xj in x])
    if direct != closed:
        raise ConsistencyError("Cauchy closed form disagrees with direct determinant")
    return closed


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one exact identity check, with both sides retained."""

    ok: bool
    lhs: Fraction
    rhs: Fraction
    parts: tuple = ()


def borchardt_identity_check(x, y) -> IdentityReport:
    """det[1/(x+y)^2] == det[1/(x+y)] * per[1/(x+y)], all exact."""
    x = [Fraction(v) for v in x]
    y = [Fraction(v) for v in y]
    for xj in x:
        for yk in y:
            if xj + yk == 0:
                raise ValueError(f"zero denominator: x={xj}, y={-xj}")
    cauchy = [[1 / (xj + yk) for yk in y] for xj in x]
    squared = [[c * c for c in row] for row in cauchy]
    d2 = det_rat(squared)
    d1 = det_rat(cauchy)
    pr = permanent_ryser(cauchy)
    return IdentityReport(d2 == d1 * pr, d2, d1 * pr, (d1, pr))


def shift_det_check(a, x) -> IdentityReport:
    """det[x + a] - det[a] == x * det[b] with b_jk = a_jk - a_j0 - a_0k + a_00
    (indices 1..n on the right-hand side)."""
    rows = [[Fraction(v) for v in r] for r in _to_rows(a)]
    x = Fraction(x)
    n1 = len(rows)
    shifted = [[x + v for v in r] for r in rows]
    lhs = det_rat(shifted) - det_rat(rows)
    b = [[rows[j][k] - rows[j][0] - rows[0][k] + rows[0][0]
          for k in range(1, n1)] for j in range(1, n1)]
    rhs = x * det_rat(b)
    return IdentityReport(lhs == rhs, lhs, rhs)
