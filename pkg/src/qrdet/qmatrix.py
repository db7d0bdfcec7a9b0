"""Builders for the matrix families under study, plus the coset difference
product.

Index convention: matrix position (r, c) corresponds to indices
(j, k) = (range_start + r, range_start + c); FULL starts at 0, POS at 1,
TAIL at 2, all ending at (p-1)/2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import ntheory
from .exactlin import IntMatrix, ModMatrix, RatMatrix


class Family(enum.Enum):
    LEGENDRE = "legendre"      # chi(j^2 + d k^2)
    POWER = "power"            # (j^2 + d k^2)^n
    RECIP = "recip"            # 1 / (j^2 + d k^2)
    RECIP_SQ = "recip_sq"      # 1 / (j^2 + d k^2)^2
    SKEW_D = "skew_d"          # (j^2 - k^2)^m chi(j^2 - k^2)
    TRIG_TAN = "trig_tan"      # x + tan(pi (a j^2 + b k^2)/p), built in realhp
    TRIG_COT = "trig_cot"      # x + cot(pi (a j^2 + b k^2)/p), built in realhp


class IndexRange(enum.Enum):
    FULL = 0
    POS = 1
    TAIL = 2

    @property
    def start(self) -> int:
        return self.value


@dataclass(frozen=True)
class MatrixSpec:
    """One matrix family instance; unused parameters stay None."""

    family: Family
    p: int
    d: int | None = None
    a: int | None = None
    b: int | None = None
    exponent: int | None = None
    rng: IndexRange = IndexRange.POS
    bar: bool = False


def _indices(spec: MatrixSpec) -> np.ndarray:
    n = (spec.p - 1) // 2
    start = spec.rng.start
    if start > n:
        raise ValueError(f"empty index range for p={spec.p}")
    return np.arange(start, n + 1, dtype=np.int64)


def _base_grid(spec: MatrixSpec) -> np.ndarray:
    """(j^2 + d k^2) mod p over the spec's index square."""
    idx = _indices(spec)
    p, d = spec.p, spec.d % spec.p
    sq = idx * idx % p
    return (sq[:, None] + d * sq[None, :]) % p


def build(spec: MatrixSpec, ring: str = "auto"):
    """Materialize the spec as an IntMatrix, ModMatrix, or RatMatrix.

    ring: "int" (exact integers), "mod" (entries reduced mod p), "rat"
    (exact rationals; reciprocal families only), or "auto" for the family's
    natural exact ring.
    """
    fam, p = spec.family, spec.p
    if fam in (Family.TRIG_TAN, Family.TRIG_COT):
        raise ValueError("trig families are numeric; build them via realhp")
    if ring == "auto":
        ring = {"legendre": "int", "power": "int", "recip": "rat",
                "recip_sq": "rat", "skew_d": "int"}[fam.value]

    if fam is Family.SKEW_D:
        return _build_skew(spec, ring)

    ctx = ntheory.prime_ctx(p)
    if spec.d is None:
        raise ValueError(f"{fam} needs parameter d")
    grid = _base_grid(spec)

    if fam is Family.LEGENDRE:
        ent = ctx.legendre_table[grid]
        rows = ent.tolist()
    elif fam is Family.POWER:
        e = spec.exponent
        if e is None or e < 0:
            raise ValueError("POWER needs a nonnegative exponent")
        if ring == "mod":
            rows = _pow_mod_array(grid, e, p).tolist()
        else:
            idx = _indices(spec).tolist()
            d = spec.d
            rows = [[(j * j + d * k * k) ** e for k in idx] for j in idx]
    elif fam in (Family.RECIP, Family.RECIP_SQ):
        if ctx.chi(-spec.d) != -1:
            raise ValueError(
                f"reciprocal families need (-d/p) = -1, got d={spec.d}, p={p}")
        if spec.rng is IndexRange.FULL and not spec.bar:
            raise ValueError("1/(j^2 + d k^2) has a pole at j = k = 0; use bar")
        sq = fam is Family.RECIP_SQ
        if ring == "mod":
            inv = _inverse_table(p)
            ent = inv[grid]
            if sq:
                ent = ent * ent % p
            rows = ent.tolist()
        else:
            idx = _indices(spec).tolist()
            d = spec.d
            rows = []
            for r, j in enumerate(idx):
                if spec.bar and r == 0:
                    rows.append([Fraction(1)] * len(idx))
                else:
                    rows.append([Fraction(1, (j * j + d * k * k) ** (2 if sq else 1))
                                 for k in idx])
            return RatMatrix.from_rows(rows)
    else:
        raise ValueError(f"unhandled family {fam}")

    if spec.bar:
        rows[0] = [1] * len(rows)
    if ring == "mod":
        return ModMatrix.from_rows(rows, p)
    if ring == "int":
        return IntMatrix.from_rows(rows)
    if ring == "rat":
        return RatMatrix.from_rows(rows)
    raise ValueError(f"unknown ring {ring!r}")


def _build_skew(spec: MatrixSpec, ring: str):
    """(j^2 - k^2)^m chi_n(j^2 - k^2) over 1 <= j, k <= (n-1)/2.

    The modulus (spec.p) may be any odd integer >= 3; the character is the
    Jacobi symbol, which is the Legendre symbol in the prime case.
    """
    nmod = spec.p
    m = spec.exponent
    if nmod < 3 or nmod % 2 == 0:
        raise ValueError(f"SKEW_D needs an odd modulus >= 3, got {nmod}")
    if m is None or m < 0:
        raise ValueError("SKEW_D needs a nonnegative exponent")
    if spec.rng is not IndexRange.POS or spec.bar:
        raise ValueError("SKEW_D is defined on the POS range without bar")
    half = (nmod - 1) // 2
    if ntheory.is_prime(nmod):
        ctx = ntheory.prime_ctx(nmod)
        chi = lambda t: ctx.chi(t)
    else:
        chi = lambda t: ntheory.jacobi(t, nmod)
    rows = []
    for j in range(1, half + 1):
        row = []
        for k in range(1, half + 1):
            t = j * j - k * k
            row.append(t ** m * chi(t))
        rows.append(row)
    if ring in ("auto", "int"):
        return IntMatrix.from_rows(rows)
    if ring == "mod":
        return ModMatrix.from_rows(rows, nmod)
    raise ValueError(f"unsupported ring {ring!r} for SKEW_D")


def _pow_mod_array(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


def _inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    inv[1] = 1
    for x in range(2, p):
        inv[x] = (p - (p // x)) * inv[p % x] % p
    return inv


def trig_arguments(p: int, a: int, b: int, rng: IndexRange) -> np.ndarray:
    """Residues (a j^2 + b k^2) mod p over the index square; the numeric
    matrix entries are tan or cot of pi times these over p."""
    n = (p - 1) // 2
    idx = np.arange(rng.start, n + 1, dtype=np.int64)
    sq = idx * idx % p
    return ((a % p) * sq[:, None] + (b % p) * sq[None, :]) % p


class CosetProduct(NamedTuple):
    product: int
    closed_form: int


def coset_difference_product(p: int, m: int) -> CosetProduct:
    """Product over the m cosets of the m-th power subgroup of the sorted
    in-coset differences, mod p, paired with its closed form.

    Defined for m | p-1 with p mod 2m in {1, 1+m}.
    """
    ctx = ntheory.prime_ctx(p)
    if m < 1 or (p - 1) % m:
        raise ValueError(f"m must divide p - 1, got m={m}, p={p}")
    res = p % (2 * m)
    if res not in (1, 1 + m):
        raise ValueError(
            f"p mod 2m must be 1 or 1+m; p={p}, m={m} is outside the covered cases")
    powers = sorted({pow(x, m, p) for x in range(1, p)})
    seen = [False] * p
    lhs = 1
    for rep in range(1, p):
        if seen[rep]:
            continue
        coset = sorted(rep * h % p for h in powers)
        for c in coset:
            seen[c] = True
        for t in range(1, len(coset)):
            for s in range(t):
                lhs = lhs * (coset[t] - coset[s]) % p
    if res == 1:
        e = ((p + 1) // 2) * ((p - 1) // (2 * m)) + (p - 3) // 4
        rhs = ctx.half_fact if e % 2 == 0 else (p - ctx.half_fact) % p
    else:
        e = ((p + 1) // 2) * ((p - 1 - m) // (2 * m))
        rhs = 1 if e % 2 == 0 else p - 1
    return CosetProduct(lhs % p, rhs)
