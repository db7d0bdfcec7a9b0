"""Independent reference implementations used as test oracles.

Everything here is deliberately naive (permutation expansions, Fraction
Gaussian elimination, brute-force residue searches) and shares no code with
the engines under test.
"""

from fractions import Fraction
from itertools import permutations


def det_fraction_gauss(rows):
    """Plain Gaussian elimination over Fraction; independent of Bareiss."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for i in range(n):
        piv = next((r for r in range(i, n) if m[r][i] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != i:
            m[i], m[piv] = m[piv], m[i]
            det = -det
        det *= m[i][i]
        inv = 1 / m[i][i]
        for r in range(i + 1, n):
            f = m[r][i] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[i])]
    return det


def det_permutation(rows):
    """Leibniz expansion; fine for n <= 5."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        seen = [False] * n
        for i in range(n):
            if seen[i]:
                continue
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
        term = sign
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def per_naive(rows):
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        term = 1
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total


def pf_naive(rows):
    """Pfaffian by recursive expansion along the first row:
    Pf(A) = sum_j (-1)^(j-1) a_0j Pf(A with rows/cols 0, j removed)."""
    n = len(rows)
    if n == 0:
        return 1
    if n % 2:
        return 0
    if n == 2:
        return rows[0][1]
    total = 0
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        sub = [[rows[a][b] for b in keep] for a in keep]
        total += (-1) ** (j - 1) * rows[0][j] * pf_naive(sub)
    return total


def legendre_brute(a, p):
    a %= p
    if a == 0:
        return 0
    squares = {x * x % p for x in range(1, p)}
    return 1 if a in squares else -1


def inversions_brute(seq):
    c = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                c += 1
    return c
