import random
from fractions import Fraction

import numpy as np
import pytest

from helpers import det_fraction_gauss, det_permutation, per_naive, pf_naive
from qrdet import exactlin, ntheory, qmatrix
from qrdet.errors import ResourceLimitError
from qrdet.qmatrix import Family, IndexRange, MatrixSpec


def test_det_exact_examples():
    assert exactlin.det_exact([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert exactlin.det_exact([[0, 1], [1, 0]]) == -1
    assert exactlin.det_exact([[1, 1], [1, 2]]) == 1
    assert exactlin.det_exact([]) == 1


def test_det_exact_vs_fraction_gauss():
    rng = random.Random(11)
    for _ in range(60):
        n = rng.randint(1, 7)
        rows = [[rng.randint(-50, 50) for _ in range(n)] for _ in range(n)]
        assert exactlin.det_exact(rows) == det_fraction_gauss(rows)
        if n <= 4:
            assert exactlin.det_exact(rows) == det_permutation(rows)


def test_det_exact_transpose_and_row_swap():
    rng = random.Random(13)
    for _ in range(40):
        n = rng.randint(2, 6)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        d = exactlin.det_exact(rows)
        assert exactlin.det_exact([list(c) for c in zip(*rows)]) == d
        i, j = rng.sample(range(n), 2)
        swapped = [r[:] for r in rows]
        swapped[i], swapped[j] = swapped[j], swapped[i]
        assert exactlin.det_exact(swapped) == -d


def test_det_exact_singular_and_zero_pivot():
    assert exactlin.det_exact([[0, 0], [0, 0]]) == 0
    assert exactlin.det_exact([[0, 2], [0, 3]]) == 0
    assert exactlin.det_exact([[0, 1, 2], [1, 0, 3], [2, 3, 0]]) == \
        det_fraction_gauss([[0, 1, 2], [1, 0, 3], [2, 3, 0]])


def test_det_mod_cross_engine():
    # bigint and mod-p engines agree on 100 random matrices
    rng = random.Random(17)
    primes = ntheory.primes_in(2, 97)
    for _ in range(100):
        n = rng.randint(1, 8)
        rows = [[rng.randint(-100, 100) for _ in range(n)] for _ in range(n)]
        d = exactlin.det_exact(rows)
        for p in (rng.choice(primes), 97):
            if p == 2:
                continue
            assert exactlin.det_mod([[x % p for x in r] for r in rows], p) == d % p


def test_det_mod_spec_examples():
    m = qmatrix.build(MatrixSpec(Family.LEGENDRE, 5, d=1), ring="mod")
    assert m.rows == ((4, 0), (0, 4))
    assert exactlin.det_mod(m) == 1
    for d in range(1, 7):
        mm = qmatrix.build(MatrixSpec(Family.POWER, 7, d=d, exponent=4,
                                      rng=IndexRange.FULL), ring="mod")
        assert exactlin.det_mod(mm) == 0
    r = qmatrix.build(MatrixSpec(Family.RECIP, 5, d=2), ring="mod")
    assert r.rows == ((2, 4), (1, 3))
    assert exactlin.det_mod(r) == 2


def test_det_mod_batch_matches_python():
    rng = np.random.default_rng(3)
    for p in (5, 13, 97, 997):
        for n in (1, 2, 5, 9):
            mats = rng.integers(0, p, size=(6, n, n))
            got = exactlin.det_mod_batch(mats, p)
            for i in range(6):
                assert got[i] == exactlin._det_mod_python(mats[i].tolist(), p)
    singular = np.zeros((2, 3, 3), dtype=np.int64)
    singular[1] = np.eye(3)
    assert list(exactlin.det_mod_batch(singular, 7)) == [0, 1]


def test_permanent_examples_and_oracle():
    assert exactlin.permanent_ryser([[2, 3], [5, 7]]) == 2 * 7 + 3 * 5
    assert exactlin.permanent_ryser([[1, 1, 1]] * 3) == 6
    rng = random.Random(23)
    for _ in range(25):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        want = per_naive(rows)
        assert exactlin.permanent_ryser(rows) == want
        assert exactlin.permanent_ryser(rows, p=13) == want % 13
        # both mod paths agree
        assert exactlin._permanent_mod_subsets(rows, 13) == want % 13
        assert exactlin._permanent_gray([[x % 13 for x in r] for r in rows],
                                        reduce=lambda v: v % 13) % 13 == want % 13


def test_permanent_mod_spec_example():
    m = qmatrix.build(MatrixSpec(Family.RECIP, 7, d=1), ring="mod")
    got = exactlin.permanent_ryser(m)
    # direct n! oracle over the same modular entries
    assert got == per_naive([list(r) for r in m.rows]) % 7
    assert got == 4


def test_permanent_cap():
    with pytest.raises(ResourceLimitError):
        exactlin.permanent_ryser([[1] * 25] * 25)


def test_pfaffian_examples():
    assert exactlin.pfaffian_mod([[0, 3], [-3 % 5, 0]], 5) == 3
    a, b, c, d, e, f = 2, 3, 4, 5, 6, 1
    rows = [[0, a, b, c], [-a, 0, d, e], [-b, -d, 0, f], [-c, -e, -f, 0]]
    p = 11
    assert exactlin.pfaffian_mod([[x % p for x in r] for r in rows], p) == \
        (a * f - b * e + c * d) % p
    m = qmatrix.build(MatrixSpec(Family.SKEW_D, 5, exponent=1), ring="mod")
    assert exactlin.pfaffian_mod(m) == 3


def test_pfaffian_oracle_and_square():
    rng = random.Random(31)
    for _ in range(40):
        n = rng.choice([2, 4, 6])
        p = rng.choice([5, 13, 101])
        upper = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        rows = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                rows[i][j] = upper[i][j]
                rows[j][i] = (-upper[i][j]) % p
        pf = exactlin.pfaffian_mod(rows, p)
        assert pf == pf_naive(rows) % p
        assert pf * pf % p == exactlin.det_mod(rows, p)


def test_pfaffian_rejects_bad_input():
    with pytest.raises(ValueError):
        exactlin.pfaffian_mod([[0, 1, 2], [4, 0, 1], [3, 4, 0]], 5)  # odd dim
    with pytest.raises(ValueError):
        exactlin.pfaffian_mod([[1, 1], [4, 0]], 5)  # nonzero diagonal


def test_integer_sqrt_exact():
    assert exactlin.integer_sqrt_exact(144) == 12
    assert exactlin.integer_sqrt_exact(2) is None
    assert exactlin.integer_sqrt_exact(729) == 27
    assert exactlin.integer_sqrt_exact(0) == 0
    big = (3 ** 200 + 7) ** 2
    assert exactlin.integer_sqrt_exact(big) == 3 ** 200 + 7
    assert exactlin.integer_sqrt_exact(big + 1) is None
    with pytest.raises(ValueError):
        exactlin.integer_sqrt_exact(-1)


def test_cauchy_closed_form():
    assert exactlin.cauchy_det_closed([1, 2], [1, 2]) == Fraction(1, 72)
    assert exactlin.cauchy_det_closed([Fraction(3)], [Fraction(4)]) == Fraction(1, 7)
    assert exactlin.cauchy_det_closed([1, 1, 2], [1, 2, 3]) == 0
    with pytest.raises(ValueError):
        exactlin.cauchy_det_closed([1, -2], [2, 5])


def test_borchardt_examples():
    rep = exactlin.borchardt_identity_check([1, 2], [1, 2])
    assert rep.ok and rep.lhs == Fraction(17, 5184)
    assert rep.parts == (Fraction(1, 72), Fraction(17, 72))
    rep1 = exactlin.borchardt_identity_check([Fraction(1, 3)], [Fraction(1, 5)])
    assert rep1.ok


def test_borchardt_random():
    rng = random.Random(41)
    done = 0
    while done < 40:
        n = rng.randint(1, 6)
        x = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(n)]
        y = [Fraction(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(n)]
        if len(set(x)) < n or len(set(y)) < n or any(a + b == 0 for a in x for b in y):
            continue
        assert exactlin.borchardt_identity_check(x, y).ok
        done += 1


def test_shift_det_check():
    z = [[0] * 4 for _ in range(4)]
    assert exactlin.shift_det_check(z, 5).ok
    rng = random.Random(43)
    for _ in range(25):
        n1 = rng.randint(1, 5)
        rows = [[rng.randint(-8, 8) for _ in range(n1)] for _ in range(n1)]
        for x in (0, 1, Fraction(-3, 2)):
            rep = exactlin.shift_det_check(rows, x)
            assert rep.ok, (rows, x, rep)
