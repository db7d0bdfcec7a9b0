import random

import numpy as np
import pytest

from helpers import inversions_brute, legendre_brute
from qrdet import ntheory
from qrdet.errors import ConsistencyError


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(50):
        assert ntheory.is_prime(n) == (n in primes)
    assert ntheory.is_prime(2 ** 61 - 1)
    assert not ntheory.is_prime(2 ** 61 + 1)


@pytest.mark.parametrize("a,p,want", [(1, 5, 1), (5, 5, 0), (2, 5, -1)])
def test_legendre_examples(a, p, want):
    assert ntheory.legendre(a, p) == want


def test_legendre_matches_euler_criterion():
    for p in ntheory.odd_primes_in(3, 200):
        for a in range(1, p):
            sym = ntheory.legendre(a, p)
            assert sym == legendre_brute(a, p)
            assert pow(a, (p - 1) // 2, p) == sym % p


def test_legendre_rejects_bad_modulus():
    with pytest.raises(ValueError):
        ntheory.legendre(3, 15)
    with pytest.raises(ValueError):
        ntheory.legendre(3, 2)


def test_prime_ctx_invariants():
    for p in ntheory.odd_primes_in(3, 200):
        ctx = ntheory.prime_ctx(p)
        assert ctx.legendre_table[0] == 0
        vals = ctx.legendre_table[1:]
        assert (vals == 1).sum() == ctx.n
        assert (vals == -1).sum() == ctx.n
        assert ctx.half_fact ** 2 % p == (-1) ** ((p + 1) // 2) % p


@pytest.mark.parametrize("m,p,want", [(-1, 7, 6), (10, 7, 3), (49, 7, 0)])
def test_least_residue(m, p, want):
    assert ntheory.least_residue(m, p) == want


@pytest.mark.parametrize("d,p,want", [(2, 5, -2), (1, 5, -1), (1, 13, 3)])
def test_jacobsthal_examples(d, p, want):
    assert ntheory.jacobsthal_sum(d, p) == want


def test_jacobsthal_brute_and_two_square_identity():
    for p in ntheory.odd_primes_in(5, 120):
        ctx = ntheory.prime_ctx(p)
        for d in (1, 2, 3, p - 1):
            brute = sum(ctx.chi(x * (x * x + d)) for x in range(1, ctx.n + 1))
            assert ntheory.jacobsthal_sum(d, p) == brute
        if p % 4 == 1:
            j1 = ntheory.jacobsthal_sum(1, p)
            for d in ntheory.nonresidues(p)[:4]:
                jd = ntheory.jacobsthal_sum(d, p)
                assert j1 * j1 + jd * jd == p


@pytest.mark.parametrize("c,p,want", [(2, 5, 1), (3, 5, -1), (2, 13, -1)])
def test_delta_sign_examples(c, p, want):
    assert ntheory.delta_sign(c, p) == want


def test_delta_sign_preconditions():
    with pytest.raises(ValueError):
        ntheory.delta_sign(1, 5)  # (1/5) = 1
    with pytest.raises(ValueError):
        ntheory.delta_sign(2, 7)  # p = 3 (mod 4)
    with pytest.raises(ValueError):
        ntheory.delta_sign(5, 5)


@pytest.mark.parametrize("a,p,want", [(1, 5, 1), (2, 5, 1), (1, 7, -1)])
def test_sp_sign_examples(a, p, want):
    assert ntheory.sp_sign(a, p) == want


def test_sp_sign_brute():
    for p in ntheory.odd_primes_in(5, 60):
        for a in range(1, p):
            seq = [a * j * j % p for j in range(1, (p - 1) // 2 + 1)]
            assert ntheory.sp_sign(a, p) == (-1) ** inversions_brute(seq)
    with pytest.raises(ValueError):
        ntheory.sp_sign(10, 5)


@pytest.mark.parametrize("a,b,c,p,want", [(1, 0, 0, 5, 4), (1, 0, 1, 5, -1), (2, 0, 0, 7, 6)])
def test_quad_poly_char_sum_examples(a, b, c, p, want):
    assert ntheory.quad_poly_char_sum(a, b, c, p) == want


def test_quad_poly_char_sum_random():
    rng = random.Random(7)
    primes = ntheory.odd_primes_in(3, 200)
    for _ in range(1000):
        p = rng.choice(primes)
        a = rng.randrange(1, p)
        b, c = rng.randrange(p), rng.randrange(p)
        ctx = ntheory.prime_ctx(p)
        brute = sum(ctx.chi(a * x * x + b * x + c) for x in range(p))
        assert ntheory.quad_poly_char_sum(a, b, c, p) == brute
    with pytest.raises(ValueError):
        ntheory.quad_poly_char_sum(5, 1, 1, 5)


def test_row_sum_identity():
    # sum over j of chi(j^2 + d k^2) is -(1 + (d/p))/2 for every k
    for p in ntheory.odd_primes_in(5, 80):
        ctx = ntheory.prime_ctx(p)
        for d in range(1, p):
            want = -(1 + ctx.chi(d)) // 2
            for k in (1, 2, ctx.n):
                got = sum(ctx.chi(j * j + d * k * k) for j in range(1, ctx.n + 1))
                assert got == want


def test_jacobi_matches_legendre_on_primes():
    for p in ntheory.odd_primes_in(3, 120):
        for a in range(2 * p):
            assert ntheory.jacobi(a, p) == ntheory.legendre(a, p)
    assert ntheory.jacobi(2, 15) == 1
    assert ntheory.jacobi(7, 9) == 1
    with pytest.raises(ValueError):
        ntheory.jacobi(2, 10)


def test_sqrt_mod():
    rng = random.Random(5)
    for p in ntheory.odd_primes_in(3, 200):
        for _ in range(5):
            x = rng.randrange(1, p)
            r = ntheory.sqrt_mod(x * x % p, p)
            assert r * r % p == x * x % p
    with pytest.raises(ValueError):
        ntheory.sqrt_mod(ntheory.smallest_nonresidue(13), 13)


def test_factor_trial():
    assert ntheory.factor_trial(5808) == [(2, 4), (3, 1), (11, 2)]
    assert ntheory.factor_trial(1) == []
    assert ntheory.factor_trial(97) == [(97, 1)]
