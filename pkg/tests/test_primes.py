import math
import random

import pytest

from sparsediv.primes import (
    first_n_primes,
    is_probable_prime,
    primes_in_interval,
    random_probable_prime,
)


def _trial_division_prime(n):
    if n < 2:
        return False
    for d in range(2, math.isqrt(n) + 1):
        if n % d == 0:
            return False
    return True


def test_first_n_primes_small():
    assert first_n_primes(1).primes == (2,)
    assert first_n_primes(5).primes == (2, 3, 5, 7, 11)
    assert first_n_primes(25).primes[-1] == 97


def test_first_n_primes_prefix_consistency():
    for n in (1, 2, 7, 30, 100):
        a = first_n_primes(n).primes
        b = first_n_primes(n + 1).primes
        assert b[:n] == a


def test_first_n_primes_entries_pass_miller_rabin():
    pool = first_n_primes(200)
    assert all(is_probable_prime(p, rounds=64) for p in pool.primes)
    assert all(_trial_division_prime(p) for p in pool.primes)


def test_sum_of_first_primes_bound():
    # sum of the first n primes stays below n^2 ln n (spot check)
    pool = first_n_primes(10**4)
    total = 0
    for n, p in enumerate(pool.primes, start=1):
        total += p
        if n > 3:
            assert total <= n * n * math.log(n)


def test_primes_in_interval_lambda_21():
    assert primes_in_interval(21).primes == (23, 29, 31, 37, 41)


def test_primes_in_interval_lambda_100():
    pool = primes_in_interval(100).primes
    assert 101 in pool and 199 in pool
    assert 97 not in pool and 211 not in pool
    assert all(100 < p < 200 for p in pool)
    assert all(_trial_division_prime(p) for p in pool)


def test_primes_in_interval_bounds_hold():
    for lam in (21, 50, 333, 5000):
        pool = primes_in_interval(lam)
        assert len(pool) > 0  # Bertrand
        assert all(lam < p < 2 * lam for p in pool.primes)


def test_primes_in_interval_rejects_small_lambda():
    with pytest.raises(ValueError):
        primes_in_interval(20)


def test_random_probable_prime_small_interval():
    rng = random.Random(5)
    for _ in range(50):
        q = random_probable_prime(10, 0.001, rng)
        assert q in (11, 13, 17, 19)


def test_random_probable_prime_is_odd():
    rng = random.Random(6)
    for n in (5, 100, 10**6):
        q = random_probable_prime(n, 0.01, rng)
        assert q % 2 == 1
        assert n < q < 2 * n


def test_random_probable_prime_21_bit():
    rng = random.Random(7)
    q = random_probable_prime(1 << 20, 2.0**-40, rng)
    assert (1 << 20) < q < (1 << 21)
    assert _trial_division_prime(q)


def test_miller_rabin_agrees_with_trial_division():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randrange(2, 20000)
        assert is_probable_prime(n, rounds=30) == _trial_division_prime(n)


def test_pool_choose_uses_rng():
    pool = first_n_primes(100)
    rng = random.Random(9)
    picks = {pool.choose(rng) for _ in range(50)}
    assert picks <= set(pool.primes)
    assert len(picks) > 5
