import math
import random

import pytest

from sparsediv.cyclic import CyclicPoly
from sparsediv.errors import DivisionFailure
from sparsediv.ff import PrimeFieldCtx, build_ext_field
from sparsediv.generate import random_exact_instance, random_sparse_poly
from sparsediv.interp_div import (
    _crt,
    div_large_char,
    div_small_char,
    dlift,
    exact_division,
    params_large_char,
    params_small_char,
    verify_product,
)
from sparsediv.sparse_poly import (
    SparsePoly,
    classic_divrem,
    mul_naive,
    normalize,
)

F101 = PrimeFieldCtx(101)


def P(ring, *pairs):
    return normalize(ring, ((e, ring.from_int(c)) for e, c in pairs))


# parameters ---------------------------------------------------------------


def test_params_large_char_worked_example():
    p = params_large_char(4, 2**10, 1009, 0.5)
    assert p.N == 360  # ceil(12 * 3 * 10)
    assert p.k == 3  # ceil(log2(4 * 2))
    assert p.rounds == 2


def test_params_large_char_clamps():
    p = params_large_char(1, 7, 1009, 0.5)
    assert p.N == 1 and p.k >= 1 and p.s >= 1


def test_params_large_char_s_one_for_huge_q():
    d = 2**10
    q = 2**89 - 1  # far beyond (1930/eps) D^4
    p = params_large_char(4, d, q, 0.5)
    assert p.s == 1


def test_params_small_char_formulas():
    t, d, q, eps = 8, 2**10, 2, 0.1
    p = params_small_char(t, d, q, eps)
    rounds = math.ceil(math.log2(t))
    mu = eps / (2 * rounds)
    assert p.mu == mu
    assert p.lam == max(21, math.ceil((40 / 3) * (t - 1) * math.log(d)))
    log_lam_d = math.log(d) / math.log(p.lam)
    assert p.gamma == math.ceil(max(8 * log_lam_d, 8 * math.log(2 / mu)))
    assert p.m == math.ceil(
        math.log2(1 / mu) + 2 * math.log2(t * (1 + 0.5 * math.ceil(log_lam_d)))
    )
    assert q**p.s >= 2 * (p.lam * p.gamma / mu) * p.m * d
    assert q ** (p.s - 1) < 2 * (p.lam * p.gamma / mu) * p.m * d


# dlift ---------------------------------------------------------------------


def test_dlift_hand_example():
    # Q = 3 X^5 + 2 X^2 over F_101, p = 5
    q_p = CyclicPoly.from_coeffs(F101, [3, 0, 2, 0, 0])
    dq_p = CyclicPoly.from_coeffs(F101, [0, 4, 0, 0, 15])
    got = dlift(q_p, dq_p, 5, 50)
    assert got == P(F101, (5, 3), (2, 2))


def test_dlift_zero():
    z = CyclicPoly.from_coeffs(F101, [0, 0, 0])
    assert dlift(z, z, 3, 10).is_zero


def test_dlift_skips_inconsistent_slots():
    # derivative slot does not equal c*e for an integer e = r mod p: no term
    q_p = CyclicPoly.from_coeffs(F101, [0, 7, 0, 0, 0])
    dq_p = CyclicPoly.from_coeffs(F101, [9, 0, 0, 0, 0])  # e would be 9/7 * ...
    got = dlift(q_p, dq_p, 5, 6)
    # e = (9/7 mod 101) as an integer is far above the bound: nothing emitted
    assert got.is_zero


def test_dlift_constant_term():
    # Q = 4 (constant): q_p slot 0 = 4, derivative slot p-1 = 0 -> e = 0
    q_p = CyclicPoly.from_coeffs(F101, [4, 0, 0])
    dq_p = CyclicPoly.from_coeffs(F101, [0, 0, 0])
    assert dlift(q_p, dq_p, 3, 10) == P(F101, (0, 4))


def test_dlift_random_collision_free():
    rng = random.Random(0)
    fq = PrimeFieldCtx(100003)
    for _ in range(10):
        q = random_sparse_poly(fq, rng, 4, 40)
        p = rng.choice([47, 53, 59])
        residues = [e % p for e, _ in q.terms]
        if len(set(residues)) != len(residues):
            continue  # collision, skip
        from sparsediv.sparse_poly import derivative, dilate_reduce

        _, q_red = dilate_reduce(q, 1, p)
        _, dq_red = dilate_reduce(derivative(q), 1, p)
        assert dlift(q_red, dq_red, p, q.degree) == q


# CRT helper ----------------------------------------------------------------


def test_crt():
    assert _crt([(3, 2), (5, 3), (7, 2)]) == 23
    assert _crt([(11, 10)]) == 10


# div_large_char ------------------------------------------------------------


def test_div_large_char_trivial_quotient():
    rng = random.Random(1)
    fq = PrimeFieldCtx(1048583)
    g = random_sparse_poly(fq, rng, 5, 1000)
    got = div_large_char(g, g, 2, 0.1, rng)
    assert got == SparsePoly.one(fq)


def test_div_large_char_power_identity():
    # (X^(2^20) - 1) / (X^(2^19) - 1) = X^(2^19) + 1
    rng = random.Random(2)
    fq = PrimeFieldCtx(1048583)  # prime just above 2^20
    f = P(fq, (1 << 20, 1), (0, -1))
    g = P(fq, (1 << 19, 1), (0, -1))
    got = div_large_char(f, g, 2, 0.05, rng)
    assert got == P(fq, (1 << 19, 1), (0, 1))


def test_div_large_char_multiply_back():
    rng = random.Random(3)
    fq = PrimeFieldCtx(2003)
    g = P(fq, (1000, 1), (0, 3))
    q = P(fq, (999, 1), (1, 5), (0, 1))
    f = mul_naive(g, q)
    got = div_large_char(f, g, 4, 0.05, rng)
    assert got == q


def test_div_large_char_random_instances():
    rng = random.Random(4)
    fq = PrimeFieldCtx(1 << 20 | 7)  # not prime; replaced below
    fq = PrimeFieldCtx(1048583)
    ok = 0
    for _ in range(12):
        f, g, q = random_exact_instance(fq, rng, 4, rng.randrange(8, 400))
        t = 1
        while t < max(q.sparsity, 2):
            t *= 2
        got = div_large_char(f, g, t, 0.05, rng)
        if got == q:
            ok += 1
    assert ok >= 11  # eps = 0.05 per run


def test_div_large_char_requires_large_characteristic():
    rng = random.Random(5)
    f3 = PrimeFieldCtx(3)
    g = P(f3, (5, 1), (0, 1))
    with pytest.raises(ValueError):
        div_large_char(mul_naive(g, g), g, 2, 0.1, rng)


def test_div_large_char_instrumentation_hook():
    rng = random.Random(6)
    fq = PrimeFieldCtx(1048583)
    f, g, q = random_exact_instance(fq, rng, 4, 200)
    seen = []
    t = 8
    div_large_char(
        f, g, t, 0.05, rng, k_override=4, on_round=lambda r, a, qh: seen.append(r)
    )
    assert seen == list(range(3))  # ceil(log2 8) rounds


# div_small_char ------------------------------------------------------------


def test_div_small_char_trivial_over_f2():
    rng = random.Random(7)
    f2 = PrimeFieldCtx(2)
    g = random_sparse_poly(f2, rng, 4, 50)
    got = div_small_char(g, g, 2, 0.2, rng)
    assert got == SparsePoly.one(f2)


def test_div_small_char_f2_random_divisor():
    rng = random.Random(8)
    f2 = PrimeFieldCtx(2)
    g = P(f2, (3, 1), (1, 1), (0, 1))  # X^3 + X + 1
    q = random_sparse_poly(f2, rng, 5, 300)
    f = mul_naive(g, q)
    got = div_small_char(f, g, 8, 0.1, rng)
    assert got == q


def test_div_small_char_f3_huge_degree():
    rng = random.Random(9)
    f3 = PrimeFieldCtx(3)
    q = P(f3, (1000000, 1), (0, 1))
    g = P(f3, (7, 1), (2, 2), (0, 1))
    f = mul_naive(g, q)
    got = div_small_char(f, g, 2, 0.1, rng)
    assert got == q


# verify_product ------------------------------------------------------------


def test_verify_product_completeness_field():
    rng = random.Random(10)
    for _ in range(20):
        f, g, q = random_exact_instance(F101, rng, 4, rng.randrange(4, 60))
        assert verify_product(f, g, q, 0.01, rng)


def test_verify_product_completeness_z():
    from sparsediv.ff import ZZ

    rng = random.Random(11)
    for _ in range(20):
        f, g, q = random_exact_instance(ZZ, rng, 4, rng.randrange(4, 60))
        assert verify_product(f, g, q, 0.01, rng)


def test_verify_product_zero_cases():
    zero = SparsePoly.zero(F101)
    one = SparsePoly.one(F101)
    rng = random.Random(12)
    assert verify_product(zero, one, zero, 0.1, rng)
    assert not verify_product(one, one, zero, 0.1, rng)


def test_verify_product_soundness_statistical():
    rng = random.Random(13)
    eps = 0.05
    false_accepts = 0
    trials = 200
    for _ in range(trials):
        f, g, q = random_exact_instance(F101, rng, 4, rng.randrange(4, 60))
        bad_f = f + SparsePoly.one(F101)  # F = GQ + 1
        if verify_product(bad_f, g, q, eps, rng):
            false_accepts += 1
    # binomial(200, 0.05) exceeding 24 has probability ~ 4e-6
    assert false_accepts <= 24


def test_verify_product_soundness_statistical_z():
    from sparsediv.ff import ZZ

    rng = random.Random(14)
    false_accepts = 0
    for _ in range(100):
        f, g, q = random_exact_instance(ZZ, rng, 3, rng.randrange(4, 40))
        bad = f + SparsePoly.one(ZZ)
        if verify_product(bad, g, q, 0.05, rng):
            false_accepts += 1
    assert false_accepts <= 15


# exact_division ------------------------------------------------------------


def test_exact_division_geometric():
    rng = random.Random(15)
    f = P(F101, (5, 1), (0, -1))
    g = P(F101, (1, 1), (0, -1))
    got = exact_division(f, g, 0.01, rng)
    assert got == P(F101, (0, 1), (1, 1), (2, 1), (3, 1), (4, 1))


def test_exact_division_equal_inputs():
    rng = random.Random(16)
    g = random_sparse_poly(F101, rng, 5, 30)
    assert exact_division(g, g, 0.01, rng) == SparsePoly.one(F101)


def test_exact_division_large_quotient_budget():
    rng = random.Random(17)
    fq = PrimeFieldCtx(1048583)
    g = random_sparse_poly(fq, rng, 8, 500)
    q = random_sparse_poly(fq, rng, 12, 524)
    f = mul_naive(g, q)
    got = exact_division(f, g, 0.02, rng)
    assert got == q


def test_exact_division_small_char_route():
    rng = random.Random(18)
    f2 = PrimeFieldCtx(2)
    g = random_sparse_poly(f2, rng, 4, 64)
    q = random_sparse_poly(f2, rng, 4, 50)
    f = mul_naive(g, q)
    got = exact_division(f, g, 0.05, rng)
    assert got == q


def test_exact_division_rejects_non_divisible():
    rng = random.Random(19)
    f = P(F101, (10, 1), (0, 1))
    g = P(F101, (3, 1), (1, 1), (0, 1))
    _, r = classic_divrem(f, g)
    assert not r.is_zero
    with pytest.raises(DivisionFailure):
        exact_division(f, g, 0.05, rng)


def test_exact_division_zero_dividend():
    rng = random.Random(20)
    g = random_sparse_poly(F101, rng, 3, 10)
    assert exact_division(SparsePoly.zero(F101), g, 0.1, rng).is_zero
