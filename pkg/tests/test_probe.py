import random

import pytest

from sparsediv.cyclic import CyclicPoly
from sparsediv.errors import NotCoprime
from sparsediv.ff import PrimeFieldCtx, build_ext_field
from sparsediv.generate import random_sparse_poly
from sparsediv.probe import quotient_probe
from sparsediv.sparse_poly import (
    classic_divrem,
    derivative,
    dilate_reduce,
    mul_naive,
    normalize,
)

F101 = PrimeFieldCtx(101)


def P(ring, *pairs):
    return normalize(ring, ((e, ring.from_int(c)) for e, c in pairs))


def test_probe_quotient_one():
    rng = random.Random(0)
    g = random_sparse_poly(F101, rng, 4, 20)
    for p in (3, 7, 11):
        for _ in range(5):
            alpha = F101.random_nonzero(rng)
            try:
                pr = quotient_probe(g, g, alpha, p)
            except NotCoprime:
                continue
            assert pr.q_p.coeffs() == [1] + [0] * (p - 1)
            assert pr.dq_p.coeffs() == [0] * p
            return
    pytest.fail("no invertible dilation found")


def test_probe_matches_known_quotient():
    f = P(F101, (5, 1), (0, -1))
    g = P(F101, (1, 1), (0, -1))
    q_true, r = classic_divrem(f, g)
    assert r.is_zero
    rng = random.Random(1)
    p = 7
    hits = 0
    for _ in range(10):
        alpha = F101.random_nonzero(rng)
        try:
            pr = quotient_probe(f, g, alpha, p)
        except NotCoprime:
            continue
        hits += 1
        _, expect = dilate_reduce(q_true, alpha, p)
        assert pr.q_p == expect
    assert hits > 0


def test_probe_forced_failure():
    g = P(F101, (1, 1), (0, -1))  # X - 1 divides X^p - 1 at alpha = 1
    f = mul_naive(g, g)
    with pytest.raises(NotCoprime):
        quotient_probe(f, g, 1, 5)


def test_probe_consistency_random_instances():
    rng = random.Random(2)
    checked = 0
    for _ in range(25):
        g = random_sparse_poly(F101, rng, 4, rng.randrange(2, 40))
        q = random_sparse_poly(F101, rng, 4, rng.randrange(2, 40))
        f = mul_naive(g, q)
        p = rng.choice([5, 7, 11, 13])
        alpha = F101.random_nonzero(rng)
        try:
            pr = quotient_probe(f, g, alpha, p)
        except NotCoprime:
            continue
        checked += 1
        q_dil, q_red = dilate_reduce(q, alpha, p)
        assert pr.q_p == q_red
        dq_dil = derivative(q_dil)
        expect_d = CyclicPoly.from_sparse(
            F101, p, ((e % p, c) for e, c in dq_dil.terms)
        )
        assert pr.dq_p == expect_d
    assert checked >= 10


def test_probe_in_extension_field():
    f2 = PrimeFieldCtx(2)
    rng = random.Random(3)
    ext = build_ext_field(f2, 8, rng)
    g = random_sparse_poly(f2, rng, 3, 30)
    q = random_sparse_poly(f2, rng, 3, 25)
    f = mul_naive(g, q)
    checked = 0
    for _ in range(20):
        alpha = ext.random_nonzero(rng)
        p = rng.choice([23, 29, 31])
        try:
            pr = quotient_probe(f, g, alpha, p, with_derivative=False, field=ext)
        except NotCoprime:
            continue
        checked += 1
        _, expect = dilate_reduce(q, alpha, p, ext)
        assert pr.q_p == expect
        assert pr.dq_p is None
    assert checked >= 5


def test_probe_failure_rate_bounded():
    # over random alpha the failure rate is at most p*deg(G)/q^s; here the
    # exact bound is tiny, so a a moderate sample must see zero failures
    f101 = PrimeFieldCtx(101)
    rng = random.Random(4)
    ext = build_ext_field(f101, 3, rng)  # q^s ~ 1.03e6
    g = random_sparse_poly(f101, rng, 4, 10)
    f = mul_naive(g, g)
    p = 5
    bound = p * g.degree / f101.q**3
    fails = 0
    trials = 400
    for _ in range(trials):
        alpha = ext.random_nonzero(rng)
        try:
            quotient_probe(f, g, alpha, p, with_derivative=False, field=ext)
        except NotCoprime:
            fails += 1
    # bound ~ 5e-5; 400 trials at 10x slack should not see a single failure
    assert fails / trials <= max(10 * bound, 0.01)
