import random

import pytest

from sparsediv.errors import DivisionFailure
from sparsediv.ff import ZZ
from sparsediv.generate import random_exact_instance, random_sparse_poly
from sparsediv.sparse_poly import SparsePoly, height, mul_naive, normalize
from sparsediv.zdiv import exact_division_z, height_bound


def P(*pairs):
    return normalize(ZZ, pairs)


def test_height_bound_values():
    f = P((4, 2), (3, 2), (1, 3), (0, 3))
    g = P((1, 1), (0, 1))
    assert height_bound(f, g, 1) == 3  # exponent 0
    assert height_bound(f, g, 3) == 6  # (1+1)^1 * 3
    # true quotient is 2X^3 + 3, height 3 <= 6
    q = P((3, 2), (0, 3))
    assert mul_naive(g, q) == f
    assert height(q) <= height_bound(f, g, q.sparsity)


def test_height_bound_requires_nonzero():
    with pytest.raises(ValueError):
        height_bound(SparsePoly.zero(ZZ), P((0, 1)), 1)


def test_exact_division_z_simple():
    rng = random.Random(0)
    f = P((2, 1), (0, -1))
    g = P((1, 1), (0, -1))
    assert exact_division_z(f, g, 0.01, rng) == P((1, 1), (0, 1))


def test_exact_division_z_negative_coefficients():
    rng = random.Random(1)
    g = P((1000, 1), (0, 3))
    q = P((999, 2), (0, -5))  # negative coefficient exercises the signed lift
    f = mul_naive(g, q)
    assert exact_division_z(f, g, 0.01, rng) == q


def test_exact_division_z_random_instances():
    rng = random.Random(2)
    for _ in range(15):
        f, g, q = random_exact_instance(ZZ, rng, 4, rng.randrange(4, 200))
        assert exact_division_z(f, g, 0.01, rng) == q


def test_exact_division_z_large_heights():
    rng = random.Random(3)
    h = 2**64
    g = random_sparse_poly(ZZ, rng, 3, 30, coeff_height=h)
    q = random_sparse_poly(ZZ, rng, 3, 25, coeff_height=h)
    f = mul_naive(g, q)
    assert exact_division_z(f, g, 0.01, rng) == q


def test_exact_division_z_huge_quotient_height():
    # ||Q|| ~ 2^200 >> deg F: succeeds only after the modulus squares past it
    rng = random.Random(4)
    g = P((40, 1), (0, 1))
    q = P((37, 2**200 + 1), (3, -(2**199)), (0, 7))
    f = mul_naive(g, q)
    assert exact_division_z(f, g, 0.01, rng) == q
    assert height(q) <= height_bound(f, g, q.sparsity)


def test_exact_division_z_constant_divisor():
    rng = random.Random(5)
    f = P((5, 6), (1, -9), (0, 3))
    g = P((0, 3))
    assert exact_division_z(f, g, 0.01, rng) == P((5, 2), (1, -3), (0, 1))
    with pytest.raises(DivisionFailure):
        exact_division_z(P((1, 5)), P((0, 2)), 0.01, rng)


def test_exact_division_z_equal_degrees():
    rng = random.Random(6)
    f = P((3, 6), (0, -4))
    g = P((3, 3), (0, -2))
    assert exact_division_z(f, g, 0.01, rng) == P((0, 2))


def test_exact_division_z_zero_dividend():
    rng = random.Random(7)
    g = P((3, 3), (0, -2))
    assert exact_division_z(SparsePoly.zero(ZZ), g, 0.01, rng).is_zero


def test_exact_division_z_rejects_non_divisible():
    rng = random.Random(8)
    f = P((10, 1), (0, 1))
    g = P((4, 3), (1, 1), (0, 2))
    with pytest.raises(DivisionFailure):
        exact_division_z(f, g, 0.05, rng)


def test_reduction_homomorphism():
    # (F mod q) = (G mod q)(Q mod q) for exact instances
    from sparsediv.ff import PrimeFieldCtx
    from sparsediv.sparse_poly import mul_naive as mn

    rng = random.Random(9)
    for _ in range(10):
        f, g, q = random_exact_instance(ZZ, rng, 4, rng.randrange(4, 60))
        prime = 10007
        fld = PrimeFieldCtx(prime, check=False)
        fm = normalize(fld, ((e, c % prime) for e, c in f.terms))
        gm = normalize(fld, ((e, c % prime) for e, c in g.terms))
        qm = normalize(fld, ((e, c % prime) for e, c in q.terms))
        assert mn(gm, qm) == fm
