import random

import pytest

from sparsediv.ff import (
    ExtFieldCtx,
    PrimeFieldCtx,
    build_ext_field,
    is_irreducible,
)


def test_prime_field_basics():
    f7 = PrimeFieldCtx(7)
    assert f7.inv(3) == 5  # 3*5 = 15 = 1 mod 7
    assert f7.mul(3, f7.inv(3)) == 1
    assert f7.add(5, 4) == 2
    assert f7.sub(2, 5) == 4
    assert f7.pow(3, 0) == 1
    assert f7.pow(0, 0) == 1


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeFieldCtx(91)  # 7 * 13
    with pytest.raises(ValueError):
        PrimeFieldCtx(1)


def test_inv_zero_raises():
    f7 = PrimeFieldCtx(7)
    with pytest.raises(ZeroDivisionError):
        f7.inv(0)


def test_ext_field_f8_multiplication():
    # F_8 with modulus Y^3 + Y + 1: Y * Y^2 = Y^3 = Y + 1
    f2 = PrimeFieldCtx(2)
    f8 = ExtFieldCtx(f2, 3, (1, 1, 0, 1))
    y = (0, 1, 0)
    y2 = (0, 0, 1)
    assert f8.mul(y, y2) == (1, 1, 0)


def test_ext_field_inverses_and_pow():
    f2 = PrimeFieldCtx(2)
    f8 = ExtFieldCtx(f2, 3, (1, 1, 0, 1))
    rng = random.Random(7)
    for _ in range(30):
        a = f8.random_nonzero(rng)
        assert f8.mul(a, f8.inv(a)) == f8.one
        # Lagrange: a^(q^s - 1) = 1
        assert f8.pow(a, 7) == f8.one
    with pytest.raises(ZeroDivisionError):
        f8.inv(f8.zero)


def test_build_ext_field_degree_one_behaves_like_prime_field():
    f7 = PrimeFieldCtx(7)
    ext = build_ext_field(f7, 1, random.Random(0))
    assert ext.modulus == (0, 1)
    assert ext.mul((3,), (5,)) == (1,)
    assert ext.inv((3,)) == (5,)


def _brute_force_irreducible(modulus, q):
    """Exhaustive check: no factorization into two smaller monics."""

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % q
        return tuple(out)

    s = len(modulus) - 1
    for d1 in range(1, s // 2 + 1):
        for lower in _all_monic(d1, q):
            for upper in _all_monic(s - d1, q):
                if mul(lower, upper) == tuple(modulus):
                    return False
    return True


def _all_monic(deg, q):
    if deg == 0:
        yield (1,)
        return
    def rec(i, acc):
        if i == deg:
            yield tuple(acc) + (1,)
            return
        for c in range(q):
            yield from rec(i + 1, acc + [c])
    yield from rec(0, [])


def test_build_ext_field_f2_cubic_is_irreducible():
    f2 = PrimeFieldCtx(2)
    ext = build_ext_field(f2, 3, random.Random(3))
    assert len(ext.modulus) == 4 and ext.modulus[-1] == 1
    assert _brute_force_irreducible(ext.modulus, 2)
    # the canonical cubic passes the same test
    assert is_irreducible((1, 1, 0, 1), 2)


def test_build_ext_field_f5_quadratic_has_no_root():
    f5 = PrimeFieldCtx(5)
    ext = build_ext_field(f5, 2, random.Random(11))
    m = ext.modulus
    for x in range(5):
        value = sum(c * x**i for i, c in enumerate(m)) % 5
        assert value != 0


def test_is_irreducible_rejects_products():
    # (Y+1)^2 = Y^2 + 2Y + 1 over F_5
    assert not is_irreducible((1, 2, 1), 5)
    # Y^2 - 2 is irreducible over F_5 (2 is not a square mod 5)
    assert is_irreducible((3, 0, 1), 5)


def test_embed_is_ring_homomorphism():
    f5 = PrimeFieldCtx(5)
    ext = build_ext_field(f5, 2, random.Random(1))
    for a in range(5):
        for b in range(5):
            assert ext.embed_base((a + b) % 5) == ext.add(
                ext.embed_base(a), ext.embed_base(b)
            )
            assert ext.embed_base(a * b % 5) == ext.mul(
                ext.embed_base(a), ext.embed_base(b)
            )


def test_project_to_base():
    f5 = PrimeFieldCtx(5)
    ext = build_ext_field(f5, 2, random.Random(1))
    assert ext.project_to_base(ext.embed_base(3)) == 3
    assert ext.project_to_base((1, 2)) is None


def test_large_prime_field_no_truncation():
    q = (1 << 89) - 1  # Mersenne prime
    fq = PrimeFieldCtx(q)
    a = q - 2
    assert fq.mul(a, a) == pow(a, 2, q)
    assert fq.mul(a, fq.inv(a)) == 1


def test_ext_field_fermat_random_fields():
    rng = random.Random(42)
    for q, s in [(3, 2), (5, 2), (7, 2), (2, 4)]:
        ext = build_ext_field(PrimeFieldCtx(q), s, rng)
        for _ in range(10):
            a = ext.random_nonzero(rng)
            assert ext.pow(a, q**s - 1) == ext.one
