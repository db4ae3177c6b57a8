"""Exact division over the integers via modular reduction.

The quotient is computed in F_q for probable primes q of rapidly growing
size and lifted with signed representatives; once q exceeds twice the
quotient height the lift is exact, and a randomized product verification
gates the exit.  A height bound on the quotient caps the growth.
"""

from __future__ import annotations

import math
import random

from . import primes as _primes
from .errors import DivisionFailure
from .ff import IntegerRing, PrimeFieldCtx
from .interp_div import MapFn, _serial_map, exact_division, verify_product
from .sparse_poly import SparsePoly, height, normalize


def height_bound(f: SparsePoly, g: SparsePoly, t: int) -> int:
    """(||G|| + 1)^ceil((t-1)/2) * ||F||: a bound on ||F/G|| when the
    quotient has at most t terms and the division is exact."""
    if f.is_zero or g.is_zero:
        raise ValueError("height bound needs nonzero polynomials")
    if t < 1:
        raise ValueError("t must be >= 1")
    return (height(g) + 1) ** (t // 2) * height(f)  # t//2 == ceil((t-1)/2)


def _reduce_mod(f: SparsePoly, fld: PrimeFieldCtx) -> SparsePoly:
    return normalize(fld, ((e, c % fld.q) for e, c in f.terms))


def _lift_signed(q_mod: SparsePoly, prime: int) -> SparsePoly:
    """Coefficients mapped to signed representatives in (-q/2, q/2]."""
    from .ff import ZZ

    half = prime // 2
    return SparsePoly(
        ZZ, tuple((e, c - prime if c > half else c) for e, c in q_mod.terms)
    )


def exact_division_z(
    f: SparsePoly,
    g: SparsePoly,
    eps: float,
    rng: random.Random,
    *,
    map_fn: MapFn = _serial_map,
) -> SparsePoly:
    """Exact quotient F/G in Z[X], assuming G divides F.

    Draws a probable prime q in ]n, 2n[ (n starts at deg F and squares
    each round), divides F mod q by G mod q over F_q, lifts with signed
    representatives, and returns the first lift that verifies over Z.
    A round whose reduction kills G's leading term counts as failed.
    """
    from .ff import ZZ

    if not isinstance(f.ring, IntegerRing) or not isinstance(g.ring, IntegerRing):
        raise ValueError("exact_division_z expects Z[X] inputs")
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return SparsePoly.zero(ZZ)
    if f.degree < g.degree:
        raise DivisionFailure("deg F < deg G: not divisible")

    # trivial routes: constant divisor, equal degrees
    if g.degree == 0:
        c = g.terms[0][1]
        out = []
        for e, fc in f.terms:
            qc, rem = divmod(fc, c)
            if rem:
                raise DivisionFailure("constant divisor does not divide a coefficient")
            out.append((e, qc))
        return SparsePoly(ZZ, tuple(out))
    if f.degree == g.degree:
        qc, rem = divmod(f.leading[1], g.leading[1])
        if rem:
            raise DivisionFailure("leading coefficients do not divide")
        cand = SparsePoly(ZZ, ((0, qc),))
        from .sparse_poly import mul_naive

        if mul_naive(g, cand) == f:
            return cand
        raise DivisionFailure("equal-degree inputs are not associates")

    t_max = f.degree - g.degree + 1
    giveup = 2 * height_bound(f, g, t_max)
    n = f.degree
    i = 2
    slack_rounds = 6
    while True:
        i *= 2
        prime = _primes.random_probable_prime(max(n, 4), eps / (2 * i), rng)
        fld = PrimeFieldCtx(prime, check=False)
        g_mod = _reduce_mod(g, fld)
        lifted = None
        if not g_mod.is_zero and g_mod.degree == g.degree:
            f_mod = _reduce_mod(f, fld)
            try:
                q_mod = exact_division(f_mod, g_mod, eps / (2 * i), rng, map_fn=map_fn)
                lifted = _lift_signed(q_mod, prime)
            except DivisionFailure:
                lifted = None
        n = n * n
        if lifted is not None and verify_product(f, g, lifted, eps / i, rng):
            return lifted
        if n > giveup:
            slack_rounds -= 1
            if slack_rounds <= 0:
                raise DivisionFailure(
                    "modulus grew past any possible quotient height; "
                    "input likely violates the divisibility contract"
                )
