"""Random instance generators shared by the CLI, tests and benchmarks."""

from __future__ import annotations

import random

from .ff import IntegerRing
from .sparse_poly import SparsePoly, mul_naive, normalize


def random_sparse_poly(
    ring,
    rng: random.Random,
    terms: int,
    degree: int,
    *,
    coeff_height: int = 100,
    with_constant: bool = False,
) -> SparsePoly:
    """A random polynomial with the exact degree and (up to) `terms` terms.

    Exponents are distinct and include `degree`; coefficients are nonzero
    (uniform in the field, uniform in [-coeff_height, coeff_height] over
    Z).  with_constant forces a term at X^0.
    """
    if degree < 0 or terms < 1:
        raise ValueError("need degree >= 0 and terms >= 1")
    terms = min(terms, degree + 1)
    exps = {degree}
    if with_constant:
        exps.add(0)
    while len(exps) < terms:
        exps.add(rng.randrange(degree + 1))
    over_z = isinstance(ring, IntegerRing)

    def coeff():
        if over_z:
            c = 0
            while c == 0:
                c = rng.randrange(-coeff_height, coeff_height + 1)
            return c
        return ring.random_nonzero(rng)

    return normalize(ring, ((e, coeff()) for e in sorted(exps)))


def random_exact_instance(
    ring,
    rng: random.Random,
    terms: int,
    degree: int,
    *,
    coeff_height: int = 100,
) -> tuple[SparsePoly, SparsePoly, SparsePoly]:
    """(F, G, Q) with F = G * Q, both factors about `terms` sparse and
    deg F = degree."""
    if degree < 1:
        raise ValueError("need degree >= 1")
    deg_g = rng.randrange(1, degree)
    deg_q = degree - deg_g
    g = random_sparse_poly(ring, rng, terms, deg_g, coeff_height=coeff_height)
    q = random_sparse_poly(ring, rng, terms, deg_q, coeff_height=coeff_height)
    return mul_naive(g, q), g, q
