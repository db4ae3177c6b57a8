"""Quotient probing: recover Q(aX) mod X^p - 1 from F and G without Q.

With F = G*Q, reducing the dilated identity F(aX) = G(aX) Q(aX) modulo
X^p - 1 determines Q(aX) mod X^p - 1 whenever G(aX) is invertible in the
cyclic ring; the derivative image follows from the product rule the same
way.  Each probe is a pure function of (F, G, a, p), so a driver may run
many probes concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .cyclic import CyclicPoly, cyclic_inv, cyclic_mul
from .errors import NotCoprime, NotInvertible
from .sparse_poly import SparsePoly, derivative, dilate_reduce


@dataclass(frozen=True)
class ProbePair:
    """One probe result: Q(aX) mod X^p-1 and optionally its derivative image."""

    p: int
    alpha: object
    q_p: CyclicPoly
    dq_p: Optional[CyclicPoly] = None


def _probe_dilated(
    f_dil: SparsePoly, g_dil: SparsePoly, p: int, with_derivative: bool
) -> tuple[CyclicPoly, Optional[CyclicPoly]]:
    """Probe from already-dilated sparse polynomials (driver fast path)."""
    field = f_dil.ring
    f_p = CyclicPoly.from_sparse(field, p, ((e % p, c) for e, c in f_dil.terms))
    g_p = CyclicPoly.from_sparse(field, p, ((e % p, c) for e, c in g_dil.terms))
    try:
        g_inv = cyclic_inv(g_p)
    except NotInvertible as exc:
        raise NotCoprime(f"divisor shares a factor with X^{p} - 1") from exc
    q_p = cyclic_mul(f_p, g_inv)
    if not with_derivative:
        return q_p, None
    df = derivative(f_dil)
    dg = derivative(g_dil)
    df_p = CyclicPoly.from_sparse(field, p, ((e % p, c) for e, c in df.terms))
    dg_p = CyclicPoly.from_sparse(field, p, ((e % p, c) for e, c in dg.terms))
    dq_p = cyclic_mul(df_p - cyclic_mul(dg_p, q_p), g_inv)
    return q_p, dq_p


def quotient_probe(
    f: SparsePoly,
    g: SparsePoly,
    alpha,
    p: int,
    with_derivative: bool = True,
    field=None,
) -> ProbePair:
    """Compute (Q(aX) mod X^p-1, [(Q(aX))'] mod X^p-1) assuming G | F.

    alpha must be nonzero, drawn from f's coefficient field or an
    extension of it.  Raises NotCoprime when G(aX) is not invertible
    modulo X^p - 1; inputs that violate the divisibility contract simply
    yield garbage, which downstream verification rejects.
    """
    f_dil, _ = dilate_reduce(f, alpha, p, field)
    g_dil, _ = dilate_reduce(g, alpha, p, field)
    q_p, dq_p = _probe_dilated(f_dil, g_dil, p, with_derivative)
    return ProbePair(p=p, alpha=alpha, q_p=q_p, dq_p=dq_p)
