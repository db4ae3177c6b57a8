"""Divisibility tests for sparse polynomials with gap-structured divisors.

The decidable cases: small quotient length or small divisor degree
(classical), and divisors splitting as g0 + X^k g1 + X^l g2 with large
exponent gaps around a low-degree chunk.  In the gap case a suitable
power of the low part multiplies the dividend so that the quotient of
the product is provably sparse; a truncated power-series division and a
sparse product comparison then decide divisibility of the product, and a
bounded recursion settles the remaining cofactor.

Every public entry point returns True, False, or None; None means "not
applicable", the honest verdict for inputs outside the tractable classes.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, NonExactIntegerStep, ZeroPolynomial
from .ff import IntegerRing
from .sparse_poly import (
    SparsePoly,
    classic_divrem,
    mul_naive,
    normalize,
    reciprocal,
    strip_x_power,
)

T_MAX = 8  # largest repetition count considered by the gap route
_RECURSION_CAP = 2  # one three-chunk step may delegate to one two-chunk step


def default_budget(f: SparsePoly, g: SparsePoly) -> int:
    """(T ceil(log2(deg F + 2)))^3: the admission threshold for every
    polynomially-bounded quantity in the structured tests."""
    t = max(f.sparsity, g.sparsity, 1)
    return (t * max(1, math.ceil(math.log2(f.degree + 2)))) ** 3


@dataclass(frozen=True)
class SparsityBudget:
    """t repetitions and the ceil(tF (tG + t - 2)^(t-1) / (t-1)!) bound."""

    t: int
    bound: int


def quotient_sparsity_bound(tf: int, tg: int, n: int, k: int) -> SparsityBudget:
    """Sparsity bound for F quo G when G has a top gap of width k and the
    quotient has length n: t = ceil(n / k), bound
    ceil(tF (tG + t - 2)^(t-1) / (t-1)!)."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    t = -(-n // k)
    num = tf * max(tg + t - 2, 1) ** (t - 1)
    bound = -(-num // math.factorial(t - 1))
    return SparsityBudget(t=t, bound=bound)


def _series_bound(tg: int, t: int) -> int:
    """ceil((tG + t - 2)^(t-1) / (t-1)!), exact integer arithmetic."""
    num = max(tg + t - 2, 1) ** (t - 1)
    den = math.factorial(t - 1)
    return -(-num // den)


@dataclass(frozen=True)
class GapShape:
    """A decomposition G = g0 + X^k g1 + X^l g2 with wide gaps.

    The middle chunk (k, g1) may be absent (k is None), leaving the
    two-chunk form g0 + X^l g2.  gap1 is the gap above g0, gap2 the gap
    between the middle chunk and the top one.  t is the repetition count
    the driving gap supports and series_bound the per-dividend-term
    sparsity bound of the associated truncated series quotient.
    """

    g0: SparsePoly
    k: Optional[int]
    g1: Optional[SparsePoly]
    ell: int
    g2: SparsePoly
    t: int
    series_bound: int

    @property
    def gap1(self) -> int:
        if self.k is None:
            return self.ell - self.g0.degree
        return self.k - self.g0.degree

    @property
    def gap2(self) -> Optional[int]:
        if self.k is None:
            return None
        return self.ell - self.k - self.g1.degree

    @property
    def low_part(self) -> SparsePoly:
        """g0 + X^k g1: everything below the top chunk."""
        if self.k is None:
            return self.g0
        k = self.k
        ring = self.g0.ring
        shifted = SparsePoly(ring, tuple((e + k, c) for e, c in self.g1.terms))
        return self.g0 + shifted

    def reconstruct(self) -> SparsePoly:
        ring = self.g0.ring
        top = SparsePoly(ring, tuple((e + self.ell, c) for e, c in self.g2.terms))
        return self.low_part + top


def detect_gap_structure(
    g: SparsePoly, n: int, budget: int
) -> Optional[GapShape]:
    """Find a usable gap decomposition of g, or None.

    Scans the support for one or two wide gaps.  A two-chunk split needs
    the low chunk's degree within budget; a three-chunk split needs the
    middle chunk's degree within budget and a gap above the low chunk
    wide enough for the recursive step.  Among admissible splits the one
    with the smallest repetition count t wins (two-chunk preferred on
    ties, then the wider driving gap).
    """
    if g.is_zero:
        raise ZeroPolynomial("cannot analyze the zero polynomial")
    if g.terms[0][0] != 0:
        raise ValueError("strip powers of X before gap detection")
    if n < 1:
        return None
    exps = [e for e, _ in g.terms]
    tg = g.sparsity
    min_gap = -(-n // T_MAX)  # gaps below n/T_MAX cannot admit t <= T_MAX
    splits = [
        (exps[i + 1] - exps[i], i)
        for i in range(len(exps) - 1)
        if exps[i + 1] - exps[i] >= min_gap
    ]
    best: Optional[GapShape] = None

    def consider(shape: GapShape):
        nonlocal best
        if best is None:
            best = shape
            return
        cur = (best.t, 0 if best.k is None else 1, -_driving_gap(best))
        new = (shape.t, 0 if shape.k is None else 1, -_driving_gap(shape))
        if new < cur:
            best = shape

    for gap, i in splits:
        t = -(-n // gap)
        if t > T_MAX:
            continue
        sbound = _series_bound(tg, t)
        if sbound > budget:
            continue
        low = SparsePoly(g.ring, g.terms[: i + 1])
        ell = exps[i + 1]
        top = SparsePoly(g.ring, tuple((e - ell, c) for e, c in g.terms[i + 1 :]))
        if low.degree <= budget:
            consider(
                GapShape(g0=low, k=None, g1=None, ell=ell, g2=top, t=t, series_bound=sbound)
            )
        # three-chunk: a second wide gap strictly below this one
        for gap1, j in splits:
            if j >= i:
                continue
            g0 = SparsePoly(g.ring, g.terms[: j + 1])
            k = exps[j + 1]
            mid = SparsePoly(
                g.ring, tuple((e - k, c) for e, c in g.terms[j + 1 : i + 1])
            )
            if mid.degree > budget:
                continue
            gap2 = ell - k - mid.degree
            if gap2 < 1:
                continue
            t3 = -(-n // gap2)
            if t3 > T_MAX:
                continue
            sbound3 = _series_bound(tg, t3)
            if sbound3 > budget:
                continue
            # the recursive step sees a gap of about gap1 - (t-1) deg(g1)
            rec_gap = gap1 - (t3 - 1) * mid.degree
            if rec_gap < 1 or -(-n // rec_gap) > T_MAX:
                continue
            consider(
                GapShape(
                    g0=g0, k=k, g1=mid, ell=ell, g2=top, t=t3, series_bound=sbound3
                )
            )
    return best


def _driving_gap(shape: GapShape) -> int:
    return shape.gap1 if shape.k is None else shape.gap2


def _unit_const(ring, poly: SparsePoly) -> bool:
    """Constant coefficient invertible: always in a field, |c| = 1 over Z."""
    c = poly.terms[0][1] if poly.terms and poly.terms[0][0] == 0 else None
    if c is None:
        return False
    if isinstance(ring, IntegerRing):
        return c in (1, -1)
    return True


def bounded_series_quotient(
    f: SparsePoly, g: SparsePoly, n: int, cap: int
) -> SparsePoly:
    """The power-series quotient F/G mod X^n, aborting past cap terms.

    Eliminates the lowest-order pending term of F - G * (partial result)
    each step; every step emits exactly one nonzero term of the series,
    so the cost is cap * #G updates at worst.  Needs G(0) invertible
    (nonzero in a field, a unit over Z).
    """
    ring = f.ring
    if g.is_zero or g.terms[0][0] != 0:
        raise ValueError("series division needs a nonzero constant term")
    if not _unit_const(ring, g):
        raise ValueError("series division needs an invertible constant term")
    if n < 1:
        return SparsePoly.zero(ring)
    g0 = g.terms[0][1]
    g0_inv = g0 if isinstance(ring, IntegerRing) else ring.inv(g0)
    gtail = g.terms[1:]
    pend: dict = {}
    heap: list = []
    for e, c in f.terms:
        if e < n:
            pend[e] = c
            heapq.heappush(heap, e)
    out = []
    zero = ring.zero
    while heap:
        e = heapq.heappop(heap)
        c = pend.pop(e, None)
        if c is None or c == zero:
            continue
        qc = ring.mul(c, g0_inv)
        out.append((e, qc))
        if len(out) > cap:
            raise BudgetExceeded(f"series quotient exceeds {cap} terms")
        for ge, gc in gtail:
            e2 = e + ge
            if e2 >= n:
                break
            delta = ring.mul(qc, gc)
            if e2 in pend:
                pend[e2] = ring.sub(pend[e2], delta)
            else:
                pend[e2] = ring.neg(delta)
                heapq.heappush(heap, e2)
    return SparsePoly(ring, tuple(out))


def _pow_sparse(a: SparsePoly, t: int, cap: int) -> Optional[SparsePoly]:
    """a**t by repeated products, None once a partial result passes cap terms."""
    out = SparsePoly.one(a.ring)
    for _ in range(t):
        out = mul_naive(out, a)
        if out.sparsity > cap:
            return None
    return out


def divides_smallcases(
    f: SparsePoly, g: SparsePoly, budget: int
) -> Optional[bool]:
    """The classical decidable cases.

    Quotient length n = deg F - deg G + 1 within budget: run the heap
    division and test the remainder.  Divisor degree within budget:
    reduce each X^e mod G by binary powering and accumulate, no quotient
    needed.  Anything else: None.
    """
    if g.is_zero:
        raise ZeroPolynomial("zero divisor")
    ring = f.ring
    over_z = isinstance(ring, IntegerRing)
    if f.is_zero:
        return True
    if f.degree < g.degree:
        return False
    n = f.degree - g.degree + 1
    m = g.degree
    if n <= budget:
        try:
            _, r = classic_divrem(f, g, term_budget=n)
        except NonExactIntegerStep:
            return False  # a non-integral quotient step certifies G does not divide F
        return r.is_zero
    if m <= budget:
        if over_z and abs(g.leading[1]) != 1:
            return None  # X^e mod G is not integral without a unit leading coefficient
        return _remainder_by_powering(f, g).is_zero
    return None


def _remainder_by_powering(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    """F mod G as sum of f_e * (X^e mod G), X^e by square and multiply."""
    ring = f.ring
    m = g.degree
    gd = [ring.zero] * (m + 1)
    for e, c in g.terms:
        gd[e] = c
    acc = [ring.zero] * max(m, 1)

    def rem(vec):
        # reduce a dense vector by gd in place
        over_z = isinstance(ring, IntegerRing)
        lead = gd[m]
        for i in range(len(vec) - 1, m - 1, -1):
            c = vec[i]
            if c == ring.zero:
                continue
            if over_z:
                q = c // lead if lead in (1, -1) else None
            else:
                q = ring.mul(c, ring.inv(lead))
            sh = i - m
            for j in range(m + 1):
                if gd[j] != ring.zero:
                    vec[sh + j] = ring.sub(vec[sh + j], ring.mul(q, gd[j]))
        return vec[:m] if m > 0 else [ring.zero]

    def mulvec(a, b):
        out = [ring.zero] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai != ring.zero:
                for j, bj in enumerate(b):
                    if bj != ring.zero:
                        out[i + j] = ring.add(out[i + j], ring.mul(ai, bj))
        return out

    cache: dict = {}

    def x_pow_mod(e: int):
        if e in cache:
            return cache[e]
        if e < m:
            vec = [ring.zero] * max(m, 1)
            vec[e] = ring.one
        else:
            half = x_pow_mod(e // 2)
            vec = rem(mulvec(half, half))
            if e % 2:
                vec = rem(mulvec(vec, [ring.zero, ring.one]))
        if len(cache) < 4096:
            cache[e] = vec
        return vec

    for e, c in f.terms:
        xe = x_pow_mod(e)
        for i, v in enumerate(xe):
            if v != ring.zero:
                acc[i] = ring.add(acc[i], ring.mul(c, v))
    return normalize(ring, enumerate(acc))


def _structured_with_shape(
    f: SparsePoly, g: SparsePoly, shape: GapShape, budget: int, depth: int
) -> Optional[bool]:
    """One gap-route step: decide G | F using the decomposition in shape."""
    ring = f.ring
    a = shape.low_part
    if not _unit_const(ring, g):
        return None
    cpoly = _pow_sparse(a, shape.t, max(budget, shape.series_bound * a.sparsity))
    if cpoly is None:
        return None
    p = mul_naive(f, cpoly)
    n_ser = p.degree - g.degree + 1
    cap = f.sparsity * shape.series_bound
    try:
        series = bounded_series_quotient(p, g, n_ser, cap)
    except BudgetExceeded:
        return None
    if mul_naive(g, series) != p:
        return False  # G does not divide F * low^t, so it cannot divide F
    q0 = series
    # remaining condition: low^t divides Q0 = F * low^t / G
    sub = divides_smallcases(q0, cpoly, max(budget, cpoly.degree + 1))
    if sub is not None:
        return sub
    if depth + 1 >= _RECURSION_CAP:
        return None
    q0_star, c_star = reciprocal(q0), reciprocal(cpoly)
    n_sub = q0_star.degree - c_star.degree + 1
    shape2 = detect_gap_structure(c_star, n_sub, budget)
    if shape2 is None or shape2.k is not None:
        return None  # the delegated step must be the simple two-chunk form
    return _structured_with_shape(q0_star, c_star, shape2, budget, depth + 1)


def divides_structured(
    f: SparsePoly, g: SparsePoly, budget: Optional[int] = None
) -> Optional[bool]:
    """Gap-route divisibility for stripped inputs (nonzero constant terms).

    Tries a gap decomposition of G and of its reciprocal; a nonzero
    residue of the truncated series quotient is returned as a definitive
    False, budget overruns become None.
    """
    if g.is_zero:
        raise ZeroPolynomial("zero divisor")
    if f.is_zero:
        return True
    if budget is None:
        budget = default_budget(f, g)
    if f.terms[0][0] != 0 or g.terms[0][0] != 0:
        raise ValueError("strip powers of X before the structured test")
    if f.degree < g.degree:
        return False
    n = f.degree - g.degree + 1
    for fo, go in ((f, g), (reciprocal(f), reciprocal(g))):
        shape = detect_gap_structure(go, n, budget)
        if shape is None:
            continue
        verdict = _structured_with_shape(fo, go, shape, budget, 0)
        if verdict is not None:
            return verdict
    return None


def divides(
    f: SparsePoly, g: SparsePoly, budget: Optional[int] = None
) -> Optional[bool]:
    """Does G divide F?  True / False / None (= no tractable route).

    Dispatch: strip common powers of X, settle constants and degree
    mismatches, then try the classical small cases and the gap route in
    both orientations.
    """
    if g.is_zero:
        raise ZeroPolynomial("zero divisor")
    if f.ring != g.ring:
        raise ValueError("mismatched rings")
    if f.is_zero:
        return True
    ring = f.ring
    if budget is None:
        budget = default_budget(f, g)
    a, f1 = strip_x_power(f)
    b, g1 = strip_x_power(g)
    if b > a:
        return False
    if g1.degree == 0:
        c = g1.terms[0][1]
        if isinstance(ring, IntegerRing):
            return all(fc % c == 0 for _, fc in f1.terms)
        return True
    if g1.degree > f1.degree:
        return False
    verdict = divides_smallcases(f1, g1, budget)
    if verdict is not None:
        return verdict
    return divides_structured(f1, g1, budget)
