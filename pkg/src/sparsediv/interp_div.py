"""Randomized exact division of sparse polynomials over finite fields.

Two interpolation engines recover the quotient Q = F/G from its images
modulo X^p - 1 without ever forming a dense Q:

* large characteristic (char > deg F): exponents are read off by dividing
  derivative coefficients by plain ones, halving the unrecovered part of
  Q each round with high probability;
* small characteristic: exponent residues are matched across several
  primes by coefficient diversification and combined by the Chinese
  remainder theorem.

An output-sensitive wrapper doubles a sparsity guess and gates every exit
through a randomized product verification, so callers never receive an
unverified quotient.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Optional

from . import primes as _primes
from .cyclic import CyclicPoly, cyclic_inv, cyclic_mul
from .errors import DivisionFailure, NotCoprime, NotInvertible
from .ff import ExtFieldCtx, IntegerRing, PrimeFieldCtx, build_ext_field
from .probe import _probe_dilated
from .sparse_poly import (
    SparsePoly,
    derivative,
    dilate,
    evaluate,
    height,
    normalize,
)

MapFn = Callable  # map_fn(func, items) -> list, e.g. a thread pool map


def _serial_map(func, items):
    return [func(x) for x in items]


@dataclass(frozen=True)
class LargeCharParams:
    """Derived parameters for the derivative-based engine."""

    T: int
    D: int
    q: int
    eps: float
    k: int  # primes drawn per round
    N: int  # size of the leading-primes pool
    s: int  # extension degree for the dilation point

    @property
    def rounds(self) -> int:
        return max(1, math.ceil(math.log2(max(self.T, 2))))


@dataclass(frozen=True)
class SmallCharParams:
    """Derived parameters for the CRT-based engine."""

    T: int
    D: int
    q: int
    eps: float
    mu: float  # per-round failure budget
    lam: int  # prime interval parameter: primes in ]lam, 2 lam[
    gamma: int  # primes per round
    m: int  # dilation points per round
    s: int  # extension degree

    @property
    def rounds(self) -> int:
        return max(1, math.ceil(math.log2(max(self.T, 2))))


def params_large_char(T: int, D: int, q: int, eps: float) -> LargeCharParams:
    """k = ceil(log2((2/eps) log2 T)), N = max(1, ceil(12 (T-1) log2 D)),
    s = ceil(log_q((1930/eps) D^4)); log2 throughout."""
    if T < 1 or D < 1 or not 0 < eps < 1:
        raise ValueError("need T >= 1, D >= 1, 0 < eps < 1")
    lg_t = math.log2(T) if T >= 2 else 1.0
    k = max(1, math.ceil(math.log2((2.0 / eps) * lg_t)))
    N = max(1, math.ceil(12 * (T - 1) * math.log2(max(D, 2))))
    s = max(1, math.ceil((math.log2(1930.0 / eps) + 4 * _log2_int(D)) / math.log2(q)))
    return LargeCharParams(T=T, D=D, q=q, eps=eps, k=k, N=N, s=s)


def params_small_char(T: int, D: int, q: int, eps: float) -> SmallCharParams:
    """mu = eps / (2 ceil(log2 T)), lam = max(21, ceil((40/3)(T-1) ln D)),
    gamma = ceil(max(8 log_lam D, 8 ln(2/mu))),
    m = ceil(log2(1/mu) + 2 log2(T (1 + ceil(log_lam D)/2))),
    s = ceil(log_q(2 (lam gamma / mu) m D))."""
    if T < 1 or D < 1 or not 0 < eps < 1:
        raise ValueError("need T >= 1, D >= 1, 0 < eps < 1")
    rounds = max(1, math.ceil(math.log2(max(T, 2))))
    mu = eps / (2 * rounds)
    ln_d = math.log(max(D, 2))
    lam = max(21, math.ceil((40.0 / 3.0) * (T - 1) * ln_d))
    log_lam_d = ln_d / math.log(lam)
    gamma = math.ceil(max(8 * log_lam_d, 8 * math.log(2.0 / mu)))
    m = math.ceil(
        math.log2(1.0 / mu)
        + 2 * math.log2(T * (1 + 0.5 * math.ceil(log_lam_d)))
    )
    s = max(
        1,
        math.ceil(
            (math.log2(2.0 * lam * gamma * m / mu) + _log2_int(D)) / math.log2(q)
        ),
    )
    return SmallCharParams(
        T=T, D=D, q=q, eps=eps, mu=mu, lam=lam, gamma=max(1, gamma), m=max(1, m), s=s
    )


def _log2_int(n: int) -> float:
    """log2 for possibly huge integers without float overflow."""
    if n < (1 << 52):
        return math.log2(n)
    bits = n.bit_length()
    return bits - 1 + math.log2(n >> (bits - 53)) - 52


_FIRSTN_CACHE: dict = {}
_INTERVAL_CACHE: dict = {}


def _first_n_pool(n: int):
    pool = _FIRSTN_CACHE.get(n)
    if pool is None:
        pool = _primes.first_n_primes(n)
        _FIRSTN_CACHE[n] = pool
    return pool


def _interval_pool(lam: int):
    pool = _INTERVAL_CACHE.get(lam)
    if pool is None:
        pool = _primes.primes_in_interval(lam)
        _INTERVAL_CACHE[lam] = pool
    return pool


def dlift(q_p: CyclicPoly, dq_p: CyclicPoly, p: int, deg_bound: int) -> SparsePoly:
    """Lift a residue pair (Q mod X^p-1, Q' mod X^p-1) back to terms of Q.

    For each monomial c X^r of q_p, the matching derivative coefficient
    at slot (r-1) mod p divided by c is the exponent as a field scalar;
    it is kept only if it reads back as an integer e <= deg_bound with
    e = r (mod p) whose derivative coefficient is exactly c*e.  Slots that
    fail (exponent collisions) contribute nothing.  Requires field
    characteristic > deg_bound.
    """
    field = q_p.field
    if p != q_p.p:
        raise ValueError("p does not match the residue length")
    if field.char <= deg_bound:
        raise ValueError("characteristic must exceed the degree bound")
    dq = dq_p.coeffs()
    out = []
    for r, c in q_p.nonzero_items():
        v = dq[(r - 1) % p]
        e_scalar = field.mul(v, field.inv(c))
        e = field.project_to_base(e_scalar)
        if e is None:
            continue
        if e > deg_bound or e % p != r:
            continue
        out.append((e, c))
    return normalize(field, out)


def _fold(poly: SparsePoly, p: int) -> CyclicPoly:
    return CyclicPoly.from_sparse(poly.ring, p, ((e % p, c) for e, c in poly.terms))


def div_large_char(
    f: SparsePoly,
    g: SparsePoly,
    T: int,
    eps: float,
    rng: random.Random,
    *,
    k_override: Optional[int] = None,
    on_round: Optional[Callable] = None,
    map_fn: MapFn = _serial_map,
) -> SparsePoly:
    """Quotient F/G over F_q with char > deg F, given a sparsity bound T.

    Runs ceil(log2 T) rounds; each round probes k random primes from the
    leading-primes pool, keeps the probe with the sparsest... densest
    image (maximal nonzero count, ties to the smallest prime) and adds
    the lifted residual.  Succeeds with probability >= 1 - eps under the
    divisibility contract.  Raises DivisionFailure when no dilation point
    yields invertible denominators (8 fresh draws are tried first).

    k_override and on_round(round_index, alpha, current_dilated_guess)
    exist for instrumentation and statistics harnesses.
    """
    base = f.ring
    if not isinstance(base, PrimeFieldCtx):
        raise ValueError("large-characteristic division runs over a prime field")
    if g.ring != base:
        raise ValueError("mismatched rings")
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return SparsePoly.zero(base)
    D = f.degree
    if base.char <= D:
        raise ValueError("characteristic must exceed deg F")
    params = params_large_char(T, D, base.q, eps)
    k = k_override if k_override is not None else params.k
    pool = _first_n_pool(params.N)
    ext = base if params.s == 1 else build_ext_field(base, params.s, rng)
    deg_q = D - g.degree

    for _attempt in range(8):
        alpha = ext.random_nonzero(rng)
        f_dil = dilate(f, alpha, ext)
        g_dil = dilate(g, alpha, ext)
        qhat = SparsePoly.zero(ext)  # approximation of Q(alpha X)
        try:
            for rnd in range(params.rounds):
                draws = [pool.choose(rng) for _ in range(k)]
                uniq = []
                for p in draws:
                    if p not in uniq:
                        uniq.append(p)
                probes = map_fn(
                    lambda p: (p, _probe_dilated(f_dil, g_dil, p, True)), uniq
                )
                best = None
                for p, (q_p, dq_p) in probes:
                    sp = q_p.sparsity
                    if best is None or sp > best[0] or (sp == best[0] and p < best[1]):
                        best = (sp, p, q_p, dq_p)
                _, p, q_p, dq_p = best
                rq = q_p - _fold(qhat, p)
                rdq = dq_p - _fold(derivative(qhat), p)
                qhat = qhat + dlift(rq, rdq, p, deg_q)
                if on_round is not None:
                    on_round(rnd, alpha, qhat)
        except NotCoprime:
            continue
        # undo the dilation: c X^e of Q(alpha X) maps to c alpha^-e X^e
        inv_alpha = ext.inv(alpha) if ext is not base else base.inv(alpha)
        out = []
        ok = True
        for e, c in qhat.terms:
            cb = ext.project_to_base(ext.mul(c, ext.pow(inv_alpha, e)))
            if cb is None:
                ok = False
                break
            out.append((e, cb))
        if not ok:
            raise DivisionFailure("recovered coefficients left the base field")
        return normalize(base, out)
    raise DivisionFailure("no dilation point made the divisor invertible")


def crt_lift(
    probes: list,
    primes_used: list,
    alphas: list,
    T: int,
    deg_bound: int,
    field,
    base,
) -> SparsePoly:
    """Recover terms from residues at several primes via diversification.

    probes[j][i] is the residual image at dilation point alphas[j] and
    prime primes_used[i].  For each point, every distinct nonzero
    coefficient value is traced across the primes; values present (at a
    single slot) in more than half the prime draws have their exponent
    rebuilt by CRT over the distinct supporting primes, accepted only
    when the prime product exceeds deg_bound and the result is at most
    deg_bound.  The dilation is then divided back out of the coefficient.
    Only terms recovered identically at every point are returned.
    """
    gamma = len(primes_used)
    candidates = None
    for j, alpha in enumerate(alphas):
        value_slots: dict = {}  # value -> {prime: slot or None(conflict)}
        value_draws: dict = {}  # value -> number of supporting draws
        per_prime_counts: list = []
        for i, p in enumerate(primes_used):
            counts: dict = {}
            for slot, val in probes[j][i].nonzero_items():
                counts.setdefault(val, []).append(slot)
            per_prime_counts.append(counts)
        for i, p in enumerate(primes_used):
            for val, slots in per_prime_counts[i].items():
                if len(slots) != 1:
                    continue
                entry = value_slots.setdefault(val, {})
                if p in entry and entry[p] != slots[0]:
                    entry[p] = None  # conflicting duplicate draw
                    continue
                entry[p] = slots[0]
                value_draws[val] = value_draws.get(val, 0) + 1
        point_terms = set()
        for val, entry in value_slots.items():
            if value_draws.get(val, 0) * 2 <= gamma:
                continue
            pairs = [(p, r) for p, r in entry.items() if r is not None]
            prod = 1
            for p, _ in pairs:
                prod *= p
            if prod <= deg_bound:
                continue
            e = _crt(pairs)
            if e > deg_bound:
                continue
            coeff = field.mul(val, field.pow(field.inv(alpha), e))
            cb = field.project_to_base(coeff) if field is not base else coeff
            if cb is None:
                continue
            point_terms.add((e, cb))
        candidates = point_terms if candidates is None else (candidates & point_terms)
        if not candidates:
            break
    if not candidates:
        return SparsePoly.zero(base)
    return normalize(base, sorted(candidates))


def _crt(pairs: list) -> int:
    """x with x = r (mod p) for all (p, r), canonical in [0, prod p)."""
    x, mod = 0, 1
    for p, r in pairs:
        # solve x + mod * t = r (mod p)
        t = (r - x) * pow(mod % p, -1, p) % p
        x += mod * t
        mod *= p
    return x


def div_small_char(
    f: SparsePoly,
    g: SparsePoly,
    T: int,
    eps: float,
    rng: random.Random,
    *,
    map_fn: MapFn = _serial_map,
    on_round: Optional[Callable] = None,
) -> SparsePoly:
    """Quotient F/G over F_q without any characteristic restriction.

    Each of the ceil(log2 T) rounds draws gamma primes from ]lam, 2 lam[
    and m dilation points from the extension, probes every pair (no
    derivatives), and adds the CRT-recovered part of the residual.
    Raises DivisionFailure as soon as any dilated divisor fails to be
    invertible modulo its X^p - 1.
    """
    base = f.ring
    if not isinstance(base, PrimeFieldCtx):
        raise ValueError("small-characteristic division runs over a prime field")
    if g.ring != base:
        raise ValueError("mismatched rings")
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return SparsePoly.zero(base)
    D = f.degree
    params = params_small_char(T, D, base.q, eps)
    pool = _interval_pool(params.lam)
    ext = base if params.s == 1 else build_ext_field(base, params.s, rng)
    deg_q = D - g.degree
    qhat = SparsePoly.zero(base)

    for rnd in range(params.rounds):
        ps = [pool.choose(rng) for _ in range(params.gamma)]
        alphas = [ext.random_nonzero(rng) for _ in range(params.m)]
        f_dils = [dilate(f, a, ext) for a in alphas]
        g_dils = [dilate(g, a, ext) for a in alphas]
        qh_dils = [dilate(qhat, a, ext) for a in alphas]

        def probe_prime(p):
            # invert all m dilated divisor images at once: prefix products,
            # one inversion, then walk back (the product is invertible
            # exactly when every factor is)
            gs = [_fold(gd, p) for gd in g_dils]
            prefix = [gs[0]]
            for gj in gs[1:]:
                prefix.append(cyclic_mul(prefix[-1], gj))
            inv_acc = cyclic_inv(prefix[-1])
            row = [None] * len(gs)
            for j in range(len(gs) - 1, -1, -1):
                inv_j = cyclic_mul(inv_acc, prefix[j - 1]) if j > 0 else inv_acc
                q_p = cyclic_mul(_fold(f_dils[j], p), inv_j)
                row[j] = q_p - _fold(qh_dils[j], p)
                if j > 0:
                    inv_acc = cyclic_mul(inv_acc, gs[j])
            return row

        uniq = []
        for p in ps:
            if p not in uniq:
                uniq.append(p)
        try:
            rows = dict(zip(uniq, map_fn(probe_prime, uniq)))
        except (NotInvertible, NotCoprime) as exc:
            raise DivisionFailure(str(exc)) from exc
        probes = [[rows[p][j] for p in ps] for j in range(params.m)]
        qhat = qhat + crt_lift(probes, ps, alphas, T, deg_q, ext, base)
        if on_round is not None:
            on_round(rnd, qhat)
    return qhat


def verify_product(
    f: SparsePoly, g: SparsePoly, q: SparsePoly, eps: float, rng: random.Random
) -> bool:
    """Check F = G*Q; always true on equality, false-accept rate <= eps.

    Over a finite field: evaluate at uniform points of an extension large
    enough that each trial errs with probability at most eps/2.  Over the
    integers: evaluate modulo fresh random probable primes at random
    points, enough trials that root-hits and prime failures sum below eps.
    """
    if f.ring != g.ring or f.ring != q.ring:
        raise ValueError("mismatched rings")
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    if q.is_zero or f.is_zero:
        return f.is_zero and (q.is_zero or g.is_zero)
    ring = f.ring
    delta = max(f.degree, g.degree + q.degree, 1)
    if isinstance(ring, IntegerRing):
        maxh = max(height(f), height(g), height(q), 1)
        tmax = max(f.sparsity, g.sparsity, q.sparsity)
        bound = max(8, 2 * maxh * (tmax + 1) * (delta + 1))
        trials = max(1, math.ceil(math.log2(2.0 / eps)))
        for _ in range(trials):
            prime = _primes.random_probable_prime(bound, eps / (2 * trials), rng)
            fld = PrimeFieldCtx(prime, check=False)
            beta = rng.randrange(prime)
            lhs = evaluate(f, beta, fld)
            rhs = fld.mul(evaluate(g, beta, fld), evaluate(q, beta, fld))
            if lhs != rhs:
                return False
        return True
    base = ring if isinstance(ring, PrimeFieldCtx) else ring.base
    lg_q = math.log2(base.q)
    u = max(1, math.ceil((math.log2(2.0 * (delta + 1) / eps)) / lg_q))
    fld = base if u == 1 else build_ext_field(base, u, rng)
    # per-trial error <= delta / q^u <= eps/2; repeat until the product bound holds
    lg_per = _log2_int(delta) - u * lg_q
    trials = 1
    while trials * lg_per > math.log2(eps) and trials < 64:
        trials += 1
    for _ in range(trials):
        beta = fld.random_elem(rng)
        lhs = evaluate(f, beta, fld)
        rhs = fld.mul(evaluate(g, beta, fld), evaluate(q, beta, fld))
        if lhs != rhs:
            return False
    return True


def exact_division(
    f: SparsePoly,
    g: SparsePoly,
    eps: float,
    rng: random.Random,
    *,
    map_fn: MapFn = _serial_map,
) -> SparsePoly:
    """Output-sensitive exact quotient F/G over a prime field.

    Doubles a sparsity guess t, runs the characteristic-appropriate
    engine with failure budget eps/2, and returns the first quotient that
    passes verify_product at tolerance eps/(2t).  A failed engine run
    counts as a failed attempt and the doubling continues.  Raises
    DivisionFailure once t exceeds twice the largest possible quotient
    sparsity (which cannot happen when G truly divides F, except with
    the stated probability).
    """
    base = f.ring
    if not isinstance(base, PrimeFieldCtx):
        raise ValueError("exact_division expects prime-field inputs")
    if g.ring != base:
        raise ValueError("mismatched rings")
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return SparsePoly.zero(base)
    if f.degree < g.degree:
        raise DivisionFailure("deg F < deg G: not divisible")
    large = base.char > f.degree
    cap = 2 * (f.degree - g.degree + 1)
    t = 1
    while True:
        t *= 2
        if t > max(cap, 2):
            raise DivisionFailure(
                "sparsity guess exceeded any possible quotient; "
                "input likely violates the divisibility contract"
            )
        try:
            if large:
                qhat = div_large_char(f, g, t, eps / 2, rng, map_fn=map_fn)
            else:
                qhat = div_small_char(f, g, t, eps / 2, rng, map_fn=map_fn)
        except DivisionFailure:
            continue
        if verify_product(f, g, qhat, eps / (2 * t), rng):
            return qhat
