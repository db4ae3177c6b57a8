"""Sparse polynomials: ordered term lists over a ring context.

A SparsePoly is an immutable list of (exponent, coefficient) pairs with
strictly increasing arbitrary-precision exponents and no zero
coefficients; the empty list is the zero polynomial.  All operations are
pure functions, so values can be shared freely across threads.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Optional

from .errors import BudgetExceeded, NonExactIntegerStep, ZeroPolynomial
from .ff import ExtFieldCtx, IntegerRing, PrimeFieldCtx


class SparsePoly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring, terms: tuple):
        # terms must already be normalized; use from_terms for raw input
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_terms(cls, ring, raw: Iterable[tuple]) -> "SparsePoly":
        return normalize(ring, raw)

    @classmethod
    def zero(cls, ring) -> "SparsePoly":
        return cls(ring, ())

    @classmethod
    def one(cls, ring) -> "SparsePoly":
        return cls(ring, ((0, ring.one),))

    @classmethod
    def monomial(cls, ring, coeff, exp: int) -> "SparsePoly":
        return normalize(ring, [(exp, coeff)])

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return self.terms[-1][0] if self.terms else -1

    @property
    def sparsity(self) -> int:
        return len(self.terms)

    @property
    def leading(self) -> tuple:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        return self.terms[-1]

    def coeff(self, exp: int):
        for e, c in self.terms:
            if e == exp:
                return c
        return self.ring.zero

    def support(self) -> tuple:
        return tuple(e for e, _ in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, SparsePoly)
            and other.ring == self.ring
            and other.terms == self.terms
        )

    def __add__(self, other):
        return normalize(self.ring, list(self.terms) + list(other.terms))

    def __neg__(self):
        ring = self.ring
        return SparsePoly(ring, tuple((e, ring.neg(c)) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return mul_naive(self, other)

    def __repr__(self):
        if not self.terms:
            return "SparsePoly(0)"
        bits = " + ".join(f"{c}*X^{e}" for e, c in self.terms[:6])
        if len(self.terms) > 6:
            bits += f" + ... ({len(self.terms)} terms)"
        return f"SparsePoly({bits})"


def normalize(ring, raw: Iterable[tuple]) -> SparsePoly:
    """Merge duplicate exponents, drop zeros, sort ascending."""
    acc: dict = {}
    for e, c in raw:
        e = int(e)
        if e < 0:
            raise ValueError("exponents must be nonnegative")
        if e in acc:
            acc[e] = ring.add(acc[e], c)
        else:
            acc[e] = c
    zero = ring.zero
    terms = tuple((e, acc[e]) for e in sorted(acc) if acc[e] != zero)
    return SparsePoly(ring, terms)


def _coeff_map(src_ring, dst_field):
    """Coefficient embedding from src_ring into the field dst_field."""
    if src_ring == dst_field:
        return lambda c: c
    if isinstance(src_ring, IntegerRing):
        if isinstance(dst_field, PrimeFieldCtx):
            return dst_field.from_int
        if isinstance(dst_field, ExtFieldCtx):
            return dst_field.from_int
    if isinstance(src_ring, PrimeFieldCtx) and isinstance(dst_field, ExtFieldCtx):
        if dst_field.base == src_ring:
            return dst_field.embed_base
    raise ValueError(f"cannot embed {src_ring!r} coefficients into {dst_field!r}")


def evaluate(a: SparsePoly, beta, field=None):
    """a(beta), computed with one square-and-multiply power per term.

    field names the field containing beta; it defaults to a's own ring and
    must admit an embedding of a's coefficients (prime field into its
    extension, integers into any prime field or extension).
    """
    if field is None:
        field = a.ring
        if isinstance(field, IntegerRing):
            raise ValueError("pass the evaluation field explicitly for Z[X]")
    emb = _coeff_map(a.ring, field)
    acc = field.zero
    for e, c in a.terms:
        acc = field.add(acc, field.mul(emb(c), field.pow(beta, e)))
    return acc


def derivative(a: SparsePoly) -> SparsePoly:
    """Termwise derivative; the exponent multiplier is reduced mod char."""
    ring = a.ring
    out = []
    for e, c in a.terms:
        if e == 0:
            continue
        d = ring.mul_int(c, e)
        if d != ring.zero:
            out.append((e - 1, d))
    return SparsePoly(ring, tuple(out))


def reciprocal(a: SparsePoly) -> SparsePoly:
    """X^deg(a) * a(1/X): exponent reversal."""
    if a.is_zero:
        raise ZeroPolynomial("reciprocal of zero")
    d = a.degree
    return SparsePoly(a.ring, tuple((d - e, c) for e, c in reversed(a.terms)))


def strip_x_power(a: SparsePoly) -> tuple[int, SparsePoly]:
    """(v, a / X^v) where v is the order of a at zero."""
    if a.is_zero:
        raise ZeroPolynomial("cannot strip the zero polynomial")
    v = a.terms[0][0]
    if v == 0:
        return 0, a
    return v, SparsePoly(a.ring, tuple((e - v, c) for e, c in a.terms))


def dilate(a: SparsePoly, alpha, field=None) -> SparsePoly:
    """a(alpha * X): each term (e, c) becomes (e, c * alpha^e)."""
    if field is None:
        field = a.ring
    emb = _coeff_map(a.ring, field)
    out = []
    for e, c in a.terms:
        d = field.mul(emb(c), field.pow(alpha, e))
        if d != field.zero:
            out.append((e, d))
    return SparsePoly(field, tuple(out))


def dilate_reduce(a: SparsePoly, alpha, p: int, field=None):
    """(a(alpha X), a(alpha X) mod X^p - 1).

    The cyclic part accumulates each dilated coefficient at exponent
    e mod p.  Returns (SparsePoly, CyclicPoly).
    """
    from .cyclic import CyclicPoly  # local import to avoid a cycle

    dil = dilate(a, alpha, field)
    red = CyclicPoly.from_sparse(dil.ring, p, ((e % p, c) for e, c in dil.terms))
    return dil, red


def mul_naive(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    """Full product by term-pair accumulation (at most #a * #b terms)."""
    if a.ring != b.ring:
        raise ValueError("mismatched rings")
    ring = a.ring
    acc: dict = {}
    zero = ring.zero
    for e1, c1 in a.terms:
        for e2, c2 in b.terms:
            e = e1 + e2
            prod = ring.mul(c1, c2)
            if e in acc:
                acc[e] = ring.add(acc[e], prod)
            else:
                acc[e] = prod
    terms = tuple((e, acc[e]) for e in sorted(acc) if acc[e] != zero)
    return SparsePoly(ring, terms)


def classic_divrem(
    f: SparsePoly, g: SparsePoly, term_budget: Optional[int] = None
) -> tuple[SparsePoly, SparsePoly]:
    """Euclidean division with a quotient heap: f = g*q + r, deg r < deg g.

    The heap merges f's term stream with one stream -q_i * X^(e_i) * g per
    emitted quotient term, so the cost is O((#f + #q #g) log(#q + 1)).
    Over Z only exact quotient steps are allowed; a non-integral step
    raises NonExactIntegerStep.  If term_budget is given and the quotient
    would exceed it, BudgetExceeded is raised.
    """
    if f.ring != g.ring:
        raise ValueError("mismatched rings")
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = f.ring
    over_z = isinstance(ring, IntegerRing)
    dg, glead = g.terms[-1]
    grest = g.terms[:-1]  # ascending; streams walk it from the top
    if not over_z:
        glead_inv = ring.inv(glead)

    # heap entries: (-exponent, seq, kind, pos, qcoeff)
    #   kind 0: f's terms, walked descending from pos
    #   kind 1: quotient-term stream, pos indexes grest descending
    heap: list = []
    seq = 0
    if f.terms:
        nf = len(f.terms)
        e, _ = f.terms[nf - 1]
        heap.append((-e, seq, 0, nf - 1, None))
        seq += 1
    q_terms: list = []
    r_terms: list = []
    zero = ring.zero

    while heap:
        top = -heap[0][0]
        c = zero
        while heap and -heap[0][0] == top:
            _, _, kind, pos, qc = heapq.heappop(heap)
            if kind == 0:
                c = ring.add(c, f.terms[pos][1])
                if pos > 0:
                    heapq.heappush(heap, (-f.terms[pos - 1][0], seq, 0, pos - 1, None))
                    seq += 1
            else:
                ge, gc = grest[pos]
                c = ring.sub(c, ring.mul(qc, gc))
                if pos > 0:
                    qe = top - ge  # recover the stream's shift
                    heapq.heappush(
                        heap, (-(qe + grest[pos - 1][0]), seq, 1, pos - 1, qc)
                    )
                    seq += 1
        if c == zero:
            continue
        if top >= dg:
            if over_z:
                qc, rem = divmod(c, glead)
                if rem:
                    raise NonExactIntegerStep(
                        f"coefficient {c} not divisible by leading coefficient {glead}"
                    )
            else:
                qc = ring.mul(c, glead_inv)
            qe = top - dg
            q_terms.append((qe, qc))
            if term_budget is not None and len(q_terms) > term_budget:
                raise BudgetExceeded(f"quotient exceeds {term_budget} terms")
            if grest:
                pos = len(grest) - 1
                heapq.heappush(heap, (-(qe + grest[pos][0]), seq, 1, pos, qc))
                seq += 1
        else:
            r_terms.append((top, c))

    q_terms.reverse()
    r_terms.reverse()
    return SparsePoly(ring, tuple(q_terms)), SparsePoly(ring, tuple(r_terms))


def height(a: SparsePoly) -> int:
    """Max absolute coefficient of an integer polynomial (0 for zero)."""
    if not isinstance(a.ring, IntegerRing):
        raise ValueError("height is defined for Z[X]")
    return max((abs(c) for _, c in a.terms), default=0)
