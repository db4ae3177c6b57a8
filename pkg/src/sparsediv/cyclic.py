"""Arithmetic in F[X]/(X^p - 1): the carrier ring for quotient probes.

A CyclicPoly is a fixed-length dense coefficient vector.  Multiplication
and gcd-based inversion delegate to the dense kernel, which picks the
coefficient layout and the schoolbook/Kronecker/half-gcd strategies.
"""

from __future__ import annotations

from . import dense
from .errors import NotInvertible


class CyclicPoly:
    """A residue in F[X]/(X^p - 1): field context, length p, dense vector."""

    __slots__ = ("field", "p", "_ops", "_vec")

    def __init__(self, field, p: int, ops=None, vec=None):
        if p < 1:
            raise ValueError("p must be >= 1")
        self.field = field
        self.p = p
        self._ops = ops if ops is not None else dense.opset_for(field)
        self._vec = vec if vec is not None else self._ops.zero()

    @classmethod
    def from_coeffs(cls, field, coeffs) -> "CyclicPoly":
        coeffs = list(coeffs)
        out = cls(field, len(coeffs))
        out._vec = out._ops.from_elems(coeffs)
        return out

    @classmethod
    def from_sparse(cls, field, p: int, items) -> "CyclicPoly":
        """Accumulate (index, coefficient) pairs into a length-p residue."""
        acc: dict = {}
        zero = field.zero
        for i, c in items:
            i %= p
            acc[i] = field.add(acc[i], c) if i in acc else c
        out = cls(field, p)
        pairs = [(i, c) for i, c in acc.items() if c != zero]
        if pairs:
            out._vec = out._ops.from_items(pairs)
        return out

    def coeffs(self) -> list:
        """The full length-p coefficient list."""
        return self._ops.to_elems(self._vec, self.p)

    def nonzero_items(self) -> list:
        return sorted(self._ops.nonzero_items(self._vec))

    @property
    def is_zero(self) -> bool:
        return self._ops.is_zero(self._vec)

    @property
    def sparsity(self) -> int:
        return len(self.nonzero_items())

    def _wrap(self, vec) -> "CyclicPoly":
        return CyclicPoly(self.field, self.p, self._ops, vec)

    def _check_compatible(self, other: "CyclicPoly"):
        if self.p != other.p or self.field != other.field:
            raise ValueError("mismatched cyclic rings")

    def __add__(self, other):
        self._check_compatible(other)
        return self._wrap(self._ops.add(self._vec, other._vec))

    def __sub__(self, other):
        self._check_compatible(other)
        return self._wrap(self._ops.sub(self._vec, other._vec))

    def __eq__(self, other):
        return (
            isinstance(other, CyclicPoly)
            and other.p == self.p
            and other.field == self.field
            and self.coeffs() == other.coeffs()
        )

    def __repr__(self):
        nz = self.nonzero_items()
        return f"CyclicPoly(p={self.p}, {len(nz)} nonzero)"


def cyclic_mul(a: CyclicPoly, b: CyclicPoly) -> CyclicPoly:
    """Product in F[X]/(X^p - 1): coefficients folded at index sums mod p."""
    a._check_compatible(b)
    vec = dense.cyclic_mul_vec(a._ops, a.p, a._vec, b._vec)
    return a._wrap(vec)


def cyclic_inv(g: CyclicPoly) -> CyclicPoly:
    """Inverse modulo X^p - 1; raises NotInvertible if gcd(g, X^p-1) != 1."""
    vec = dense.cyclic_inverse_vec(g._ops, g.p, g._vec)
    return g._wrap(vec)


def is_invertible(g: CyclicPoly) -> bool:
    try:
        cyclic_inv(g)
        return True
    except NotInvertible:
        return False
