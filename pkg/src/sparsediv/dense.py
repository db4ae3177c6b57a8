"""Dense univariate arithmetic kernels used by the cyclic-residue engine.

Dense polynomials live in one of three layouts, chosen per coefficient
field:

* prime fields: trimmed python lists of ints,
* extensions with base modulus < 2^31: numpy int64 arrays of shape (n, s),
* other extensions: trimmed python lists of coefficient tuples.

Multiplication dispatches between schoolbook and Kronecker substitution
(coefficients packed into fixed-width slots of one big integer, one GMP
product, unpack and reduce).  Inversion modulo X^p - 1 runs a plain
extended Euclid at small lengths and a half-gcd accelerated one above a
per-layout threshold; both track exact Bezout cofactors, and every
computed inverse is re-verified with one cyclic product.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import as_strided

from .errors import NotInvertible
from .ff import ExtFieldCtx, PrimeFieldCtx

try:
    import gmpy2

    _mpz = gmpy2.mpz
    _HAVE_GMPY = True
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None
    _mpz = int
    _HAVE_GMPY = False

# Tuning knobs (lengths are coefficient counts, not bits).
SCHOOLBOOK_PRODUCT_LIMIT = 2048  # len(a)*len(b) at or below: schoolbook mul
ARRAY_SCHOOLBOOK_MIN = 9  # shorter factor below this: shift-accumulate mul
NEWTON_DIVREM_MIN = 24  # quotient length needed before Newton division
NEWTON_DIVREM_WORK = 16384  # and quotient_len * divisor_len above this
SPARSE_CYCLIC_MAX = 24  # nonzero count treated as sparse in cyclic products
_ARRAY_Q_LIMIT = 1 << 31  # int64-safe modulus bound for the array layout


def _pack_ints(vals, width):
    """Pack nonnegative ints into width-bit slots of one big integer."""
    if _HAVE_GMPY:
        return gmpy2.pack([_mpz(v) for v in vals], width)
    acc = 0
    shift = 0
    for v in vals:
        acc |= int(v) << shift
        shift += width
    return acc


def _unpack_ints(x, count, width):
    """Inverse of _pack_ints, padded/truncated to count slots."""
    if _HAVE_GMPY:
        limbs = gmpy2.unpack(_mpz(x), width)
        if len(limbs) < count:
            limbs = list(limbs) + [0] * (count - len(limbs))
        return limbs[:count]
    mask = (1 << width) - 1
    x = int(x)
    return [(x >> (i * width)) & mask for i in range(count)]


# ---------------------------------------------------------------------------
# prime-field layout: python list of ints, trimmed
# ---------------------------------------------------------------------------


class PrimeListOps:
    """Dense ops over F_q with list-of-int vectors."""

    layout = "list"
    hgcd_base = 48
    hgcd_use_min = 200

    def __init__(self, field: PrimeFieldCtx):
        self.field = field
        self.q = field.q

    # construction / inspection

    def zero(self):
        return []

    def one(self):
        return [1]

    def from_elems(self, elems):
        v = [int(c) for c in elems]
        return self.trim(v)

    def from_items(self, pairs, length=None):
        pairs = list(pairs)
        top = max((i for i, _ in pairs), default=-1)
        v = [0] * (top + 1)
        for i, c in pairs:
            v[i] = int(c)
        return self.trim(v)

    def to_elems(self, v, length):
        out = list(v[:length])
        out.extend([0] * (length - len(out)))
        return out

    def x_pow_minus_one(self, p):
        v = [0] * (p + 1)
        v[0] = self.q - 1
        v[p] = 1
        return v

    def trim(self, v):
        while v and v[-1] == 0:
            v.pop()
        return v

    def deg(self, v):
        return len(v) - 1

    def is_zero(self, v):
        return not v

    def copy(self, v):
        return list(v)

    def nonzero_items(self, v):
        return [(i, c) for i, c in enumerate(v) if c]

    def lc(self, v):
        return v[-1]

    def elem_inv(self, c):
        return pow(c, -1, self.q)

    # linear ops

    def add(self, a, b):
        q = self.q
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % q
        return self.trim(out)

    def sub(self, a, b):
        q = self.q
        out = list(a)
        if len(out) < len(b):
            out.extend([0] * (len(b) - len(out)))
        for i, c in enumerate(b):
            out[i] = (out[i] - c) % q
        return self.trim(out)

    def neg(self, a):
        q = self.q
        return [-c % q for c in a]

    def smul(self, a, c):
        q = self.q
        c %= q
        if c == 0:
            return []
        return [x * c % q for x in a]

    def shift(self, a, k):
        if not a:
            return []
        return [0] * k + list(a)

    def lowslice(self, a, m):
        return self.trim(list(a[:m]))

    def highslice(self, a, m):
        return list(a[m:])

    # multiplication

    def mul(self, a, b):
        if not a or not b:
            return []
        na, nb = len(a), len(b)
        q = self.q
        if na * nb <= SCHOOLBOOK_PRODUCT_LIMIT:
            out = [0] * (na + nb - 1)
            if na > nb:
                a, b, na, nb = b, a, nb, na
            for i in range(na):
                ai = a[i]
                if ai:
                    for j in range(nb):
                        out[i + j] += ai * b[j]
            return self.trim([c % q for c in out])
        width = 2 * (q - 1).bit_length() + min(na, nb).bit_length() + 1
        pa = _pack_ints(a, width)
        pb = _pack_ints(b, width)
        prod = _mpz(pa) * _mpz(pb)
        limbs = _unpack_ints(prod, na + nb - 1, width)
        return self.trim([int(c % q) for c in limbs])

    # one full division with quotient capture (schoolbook inner loop)

    def divmod_small(self, a, b):
        q = self.q
        r = list(a)
        nb = len(b)
        inv_l = pow(b[-1], -1, q)
        qt = [0] * (len(r) - nb + 1)
        while len(r) >= nb:
            top = r[-1]
            if top == 0:
                r.pop()
                continue
            c = top * inv_l % q
            sh = len(r) - nb
            qt[sh] = c
            for j in range(nb - 1):
                bj = b[j]
                if bj:
                    r[sh + j] = (r[sh + j] - c * bj) % q
            r.pop()
        return self.trim(qt), self.trim(r)


# ---------------------------------------------------------------------------
# extension-field layout: numpy (n, s) int64, base modulus < 2^31
# ---------------------------------------------------------------------------


def _antidiag_sum(tmp):
    """Sum tmp[:, i, j] over anti-diagonals i + j = k: (n, s, s) -> (n, 2s-1).

    The zero padding at columns [s, 2s-1) absorbs the out-of-range reads
    of the strided view, so no masking is needed.
    """
    n, s, _ = tmp.shape
    w = 2 * s - 1
    buf = np.zeros((n, s, w), dtype=tmp.dtype)
    buf[:, :, :s] = tmp
    flat = buf.reshape(n, s * w)
    item = flat.itemsize
    view = as_strided(
        flat, shape=(n, s, w), strides=(flat.strides[0], (w - 1) * item, item)
    )
    return view.sum(axis=1)


class ExtArrayOps:
    """Dense ops over F_{q^s} with (n, s) int64 arrays, q < 2^31."""

    layout = "array"
    hgcd_base = 24
    hgcd_use_min = 56

    def __init__(self, field: ExtFieldCtx):
        self.field = field
        self.q = field.base.q
        self.s = field.s
        self._red = np.array(field._red, dtype=np.int64).reshape(-1, field.s)
        # one-shot convolution tiers: products and s-fold sums must fit
        self._tiny = self.q <= 127  # int32 products/sums
        self._oneshot = field.s * (self.q - 1) ** 2 < (1 << 62)

    def zero(self):
        return np.zeros((0, self.s), dtype=np.int64)

    def one(self):
        v = np.zeros((1, self.s), dtype=np.int64)
        v[0, 0] = 1
        return v

    def from_elems(self, elems):
        v = np.array([list(c) for c in elems], dtype=np.int64).reshape(-1, self.s)
        return self.trim(v)

    def from_items(self, pairs, length=None):
        pairs = list(pairs)
        top = max((i for i, _ in pairs), default=-1)
        v = np.zeros((top + 1, self.s), dtype=np.int64)
        for i, c in pairs:
            v[i] = c
        return self.trim(v)

    def to_elems(self, v, length):
        out = [tuple(int(x) for x in row) for row in v[:length]]
        zero = self.field.zero
        out.extend([zero] * (length - len(out)))
        return out

    def x_pow_minus_one(self, p):
        v = np.zeros((p + 1, self.s), dtype=np.int64)
        v[0, 0] = self.q - 1
        v[p, 0] = 1
        return v

    def trim(self, v):
        if len(v) == 0:
            return v
        nz = np.flatnonzero(v.any(axis=1))
        if len(nz) == 0:
            return v[:0]
        return v[: nz[-1] + 1]

    def deg(self, v):
        return len(v) - 1

    def is_zero(self, v):
        return len(v) == 0

    def copy(self, v):
        return v.copy()

    def nonzero_items(self, v):
        out = []
        for i in np.flatnonzero(v.any(axis=1)).tolist():
            out.append((i, tuple(int(x) for x in v[i])))
        return out

    def lc(self, v):
        return tuple(int(x) for x in v[-1])

    def elem_inv(self, c):
        return self.field.inv(c)

    def add(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = (out[: len(b)] + b) % self.q
        return self.trim(out)

    def sub(self, a, b):
        n = max(len(a), len(b))
        out = np.zeros((n, self.s), dtype=np.int64)
        out[: len(a)] = a
        out[: len(b)] = (out[: len(b)] - b) % self.q
        return self.trim(out)

    def neg(self, a):
        return (-a) % self.q

    def _yreduce(self, full):
        """Fold Y-degrees >= s of a (n, 2s-1) array back below s.

        Inputs may hold unreduced convolution sums; everything is taken
        mod q before multiplying so products stay within int64.
        """
        q = self.q
        s = self.s
        out = full[:, :s] % q
        over = full[:, s:]
        if over.size:
            over = over % q
            if over.any():
                if self._oneshot:
                    out = (out + over @ self._red) % q
                else:
                    for i in range(s - 1):
                        col = over[:, i]
                        if col.any():
                            out = (out + col[:, None] * self._red[i][None, :]) % q
        return np.ascontiguousarray(out)

    def _ymul(self, v, c):
        """v (n, s) times the scalar c (s-tuple), Y-reduced: (n, s)."""
        q = self.q
        s = self.s
        n = len(v)
        if n == 0:
            return v
        if n * s * s > 65536:
            # outer-product cost beats packing: one Kronecker product
            carr = np.asarray([c], dtype=np.int64)
            return self._kron_mul(v, carr)
        if self._tiny:
            carr = np.asarray(c, dtype=np.int32)
            tmp = v.astype(np.int32)[:, :, None] * carr[None, None, :]
            full = _antidiag_sum(tmp).astype(np.int64)
        elif self._oneshot:
            carr = np.asarray(c, dtype=np.int64)
            tmp = v[:, :, None] * carr[None, None, :]
            full = _antidiag_sum(tmp)
        else:
            full = np.zeros((n, 2 * s - 1), dtype=np.int64)
            for j, cj in enumerate(c):
                if cj:
                    full[:, j : j + s] = (full[:, j : j + s] + cj * v) % q
        return self._yreduce(full)

    def smul(self, a, c):
        if not any(c):
            return self.zero()
        return self.trim(self._ymul(a, c))

    def shift(self, a, k):
        if len(a) == 0:
            return a
        return np.vstack([np.zeros((k, self.s), dtype=np.int64), a])

    def lowslice(self, a, m):
        return self.trim(a[:m].copy())

    def highslice(self, a, m):
        return a[m:].copy()

    def mul(self, a, b):
        na, nb = len(a), len(b)
        if na == 0 or nb == 0:
            return self.zero()
        if min(na, nb) < ARRAY_SCHOOLBOOK_MIN:
            if na < nb:
                a, b, na, nb = b, a, nb, na
            q = self.q
            out = np.zeros((na + nb - 1, self.s), dtype=np.int64)
            for j in range(nb):
                cj = tuple(int(x) for x in b[j])
                if any(cj):
                    out[j : j + na] = (out[j : j + na] + self._ymul(a, cj)) % q
            return self.trim(out)
        return self.trim(self._kron_mul(a, b))

    def _kron_mul(self, a, b):
        q = self.q
        s = self.s
        na, nb = len(a), len(b)
        stride = 2 * s - 1
        width = 2 * (q - 1).bit_length() + (min(na, nb) * s).bit_length() + 1
        nbytes = max(2, (width + 7) // 8)
        pa = self._pack(a, stride, nbytes)
        pb = self._pack(b, stride, nbytes)
        prod = _mpz(pa) * _mpz(pb)
        n_out = na + nb - 1
        total = n_out * stride
        raw = int(prod).to_bytes(total * nbytes + 16, "little")
        mat = np.frombuffer(raw[: total * nbytes], dtype=np.uint8)
        mat = mat.reshape(total, nbytes).astype(np.int64)
        pows = np.array([pow(2, 8 * k, q) for k in range(nbytes)], dtype=np.int64)
        vals = (mat @ pows) % q
        full = vals.reshape(n_out, stride)
        return self._yreduce(full)

    def _pack(self, a, stride, nbytes):
        # values < q < 2^31 and width >= bits(q), so the first
        # min(nbytes, 8) little-endian bytes of each int64 suffice
        n = len(a)
        used = min(nbytes, 8)
        tmp = np.zeros((n, stride), dtype="<i8")
        tmp[:, : self.s] = a
        buf = np.zeros((n, stride, nbytes), dtype=np.uint8)
        buf[:, :, :used] = tmp.view(np.uint8).reshape(n, stride, 8)[:, :, :used]
        return int.from_bytes(buf.tobytes(), "little")

    def divmod_small(self, a, b):
        r = a.copy()
        nb = len(b)
        lc_inv = self.field.inv(self.lc(b))
        nq = len(r) - nb + 1
        qt = np.zeros((nq, self.s), dtype=np.int64)
        dr = len(r) - 1
        while dr >= nb - 1:
            top = tuple(int(x) for x in r[dr])
            if not any(top):
                dr -= 1
                continue
            c = self.field.mul(top, lc_inv)
            sh = dr - (nb - 1)
            qt[sh] = c
            r[sh : sh + nb] = (r[sh : sh + nb] - self._ymul(b, c)) % self.q
            dr -= 1
        return self.trim(qt), self.trim(r[: max(nb - 1, 0)].copy())


# ---------------------------------------------------------------------------
# packed layout for characteristic 2 and 3: one big integer per vector
# ---------------------------------------------------------------------------


class PackedSmallOps:
    """Dense ops over F_{q^s}, q in {2, 3}: whole vectors as single ints.

    Layout: X-coefficient i occupies a block of 2s-1 lanes of 32 bits,
    lane j holding the Y^j digit.  Adds, shifts, slices and digit
    normalization are a handful of word operations on one integer, and a
    full polynomial product is a single GMP multiply (lane counts stay
    below 2^32) followed by a digit reduction.  With a sparse field
    modulus the fold of Y-degrees >= s is two or four uniformly shifted
    additions regardless of length.
    """

    layout = "packed"
    hgcd_base = 32
    hgcd_use_min = 64
    # thresholds favour the plain grind: per-division work here is a few
    # word operations, so the matrix overhead only pays off above this
    W = 24  # bits per Y lane (counts stay below 2^24)

    def __init__(self, field: ExtFieldCtx):
        q = field.base.q
        if q not in (2, 3):
            raise ValueError("packed layout supports characteristic 2 and 3 only")
        self.field = field
        self.q = q
        self.s = field.s
        self.lanes = 2 * field.s - 1
        self.S = self.lanes * self.W  # bits per X-slot
        self.slot_bytes = self.S // 8
        # Y^s = sum of c_t Y^t per the modulus
        self._red_terms = tuple(
            (t, (-c) % q) for t, c in enumerate(field.modulus[:-1]) if c % q
        )
        self._fold_widths = (12, 12, 12, 6, 6, 6, 4, 4, 4, 2, 2, 2)
        self._cap = 0
        self._lsb_all = 0  # bit 0 of every lane
        self._over_all = 0  # every bit of lanes [s, 2s-1)
        self._grow(64)

    def _grow(self, cap):
        if cap <= self._cap:
            return
        cap = max(cap, 2 * self._cap)
        unit_lsb = 0
        for j in range(self.lanes):
            unit_lsb |= 1 << (j * self.W)
        unit_over = 0
        for j in range(self.s, self.lanes):
            unit_over |= ((1 << self.W) - 1) << (j * self.W)
        rep = ((1 << (self.S * cap)) - 1) // ((1 << self.S) - 1)
        self._lsb_all = unit_lsb * rep
        self._over_all = unit_over * rep
        self._cap = cap

    def _need(self, n):
        if n > self._cap:
            self._grow(n)

    # normalization ------------------------------------------------------

    def _norm(self, x, n):
        """Reduce every lane mod q; lanes may hold counts below 2^32."""
        if x == 0:
            return 0
        self._need(n)
        if self.q == 2:
            return x & self._lsb_all
        lsb = self._lsb_all
        # base-4 digit folds (4^k = 1 mod 3), then map 3 -> 0; three folds
        # per width so boundary values like 2^width cannot slip through,
        # and widths stay at most W/2 so neighbour-lane bits miss the mask
        for width in self._fold_widths:
            mask = lsb * ((1 << width) - 1)
            x = (x & mask) + ((x >> width) & mask)
        fix = x & (x >> 1) & lsb
        return x - 3 * fix

    def _norm_small(self, x, n):
        """Reduce lanes holding small counts (at most 15) mod q."""
        if x == 0:
            return 0
        self._need(n)
        if self.q == 2:
            return x & self._lsb_all
        lsb = self._lsb_all
        for width in (2, 2, 2):
            mask = lsb * ((1 << width) - 1)
            x = (x & mask) + ((x >> width) & mask)
        fix = x & (x >> 1) & lsb
        return x - 3 * fix

    def _yred(self, x, n):
        """Fold lanes [s, 2s-1) down through the modulus relation."""
        self._need(n)
        over = x & self._over_all
        guard = 0
        small = len(self._red_terms) <= 3
        while over:
            x -= over
            base = over >> (self.s * self.W)
            for t, c in self._red_terms:
                x += (base << (t * self.W)) if c == 1 else c * (base << (t * self.W))
            x = self._norm_small(x, n) if small else self._norm(x, n)
            over = x & self._over_all
            guard += 1
            if guard > 2 * self.s + 4:
                raise RuntimeError("modulus fold failed to terminate")
        return x

    # construction / inspection ------------------------------------------

    def zero(self):
        return 0

    def one(self):
        return 1

    def _pack_elem(self, c):
        x = 0
        for j, d in enumerate(c):
            if d:
                x |= d << (j * self.W)
        return x

    def from_elems(self, elems):
        x = 0
        for i, c in enumerate(elems):
            p = self._pack_elem(c)
            if p:
                x |= p << (i * self.S)
        return x

    def from_items(self, pairs, length=None):
        x = 0
        for i, c in pairs:
            p = self._pack_elem(c)
            if p:
                x |= p << (i * self.S)
        return x

    def _digit_matrix(self, v, length):
        """(length, s) uint8 digit matrix of a normalized vector."""
        nbytes = length * self.slot_bytes
        total = max(nbytes, (int(v).bit_length() + 7) // 8) + 8
        raw = int(v).to_bytes(total, "little")[:nbytes]
        mat = np.frombuffer(raw, dtype=np.uint8).reshape(
            length, self.lanes, self.W // 8
        )
        return mat[:, : self.s, 0]

    def to_elems(self, v, length):
        if length == 0:
            return []
        mat = self._digit_matrix(v, length)
        return [tuple(int(d) for d in row) for row in mat]

    def nonzero_items(self, v):
        n = self.deg(v) + 1
        if n == 0:
            return []
        mat = self._digit_matrix(v, n)
        out = []
        for i in np.flatnonzero(mat.any(axis=1)).tolist():
            out.append((i, tuple(int(d) for d in mat[i])))
        return out

    def x_pow_minus_one(self, p):
        return ((self.q - 1) if self.q > 2 else 1) | (1 << (p * self.S))

    def trim(self, v):
        return v

    def deg(self, v):
        if v == 0:
            return -1
        return (v.bit_length() - 1) // self.S

    def is_zero(self, v):
        return v == 0

    def copy(self, v):
        return v

    def lc(self, v):
        top = v >> (self.deg(v) * self.S)
        return tuple((top >> (j * self.W)) & 0x3 for j in range(self.s))

    def elem_inv(self, c):
        return self.field.inv(c)

    # linear ops -----------------------------------------------------------

    def add(self, a, b):
        if self.q == 2:
            return a ^ b
        n = max(self.deg(a), self.deg(b)) + 1
        return self._norm_small(a + b, n)

    def sub(self, a, b):
        if self.q == 2:
            return a ^ b
        if b == 0:
            return a
        n = max(self.deg(a), self.deg(b)) + 1
        self._need(n)
        three = 3 * self._lsb_all
        nb = self.deg(b) + 1
        mask = (1 << (nb * self.S)) - 1
        return self._norm_small(a + (three & mask) - b, n)

    def neg(self, a):
        if self.q == 2 or a == 0:
            return a
        return self.sub(0, a)

    def _mulred(self, x, n):
        """Fused normalize + modulus fold of raw product lanes."""
        self._need(n)
        if self.q == 2:
            # lanes hold counts; parity is the low bit, folds are XORs
            x &= self._lsb_all
            over = x & self._over_all
            guard = 0
            shift_s = self.s * self.W
            terms = self._red_terms
            while over:
                x ^= over
                base = over >> shift_s
                for t, _ in terms:  # coefficients are all 1 in char 2
                    x ^= base << (t * self.W)
                x &= self._lsb_all
                over = x & self._over_all
                guard += 1
                if guard > 2 * self.s + 4:
                    raise RuntimeError("modulus fold failed to terminate")
            return x
        return self._yred(self._norm(x, n), n)

    def smul(self, a, c):
        cp = c if isinstance(c, int) else self._pack_elem(c)
        if cp == 0 or a == 0:
            return 0
        n = self.deg(a) + 1
        return self._mulred(a * cp, n)

    def shift(self, a, k):
        return a << (k * self.S)

    def lowslice(self, a, m):
        return a & ((1 << (m * self.S)) - 1)

    def highslice(self, a, m):
        return a >> (m * self.S)

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        bits = a.bit_length() + b.bit_length()
        n = bits // self.S + 2
        # lane counts are bounded by min-length * s * (q-1)^2
        if (
            min(a.bit_length(), b.bit_length()) // self.S + 1
        ) * self.s * (self.q - 1) ** 2 >= (1 << self.W):
            raise ValueError("packed product would overflow its lanes")
        if bits > 60000:
            x = int(_mpz(a) * _mpz(b))
        else:
            x = a * b
        return self._mulred(x, n)

    def divmod_small(self, a, b):
        db = self.deg(b)
        fld = self.field
        q2 = self.q == 2
        if q2:
            lc_inv = fld._inv2i(self._lc_int(b, db))
        else:
            lc_inv = fld._inv3i(self._lc_int3(b, db))
        qt = 0
        r = a
        dr = self.deg(r)
        S = self.S
        while r and dr >= db:
            if q2:
                lead = self._lc_int(r, dr)
                c = fld._mul2i(lead, lc_inv)
            else:
                lead = self._lc_int3(r, dr)
                c = fld._mul3i(lead, lc_inv)
            cp = self._unpack_scalar(c)
            sh = dr - db
            r = self.sub(r, self.smul(b, cp) << (sh * S))
            qt |= cp << (sh * S)
            new_dr = self.deg(r)
            if new_dr >= dr:
                raise RuntimeError("packed division failed to reduce the degree")
            dr = new_dr
        return qt, r

    def _lc_int(self, v, d):
        """Leading element of v as a bit-packed scalar (char 2)."""
        top = v >> (d * self.S)
        out = 0
        for j in range(self.s):
            if (top >> (j * self.W)) & 1:
                out |= 1 << j
        return out

    def _lc_int3(self, v, d):
        """Leading element of v as a 4-bit-digit scalar (char 3)."""
        top = v >> (d * self.S)
        out = 0
        for j in range(self.s):
            dgt = (top >> (j * self.W)) & 0x3
            if dgt:
                out |= dgt << (4 * j)
        return out

    def _unpack_scalar(self, c):
        """Scalar in the field's packed form -> one lane-packed X-slot."""
        out = 0
        if self.q == 2:
            j = 0
            while c:
                if c & 1:
                    out |= 1 << (j * self.W)
                c >>= 1
                j += 1
        else:
            j = 0
            while c:
                d = c & 0xF
                if d:
                    out |= d << (j * self.W)
                c >>= 4
                j += 1
        return out


# ---------------------------------------------------------------------------
# generic extension layout: python list of coefficient tuples
# ---------------------------------------------------------------------------


class ExtListOps:
    """Fallback dense ops over F_{q^s} (any q): lists of tuples."""

    layout = "tuples"
    hgcd_base = 24
    hgcd_use_min = 56

    def __init__(self, field: ExtFieldCtx):
        self.field = field

    def zero(self):
        return []

    def one(self):
        return [self.field.one]

    def from_elems(self, elems):
        return self.trim([tuple(c) for c in elems])

    def from_items(self, pairs, length=None):
        pairs = list(pairs)
        top = max((i for i, _ in pairs), default=-1)
        v = [self.field.zero] * (top + 1)
        for i, c in pairs:
            v[i] = tuple(c)
        return self.trim(v)

    def to_elems(self, v, length):
        out = list(v[:length])
        out.extend([self.field.zero] * (length - len(out)))
        return out

    def x_pow_minus_one(self, p):
        f = self.field
        v = [f.zero] * (p + 1)
        v[0] = f.neg(f.one)
        v[p] = f.one
        return v

    def trim(self, v):
        while v and not any(v[-1]):
            v.pop()
        return v

    def deg(self, v):
        return len(v) - 1

    def is_zero(self, v):
        return not v

    def copy(self, v):
        return list(v)

    def nonzero_items(self, v):
        return [(i, c) for i, c in enumerate(v) if any(c)]

    def lc(self, v):
        return v[-1]

    def elem_inv(self, c):
        return self.field.inv(c)

    def add(self, a, b):
        f = self.field
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = f.add(out[i], c)
        return self.trim(out)

    def sub(self, a, b):
        f = self.field
        out = list(a)
        if len(out) < len(b):
            out.extend([f.zero] * (len(b) - len(out)))
        for i, c in enumerate(b):
            out[i] = f.sub(out[i], c)
        return self.trim(out)

    def neg(self, a):
        f = self.field
        return [f.neg(c) for c in a]

    def smul(self, a, c):
        f = self.field
        if not any(c):
            return []
        return [f.mul(x, c) for x in a]

    def shift(self, a, k):
        if not a:
            return []
        return [self.field.zero] * k + list(a)

    def lowslice(self, a, m):
        return self.trim(list(a[:m]))

    def highslice(self, a, m):
        return list(a[m:])

    def mul(self, a, b):
        if not a or not b:
            return []
        f = self.field
        na, nb = len(a), len(b)
        s = f.s
        if na * nb * s * s <= 4 * SCHOOLBOOK_PRODUCT_LIMIT:
            out = [f.zero] * (na + nb - 1)
            for i, ai in enumerate(a):
                if any(ai):
                    for j, bj in enumerate(b):
                        out[i + j] = f.add(out[i + j], f.mul(ai, bj))
            return self.trim(out)
        # bivariate Kronecker packing
        q = f.base.q
        stride = 2 * s - 1
        width = 2 * (q - 1).bit_length() + (min(na, nb) * s).bit_length() + 1
        flat_a = [c for coeff in a for c in list(coeff) + [0] * (stride - s)]
        flat_b = [c for coeff in b for c in list(coeff) + [0] * (stride - s)]
        prod = _mpz(_pack_ints(flat_a, width)) * _mpz(_pack_ints(flat_b, width))
        n_out = na + nb - 1
        limbs = _unpack_ints(prod, n_out * stride, width)
        red = self.field._red
        out = []
        for i in range(n_out):
            chunk = [int(x % q) for x in limbs[i * stride : (i + 1) * stride]]
            low = chunk[:s]
            for j in range(s - 1):
                c = chunk[s + j]
                if c:
                    row = red[j]
                    for t in range(s):
                        low[t] = (low[t] + c * row[t]) % q
            out.append(tuple(low))
        return self.trim(out)

    def divmod_small(self, a, b):
        f = self.field
        r = list(a)
        nb = len(b)
        lc_inv = f.inv(b[-1])
        qt = [f.zero] * (len(r) - nb + 1)
        while len(r) >= nb:
            top = r[-1]
            if not any(top):
                r.pop()
                continue
            c = f.mul(top, lc_inv)
            sh = len(r) - nb
            qt[sh] = c
            for j in range(nb - 1):
                if any(b[j]):
                    r[sh + j] = f.sub(r[sh + j], f.mul(c, b[j]))
            r.pop()
        return self.trim(qt), self.trim(r)


_OPSET_CACHE: dict = {}


def opset_for(field):
    ops = _OPSET_CACHE.get(field)
    if ops is not None:
        return ops
    if isinstance(field, PrimeFieldCtx):
        ops = PrimeListOps(field)
    elif isinstance(field, ExtFieldCtx):
        if field.base.q <= 3:
            ops = PackedSmallOps(field)
        elif field.base.q < _ARRAY_Q_LIMIT:
            ops = ExtArrayOps(field)
        else:
            ops = ExtListOps(field)
    else:
        raise TypeError(f"no dense kernel for {field!r}")
    if len(_OPSET_CACHE) > 64:
        _OPSET_CACHE.clear()
    _OPSET_CACHE[field] = ops
    return ops


# ---------------------------------------------------------------------------
# generic algorithms over an opset
# ---------------------------------------------------------------------------


def _inv_series(ops, f, k):
    """Power-series inverse of f mod X^k (f[0] must be invertible)."""
    c0 = ops.elem_inv(ops.to_elems(f, 1)[0])
    x = ops.from_elems([c0])
    f_one = ops.field.one
    two = ops.from_elems([ops.field.add(f_one, f_one)])
    prec = 1
    while prec < k:
        prec = min(2 * prec, k)
        fx = ops.lowslice(ops.mul(ops.lowslice(f, prec), x), prec)
        x = ops.lowslice(ops.mul(x, ops.sub(two, fx)), prec)
    return x


def divrem(ops, a, b):
    """Quotient and remainder of trimmed dense vectors."""
    da, db = ops.deg(a), ops.deg(b)
    if db < 0:
        raise ZeroDivisionError("dense division by zero")
    if da < db:
        return ops.zero(), ops.copy(a)
    lq = da - db + 1
    if lq < NEWTON_DIVREM_MIN or lq * (db + 1) < NEWTON_DIVREM_WORK:
        return ops.divmod_small(a, b)
    # Newton: q = rev(rev(a) * inv_series(rev(b), lq)) truncated
    ra = ops.from_elems(list(reversed(ops.to_elems(a, da + 1))))
    rb = ops.from_elems(list(reversed(ops.to_elems(b, db + 1))))
    inv_rb = _inv_series(ops, rb, lq)
    rq = ops.lowslice(ops.mul(ra, inv_rb), lq)
    qt = ops.from_elems(list(reversed(ops.to_elems(rq, lq))))
    r = ops.sub(a, ops.mul(b, qt))
    return qt, r


def _mat_identity(ops):
    return (ops.one(), ops.zero(), ops.zero(), ops.one())


def _mat_apply(ops, m, x, y):
    m00, m01, m10, m11 = m
    nx = ops.add(ops.mul(m00, x), ops.mul(m01, y))
    ny = ops.add(ops.mul(m10, x), ops.mul(m11, y))
    return nx, ny


def _mat_mul(ops, a, b):
    a00, a01, a10, a11 = a
    b00, b01, b10, b11 = b
    return (
        ops.add(ops.mul(a00, b00), ops.mul(a01, b10)),
        ops.add(ops.mul(a00, b01), ops.mul(a01, b11)),
        ops.add(ops.mul(a10, b00), ops.mul(a11, b10)),
        ops.add(ops.mul(a10, b01), ops.mul(a11, b11)),
    )


def _mat_divstep(ops, m, q):
    """Compose the division-step matrix ((0,1),(1,-q)) onto m."""
    m00, m01, m10, m11 = m
    return (
        m10,
        m11,
        ops.sub(m00, ops.mul(q, m10)),
        ops.sub(m01, ops.mul(q, m11)),
    )


def _euclid_matrix(ops, a, b, stop_deg):
    """Grind division steps until deg b < stop_deg; returns (M, a', b').

    The matrix is updated incrementally; half-gcd keeps the spans here
    short, so the row data stays small and the call count low.
    """
    m = _mat_identity(ops)
    while ops.deg(b) >= stop_deg:
        q, r = divrem(ops, a, b)
        a, b = b, r
        m = _mat_divstep(ops, m, q)
    return m, a, b


def hgcd(ops, a, b):
    """Half-gcd: M with M*(a, b)^T = (a', b'), deg b' < ceil(deg a / 2).

    The matrix is an exact composition of Euclid division steps, so gcds
    and Bezout relations are preserved; the degree guarantee is what
    makes the overall gcd quasi-linear in the multiplication cost.
    """
    da = ops.deg(a)
    half = (da + 1) // 2
    if ops.deg(b) < half:
        return _mat_identity(ops), a, b
    if da <= ops.hgcd_base:
        return _euclid_matrix(ops, a, b, half)
    m1, _, _ = hgcd(ops, ops.highslice(a, half), ops.highslice(b, half))
    t0, t1 = _mat_apply(ops, m1, a, b)
    if ops.deg(t1) >= ops.deg(t0):  # defensive; theory forbids this
        mfix, t0, t1 = _euclid_matrix(ops, t0, t1, half)
        return _mat_mul(ops, mfix, m1), t0, t1
    if ops.deg(t1) < half:
        return m1, t0, t1
    q, r = divrem(ops, t0, t1)
    t0, t1 = t1, r
    m = _mat_divstep(ops, m1, q)
    if ops.deg(t1) < half:
        return m, t0, t1
    k = 2 * half - ops.deg(t0)
    m2, _, _ = hgcd(ops, ops.highslice(t0, k), ops.highslice(t1, k))
    t0, t1 = _mat_apply(ops, m2, t0, t1)
    if ops.deg(t1) >= half:  # defensive tail reduction
        mfix, t0, t1 = _euclid_matrix(ops, t0, t1, half)
        m2 = _mat_mul(ops, mfix, m2)
    return _mat_mul(ops, m2, m), t0, t1


def _bezout_second(ops, a, b):
    """(g, v) with v*b = g modulo a, g a greatest common divisor of (a, b)."""
    r0, r1 = a, b
    v0, v1 = ops.zero(), ops.one()
    while not ops.is_zero(r1):
        d0, d1 = ops.deg(r0), ops.deg(r1)
        if d0 >= ops.hgcd_use_min and d1 >= (d0 + 1) // 2:
            m, r0, r1 = hgcd(ops, r0, r1)
            v0, v1 = _mat_apply(ops, m, v0, v1)
        else:
            q, r = divrem(ops, r0, r1)
            r0, r1 = r1, r
            v0, v1 = v1, ops.sub(v0, ops.mul(q, v1))
    return r0, v0


def _cyclic_fold(ops, p, full):
    if ops.deg(full) < p:
        return full
    lo = ops.lowslice(full, p)
    hi = ops.highslice(full, p)
    return ops.add(lo, hi)


def cyclic_mul_vec(ops, p, a, b):
    """a*b mod X^p - 1 on trimmed vectors; result trimmed, length <= p.

    When one operand has few nonzero coefficients, the product is built
    by wrapped shift-accumulation instead of a full dense multiply.
    """
    if ops.is_zero(a) or ops.is_zero(b):
        return ops.zero()
    if ops.layout == "array":
        nza = int(np.count_nonzero(a.any(axis=1)))
        nzb = int(np.count_nonzero(b.any(axis=1)))
        if min(nza, nzb) <= SPARSE_CYCLIC_MAX and max(len(a), len(b)) > 4 * min(
            nza, nzb
        ):
            sparse, other = (a, b) if nza <= nzb else (b, a)
            return _cyclic_sparse_mul_array(ops, p, sparse, other)
    return _cyclic_fold(ops, p, ops.mul(a, b))


def _cyclic_sparse_mul_array(ops, p, sparse_v, dense_v):
    q = ops.q
    out = np.zeros((p, ops.s), dtype=np.int64)
    n = len(dense_v)
    for idx, coeff in ops.nonzero_items(sparse_v):
        t = ops._ymul(dense_v, coeff)
        end = idx + n
        if end <= p:
            out[idx:end] = (out[idx:end] + t) % q
        else:
            cut = p - idx
            out[idx:] = (out[idx:] + t[:cut]) % q
            wrapped = t[cut:]
            # long operands may wrap more than once
            pos = 0
            while pos < len(wrapped):
                chunk = wrapped[pos : pos + p]
                out[: len(chunk)] = (out[: len(chunk)] + chunk) % q
                pos += p
    return ops.trim(out)


def cyclic_inverse_vec(ops, p, g):
    """Inverse of g modulo X^p - 1, or NotInvertible.

    The Bezout cofactor comes from the (half-gcd accelerated) extended
    Euclid of (X^p - 1, g); the result is verified with one cyclic
    product before being returned.
    """
    g = ops.trim(ops.copy(g))
    if ops.is_zero(g):
        raise NotInvertible("zero residue")
    if ops.deg(g) == 0:
        return ops.from_elems([ops.elem_inv(ops.to_elems(g, 1)[0])])
    a = ops.x_pow_minus_one(p)
    gcd, v = _bezout_second(ops, a, g)
    if ops.deg(gcd) != 0:
        raise NotInvertible("gcd with X^p - 1 is nonconstant")
    c = ops.elem_inv(ops.to_elems(gcd, 1)[0])
    inv = ops.smul(v, c)
    if ops.deg(inv) >= p:
        _, inv = divrem(ops, inv, a)
    check = cyclic_mul_vec(ops, p, inv, g)
    if ops.deg(check) != 0 or ops.to_elems(check, 1)[0] != ops.field.one:
        raise RuntimeError("cyclic inverse self-check failed")
    return inv
