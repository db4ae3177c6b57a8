"""Prime fields and their extensions.

Elements carry no wrapper: an element of F_q is an int in [0, q), an
element of F_{q^s} is a length-s tuple of such ints (residue polynomial,
constant coefficient first).  The context objects own all arithmetic and
are immutable, so they are safe to share between threads.  Randomness is
always an explicit rng argument.
"""

from __future__ import annotations

import random

from . import primes as _primes


class PrimeFieldCtx:
    """Arithmetic context for F_q with q a (probable) prime.

    Construction certifies q with 64 Miller-Rabin rounds; pass an already
    certified modulus with check=False to skip that.
    """

    __slots__ = ("q", "zero", "one")

    def __init__(self, q: int, check: bool = True):
        q = int(q)
        if q < 2:
            raise ValueError("field modulus must be >= 2")
        if check and not _primes.is_probable_prime(q, rounds=64):
            raise ValueError(f"{q} is not prime")
        self.q = q
        self.zero = 0
        self.one = 1

    # ring/field protocol -------------------------------------------------

    @property
    def char(self) -> int:
        return self.q

    @property
    def order(self) -> int:
        return self.q

    @property
    def degree(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return -a % self.q

    def mul(self, a, b):
        return a * b % self.q

    def mul_int(self, a, k: int):
        """a times the image of the integer k (used by derivatives)."""
        return a * (k % self.q) % self.q

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.q)

    def pow(self, a, e: int):
        return pow(a, e, self.q)

    def from_int(self, k: int):
        return k % self.q

    def is_element(self, a) -> bool:
        return isinstance(a, int) and 0 <= a < self.q

    def random_elem(self, rng: random.Random):
        return rng.randrange(self.q)

    def random_nonzero(self, rng: random.Random):
        return rng.randrange(1, self.q)

    # base-field embedding (trivial at degree 1) ---------------------------

    @property
    def base(self) -> "PrimeFieldCtx":
        return self

    def embed_base(self, c):
        return c

    def project_to_base(self, a):
        return a

    # plumbing -------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, PrimeFieldCtx) and other.q == self.q

    def __hash__(self):
        return hash(("Fq", self.q))

    def __repr__(self):
        return f"PrimeFieldCtx({self.q})"


def _poly_trim(v):
    while v and v[-1] == 0:
        v.pop()
    return v


def _poly_mul_mod(a, b, mod, q):
    """Product of dense F_q[Y] lists reduced mod the dense list `mod`."""
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % q
    return _poly_rem(out, mod, q)


def _poly_rem(a, mod, q):
    a = list(a)
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], -1, q)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % q
        shift = len(a) - 1 - dm
        for j, mj in enumerate(mod):
            if mj:
                a[shift + j] = (a[shift + j] - c * mj) % q
        a.pop()
    return _poly_trim(a)


def _poly_pow_x_mod(e: int, mod, q):
    """X^e reduced modulo `mod` over F_q, by square and multiply."""
    result = [1]
    base = _poly_rem([0, 1], mod, q)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, base, mod, q)
        base = _poly_mul_mod(base, base, mod, q)
        e >>= 1
    return result


def _poly_gcd(a, b, q):
    a, b = list(a), list(b)
    while b:
        a = _poly_rem(a, b, q)
        a, b = b, a
    return a


def _prime_divisors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(modulus, q: int) -> bool:
    """Rabin's criterion for a monic polynomial over F_q.

    Checks X^(q^s) == X mod m and gcd(X^(q^(s/r)) - X, m) = 1 for each
    prime divisor r of s.
    """
    m = list(modulus)
    s = len(m) - 1
    if s < 1 or m[-1] != 1:
        return False
    if s == 1:
        return True
    for r in _prime_divisors(s):
        h = _poly_pow_x_mod(q ** (s // r), m, q)
        # h - X
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % q
        g = _poly_gcd(m, _poly_trim(diff), q)
        if len(g) != 1:
            return False
    h = _poly_pow_x_mod(q**s, m, q)
    diff = list(h) + [0] * max(0, 2 - len(h))
    diff[1] = (diff[1] - 1) % q
    return not _poly_trim(diff)


class ExtFieldCtx:
    """Arithmetic context for F_{q^s} = F_q[Y] / (modulus).

    modulus is a dense monic coefficient tuple of length s + 1 over F_q.
    Elements are length-s tuples.  The reduction rows Y^(s+i) mod modulus
    are precomputed once.
    """

    __slots__ = (
        "base",
        "s",
        "modulus",
        "zero",
        "one",
        "_red",
        "_mod2",
        "_red2",
        "_mod3",
        "_red3",
        "_lsb3",
    )

    def __init__(self, base: PrimeFieldCtx, s: int, modulus, check: bool = True):
        s = int(s)
        if s < 1:
            raise ValueError("extension degree must be >= 1")
        modulus = tuple(int(c) % base.q for c in modulus)
        if len(modulus) != s + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree s")
        if check and not is_irreducible(modulus, base.q):
            raise ValueError("modulus is reducible")
        self.base = base
        self.s = s
        self.modulus = modulus
        self.zero = (0,) * s
        self.one = ((1,) + (0,) * (s - 1)) if s >= 1 else ()
        # red[i] = Y^(s+i) mod modulus, for i in [0, s-1)
        q = base.q
        red = []
        cur = [(-c) % q for c in modulus[:-1]]  # Y^s
        for _ in range(s - 1):
            red.append(tuple(cur))
            cur = [0] + cur  # times Y
            top = cur.pop()
            if top:
                for j in range(s):
                    cur[j] = (cur[j] - top * modulus[j]) % q
        self._red = tuple(red)
        if q == 2:
            # bit-packed reduction masks for the carry-less fast path:
            # XORing _red2[j] clears the Y^(s+j) bit and adds its image
            self._mod2 = sum(c << i for i, c in enumerate(modulus))
            red2 = [(1 << (s + j)) | sum(c << i for i, c in enumerate(row))
                    for j, row in enumerate(red)]
            self._red2 = tuple(red2)
        else:
            self._mod2 = None
            self._red2 = None
        if q == 3:
            # 4-bit-digit packing for scalar arithmetic in characteristic 3
            self._mod3 = sum(c << (4 * i) for i, c in enumerate(modulus))
            self._red3 = tuple(
                sum(c << (4 * i) for i, c in enumerate(row)) for row in red
            )
            n4 = 2 * s
            self._lsb3 = int("1" * n4, 16)  # bit 0 of every 4-bit digit
        else:
            self._mod3 = None
            self._red3 = None
            self._lsb3 = None

    @property
    def char(self) -> int:
        return self.base.q

    @property
    def order(self) -> int:
        return self.base.q**self.s

    @property
    def degree(self) -> int:
        return self.s

    def add(self, a, b):
        q = self.base.q
        return tuple((x + y) % q for x, y in zip(a, b))

    def sub(self, a, b):
        q = self.base.q
        return tuple((x - y) % q for x, y in zip(a, b))

    def neg(self, a):
        q = self.base.q
        return tuple(-x % q for x in a)

    def mul(self, a, b):
        if self._mod2 is not None:
            return self._mul2(a, b)
        if self._mod3 is not None:
            return self._mul3(a, b)
        q = self.base.q
        s = self.s
        full = [0] * (2 * s - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    full[i + j] += ai * bj
        low = [c % q for c in full[:s]]
        for i in range(s - 1):
            c = full[s + i] % q
            if c:
                row = self._red[i]
                for j in range(s):
                    low[j] = (low[j] + c * row[j]) % q
        return tuple(low)

    def _mul2i(self, ia, ib):
        # characteristic 2: carry-less multiply on bit-packed residues
        s = self.s
        prod = 0
        while ib:
            low = ib & -ib
            prod ^= ia << (low.bit_length() - 1)
            ib ^= low
        red2 = self._red2
        for j in range(prod.bit_length() - 1, s - 1, -1):
            if (prod >> j) & 1:
                prod ^= red2[j - s]
        return prod

    def _mul2(self, a, b):
        ia = 0
        for i, x in enumerate(a):
            if x:
                ia |= 1 << i
        ib = 0
        for i, x in enumerate(b):
            if x:
                ib |= 1 << i
        prod = self._mul2i(ia, ib)
        return tuple((prod >> i) & 1 for i in range(self.s))

    def _inv2i(self, ia):
        if ia == 0:
            raise ZeroDivisionError("inverse of zero")
        s = self.s
        r0, r1 = self._mod2, ia
        t0, t1 = 0, 1
        while r1:
            d = r0.bit_length() - r1.bit_length()
            if d < 0:
                r0, r1, t0, t1 = r1, r0, t1, t0
                d = -d
            r0 ^= r1 << d
            t0 ^= t1 << d
        # r0 is the gcd: 1 for an irreducible modulus and nonzero a
        red2 = self._red2
        for j in range(t0.bit_length() - 1, s - 1, -1):
            if (t0 >> j) & 1:
                t0 ^= red2[j - s]
        return t0

    def _inv2(self, a):
        ia = 0
        for i, x in enumerate(a):
            if x:
                ia |= 1 << i
        t0 = self._inv2i(ia)
        return tuple((t0 >> i) & 1 for i in range(self.s))

    def _norm3(self, x):
        """Reduce every 4-bit digit (value <= 6) mod 3."""
        lsb = self._lsb3
        for _ in range(2):
            high = ((x + lsb) >> 2) & lsb  # digit >= 3
            x -= 3 * high
        return x

    def _mul3i(self, ia, ib):
        s = self.s
        # widen digits to 16-bit lanes so convolution counts cannot carry
        spread = 0
        wide_b = 0
        for i in range(s):
            d = (ia >> (4 * i)) & 0xF
            if d:
                spread |= d << (16 * i)
            d = (ib >> (4 * i)) & 0xF
            if d:
                wide_b |= d << (16 * i)
        prod = spread * wide_b  # counts <= 4s < 2^16 per lane
        # fold each 16-bit lane mod 3, then compress back to 4-bit digits
        out = 0
        for i in range(2 * s - 1):
            lane = (prod >> (16 * i)) & 0xFFFF
            out |= (lane % 3) << (4 * i)
        red3 = self._red3
        for j in range(2 * s - 2, s - 1, -1):
            d = (out >> (4 * j)) & 0xF
            if d:
                out &= ~(0xF << (4 * j))
                out = self._norm3(out + d * red3[j - s])
        return out

    def _mul3(self, a, b):
        ia = 0
        for i, x in enumerate(a):
            if x:
                ia |= x << (4 * i)
        ib = 0
        for i, x in enumerate(b):
            if x:
                ib |= x << (4 * i)
        out = self._mul3i(ia, ib)
        return tuple((out >> (4 * i)) & 0x3 for i in range(self.s))

    def _inv3(self, a):
        ia = 0
        for i, x in enumerate(a):
            if x:
                ia |= x << (4 * i)
        t0 = self._inv3i(ia)
        return tuple((t0 >> (4 * i)) & 0x3 for i in range(self.s))

    def _inv3i(self, ia):
        if ia == 0:
            raise ZeroDivisionError("inverse of zero")

        def deg(x):
            return (x.bit_length() - 1) // 4 if x else -1

        r0, r1 = self._mod3, ia
        t0, t1 = 0, 1
        while r1:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, t0, t1 = r1, r0, t1, t0
                d0, d1 = d1, d0
                if not r1:
                    break
            lead0 = (r0 >> (4 * d0)) & 0xF
            lead1 = (r1 >> (4 * d1)) & 0xF
            factor = lead0 * (1 if lead1 == 1 else 2) % 3  # lead1^-1: 1->1, 2->2
            shift = 4 * (d0 - d1)
            # r0 - factor*X^delta*r1 == r0 + (3-factor)*X^delta*r1 mod 3
            r0 = self._norm3(r0 + ((3 - factor) * r1 << shift))
            t0 = self._norm3(t0 + ((3 - factor) * t1 << shift))
            if deg(r0) >= d0:  # leading digit must cancel
                raise AssertionError("char-3 scalar gcd failed to reduce")
        c = (r0 >> (4 * deg(r0))) & 0xF if r0 else 0
        if deg(r0) != 0:
            raise ZeroDivisionError("element not invertible (reducible modulus?)")
        if c == 2:  # divide by the constant gcd
            t0 = self._norm3(2 * t0)
        return t0

    def mul_int(self, a, k: int):
        kq = k % self.base.q
        q = self.base.q
        return tuple(x * kq % q for x in a)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        if self._mod2 is not None:
            return self._inv2(a)
        if self._mod3 is not None:
            return self._inv3(a)
        q = self.base.q
        # extended Euclid on (a, modulus) over F_q[Y]
        r0, r1 = list(self.modulus), _poly_trim(list(a))
        t0, t1 = [], [1]
        while r1:
            inv_lead = pow(r1[-1], -1, q)
            while len(r0) >= len(r1):
                if not r0:
                    break
                if r0[-1] == 0:
                    r0.pop()
                    continue
                c = r0[-1] * inv_lead % q
                shift = len(r0) - len(r1)
                for j, rj in enumerate(r1):
                    if rj:
                        r0[shift + j] = (r0[shift + j] - c * rj) % q
                r0.pop()
                # t0 -= c * Y^shift * t1
                need = shift + len(t1)
                if len(t0) < need:
                    t0.extend([0] * (need - len(t0)))
                for j, tj in enumerate(t1):
                    if tj:
                        t0[shift + j] = (t0[shift + j] - c * tj) % q
                _poly_trim(t0)
            r0, r1 = r1, _poly_trim(r0)
            t0, t1 = t1, t0
        if len(r0) != 1:
            raise ZeroDivisionError("element not invertible (reducible modulus?)")
        c = pow(r0[0], -1, q)
        t0 = [x * c % q for x in t0]
        return tuple(t0 + [0] * (self.s - len(t0)))

    def pow(self, a, e: int):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def from_int(self, k: int):
        return self.embed_base(k % self.base.q)

    def is_element(self, a) -> bool:
        return (
            isinstance(a, tuple)
            and len(a) == self.s
            and all(isinstance(x, int) and 0 <= x < self.base.q for x in a)
        )

    def random_elem(self, rng: random.Random):
        q = self.base.q
        return tuple(rng.randrange(q) for _ in range(self.s))

    def random_nonzero(self, rng: random.Random):
        while True:
            a = self.random_elem(rng)
            if any(a):
                return a

    def embed_base(self, c):
        return (c,) + (0,) * (self.s - 1)

    def project_to_base(self, a):
        """The base-field value of a, or None if a lies outside F_q."""
        if any(a[1:]):
            return None
        return a[0]

    def __eq__(self, other):
        return (
            isinstance(other, ExtFieldCtx)
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("Fqs", self.base.q, self.modulus))

    def __repr__(self):
        return f"ExtFieldCtx(q={self.base.q}, s={self.s})"


def build_ext_field(ctx: PrimeFieldCtx, s: int, rng: random.Random) -> ExtFieldCtx:
    """A degree-s extension of F_q with an irreducible modulus.

    For tiny q a sparse modulus (trinomial, then pentanomial) is tried
    first: all the randomized guarantees only need some fixed irreducible
    modulus, and a sparse one makes the packed dense kernel much faster.
    Otherwise uniform monic candidates are drawn until one passes Rabin's
    test (about s attempts on average).  s = 1 yields the modulus Y,
    which behaves exactly like the prime field itself.
    """
    if s < 1:
        raise ValueError("extension degree must be >= 1")
    if s == 1:
        return ExtFieldCtx(ctx, 1, (0, 1), check=False)
    q = ctx.q
    if q <= 3:
        cand = _sparse_irreducible(q, s)
        if cand is not None:
            return ExtFieldCtx(ctx, s, cand, check=False)
    while True:
        cand = [rng.randrange(q) for _ in range(s)] + [1]
        if cand[0] == 0:
            continue  # divisible by Y
        if is_irreducible(cand, q):
            return ExtFieldCtx(ctx, s, tuple(cand), check=False)


def _sparse_irreducible(q: int, s: int):
    """A monic irreducible with few terms and low inner degree, or None."""
    for a in range(1, s):
        for ca in range(1, q):
            for c0 in range(1, q):
                cand = [0] * (s + 1)
                cand[0], cand[a], cand[s] = c0, ca, 1
                if is_irreducible(cand, q):
                    return tuple(cand)
    if q == 2:  # some degrees (multiples of 8) admit no trinomial
        for span in range(3, min(s, 14)):
            for b in range(2, span):
                for a in range(1, b):
                    cand = [0] * (s + 1)
                    cand[0] = cand[a] = cand[b] = cand[span] = 1
                    cand[s] = 1
                    if span == s:
                        continue
                    if is_irreducible(cand, q):
                        return tuple(cand)
    return None


class IntegerRing:
    """The ring Z, with the same operation protocol as the field contexts."""

    __slots__ = ()

    zero = 0
    one = 1

    @property
    def char(self) -> int:
        return 0

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def mul_int(self, a, k: int):
        return a * k

    def from_int(self, k: int):
        return k

    def is_element(self, a) -> bool:
        return isinstance(a, int)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "IntegerRing()"


ZZ = IntegerRing()
