"""Prime generation: the first N primes, primes in ]lam, 2*lam[, probable primes.

Pools are plain immutable containers; all sieving happens at construction.
Miller-Rabin witnesses are drawn from the supplied rng (or derived
deterministically from the candidate when no rng is given) so that a fixed
seed gives a reproducible transcript.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

_SEGMENT_LIMIT = 10**7  # switch to segmented sieving above this bound


def _sieve_upto(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array (plain sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi] given base primes up to sqrt(hi)."""
    mask = np.ones(hi - lo + 1, dtype=bool)
    if lo <= 1:
        mask[: max(0, 2 - lo)] = False
    for p in base.tolist():
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        mask[start - lo :: p] = False
    return (np.flatnonzero(mask) + lo).astype(np.int64)


def _primes_in_range(lo: int, hi: int) -> list[int]:
    """All primes p with lo <= p <= hi."""
    if hi < lo:
        return []
    if hi <= _SEGMENT_LIMIT:
        arr = _sieve_upto(hi)
        return arr[arr >= lo].tolist()
    base = _sieve_upto(math.isqrt(hi))
    out: list[int] = []
    step = _SEGMENT_LIMIT
    for seg_lo in range(lo, hi + 1, step):
        seg_hi = min(seg_lo + step - 1, hi)
        out.extend(_sieve_segment(seg_lo, seg_hi, base).tolist())
    return out


@dataclass(frozen=True)
class PrimePool:
    """A fixed, sorted collection of primes.

    kind is "first_n" (param = N, exactly the N smallest primes) or
    "interval" (param = lam, all primes strictly between lam and 2*lam).
    """

    kind: str
    param: int
    primes: tuple[int, ...]

    def __len__(self):
        return len(self.primes)

    def choose(self, rng: random.Random) -> int:
        return self.primes[rng.randrange(len(self.primes))]


def first_n_primes(n: int) -> PrimePool:
    """The pool of the n smallest primes."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < 6:
        return PrimePool("first_n", n, (2, 3, 5, 7, 11)[:n])
    # p_n <= n (ln n + ln ln n) for n >= 6; double on the (rare) shortfall
    bound = int(n * (math.log(n) + math.log(math.log(n)))) + 1
    while True:
        found = _primes_in_range(2, bound)
        if len(found) >= n:
            return PrimePool("first_n", n, tuple(found[:n]))
        bound *= 2


def primes_in_interval(lam: int) -> PrimePool:
    """All primes p with lam < p < 2*lam (lam >= 21)."""
    if lam < 21:
        raise ValueError("lam must be >= 21")
    found = _primes_in_range(lam + 1, 2 * lam - 1)
    return PrimePool("interval", lam, tuple(found))


_TINY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int, rounds: int = 64, rng: random.Random | None = None) -> bool:
    """Miller-Rabin test; error at most 4**-rounds on composite n.

    Without an rng the witnesses are derived deterministically from n, so
    repeated calls agree and pools can certify their entries reproducibly.
    """
    n = int(n)
    if n < 2:
        return False
    for p in _TINY_PRIMES:
        if n % p == 0:
            return n == p
    if rng is None:
        rng = random.Random(n ^ 0x9E3779B97F4A7C15)
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_probable_prime(n: int, delta: float, rng: random.Random) -> int:
    """A uniform probable prime in ]n, 2n[ with compositeness error <= delta.

    Rejection sampling; 4**-rounds <= delta fixes the Miller-Rabin round
    count at ceil(log2(1/delta) / 2).
    """
    if n < 4:
        raise ValueError("n must be >= 4")
    if not 0 < delta < 1:
        raise ValueError("delta must be in (0, 1)")
    rounds = max(1, math.ceil(math.log2(1.0 / delta) / 2))
    while True:
        c = rng.randrange(n + 1, 2 * n)
        if c % 2 == 0:
            c += 1
            if c >= 2 * n:
                continue
        if is_probable_prime(c, rounds=rounds, rng=rng):
            return c
