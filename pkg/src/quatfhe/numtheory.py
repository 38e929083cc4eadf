"""Big-integer number theory: prime generation, extended gcd, modular inverse.

Also defines the two plumbing types used throughout the package: ``Modulus``
(an integer modulus that optionally remembers its prime factors) and
``RandomSource`` (seedable randomness with a reproducibility contract).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import NotInvertible

MILLER_RABIN_ROUNDS = 40

# Primes below 1000, for cheap trial division ahead of Miller-Rabin.
def _small_primes(limit: int = 1000) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, int(limit ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return tuple(i for i in range(limit) if sieve[i])


_SMALL_PRIMES = _small_primes()


class RandomSource:
    """Randomness with a reproducibility contract.

    Same seed, same output stream. Constructed without a seed, it draws from
    the platform's cryptographic entropy instead. A RandomSource is stateful
    and must not be shared across threads; everything else in this package is
    immutable.
    """

    def __init__(self, seed: int | None = None):
        self.seed = seed
        if seed is None:
            self._rng: random.Random = random.SystemRandom()
        else:
            self._rng = random.Random(seed)

    def randbits(self, k: int) -> int:
        return self._rng.getrandbits(k)

    def randrange(self, start: int, stop: int | None = None) -> int:
        return self._rng.randrange(start, stop)


@dataclass(frozen=True)
class Modulus:
    """A modulus n >= 2, optionally carrying its known factorization.

    The factorization hint is metadata for the key holder: it never takes
    part in equality or hashing, so moduli reconstructed from serialized
    material (which omits the factors) compare equal to freshly generated
    ones.
    """

    n: int
    factorization_hint: tuple[int, int] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"modulus must be >= 2, got {self.n}")
        if self.factorization_hint is not None:
            p, q = self.factorization_hint
            pq = p * q
            if pq != self.n and pq * pq != self.n:
                raise ValueError("factorization hint does not match modulus")
            for f in (p, q):
                if not is_probable_prime(f):
                    raise ValueError(f"factorization hint {f} is not prime")


def is_probable_prime(n: int, rounds: int = MILLER_RABIN_ROUNDS,
                      rng: RandomSource | None = None) -> bool:
    """Miller-Rabin primality test (error probability <= 4**-rounds)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if rng is None:
        rng = RandomSource()
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = pow(x, 2, n)
            if x == n - 1:
                break
        else:
            return False
    return True


def gen_prime(bits: int, rng: RandomSource) -> int:
    """Return a prime with exactly `bits` bits (top bit set).

    Draws odd candidates with the top bit forced and retries until one
    passes Miller-Rabin.
    """
    if bits < 3:
        raise ValueError(f"bits must be >= 3, got {bits}")
    while True:
        candidate = (1 << (bits - 1)) | rng.randbits(bits - 1) | 1
        if is_probable_prime(candidate, MILLER_RABIN_ROUNDS, rng):
            return candidate


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, x, y) with g = gcd(a, b) >= 0 and ax + by = g."""
    if a == 0 and b == 0:
        raise ValueError("egcd(0, 0) is undefined")
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def mod_inverse(a: int, n: Modulus | int) -> int:
    """Inverse of a modulo n, in (0, n).

    Raises NotInvertible when gcd(a, n) != 1; callers that fed a random draw
    into this are expected to redraw.
    """
    m = n.n if isinstance(n, Modulus) else n
    g, x, _ = egcd(a % m, m)
    if g != 1:
        raise NotInvertible(f"{a} has no inverse modulo {m} (gcd = {g})")
    return x % m
