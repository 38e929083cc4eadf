"""Lipschitz quaternion arithmetic over Z/nZ.

A quaternion a + b*i + c*j + d*k with residue coefficients. Multiplication
is the Hamilton product (i^2 = j^2 = k^2 = ijk = -1), which is associative
but not commutative. A quaternion is invertible exactly when its norm
a^2+b^2+c^2+d^2 is coprime to n.

`q_mul_vector_form` recomputes the product through the scalar/vector split
(dot and cross products); it exists purely as an independent cross-check of
`q_mul` and must stay off the kernel code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _backend
from .errors import ModulusMismatch
from .numtheory import Modulus, RandomSource, mod_inverse


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion with coefficients stored reduced into [0, n)."""

    a: int
    b: int
    c: int
    d: int
    modulus: Modulus

    def __post_init__(self):
        n = self.modulus.n
        # Canonical storage: equality and hashing rely on reduced coefficients.
        object.__setattr__(self, "a", self.a % n)
        object.__setattr__(self, "b", self.b % n)
        object.__setattr__(self, "c", self.c % n)
        object.__setattr__(self, "d", self.d % n)

    @classmethod
    def scalar(cls, value: int, modulus: Modulus) -> Quaternion:
        return cls(value, 0, 0, 0, modulus)

    @classmethod
    def zero(cls, modulus: Modulus) -> Quaternion:
        return cls(0, 0, 0, 0, modulus)

    @classmethod
    def one(cls, modulus: Modulus) -> Quaternion:
        return cls(1, 0, 0, 0, modulus)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __add__(self, other: Quaternion) -> Quaternion:
        return q_add(self, other)

    def __sub__(self, other: Quaternion) -> Quaternion:
        _check_moduli(self, other)
        n = self.modulus.n
        return Quaternion((self.a - other.a) % n, (self.b - other.b) % n,
                          (self.c - other.c) % n, (self.d - other.d) % n,
                          self.modulus)

    def __neg__(self) -> Quaternion:
        n = self.modulus.n
        return Quaternion(-self.a % n, -self.b % n, -self.c % n, -self.d % n,
                          self.modulus)

    def __mul__(self, other: Quaternion) -> Quaternion:
        return q_mul(self, other)


def _check_moduli(q: Quaternion, q2: Quaternion) -> None:
    if q.modulus.n != q2.modulus.n:
        raise ModulusMismatch(
            f"moduli differ: {q.modulus.n} vs {q2.modulus.n}")


def q_add(q: Quaternion, q2: Quaternion) -> Quaternion:
    """Componentwise sum mod n."""
    _check_moduli(q, q2)
    n = q.modulus.n
    return Quaternion((q.a + q2.a) % n, (q.b + q2.b) % n,
                      (q.c + q2.c) % n, (q.d + q2.d) % n, q.modulus)


def q_mul(q: Quaternion, q2: Quaternion) -> Quaternion:
    """Hamilton product, computed by the active kernel backend."""
    _check_moduli(q, q2)
    a, b, c, d = _backend.kernels().quat_mul(
        q.a, q.b, q.c, q.d, q2.a, q2.b, q2.c, q2.d, q.modulus.n)
    return Quaternion(a, b, c, d, q.modulus)


def q_mul_vector_form(q: Quaternion, q2: Quaternion) -> Quaternion:
    """Hamilton product via the scalar/vector split; test oracle for q_mul.

    (s, u)(s', v) = (ss' - u.v, sv + s'u + u x v) with u, v the imaginary
    3-vectors. Deliberately independent of the kernel backends.
    """
    _check_moduli(q, q2)
    n = q.modulus.n
    s, (ub, uc, ud) = q.a, (q.b, q.c, q.d)
    s2, (vb, vc, vd) = q2.a, (q2.b, q2.c, q2.d)
    dot = ub * vb + uc * vc + ud * vd
    cross = (uc * vd - ud * vc, ud * vb - ub * vd, ub * vc - uc * vb)
    return Quaternion((s * s2 - dot) % n,
                      (s * vb + s2 * ub + cross[0]) % n,
                      (s * vc + s2 * uc + cross[1]) % n,
                      (s * vd + s2 * ud + cross[2]) % n, q.modulus)


def q_conj(q: Quaternion) -> Quaternion:
    """Conjugate: negate the imaginary coefficients."""
    n = q.modulus.n
    return Quaternion(q.a, -q.b % n, -q.c % n, -q.d % n, q.modulus)


def q_norm(q: Quaternion) -> int:
    """Squared modulus a^2+b^2+c^2+d^2 mod n (the square root is never taken)."""
    return (q.a * q.a + q.b * q.b + q.c * q.c + q.d * q.d) % q.modulus.n


def q_is_invertible(q: Quaternion) -> bool:
    """True iff the squared modulus is coprime to n."""
    return math.gcd(q_norm(q), q.modulus.n) == 1


def q_inverse(q: Quaternion) -> Quaternion:
    """Inverse: conjugate scaled by the inverse of the squared modulus."""
    s = mod_inverse(q_norm(q), q.modulus)
    n = q.modulus.n
    conj = q_conj(q)
    return Quaternion(conj.a * s % n, conj.b * s % n,
                      conj.c * s % n, conj.d * s % n, q.modulus)


def q_random(rng: RandomSource, modulus: Modulus) -> Quaternion:
    """Four independent uniform residues mod n."""
    n = modulus.n
    return Quaternion(rng.randrange(n), rng.randrange(n),
                      rng.randrange(n), rng.randrange(n), modulus)
