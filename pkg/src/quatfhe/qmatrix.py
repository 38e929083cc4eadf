"""Quaternion matrices (2x2 and 4x4) over one shared modulus.

Multiplication preserves the order of the factors in every entry product
(required over a noncommutative ring). Inversion uses the Schur-complement
block formula, recursively for 4x4. Because the modulus is composite,
invertibility cannot be decided by elimination with division; the exact
oracle here maps each entry to its 4x4 left-multiplication matrix over
Z/nZ (the regular representation) and tests whether the determinant of
that integer matrix, computed exactly by fraction-free elimination, is a
unit mod n. The Schur path constructs inverses; the representation path
judges invertibility, including on matrices whose leading block is
singular where the Schur preconditions fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

from . import _backend
from .errors import (ModulusMismatch, NotInvertible, PivotNotInvertible,
                     RandomnessExhausted, SchurNotInvertible, ShapeMismatch)
from .numtheory import Modulus, RandomSource
from .quaternion import Quaternion, q_inverse, q_is_invertible, q_random

# Rejection-sampling bound: non-invertible draws are rare for moduli built
# from large primes, so hitting this signals a pathological modulus.
RETRY_BOUND = 64

Block = Union[Quaternion, "QMatrix"]


@dataclass(frozen=True)
class QMatrix:
    """Immutable dim x dim quaternion matrix in flat coefficient layout.

    `flat` holds 4*dim*dim residues, row-major, four coefficients per entry;
    this is the layout the arithmetic kernels consume directly.
    """

    dim: int
    modulus: Modulus
    flat: tuple[int, ...]

    def __post_init__(self):
        if self.dim not in (2, 4):
            raise ShapeMismatch(f"dim must be 2 or 4, got {self.dim}")
        expected = 4 * self.dim * self.dim
        if len(self.flat) != expected:
            raise ShapeMismatch(
                f"flat length {len(self.flat)} != {expected} for dim {self.dim}")
        n = self.modulus.n
        if any(x < 0 or x >= n for x in self.flat):
            raise ValueError("coefficients must be reduced into [0, n)")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Quaternion]]) -> QMatrix:
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise ShapeMismatch("matrix rows must all have the same length")
        entries = [q for row in rows for q in row]
        modulus = entries[0].modulus
        if any(q.modulus.n != modulus.n for q in entries):
            raise ModulusMismatch("all entries must share one modulus")
        flat = tuple(x for q in entries for x in q.coeffs)
        return cls(dim, modulus, flat)

    @classmethod
    def identity(cls, dim: int, modulus: Modulus) -> QMatrix:
        one = Quaternion.one(modulus)
        zero = Quaternion.zero(modulus)
        return cls.from_rows([[one if r == c else zero for c in range(dim)]
                              for r in range(dim)])

    @classmethod
    def zeros(cls, dim: int, modulus: Modulus) -> QMatrix:
        return cls(dim, modulus, (0,) * (4 * dim * dim))

    def entry(self, row: int, col: int) -> Quaternion:
        o = (row * self.dim + col) * 4
        return Quaternion(self.flat[o], self.flat[o + 1],
                          self.flat[o + 2], self.flat[o + 3], self.modulus)

    def rows(self) -> list[list[Quaternion]]:
        return [[self.entry(r, c) for c in range(self.dim)]
                for r in range(self.dim)]

    def __add__(self, other: QMatrix) -> QMatrix:
        return m_add(self, other)

    def __sub__(self, other: QMatrix) -> QMatrix:
        _check_compatible(self, other)
        flat = _backend.kernels().mat_sub(self.flat, other.flat, self.dim,
                                          self.modulus.n)
        return QMatrix(self.dim, self.modulus, flat)

    def __neg__(self) -> QMatrix:
        return QMatrix.zeros(self.dim, self.modulus) - self

    def __mul__(self, other: QMatrix) -> QMatrix:
        return m_mul(self, other)


@dataclass(frozen=True)
class BlockView:
    """The four half-size blocks of a matrix: for dim 4 each block is a 2x2
    QMatrix, for dim 2 a single Quaternion. Reassembling A,B,C,D reproduces
    the source matrix exactly."""

    A: Block
    B: Block
    C: Block
    D: Block


def _check_compatible(u: QMatrix, v: QMatrix) -> None:
    if u.dim != v.dim:
        raise ShapeMismatch(f"dims differ: {u.dim} vs {v.dim}")
    if u.modulus.n != v.modulus.n:
        raise ModulusMismatch(f"moduli differ: {u.modulus.n} vs {v.modulus.n}")


def m_add(u: QMatrix, v: QMatrix) -> QMatrix:
    """Entrywise sum mod n."""
    _check_compatible(u, v)
    flat = _backend.kernels().mat_add(u.flat, v.flat, u.dim, u.modulus.n)
    return QMatrix(u.dim, u.modulus, flat)


def m_mul(u: QMatrix, v: QMatrix) -> QMatrix:
    """Matrix product; each entry product keeps u's entry on the left."""
    _check_compatible(u, v)
    flat = _backend.kernels().mat_mul(u.flat, v.flat, u.dim, u.modulus.n)
    return QMatrix(u.dim, u.modulus, flat)


def block_get(m: QMatrix) -> BlockView:
    """Partition into four half-size blocks."""
    if m.dim == 2:
        return BlockView(m.entry(0, 0), m.entry(0, 1),
                         m.entry(1, 0), m.entry(1, 1))
    half = m.dim // 2
    def sub(r0: int, c0: int) -> QMatrix:
        return QMatrix.from_rows(
            [[m.entry(r0 + r, c0 + c) for c in range(half)]
             for r in range(half)])
    return BlockView(sub(0, 0), sub(0, half), sub(half, 0), sub(half, half))


def block_assemble(a: Block, b: Block, c: Block, d: Block) -> QMatrix:
    """Reassemble four blocks into one matrix (inverse of block_get)."""
    blocks = (a, b, c, d)
    if all(isinstance(x, Quaternion) for x in blocks):
        return QMatrix.from_rows([[a, b], [c, d]])
    if not all(isinstance(x, QMatrix) for x in blocks):
        raise ShapeMismatch("blocks must be all quaternions or all matrices")
    half = a.dim
    if any(x.dim != half for x in blocks):
        raise ShapeMismatch("blocks must share one dimension")
    rows = []
    for r in range(half):
        rows.append([a.entry(r, cc) for cc in range(half)] +
                    [b.entry(r, cc) for cc in range(half)])
    for r in range(half):
        rows.append([c.entry(r, cc) for cc in range(half)] +
                    [d.entry(r, cc) for cc in range(half)])
    return QMatrix.from_rows(rows)


def _block_inverse(x: Block) -> Block:
    if isinstance(x, Quaternion):
        return q_inverse(x)
    return schur_invert(x)


def _assemble_schur_inverse(a_inv: Block, b: Block, c: Block,
                            s_inv: Block) -> QMatrix:
    """Block inverse from the pivot inverse and the Schur-complement inverse:
    ( A^-1 + A^-1 B S^-1 C A^-1 , -A^-1 B S^-1 ; -S^-1 C A^-1 , S^-1 )."""
    top_right = a_inv * b * s_inv
    bottom_left = s_inv * c * a_inv
    top_left = a_inv + top_right * c * a_inv
    return block_assemble(top_left, -top_right, -bottom_left, s_inv)


def schur_invert(m: QMatrix) -> QMatrix:
    """Invert via the Schur complement of the leading block.

    Requires the leading block A and the complement D - C A^-1 B to be
    invertible (recursively for dim 4); raises PivotNotInvertible or
    SchurNotInvertible otherwise, signalling callers to redraw random
    inputs. This is the constructive path only: a matrix can be invertible
    while failing these preconditions (see m_is_invertible).
    """
    blocks = block_get(m)
    try:
        a_inv = _block_inverse(blocks.A)
    except NotInvertible as exc:
        raise PivotNotInvertible("leading block is not invertible") from exc
    complement = blocks.D - blocks.C * a_inv * blocks.B
    try:
        s_inv = _block_inverse(complement)
    except NotInvertible as exc:
        raise SchurNotInvertible("Schur complement is not invertible") from exc
    return _assemble_schur_inverse(a_inv, blocks.B, blocks.C, s_inv)


def random_matrix(dim: int, rng: RandomSource, modulus: Modulus) -> QMatrix:
    """Matrix with uniformly random entries (no invertibility guarantee)."""
    return QMatrix.from_rows([[q_random(rng, modulus) for _ in range(dim)]
                              for _ in range(dim)])


def _random_invertible_quaternion(rng: RandomSource,
                                  modulus: Modulus) -> tuple[Quaternion, Quaternion]:
    for _ in range(RETRY_BOUND):
        q = q_random(rng, modulus)
        if q_is_invertible(q):
            return q, q_inverse(q)
    raise RandomnessExhausted(
        f"no invertible quaternion found in {RETRY_BOUND} draws mod {modulus.n}")


def random_invertible(dim: int, rng: RandomSource,
                      modulus: Modulus) -> tuple[QMatrix, QMatrix]:
    """Draw an invertible matrix together with its inverse.

    Construction: draw an invertible pivot block, random off-diagonal
    blocks, then redraw the trailing block until the Schur complement is
    invertible. For dim 4 the pivot block is itself built this way, so the
    top-left 2x2 block of the result is always invertible (key generation
    relies on this).
    """
    if dim == 2:
        a, a_inv = _random_invertible_quaternion(rng, modulus)
        b = q_random(rng, modulus)
        c = q_random(rng, modulus)
        for _ in range(RETRY_BOUND):
            d = q_random(rng, modulus)
            complement = d - c * a_inv * b
            if q_is_invertible(complement):
                s_inv = q_inverse(complement)
                break
        else:
            raise RandomnessExhausted(
                f"no invertible Schur complement in {RETRY_BOUND} draws"
                f" mod {modulus.n}")
    elif dim == 4:
        a, a_inv = random_invertible(2, rng, modulus)
        b = random_matrix(2, rng, modulus)
        c = random_matrix(2, rng, modulus)
        for _ in range(RETRY_BOUND):
            d = random_matrix(2, rng, modulus)
            complement = d - c * a_inv * b
            try:
                s_inv = schur_invert(complement)
            except NotInvertible:
                continue
            break
        else:
            raise RandomnessExhausted(
                f"no invertible Schur complement in {RETRY_BOUND} draws"
                f" mod {modulus.n}")
    else:
        raise ShapeMismatch(f"dim must be 2 or 4, got {dim}")
    m = block_assemble(a, b, c, d)
    m_inv = _assemble_schur_inverse(a_inv, b, c, s_inv)
    return m, m_inv


# Left-multiplication matrix of a + bi + cj + dk on the basis (1, i, j, k):
# columns are the coefficient vectors of q*1, q*i, q*j, q*k.
def _rep_block(a: int, b: int, c: int, d: int, n: int) -> list[list[int]]:
    return [[a, -b % n, -c % n, -d % n],
            [b, a, -d % n, c],
            [c, d, a, -b % n],
            [d, -c % n, b, a]]


def regular_representation(m: QMatrix) -> list[list[int]]:
    """Expand each entry to its left-multiplication matrix over Z/nZ.

    The result is a 4*dim x 4*dim integer matrix; the map is a ring
    homomorphism, so it turns quaternion-matrix invertibility questions
    into ordinary ones over Z/nZ.
    """
    n = m.modulus.n
    size = 4 * m.dim
    out = [[0] * size for _ in range(size)]
    for r in range(m.dim):
        for c in range(m.dim):
            q = m.entry(r, c)
            block = _rep_block(q.a, q.b, q.c, q.d, n)
            for i in range(4):
                out[4 * r + i][4 * c:4 * c + 4] = block[i]
    return out


def _det_bareiss(rows: list[list[int]]) -> int:
    """Exact integer determinant by fraction-free elimination.

    Every interior division is exact, so the result is exact over Z even
    though intermediate entries grow; that exactness is the point, since
    the caller reduces modulo a composite where division is unsound.
    """
    m = [row[:] for row in rows]
    size = len(m)
    sign = 1
    prev = 1
    for k in range(size - 1):
        if m[k][k] == 0:
            for i in range(k + 1, size):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, size):
            row_i = m[i]
            head = row_i[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - head * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[-1][-1]


def m_is_invertible(m: QMatrix) -> bool:
    """Exact invertibility test: unit determinant of the regular representation.

    Sound on every matrix, including those where the Schur preconditions
    fail; used as the judge against which the constructive Schur path is
    checked.
    """
    det = _det_bareiss(regular_representation(m))
    return math.gcd(det % m.modulus.n, m.modulus.n) == 1
