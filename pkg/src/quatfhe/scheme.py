"""Symmetric verifiable noise-free FHE over 4x4 quaternion matrices mod N^2.

Plaintexts are residues sigma in Z/N^2 Z with N a product of two secret
primes. Encryption hides sigma twice, in a value track and an independent
check track: each track embeds sigma as the real part of a quaternion whose
imaginary coefficients are random multiples of N. The two tracks sit on the
diagonal of a block-upper-triangular 4x4 matrix (the value track first
conjugated by a secret 2x2 matrix k1, the check track with a zero trailing
diagonal slot), and the whole thing is conjugated by the secret 4x4 key K.

Matrix addition and multiplication mod N^2 act directly on plaintexts
(multiples of N on the imaginary axes stay multiples of N, and their
cross-products vanish mod N^2), so evaluation never accumulates noise and
requires no refresh. Decryption undoes the conjugations and accepts only if
the two tracks agree, which is what detects tampering. The zero trailing
slot of the check block survives sums and products, keeping every honest
ciphertext matrix non-invertible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import (FormatError, KeyConsistencyError, ModulusMismatch,
                     PlaintextOutOfRange, VerificationFailure)
from .numtheory import Modulus, RandomSource, gen_prime
from .qmatrix import (QMatrix, block_assemble, block_get, m_add, m_mul,
                      random_invertible, random_matrix, schur_invert)
from .quaternion import Quaternion, q_random

FORMAT_VERSION = 1
DEFAULT_PRIME_BITS = 512

POLICY_PAPER = "paper"
POLICY_STRICT = "strict"
POLICIES = (POLICY_PAPER, POLICY_STRICT)


@dataclass(frozen=True)
class SchemeParams:
    """Public-ish parameters: N itself is shipped in ciphertext headers."""

    prime_bits: int
    N: int
    N_squared: Modulus


@dataclass(frozen=True)
class SecretKey:
    """(k1, k1^-1, K, K^-1) plus parameters.

    k1 is the top-left 2x2 block of K, stored redundantly with its inverse
    so decryption avoids recomputing them.
    """

    K: QMatrix
    K_inv: QMatrix
    k1: QMatrix
    k1_inv: QMatrix
    params: SchemeParams


@dataclass(frozen=True)
class Plaintext:
    """A cleartext residue sigma in Z/N^2 Z."""

    sigma: int

    def __int__(self) -> int:
        return self.sigma


@dataclass(frozen=True)
class EncryptionRandomness:
    """Per-encryption randomness; drawn fresh every call, never serialized.

    value_masks / check_masks are the multiples of N placed on the i, j, k
    axes of the two plaintext encodings. The fillers pad the free slots of
    the track blocks, and blind_block is the random 2x2 corner block mixed
    into the assembled matrix.
    """

    value_masks: tuple[int, int, int]
    check_masks: tuple[int, int, int]
    filler_top: Quaternion
    filler_diag: Quaternion
    filler_check: Quaternion
    blind_block: QMatrix


@dataclass(frozen=True)
class Ciphertext:
    """A 4x4 quaternion matrix mod N^2, self-describing via its header N."""

    matrix: QMatrix
    n: int


def keygen(prime_bits: int = DEFAULT_PRIME_BITS,
           rng: RandomSource | None = None) -> SecretKey:
    """Generate a fresh secret key.

    Draws two distinct primes of exactly `prime_bits` bits, forms N and the
    working modulus N^2, and generates an invertible 4x4 matrix K whose
    top-left 2x2 block k1 is invertible by construction.
    """
    if prime_bits < 3:
        raise ValueError(f"prime_bits must be >= 3, got {prime_bits}")
    if rng is None:
        rng = RandomSource()
    p = gen_prime(prime_bits, rng)
    q = gen_prime(prime_bits, rng)
    while q == p:  # N must have two distinct prime factors
        q = gen_prime(prime_bits, rng)
    N = p * q
    modulus = Modulus(N * N, factorization_hint=(p, q))
    K, K_inv = random_invertible(4, rng, modulus)
    k1 = block_get(K).A
    k1_inv = schur_invert(k1)
    params = SchemeParams(prime_bits=prime_bits, N=N, N_squared=modulus)
    return SecretKey(K=K, K_inv=K_inv, k1=k1, k1_inv=k1_inv, params=params)


def _as_sigma(plaintext: int | Plaintext, params: SchemeParams) -> int:
    sigma = plaintext.sigma if isinstance(plaintext, Plaintext) else plaintext
    if not 0 <= sigma < params.N_squared.n:
        raise PlaintextOutOfRange(
            f"plaintext must be in [0, N^2); got {sigma}")
    return sigma


def draw_encryption_randomness(params: SchemeParams,
                               rng: RandomSource) -> EncryptionRandomness:
    """Draw everything one encryption consumes (masks mod N, rest mod N^2)."""
    N = params.N
    mod = params.N_squared
    return EncryptionRandomness(
        value_masks=(rng.randrange(N), rng.randrange(N), rng.randrange(N)),
        check_masks=(rng.randrange(N), rng.randrange(N), rng.randrange(N)),
        filler_top=q_random(rng, mod),
        filler_diag=q_random(rng, mod),
        filler_check=q_random(rng, mod),
        blind_block=random_matrix(2, rng, mod),
    )


def _encode_track(sigma: int, masks: tuple[int, int, int],
                  params: SchemeParams) -> Quaternion:
    N = params.N
    return Quaternion(sigma, masks[0] * N, masks[1] * N, masks[2] * N,
                      params.N_squared)


def _assemble_ciphertext(sk: SecretKey, sigma_value: int, sigma_check: int,
                         rand: EncryptionRandomness) -> Ciphertext:
    """Build a ciphertext with independently chosen track plaintexts.

    encrypt() always passes the same sigma twice; tests use differing
    values to exercise rejection of inconsistent ciphertexts.
    """
    params = sk.params
    mod = params.N_squared
    zero_q = Quaternion.zero(mod)

    value_quat = _encode_track(sigma_value, rand.value_masks, params)
    value_block = block_assemble(value_quat, rand.filler_top,
                                 zero_q, rand.filler_diag)
    conjugated_value = m_mul(m_mul(sk.k1, value_block), sk.k1_inv)

    check_quat = _encode_track(sigma_check, rand.check_masks, params)
    # The zero trailing slot is what keeps ciphertexts non-invertible.
    check_block = block_assemble(check_quat, rand.filler_check, zero_q, zero_q)

    inner = block_assemble(conjugated_value, rand.blind_block,
                           QMatrix.zeros(2, mod), check_block)
    matrix = m_mul(m_mul(sk.K, inner), sk.K_inv)
    return Ciphertext(matrix=matrix, n=params.N)


def encrypt(sk: SecretKey, plaintext: int | Plaintext,
            rng: RandomSource | None = None) -> Ciphertext:
    """Probabilistic encryption: fresh randomness on every call."""
    sigma = _as_sigma(plaintext, sk.params)
    if rng is None:
        rng = RandomSource()
    rand = draw_encryption_randomness(sk.params, rng)
    return _assemble_ciphertext(sk, sigma, sigma, rand)


def decrypt_verify(sk: SecretKey, ct: Ciphertext,
                   policy: str = POLICY_STRICT) -> Plaintext:
    """Decrypt and verify; returns the plaintext or raises VerificationFailure.

    Undoes both conjugations, recovers the value-track quaternion m and the
    check-track quaternion m', and accepts only if both reduce to the same
    pure scalar mod N (all imaginary coefficients divisible by N). Policy
    'paper' stops there; the default 'strict' policy additionally requires
    the real parts to agree mod N^2, pinning down the full plaintext space.
    The returned plaintext is the value track's real part mod N^2.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be one of {POLICIES}, got {policy!r}")
    if ct.n != sk.params.N:
        raise ModulusMismatch(
            f"ciphertext modulus {ct.n} does not match key modulus"
            f" {sk.params.N}")
    N = sk.params.N
    inner = m_mul(m_mul(sk.K_inv, ct.matrix), sk.K)
    blocks = block_get(inner)
    value_block = m_mul(m_mul(sk.k1_inv, blocks.A), sk.k1)
    m = value_block.entry(0, 0)
    m_check = blocks.D.entry(0, 0)

    ok = (m.a % N == m_check.a % N
          and m.b % N == 0 and m.c % N == 0 and m.d % N == 0
          and m_check.b % N == 0 and m_check.c % N == 0
          and m_check.d % N == 0)
    if ok and policy == POLICY_STRICT:
        ok = m.a == m_check.a
    if not ok:
        raise VerificationFailure(
            "value and check tracks disagree: ciphertext was modified or"
            " is inconsistent")
    return Plaintext(m.a)


def he_add(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    """Homomorphic addition: entrywise sum mod N^2."""
    if c1.n != c2.n:
        raise ModulusMismatch(f"ciphertext moduli differ: {c1.n} vs {c2.n}")
    return Ciphertext(matrix=m_add(c1.matrix, c2.matrix), n=c1.n)


def he_mul(c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
    """Homomorphic multiplication: matrix product mod N^2.

    The matrices do not commute, but both orders decrypt to the same
    product of plaintexts.
    """
    if c1.n != c2.n:
        raise ModulusMismatch(f"ciphertext moduli differ: {c1.n} vs {c2.n}")
    return Ciphertext(matrix=m_mul(c1.matrix, c2.matrix), n=c1.n)


# ---------------------------------------------------------------------------
# Serialization: canonical JSON documents with lowercase-hex residues.
# Compact separators and fixed key order make re-serialization byte-exact;
# whitespace in incoming documents is insignificant.

ROLE_KEY = "secret-key"
ROLE_CIPHERTEXT = "ciphertext"

_HEX_DIGITS = frozenset("0123456789abcdef")


def _matrix_coeffs(m: QMatrix) -> list[list[str]]:
    flat = m.flat
    return [[format(x, "x") for x in flat[o:o + 4]]
            for o in range(0, len(flat), 4)]


def _dumps(doc: dict) -> bytes:
    return json.dumps(doc, separators=(",", ":")).encode("ascii")


def serialize_key(sk: SecretKey) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "role": ROLE_KEY,
        "N": format(sk.params.N, "x"),
        "K": _matrix_coeffs(sk.K),
        "K_inv": _matrix_coeffs(sk.K_inv),
        "k1": _matrix_coeffs(sk.k1),
        "k1_inv": _matrix_coeffs(sk.k1_inv),
    }
    return _dumps(doc)


def serialize_ct(ct: Ciphertext) -> bytes:
    doc = {
        "format_version": FORMAT_VERSION,
        "role": ROLE_CIPHERTEXT,
        "N": format(ct.n, "x"),
        "C": _matrix_coeffs(ct.matrix),
    }
    return _dumps(doc)


def _parse_doc(data: bytes, role: str) -> dict:
    try:
        doc = json.loads(data.decode("ascii"))
    except (ValueError, UnicodeDecodeError) as exc:
        raise FormatError(f"not a valid document: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("document root must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise FormatError(
            f"unsupported format_version {doc.get('format_version')!r}")
    if doc.get("role") != role:
        raise FormatError(f"expected role {role!r}, got {doc.get('role')!r}")
    return doc


def _parse_hex(text: object, bound: int, what: str) -> int:
    if not isinstance(text, str) or not text or not set(text) <= _HEX_DIGITS:
        raise FormatError(f"{what} must be a lowercase hex string")
    value = int(text, 16)
    if value >= bound:
        raise FormatError(f"{what} out of range")
    return value


def _parse_matrix(doc: dict, field: str, dim: int,
                  modulus: Modulus) -> QMatrix:
    coeffs = doc.get(field)
    if (not isinstance(coeffs, list) or len(coeffs) != dim * dim
            or any(not isinstance(q, list) or len(q) != 4 for q in coeffs)):
        raise FormatError(
            f"{field} must be {dim * dim} quaternions of 4 coefficients")
    flat = tuple(_parse_hex(x, modulus.n, f"{field} coefficient")
                 for q in coeffs for x in q)
    return QMatrix(dim, modulus, flat)


def _parse_n(doc: dict) -> int:
    text = doc.get("N")
    if not isinstance(text, str) or not text or not set(text) <= _HEX_DIGITS:
        raise FormatError("N must be a lowercase hex string")
    N = int(text, 16)
    if N < 2:
        raise FormatError("N out of range")
    return N


def deserialize_key(data: bytes) -> SecretKey:
    """Parse and re-check a serialized key.

    Raises FormatError for malformed documents and KeyConsistencyError when
    the stated inverses or the k1 block do not match.
    """
    doc = _parse_doc(data, ROLE_KEY)
    N = _parse_n(doc)
    modulus = Modulus(N * N)
    K = _parse_matrix(doc, "K", 4, modulus)
    K_inv = _parse_matrix(doc, "K_inv", 4, modulus)
    k1 = _parse_matrix(doc, "k1", 2, modulus)
    k1_inv = _parse_matrix(doc, "k1_inv", 2, modulus)
    identity4 = QMatrix.identity(4, modulus)
    identity2 = QMatrix.identity(2, modulus)
    if m_mul(K, K_inv) != identity4 or m_mul(K_inv, K) != identity4:
        raise KeyConsistencyError("K and K_inv are not inverses")
    if k1 != block_get(K).A:
        raise KeyConsistencyError("k1 is not the top-left block of K")
    if m_mul(k1, k1_inv) != identity2 or m_mul(k1_inv, k1) != identity2:
        raise KeyConsistencyError("k1 and k1_inv are not inverses")
    prime_bits = (N.bit_length() + 1) // 2
    params = SchemeParams(prime_bits=prime_bits, N=N, N_squared=modulus)
    return SecretKey(K=K, K_inv=K_inv, k1=k1, k1_inv=k1_inv, params=params)


def deserialize_ct(data: bytes) -> Ciphertext:
    doc = _parse_doc(data, ROLE_CIPHERTEXT)
    N = _parse_n(doc)
    modulus = Modulus(N * N)
    matrix = _parse_matrix(doc, "C", 4, modulus)
    return Ciphertext(matrix=matrix, n=N)


def expected_serialized_bytes(role: str, N: int) -> int:
    """Layout formula for serialized sizes.

    Materializes the canonical document with every residue at full width
    (the width of N^2 - 1) and measures it; actual documents use minimal
    hex, so they sit at or a few bytes below this. 64 coefficients for a
    ciphertext, 2 x (16 + 4) quaternions' worth for a key.
    """
    full = format(N * N - 1, "x")
    def quats(count: int) -> list[list[str]]:
        return [[full] * 4 for _ in range(count)]
    if role == ROLE_CIPHERTEXT:
        doc = {"format_version": FORMAT_VERSION, "role": role,
               "N": format(N, "x"), "C": quats(16)}
    elif role == ROLE_KEY:
        doc = {"format_version": FORMAT_VERSION, "role": role,
               "N": format(N, "x"), "K": quats(16), "K_inv": quats(16),
               "k1": quats(4), "k1_inv": quats(4)}
    else:
        raise ValueError(f"unknown role {role!r}")
    return len(_dumps(doc))
