"""Verifiable noise-free symmetric FHE over quaternion matrices mod N^2.

Quick start::

    from quatfhe import keygen, encrypt, decrypt_verify, he_add, he_mul
    from quatfhe.numtheory import RandomSource

    sk = keygen(prime_bits=32, rng=RandomSource(seed=1))
    c = he_mul(encrypt(sk, 6), encrypt(sk, 7))
    assert decrypt_verify(sk, c).sigma == 42
"""

from ._backend import available_backends, get_backend, set_backend
from .circuit import (EncryptedProgram, compile_expr, eval_encrypted,
                      eval_plain, format_expr, parse, stats)
from .numtheory import Modulus, RandomSource, egcd, gen_prime, mod_inverse
from .qmatrix import (QMatrix, block_assemble, block_get, m_add,
                      m_is_invertible, m_mul, random_invertible,
                      regular_representation, schur_invert)
from .quaternion import (Quaternion, q_add, q_conj, q_inverse,
                         q_is_invertible, q_mul, q_mul_vector_form, q_norm,
                         q_random)
from .scheme import (Ciphertext, Plaintext, SchemeParams, SecretKey,
                     decrypt_verify, deserialize_ct, deserialize_key,
                     encrypt, he_add, he_mul, keygen, serialize_ct,
                     serialize_key)

__version__ = "0.1.0"

__all__ = [
    "available_backends", "get_backend", "set_backend",
    "EncryptedProgram", "compile_expr", "eval_encrypted", "eval_plain",
    "format_expr", "parse", "stats",
    "Modulus", "RandomSource", "egcd", "gen_prime", "mod_inverse",
    "QMatrix", "block_assemble", "block_get", "m_add", "m_is_invertible",
    "m_mul", "random_invertible", "regular_representation", "schur_invert",
    "Quaternion", "q_add", "q_conj", "q_inverse", "q_is_invertible",
    "q_mul", "q_mul_vector_form", "q_norm", "q_random",
    "Ciphertext", "Plaintext", "SchemeParams", "SecretKey",
    "decrypt_verify", "deserialize_ct", "deserialize_key", "encrypt",
    "he_add", "he_mul", "keygen", "serialize_ct", "serialize_key",
    "__version__",
]
