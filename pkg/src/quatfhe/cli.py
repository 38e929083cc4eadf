"""Command-line surface.

Subcommands: keygen, encrypt, decrypt, eval, tamper-demo, bench.
Exit codes are stable: 0 success, 2 usage/format errors, 3 verification
failure. Every subcommand takes --seed (or the QUATFHE_SEED environment
variable) for bit-reproducible runs.
"""

from __future__ import annotations

import argparse
import csv
import os
import statistics
import sys
import time
from dataclasses import dataclass

from . import _backend, circuit, scheme
from .errors import (ExpressionTooLarge, FormatError, KeyConsistencyError,
                     ModulusMismatch, ParseError, PlaintextOutOfRange,
                     QuatFHEError, UnboundVariable, VerificationFailure)
from .numtheory import RandomSource
from .qmatrix import QMatrix
from .scheme import (Ciphertext, SecretKey, decrypt_verify, deserialize_ct,
                     deserialize_key, encrypt, expected_serialized_bytes,
                     keygen, serialize_ct, serialize_key)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFICATION = 3

SEED_ENV_VAR = "QUATFHE_SEED"

# Bench sizes must track the serialization layout; 10% headroom for the
# minimal-hex shaving on leading digits.
SIZE_TOLERANCE = 0.10


def _bits_arg(value: str) -> int:
    bits = int(value)
    if bits < 3:
        raise argparse.ArgumentTypeError(
            f"prime size must be at least 3 bits, got {bits}")
    return bits


def _bits_list_arg(value: str) -> list[int]:
    try:
        items = [int(part) for part in value.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad bits list {value!r}") from exc
    if not items:
        raise argparse.ArgumentTypeError("bits list is empty")
    for bits in items:
        if bits < 3:
            raise argparse.ArgumentTypeError(
                f"prime size must be at least 3 bits, got {bits}")
    return items


def _nonnegative_arg(value: str) -> int:
    count = int(value)
    if count < 0:
        raise argparse.ArgumentTypeError(f"count must be >= 0, got {count}")
    return count


def _positive_arg(value: str) -> int:
    count = int(value)
    if count < 1:
        raise argparse.ArgumentTypeError(f"count must be >= 1, got {count}")
    return count


def _resolve_seed(args: argparse.Namespace) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else None


def _rng_for(args: argparse.Namespace) -> RandomSource:
    return RandomSource(_resolve_seed(args))


def _load_key(path: str) -> SecretKey:
    with open(path, "rb") as fh:
        return deserialize_key(fh.read())


def _load_ct(path: str) -> Ciphertext:
    with open(path, "rb") as fh:
        return deserialize_ct(fh.read())


def cmd_keygen(args: argparse.Namespace) -> int:
    sk = keygen(args.bits, _rng_for(args))
    with open(args.out, "wb") as fh:
        fh.write(serialize_key(sk))
    print(format(sk.params.N, "x"))
    return EXIT_OK


def cmd_encrypt(args: argparse.Namespace) -> int:
    sk = _load_key(args.key)
    ct = encrypt(sk, args.plaintext, _rng_for(args))
    with open(args.out, "wb") as fh:
        fh.write(serialize_ct(ct))
    return EXIT_OK


def cmd_decrypt(args: argparse.Namespace) -> int:
    sk = _load_key(args.key)
    ct = _load_ct(getattr(args, "in"))
    plaintext = decrypt_verify(sk, ct, policy=args.policy)
    print(plaintext.sigma)
    return EXIT_OK


def _parse_bindings(pairs: list[str]) -> dict[str, int]:
    env: dict[str, int] = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name:
            raise FormatError(f"binding must look like name=value: {pair!r}")
        try:
            env[name] = int(value)
        except ValueError as exc:
            raise FormatError(
                f"binding value must be a decimal integer: {pair!r}") from exc
    return env


def cmd_eval(args: argparse.Namespace) -> int:
    if args.key is None:
        raise FormatError("--key is required to compile the expression"
                          " (evaluation itself is key-free)")
    expr = circuit.parse(args.expr)
    env = _parse_bindings(args.bind or [])
    sk = _load_key(args.key)
    rng = _rng_for(args)
    # Compile (key holder) and evaluate (no key) are deliberately separate
    # phases: the evaluation step only ever sees ciphertexts.
    program = circuit.compile_expr(expr, sk, env, rng)
    result = circuit.eval_encrypted(program)
    with open(args.out, "wb") as fh:
        fh.write(serialize_ct(result))
    node_count, mul_depth = circuit.stats(expr)
    print(f"nodes={node_count} mul_depth={mul_depth}")
    return EXIT_OK


@dataclass
class TamperReport:
    trials: int
    detected: int

    @property
    def rate(self) -> float:
        return self.detected / self.trials if self.trials else 0.0


def run_tamper_trials(sk: SecretKey, trials: int,
                      rng: RandomSource) -> TamperReport:
    """Encrypt random plaintexts, flip one random coefficient by a random
    nonzero delta, and count how many decryptions reject."""
    n_squared = sk.params.N_squared.n
    detected = 0
    for _ in range(trials):
        sigma = rng.randrange(n_squared)
        ct = encrypt(sk, sigma, rng)
        index = rng.randrange(len(ct.matrix.flat))
        delta = 1 + rng.randrange(n_squared - 1)
        flat = list(ct.matrix.flat)
        flat[index] = (flat[index] + delta) % n_squared
        tampered = Ciphertext(
            matrix=QMatrix(4, ct.matrix.modulus, tuple(flat)), n=ct.n)
        try:
            decrypt_verify(sk, tampered)
        except VerificationFailure:
            detected += 1
    return TamperReport(trials=trials, detected=detected)


def cmd_tamper_demo(args: argparse.Namespace) -> int:
    sk = _load_key(args.key)
    report = run_tamper_trials(sk, args.trials, _rng_for(args))
    if report.trials == 0:
        print("trials=0 (empty report)")
    else:
        print(f"trials={report.trials} detected={report.detected}"
              f" rate={report.rate:.4f}")
    return EXIT_OK


BENCH_COLUMNS = ("prime_bits", "keygen_ms", "encrypt_ms", "he_add_ms",
                 "he_mul_ms", "decrypt_ms", "key_bytes", "ciphertext_bytes")


def _median_ms(fn, trials: int) -> float:
    samples = []
    for _ in range(trials):
        start = time.perf_counter()
        fn()
        samples.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(samples)


def bench_row(prime_bits: int, trials: int, rng: RandomSource) -> dict:
    """One benchmark row: median timings plus serialized sizes."""
    holder: dict = {}

    def do_keygen():
        holder["sk"] = keygen(prime_bits, rng)

    keygen_ms = _median_ms(do_keygen, trials)
    sk = holder["sk"]
    n_squared = sk.params.N_squared.n

    def do_encrypt():
        holder["ct"] = encrypt(sk, rng.randrange(n_squared), rng)

    encrypt_ms = _median_ms(do_encrypt, trials)
    c1 = encrypt(sk, rng.randrange(n_squared), rng)
    c2 = encrypt(sk, rng.randrange(n_squared), rng)
    he_add_ms = _median_ms(lambda: scheme.he_add(c1, c2), trials)
    he_mul_ms = _median_ms(lambda: scheme.he_mul(c1, c2), trials)
    decrypt_ms = _median_ms(lambda: decrypt_verify(sk, c1), trials)

    key_bytes = len(serialize_key(sk))
    ciphertext_bytes = len(serialize_ct(c1))
    for role, actual in ((scheme.ROLE_KEY, key_bytes),
                         (scheme.ROLE_CIPHERTEXT, ciphertext_bytes)):
        expected = expected_serialized_bytes(role, sk.params.N)
        if abs(actual - expected) > SIZE_TOLERANCE * expected:
            raise QuatFHEError(
                f"serialized {role} size {actual} deviates more than"
                f" {SIZE_TOLERANCE:.0%} from the layout formula {expected}")

    return {
        "prime_bits": prime_bits,
        "keygen_ms": f"{keygen_ms:.3f}",
        "encrypt_ms": f"{encrypt_ms:.3f}",
        "he_add_ms": f"{he_add_ms:.3f}",
        "he_mul_ms": f"{he_mul_ms:.3f}",
        "decrypt_ms": f"{decrypt_ms:.3f}",
        "key_bytes": key_bytes,
        "ciphertext_bytes": ciphertext_bytes,
    }


def cmd_bench(args: argparse.Namespace) -> int:
    if args.backend != "auto":
        _backend.set_backend(args.backend)
    rng = _rng_for(args)
    rows = [bench_row(bits, args.trials, rng) for bits in args.bits_list]
    with open(args.out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"backend={_backend.get_backend()}"
          f" rows={len(rows)} out={args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatfhe",
        description="Verifiable noise-free symmetric FHE over quaternion"
                    " matrices, with homomorphic expression evaluation.")
    seed_parent = argparse.ArgumentParser(add_help=False)
    seed_parent.add_argument("--seed", type=int, default=None,
                             help="deterministic randomness seed"
                                  f" (falls back to ${SEED_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[seed_parent],
                       help="generate a secret key file; prints N in hex")
    p.add_argument("--bits", type=_bits_arg, default=scheme.DEFAULT_PRIME_BITS,
                   help="prime size in bits (default %(default)s)")
    p.add_argument("--out", required=True, help="key file path")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", parents=[seed_parent],
                       help="encrypt a plaintext residue")
    p.add_argument("--key", required=True)
    p.add_argument("--plaintext", type=int, required=True,
                   help="decimal plaintext in [0, N^2)")
    p.add_argument("--out", required=True, help="ciphertext file path")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", parents=[seed_parent],
                       help="decrypt and verify; prints the plaintext")
    p.add_argument("--key", required=True)
    p.add_argument("--in", required=True, help="ciphertext file path")
    p.add_argument("--policy", choices=scheme.POLICIES,
                   default=scheme.POLICY_STRICT,
                   help="verification policy: 'paper' compares the two"
                        " tracks mod N only; 'strict' (default) also"
                        " requires exact agreement mod N^2")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser("eval", parents=[seed_parent],
                       help="compile an expression to ciphertexts and"
                            " evaluate it homomorphically")
    p.add_argument("--key", default=None,
                   help="key file (required: compilation encrypts leaves)")
    p.add_argument("--expr", required=True)
    p.add_argument("--bind", action="append", metavar="NAME=VALUE",
                   help="variable binding; repeatable")
    p.add_argument("--out", required=True, help="result ciphertext path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("tamper-demo", parents=[seed_parent],
                       help="flip one coefficient per trial and report the"
                            " detection rate")
    p.add_argument("--key", required=True)
    p.add_argument("--trials", type=_nonnegative_arg, required=True)
    p.set_defaults(func=cmd_tamper_demo)

    p = sub.add_parser("bench", parents=[seed_parent],
                       help="time the core operations and record sizes")
    p.add_argument("--bits-list", type=_bits_list_arg, default=[16, 32, 64],
                   help="comma-separated prime sizes (default 16,32,64)")
    p.add_argument("--trials", type=_positive_arg, default=5)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--backend", choices=("auto",) + _backend.available_backends(),
                   default="auto", help="kernel backend to benchmark")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except (FormatError, KeyConsistencyError, ModulusMismatch, ParseError,
            UnboundVariable, PlaintextOutOfRange, ExpressionTooLarge,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QuatFHEError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
