"""Time the compiled kernels against the pure-Python fallback.

Runs the hot operations (quaternion product, 4x4 matrix product, encrypt,
homomorphic multiply, decrypt) under every available backend and prints a
side-by-side table with speedups relative to pure Python.

Usage: python benchmarks/compare_backends.py [--bits 32] [--reps 200]
"""

import argparse
import time

from quatfhe import _backend
from quatfhe.numtheory import RandomSource
from quatfhe.qmatrix import m_mul, random_matrix
from quatfhe.quaternion import q_mul, q_random
from quatfhe.scheme import decrypt_verify, encrypt, he_mul, keygen


def time_op(fn, reps):
    start = time.perf_counter()
    for _ in range(reps):
        fn()
    return (time.perf_counter() - start) * 1000.0 / reps


def run(bits, reps):
    rng = RandomSource(seed=1234)
    sk = keygen(bits, rng)
    mod = sk.params.N_squared
    q1, q2 = q_random(rng, mod), q_random(rng, mod)
    u, v = random_matrix(4, rng, mod), random_matrix(4, rng, mod)
    c1 = encrypt(sk, 123 % mod.n, rng)
    c2 = encrypt(sk, 456 % mod.n, rng)

    ops = [
        ("q_mul", lambda: q_mul(q1, q2), reps * 50),
        ("m_mul 4x4", lambda: m_mul(u, v), reps),
        ("encrypt", lambda: encrypt(sk, 7, rng), reps),
        ("he_mul", lambda: he_mul(c1, c2), reps),
        ("decrypt", lambda: decrypt_verify(sk, c1), reps),
    ]

    results = {}
    for backend in _backend.available_backends():
        _backend.set_backend(backend)
        results[backend] = {name: time_op(fn, r) for name, fn, r in ops}
    _backend.set_backend("auto")

    backends = list(results)
    header = f"{'operation':<12}" + "".join(f"{b + ' (ms)':>16}" for b in backends)
    if "cython" in results and "python" in results:
        header += f"{'speedup':>10}"
    print(f"prime_bits={bits}  reps={reps}")
    print(header)
    print("-" * len(header))
    for name, _, _ in ops:
        line = f"{name:<12}" + "".join(
            f"{results[b][name]:>16.4f}" for b in backends)
        if "cython" in results and "python" in results:
            line += f"{results['python'][name] / results['cython'][name]:>9.2f}x"
        print(line)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--bits", type=int, default=32)
    parser.add_argument("--reps", type=int, default=200)
    args = parser.parse_args()
    run(args.bits, args.reps)


if __name__ == "__main__":
    main()
