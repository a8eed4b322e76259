"""Compare the compiled and numpy gate kernels on a layered random circuit.

Usage: python benchmarks/bench_kernels.py [--qubits 12 16 20] [--layers 20]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vqabench import _kernels_py

try:
    from vqabench import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def _circuit(n, layers, rng):
    ops = []
    for _ in range(layers):
        for q in range(n):
            t = rng.uniform(0, 2 * np.pi)
            c, s = np.cos(t / 2), np.sin(t / 2)
            ops.append(("1q", q, (c, -s, s, c), 0))
        for q in range(0, n - 1, 2):
            ops.append(("x", q + 1, None, 1 << q))
    return ops


def _run(mod, n, ops):
    state = np.zeros(1 << n, dtype=np.complex128)
    state[0] = 1.0
    t0 = time.perf_counter()
    for kind, q, m, ctrl in ops:
        if kind == "1q":
            mod.apply_1q(state, q, *m, ctrl)
        else:
            mod.apply_x(state, q, ctrl)
    return time.perf_counter() - t0, state


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qubits", type=int, nargs="+", default=[10, 14, 18])
    ap.add_argument("--layers", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels_c is None:
        print("compiled kernels not built; only the numpy fallback is available")
    print(f"{'qubits':>6} {'gates':>7} {'numpy [s]':>10} {'cython [s]':>11} {'speedup':>8} {'max |diff|':>11}")
    for n in args.qubits:
        ops = _circuit(n, args.layers, np.random.default_rng(args.seed))
        tp, sp = _run(_kernels_py, n, ops)
        if _kernels_c is None:
            print(f"{n:>6} {len(ops):>7} {tp:>10.4f} {'-':>11} {'-':>8} {'-':>11}")
            continue
        tc, sc = _run(_kernels_c, n, ops)
        diff = float(np.max(np.abs(sp - sc)))
        print(f"{n:>6} {len(ops):>7} {tp:>10.4f} {tc:>11.4f} {tp / tc:>8.2f} {diff:>11.2e}")


if __name__ == "__main__":
    main()
