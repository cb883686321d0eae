"""Compare the compiled and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--number 2000]

Times the Hermitian eigensolver at a few sizes, the Wootters kernel, and an
end-to-end concurrence loop over a Werner/pure grid (the inner loop of the
violation search). Each backend is called directly, so both can be
compared in one process.
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from entlab import _backend
from entlab.channels import apply_matrix, depolarizing, unilocal
from entlab.ordering import family_state


def _random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a + a.conj().T


def _concurrence_loop(kernel, states):
    total = 0.0
    for m in states:
        s = kernel.wootters_roots(m)
        total += max(0.0, s[0] - s[1] - s[2] - s[3])
    return total


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--number", type=int, default=2000, help="calls per timing for single-matrix kernels")
    parser.add_argument("--grid", type=int, default=500, help="points per family in the loop benchmark")
    args = parser.parse_args(argv)

    impls = _backend.implementations()
    rng = np.random.default_rng(0)
    ch = unilocal(depolarizing(0.5), 0, (2, 2))
    grid = np.linspace(0.0, 1.0, args.grid)
    states = [apply_matrix(ch, family_state(f, x)) for f in ("werner", "pure") for x in grid]

    cases = [(f"eigh n={n}", "eigh", _random_hermitian(n, rng)) for n in (4, 8, 16)]
    cases.append(("wootters_roots", "wootters_roots", states[len(states) // 3]))

    print(f"default backend: {_backend.BACKEND}")
    header = f"{'kernel':<22}" + "".join(f"{name:>14}" for name in impls)
    if len(impls) == 2:
        header += f"{'speedup':>10}"
    print(header)

    def row(label, timings):
        line = f"{label:<22}" + "".join(f"{t * 1e6:>11.2f} us" for t in timings.values())
        if len(timings) == 2:
            line += f"{timings['python'] / timings['cython']:>9.1f}x"
        print(line)

    for label, fn_name, m in cases:
        timings = {}
        for name, mod in impls.items():
            fn = getattr(mod, fn_name)
            best = min(timeit.repeat(lambda: fn(m), number=args.number, repeat=args.repeat))
            timings[name] = best / args.number
        row(label, timings)

    timings = {}
    for name, mod in impls.items():
        best = min(timeit.repeat(lambda: _concurrence_loop(mod, states), number=1, repeat=args.repeat))
        timings[name] = best / len(states)
    row(f"concurrence loop x{len(states)}", timings)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
