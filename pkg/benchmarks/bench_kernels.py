"""Compare the compiled and numpy kernel backends.

    python benchmarks/bench_kernels.py [--sizes 256 1024 2048] [--repeat 3]

Reports the best wall time per call and the max difference between backends.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from fraclayer._kernels import available_backends
from fraclayer.caputo import Mesh
from fraclayer.solver import ProblemSpec, assemble


def bench(fn, repeat: int) -> float:
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[256, 1024, 2048])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = available_backends()
    names = sorted(backends)
    print(f"backends: {', '.join(names)}")
    print(f"{'kernel':<18}{'N':>6}" + "".join(f"{n + ' [ms]':>16}" for n in names) + f"{'speedup':>10}{'max diff':>12}")
    for n in args.sizes:
        mesh = Mesh.graded(n, 2.0, "both")
        x = mesh.nodes
        system = assemble(ProblemSpec.reaction(0.5, 1e-3), mesh)
        cases = {
            "caputo_kernel": lambda mod: mod.caputo_kernel(x, 1.5),
            "hessenberg_solve": lambda mod: mod.hessenberg_solve(system.matrix, system.rhs)[0],
        }
        for label, call in cases.items():
            times = {name: bench(lambda mod=backends[name]: call(mod), args.repeat) for name in names}
            outputs = [np.asarray(call(backends[name])) for name in names]
            diff = max(float(np.max(np.abs(o - outputs[0]))) for o in outputs)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            row = "".join(f"{1e3 * times[name]:>16.3f}" for name in names)
            print(f"{label:<18}{n:>6}{row}{speed:>10.1f}{diff:>12.2e}")


if __name__ == "__main__":
    main()
