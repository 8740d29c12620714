"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage:  python benchmarks/bench_kernels.py [--repeat N]

Times the three hot kernels on representative workloads and reports the
speedup of the compiled extension (skipped if it is not built).
"""
import argparse
import time

import numpy as np

from fwlp import _kernels_pure
from fwlp.generate import generate_instance
from fwlp.model import SolverParams, SolverState

try:
    from fwlp import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_unit_cap(impl, n, repeat):
    rng = np.random.default_rng(0)
    ws = [np.ascontiguousarray(rng.normal(size=n)) for _ in range(64)]

    def run():
        for w in ws:
            impl.unit_cap_project(w)

    return _time(run, repeat) / len(ws)


def bench_eval_columns(impl, repeat):
    inst = generate_instance(1, 50, 10_000, density=0.2)
    p = inst.problem
    y = np.random.default_rng(1).normal(size=p.m)
    cols = np.arange(p.n, dtype=np.int64)

    def run():
        impl.eval_columns(p.indptr, p.indices, p.data, p.c, y, cols)

    return _time(run, repeat)


def bench_span(impl, nsteps, repeat):
    inst = generate_instance(2, 10, 20, density=0.5)
    p = inst.problem
    params = SolverParams(xi=inst.xi_min, eta=inst.eta_min, max_iters=nsteps)

    def run():
        st = SolverState.initial(p)
        impl.fwlpp_run_span(p.indptr, p.indices, p.data, p.b, p.c,
                            st.x_hat, st.y, st.ax, st.scale, st.k, nsteps,
                            params.xi, params.eta, params.refresh_period,
                            st.r_last, st.s_last)

    return _time(run, repeat) / nsteps


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    cases = [
        ("unit_cap_project (n=1e3)",
         lambda impl: bench_unit_cap(impl, 1000, args.repeat), 1e6, "us"),
        ("unit_cap_project (n=1e5)",
         lambda impl: bench_unit_cap(impl, 100_000, args.repeat), 1e3, "ms"),
        ("eval_columns (50x10k, full scan)",
         lambda impl: bench_eval_columns(impl, args.repeat), 1e3, "ms"),
        ("fwlpp step (10x20, in 5e4-step span)",
         lambda impl: bench_span(impl, 50_000, args.repeat), 1e6, "us"),
    ]

    print(f"{'kernel':40s} {'pure':>12s} {'compiled':>12s} {'speedup':>9s}")
    for name, fn, scale, unit in cases:
        tp = fn(_kernels_pure)
        if _kernels_cy is not None:
            tc = fn(_kernels_cy)
            print(f"{name:40s} {tp * scale:9.2f} {unit} "
                  f"{tc * scale:9.2f} {unit} {tp / tc:8.1f}x")
        else:
            print(f"{name:40s} {tp * scale:9.2f} {unit} "
                  f"{'not built':>12s} {'-':>9s}")


if __name__ == "__main__":
    main()
