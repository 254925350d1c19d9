#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times the three propagation routes and the synthesis gradient pass on
workloads shaped like the bundled fixtures, printing a table of per-step
costs and the speedup.  Run from the repository root:

    python benchmarks/bench_kernels.py [--s-points 256] [--steps 500]
"""

import argparse
import time

import numpy as np

import pathenc as pe
from pathenc import kernels
from pathenc.presets import three_level_system, three_qubit_system


def _time(fn, *args, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_route(name, system, scheme, eps, dt, route, s_points):
    dipoles = np.stack(system.dipoles)
    s_values = np.arange(min(s_points, scheme.sample_count), dtype=np.int64)
    args = (np.ascontiguousarray(system.energies), dipoles,
            np.ascontiguousarray(scheme.freq_multiples), scheme.n_exp,
            s_values, eps, dt, route)
    rows = []
    t_numpy = _time(kernels.propagate_sgrid_numpy, *args)
    rows.append(("numpy", t_numpy))
    try:
        from pathenc import _numba_kernels
        _numba_kernels.propagate_sgrid(*args)      # compile outside timing
        t_numba = _time(_numba_kernels.propagate_sgrid, *args)
        rows.append(("numba", t_numba))
    except ImportError:
        t_numba = None
    steps = len(s_values) * eps.shape[1]
    for backend, seconds in rows:
        print(f"{name:28s} {backend:6s} {seconds:8.3f} s "
              f"{seconds / steps * 1e6:8.2f} us/step")
    if t_numba:
        print(f"{name:28s} speedup numpy/numba: {t_numpy / t_numba:.1f}x")


def bench_grape(system, eps, dt, start, target):
    dipoles = np.stack(system.dipoles)
    args = (np.ascontiguousarray(system.energies), dipoles, eps, dt,
            start, target)
    t_numpy = _time(kernels.grape_pass_numpy, *args)
    print(f"{'gradient pass':28s} numpy  {t_numpy:8.3f} s")
    try:
        from pathenc import _numba_kernels
        _numba_kernels.grape_pass(*args)
        t_numba = _time(_numba_kernels.grape_pass, *args)
        print(f"{'gradient pass':28s} numba  {t_numba:8.3f} s")
        print(f"{'gradient pass':28s} speedup numpy/numba: "
              f"{t_numpy / t_numba:.1f}x")
    except ImportError:
        pass


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--s-points", type=int, default=256)
    parser.add_argument("--steps", type=int, default=500)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    tri = three_level_system()
    graph = pe.build_graph(tri)
    tree = pe.spanning_tree(graph)
    eps_tri = rng.uniform(-0.02, 0.02, (1, args.steps))

    print(f"backend selected by PATHENC_BACKEND: {kernels.active_backend()}")
    print(f"{args.s_points} s-points x {args.steps} time steps\n")
    bench_route("three-level Hermitian", tri, pe.assign_ohpe(graph, tree, 7),
                eps_tri, 3.0, kernels.ROUTE_HERMITIAN_SINGLE, args.s_points)
    bench_route("three-level non-Hermitian", tri,
                pe.assign_nhpe(graph, tree, 16), eps_tri, 3.0,
                kernels.ROUTE_GENERAL, args.s_points)

    cube = three_qubit_system()
    cube_graph = pe.build_graph(cube)
    cube_scheme = pe.assign_ohpe(cube_graph, pe.spanning_tree(cube_graph), 7)
    eps_cube = rng.uniform(-3000.0, 3000.0, (2, args.steps))
    bench_route("three-qubit Hermitian pair", cube, cube_scheme, eps_cube,
                4e-6, kernels.ROUTE_HERMITIAN_MULTI, args.s_points)

    bench_grape(cube, eps_cube, 4e-6, 0, 1)


if __name__ == "__main__":
    main()
