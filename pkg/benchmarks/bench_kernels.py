"""Timing comparison of the interpreted and jitted geometry kernels.

Runs each kernel on workloads taken from a real corona search (category
1 tile and its first corona) and prints per-call times for both
backends.  The jit set is warmed before timing so compilation cost does
not pollute the numbers.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from pentaheesch import corona, geom, kernels, solver


def _workload():
    p = solver.solve_category(1, {})
    pat = corona.first_corona_census(p)[0]
    placements = pat.all_placements()
    polys = [np.asarray(pl.pts, dtype=float) for pl in placements]
    others = np.stack(polys)
    centers = np.asarray([pl.center for pl in placements], dtype=float)
    radii = np.asarray([pl.radius for pl in placements], dtype=float)
    probe = polys[0] + np.array([0.05, 0.02])   # grazes its neighbours
    return {
        "poly": polys[0],
        "pair_hit": (polys[0], probe),
        "pair_miss": (polys[0], polys[0] + np.array([40.0, 0.0])),
        "others": others,
        "centers": centers,
        "radii": radii,
        "probe": probe,
        "probe_center": probe.mean(axis=0),
        "probe_radius": float(np.max(np.hypot(*(probe - probe.mean(axis=0)).T))),
    }


def _cases(w):
    a, b = w["pair_hit"]
    _, far = w["pair_miss"]
    m = w["others"].shape[0]
    return [
        ("poly_area", lambda f: f(w["poly"], w["poly"].shape[0])),
        ("transform", lambda f: f(w["poly"], 0.8, 0.6, 1.5, -2.0, True)),
        ("sat_separated hit", lambda f: f(a, b, 1e-9)),
        ("sat_separated miss", lambda f: f(a, far, 1e-9)),
        ("clip_area", lambda f: f(a, b)),
        ("overlap_area", lambda f: f(a, b, 1e-9)),
        ("first_blocking_overlap", lambda f: f(
            w["others"], m, w["centers"], w["radii"], w["probe"],
            w["probe_center"], w["probe_radius"], 1e-9, 1e-9)),
    ]


def _time(fn, repeat):
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()

    w = _workload()
    np_impls = kernels.numpy_impls()
    nb_impls = kernels.numba_impls()

    print("active backend: %s (override with %s=numpy|numba)"
          % (kernels.BACKEND, kernels.ENV_FLAG))
    print("%-24s %12s %12s %9s" % ("kernel", "numpy us", "numba us", "speedup"))
    for label, call in _cases(w):
        name = label.split()[0]
        call(nb_impls[name])            # warm the jit
        t_np = _time(lambda: call(np_impls[name]), args.repeat)
        t_nb = _time(lambda: call(nb_impls[name]), args.repeat)
        print("%-24s %12.2f %12.2f %8.1fx"
              % (label, t_np * 1e6, t_nb * 1e6, t_np / t_nb))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
