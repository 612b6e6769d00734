"""Compare the numba and numpy kernel backends.

    python benchmarks/bench_kernels.py [--repeat 5]

Kernel timings call both implementations directly; the end-to-end row runs
a bound sweep in a subprocess under each value of SICLAB_NUMBA.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from siclab import _kernels
from siclab.bounds import sample_states
from siclab.sic import depolarize_sic, rank_one_sic

SWEEP = (
    "import time; from siclab.bounds import check_bound_suite; from siclab.sic import depolarize_sic, rank_one_sic;"
    "sics=[depolarize_sic(rank_one_sic(d), l) for d in (2, 3) for l in (0.2, 0.4, 0.6, 0.8, 1.0)];"
    "check_bound_suite(sics[:1], n_states=2);"
    "t=time.perf_counter(); check_bound_suite(sics, n_states=200, orders=(0.5, 1, 2, 3, float('inf')), etas=(0.5,));"
    "print(time.perf_counter()-t)"
)


def best_of(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAS_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    rng = np.random.default_rng(0)
    rows = []
    for d in (2, 3, 4, 8):
        base = rank_one_sic(3) if d == 3 else None
        if base is None:
            # any d*d Hermitian stack exercises the kernels equally well
            elems = rng.standard_normal((d * d, d, d)) + 1j * rng.standard_normal((d * d, d, d))
            elems = 0.5 * (elems + elems.conj().transpose(0, 2, 1))
        else:
            elems = np.array(depolarize_sic(base, 0.5).elements)
        states = sample_states(d, 2000, rng)
        probs = rng.dirichlet(np.ones(d * d), size=2000)
        cases = {
            "born_probs": (lambda impl: lambda: impl(elems, states), "born_probs"),
            "power_sums": (lambda impl: lambda: impl(probs, 1.7), "power_sums"),
            "shannon_rows": (lambda impl: lambda: impl(probs), "shannon_rows"),
            "pair_cells": (lambda impl: lambda: impl(elems, elems, states[1]), "pair_cells"),
        }
        for name, (wrap, attr) in cases.items():
            nb = getattr(_kernels, f"{attr}_numba")
            npy = getattr(_kernels, f"{attr}_numpy")
            nb_fn, np_fn = wrap(nb), wrap(npy)
            nb_fn()  # compile
            number = 20 if name != "pair_cells" else 200
            t_nb = best_of(nb_fn, args.repeat, number)
            t_np = best_of(np_fn, args.repeat, number)
            rows.append((name, d, t_np, t_nb))

    print(f"{'kernel':<14}{'d':>3}{'numpy [ms]':>13}{'numba [ms]':>13}{'speedup':>9}")
    for name, d, t_np, t_nb in rows:
        print(f"{name:<14}{d:>3}{t_np * 1e3:>13.4f}{t_nb * 1e3:>13.4f}{t_np / t_nb:>9.2f}")

    print("\nend-to-end bound sweep (10 POVMs x 200 states):")
    for flag in ("0", "1"):
        env = dict(os.environ, SICLAB_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", SWEEP], env=env, capture_output=True, text=True, check=True)
        print(f"  SICLAB_NUMBA={flag}: {float(out.stdout):.3f} s")


if __name__ == "__main__":
    main()
