"""Compare the numba and numpy pivoting kernels.

Two workloads: raw LP solves on random dense programs of growing size, and
the support-function queries behind the retraction suite.  Both kernels must
return identical outcomes; only wall time differs.

    python benchmarks/bench_kernels.py --sizes 8 16 32 --repeat 3
"""

from __future__ import annotations

import argparse
import random
import time
from fractions import Fraction

from prevlab.fuzz import case_rs_identity, run_case, trial_rng
from prevlab.lp import LE, LinProg, lp_solve


def dense_lp(rng: random.Random, n: int) -> LinProg:
    # feasible and bounded: nonnegative rows with positive right-hand sides
    cons = [([Fraction(rng.randint(0, 9), rng.randint(1, 3)) for _ in range(n)], LE, Fraction(rng.randint(5, 40))) for _ in range(n)]
    return LinProg.build(n, [Fraction(rng.randint(1, 9)) for _ in range(n)], cons)


def time_solves(progs, kernel: str, repeat: int) -> tuple[float, list]:
    best, outs = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        outs = [lp_solve(p, verify=False, kernel=kernel) for p in progs]
        best = min(best, time.perf_counter() - t0)
    return best, outs


def time_rs(trials: int, kernel: str) -> float:
    import os

    os.environ["PREVLAB_KERNEL"] = kernel
    t0 = time.perf_counter()
    for i in range(trials):
        assert run_case(case_rs_identity(trial_rng("bench", 0, i), i, 5, 4))["verdict"] == "pass"
    return time.perf_counter() - t0


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[8, 16, 24, 32])
    ap.add_argument("--count", type=int, default=20, help="programs per size")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--rs-trials", type=int, default=90)
    args = ap.parse_args(argv)

    lp_solve(dense_lp(random.Random(0), 3), kernel="numba")  # JIT warm-up
    print(f"{'size':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        rng = random.Random(n)
        progs = [dense_lp(rng, n) for _ in range(args.count)]
        t_nb, out_nb = time_solves(progs, "numba", args.repeat)
        t_np, out_np = time_solves(progs, "numpy", args.repeat)
        assert out_nb == out_np, "kernels disagree"
        print(f"{n:>6} {t_nb:>10.3f} {t_np:>10.3f} {t_np / t_nb:>8.2f}")

    t_nb, t_np = time_rs(args.rs_trials, "numba"), time_rs(args.rs_trials, "numpy")
    print(f"\nretraction workload ({args.rs_trials} instances): numba {t_nb:.2f}s, numpy {t_np:.2f}s, speedup {t_np / t_nb:.2f}")


if __name__ == "__main__":
    main()
