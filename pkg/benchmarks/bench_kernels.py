"""Time the numba kernels against the pure-numpy/python fallback.

Each workload runs in a fresh interpreter, once with numba and once with
WANGWEAVE_NO_NUMBA=1.  The first call inside the child warms the JIT, so
the reported time is the steady state; the warm-up time is listed separately.

    python benchmarks/bench_kernels.py            # quick workloads
    python benchmarks/bench_kernels.py --full     # adds the 71x9 refutation
"""
import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json, sys, time
from wangweave import SolveInstance, count_solutions, solve_rectangle, USE_NUMBA
from wangweave.jeandelrao import builtin, rao_instance
from wangweave.solver import _dominoes, dominoes_with_surrounding

def dominoes(name, r):
    _dominoes.cache_clear()
    T = builtin(name)
    return len(dominoes_with_surrounding(T, 1, r)) + len(dominoes_with_surrounding(T, 2, r))

def ac():
    return int(SolveInstance(builtin("T4p"), 71, 9, {(35, 4): 24}).domains("ac").sum())

def count():
    return count_solutions(SolveInstance(builtin("T0"), 6, 4))

def rao():
    return repr(solve_rectangle(rao_instance(), propagation="sac"))

work = {
    "dominoes T3 r=3": lambda: dominoes("T3", 3),
    "dominoes T5 r=3": lambda: dominoes("T5", 3),
    "arc consistency 71x9": ac,
    "count tilings 6x4 over T0": count,
    "refute 71x9 (sac + dlx)": rao,
}[sys.argv[1]]
t = time.perf_counter()
count_solutions(SolveInstance(builtin("T0"), 2, 2))
SolveInstance(builtin("T0"), 3, 3).domains("sac")
warm = time.perf_counter() - t
t = time.perf_counter()
out = work()
print(json.dumps({"numba": USE_NUMBA, "warmup": warm, "seconds": time.perf_counter() - t, "result": out}))
"""

QUICK = ["dominoes T3 r=3", "dominoes T5 r=3", "arc consistency 71x9", "count tilings 6x4 over T0"]
FULL = QUICK + ["refute 71x9 (sac + dlx)"]


def run(name, numba, timeout):
    env = dict(os.environ)
    env.pop("WANGWEAVE_NO_NUMBA", None)
    if not numba:
        env["WANGWEAVE_NO_NUMBA"] = "1"
    t = time.perf_counter()
    try:
        p = subprocess.run([sys.executable, "-c", CHILD, name], env=env, capture_output=True, text=True,
                           timeout=timeout, check=True)
    except subprocess.TimeoutExpired:
        return {"numba": numba, "seconds": None, "warmup": None, "result": "timeout",
                "wall": time.perf_counter() - t}
    doc = json.loads(p.stdout.strip().splitlines()[-1])
    doc["wall"] = time.perf_counter() - t
    return doc


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--full", action="store_true", help="include the 71x9 refutation")
    ap.add_argument("--timeout", type=float, default=900, help="seconds per child run")
    ap.add_argument("--json", dest="json_path", default=None, help="write raw results here")
    args = ap.parse_args()
    rows = []
    print(f"{'workload':28} {'numba s':>9} {'fallback s':>11} {'speedup':>8}  result")
    for name in FULL if args.full else QUICK:
        a = run(name, True, args.timeout)
        b = run(name, False, args.timeout)
        if a["result"] != b["result"] and "timeout" not in (a["result"], b["result"]):
            sys.exit(f"{name}: engines disagree ({a['result']} vs {b['result']})")
        fast, slow = a["seconds"], b["seconds"]
        speed = f"{slow / fast:7.1f}x" if fast and slow else "      -"
        fmt = lambda v: f"{v:9.3f}" if v is not None else "  timeout"
        print(f"{name:28} {fmt(fast)} {fmt(slow):>11} {speed:>8}  {a['result']}")
        rows.append({"workload": name, "numba": a, "fallback": b})
    if args.json_path:
        with open(args.json_path, "w") as fh:
            json.dump(rows, fh, indent=1)


if __name__ == "__main__":
    main()
