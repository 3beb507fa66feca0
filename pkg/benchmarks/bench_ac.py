"""Compare the compiled search kernel against the pure-Python fallback.

Run twice, the second time with POLYCSP_PURE_PYTHON=1, or just run this
script: it re-executes itself with the fallback forced and prints both
timings side by side.

    python benchmarks/bench_ac.py
"""

import json
import os
import subprocess
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def run_benchmarks():
    from polycsp import conditions, homsearch, indicator, treegen
    from polycsp import digraph as dg

    results = {}

    t0 = time.time()
    pools = treegen.RootedPools()
    counts = [sum(1 for _ in treegen.generate_core_trees(n, pools)) for n in range(1, 13)]
    assert counts[-1] == 226
    results["generate core trees to n=12"] = time.time() - t0

    trees = list(treegen.generate_core_trees(12, treegen.RootedPools()))
    maj = conditions.make_condition("Majority")
    t0 = time.time()
    yes = sum(1 for t in trees if indicator.satisfies(t, maj, mode="full").verdict == "Yes")
    assert yes == len(trees)
    results["majority on the 226 core trees (n=12)"] = time.time() - t0

    c23 = dg.disjoint_cycles([2, 3])
    t0 = time.time()
    assert homsearch.count_homomorphisms(dg.product(c23, c23), c23) == 2700
    results["count 2700 homomorphisms"] = time.time() - t0

    return results


def main():
    if os.environ.get("POLYCSP_PURE_PYTHON"):
        print(json.dumps(run_benchmarks()))
        return
    from polycsp.homsearch import KERNEL_NAME

    fast = run_benchmarks()
    env = dict(os.environ, POLYCSP_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, __file__], env=env, capture_output=True, text=True, check=True
    )
    slow = json.loads(out.stdout.strip().splitlines()[-1])

    print(f"{'benchmark':45s} {KERNEL_NAME:>10s} {'python':>10s} {'speedup':>8s}")
    for name, tf in fast.items():
        ts = slow[name]
        print(f"{name:45s} {tf:9.2f}s {ts:9.2f}s {ts / tf:7.1f}x")


if __name__ == "__main__":
    main()
