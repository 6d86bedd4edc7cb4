"""Time the compiled kernel against the pure Python one.

Runs the same batch of dominance queries (restricted and naive) through
both backends on a set of generated nets and prints per-backend wall
times plus the speedup.  Node counts must agree exactly; this doubles
as a cheap parity check.

Usage: python benchmarks/compare_kernels.py [--trials N] [--vars N]
"""

import argparse
import random
import time

from mlcp._kernel import RULE_FORWARD, RULE_SUFFIX
from mlcp._kernel_py import Engine as PyEngine
from mlcp.dominance import _ml_context, _rep_indices
from mlcp.gen import GenSpec, random_ml_net

try:
    from mlcp._kernel_cy import Engine as CyEngine
except ImportError:
    CyEngine = None


def make_queries(args):
    """(tables, worse, better, c, rep_l, rep_m) tuples, one per trial."""
    queries = []
    for trial in range(args.trials):
        net = random_ml_net(
            GenSpec(n_vars=args.vars, max_domain=args.domain,
                    max_parents=args.parents, seed=args.seed + trial)
        )
        t, _, c_idx = _ml_context(net)
        qrng = random.Random(args.seed * 7_654_321 + trial)
        worse = [qrng.randrange(s) for s in t.dom]
        while True:
            better = [qrng.randrange(s) for s in t.dom]
            if better != worse:
                break
        rep_l, rep_m = _rep_indices(t, c_idx, worse, better)
        queries.append((t, worse, better, c_idx, rep_l, rep_m))
    return queries


def run(engine_cls, queries, node_cap):
    t0 = time.perf_counter()
    counts = []
    for t, worse, better, c, rep_l, rep_m in queries:
        eng = engine_cls(t)
        status, _, nodes, _ = eng.search_restricted(
            worse, better, c, rep_l, rep_m, RULE_SUFFIX | RULE_FORWARD, node_cap
        )
        nstatus, _, nnodes, _ = eng.search_naive(worse, better, node_cap)
        assert status == nstatus or -1 in (status, nstatus)
        counts.append((nodes, nnodes))
    return time.perf_counter() - t0, counts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--vars", type=int, default=5)
    ap.add_argument("--domain", type=int, default=6)
    ap.add_argument("--parents", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--node-cap", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3, help="best-of timing repeats")
    args = ap.parse_args()

    queries = make_queries(args)
    backends = [("pure", PyEngine)]
    if CyEngine is not None:
        backends.append(("compiled", CyEngine))
    else:
        print("compiled kernel not built; timing pure only")

    results = {}
    for name, cls in backends:
        best = None
        for _ in range(args.repeat):
            elapsed, counts = run(cls, queries, args.node_cap)
            best = elapsed if best is None else min(best, elapsed)
        results[name] = (best, counts)
        total_r = sum(c[0] for c in counts)
        total_n = sum(c[1] for c in counts)
        print("%-8s %8.3fs   restricted nodes %d   naive nodes %d"
              % (name, best, total_r, total_n))

    if "compiled" in results:
        if results["pure"][1] != results["compiled"][1]:
            raise SystemExit("node counts differ between backends")
        speedup = results["pure"][0] / results["compiled"][0]
        print("speedup: %.1fx" % speedup)


if __name__ == "__main__":
    main()
