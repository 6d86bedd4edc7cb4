"""Command line interface.

Exit codes: 0 success (including "false" verdicts), 2 parse errors,
3 validation failures (structurally bad nets, or category reasoning on a
net that is not more-or-less), 4 blown resource budgets.  The oracle
outcome budget can be set through MLCP_ORACLE_CAP; --budget flags win
over the environment.
"""

import argparse
import csv
import os
import random
import sys
from dataclasses import dataclass

from .analysis import check_more_or_less
from .dominance import (
    DEFAULT_NODE_CAP,
    PruningRules,
    dominates,
    dominates_naive,
    optimize,
    order_outcomes,
)
from .errors import (
    BudgetExceededError,
    MlcpError,
    ParseError,
    ResourceCapError,
)
from .gen import GenSpec, random_ml_net
from .model import (
    format_outcome,
    parse_cpnet,
    parse_outcome,
    serialize_cpnet,
    validate_structure,
)
from .oracle import DEFAULT_OUTCOME_BUDGET, induced_graph, oracle_dominates


@dataclass(frozen=True)
class BenchRecord:
    net: str
    better: str
    worse: str
    verdict: bool
    restricted_nodes: int
    naive_nodes: int


class _BenchDisagreement(Exception):
    def __init__(self, net, better, worse, detail):
        self.net = net
        self.better = better
        self.worse = worse
        self.detail = detail
        super().__init__(detail)


def _load_net(path):
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e)) from None
    return parse_cpnet(text)


def _oracle_budget(budget_arg):
    if budget_arg is not None:
        return budget_arg
    env = os.environ.get("MLCP_ORACLE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError("MLCP_ORACLE_CAP must be an integer, got %r" % env) from None
    return DEFAULT_OUTCOME_BUDGET


# -- commands -------------------------------------------------------------


def _cmd_validate(args):
    net = _load_net(args.net)
    report = validate_structure(net)
    print(report.render())
    if not report.ok:
        return 3
    ml = check_more_or_less(net)
    print(ml.render())
    if ml.ml:
        print("more-or-less: yes")
    else:
        print("more-or-less: no (offending: %s)" % ", ".join(ml.offending))
    return 0


def _cmd_optimize(args):
    net = _load_net(args.net)
    given = parse_outcome(net, args.given, total=False) if args.given else {}
    print(format_outcome(net, optimize(net, given)))
    return 0


def _cmd_order(args):
    net = _load_net(args.net)
    outcomes = [parse_outcome(net, s) for s in args.outcomes]
    for o in order_outcomes(net, outcomes):
        print(format_outcome(net, o))
    return 0


def _cmd_dominate(args):
    net = _load_net(args.net)
    better = parse_outcome(net, args.better)
    worse = parse_outcome(net, args.worse)
    if args.naive:
        result = dominates_naive(net, better, worse, node_cap=args.node_cap)
    else:
        least = {"auto": None, "on": True, "off": False}[args.least_var]
        rules = PruningRules(
            suffix_fixing=not args.no_suffix_fixing,
            forward_pruning=not args.no_forward_pruning,
            least_var=least,
        )
        result = dominates(
            net,
            better,
            worse,
            rules=rules,
            node_cap=args.node_cap,
            rep_exhaustive=args.rep_exhaustive,
        )
    print("true" if result.entailed else "false")
    if args.show_sequence and result.witness is not None:
        for o in result.witness:
            print(format_outcome(net, o))
    if args.stats:
        line = "nodes=%d depth=%d" % (result.nodes_expanded, result.max_depth)
        if result.witness is not None:
            line += " len=%d" % len(result.witness)
        print(line)
    return 0


def _cmd_oracle(args):
    net = _load_net(args.net)
    better = parse_outcome(net, args.better)
    worse = parse_outcome(net, args.worse)
    verdict = oracle_dominates(net, better, worse, budget=_oracle_budget(args.budget))
    print("true" if verdict else "false")
    return 0


def _cmd_graph(args):
    net = _load_net(args.net)
    graph = induced_graph(net, budget=_oracle_budget(args.budget))
    print(graph.to_dot())
    return 0


def _cmd_gen(args):
    try:
        spec = GenSpec(
            n_vars=args.vars,
            max_domain=args.domain,
            max_parents=args.parents,
            seed=args.seed,
            name=args.name,
        )
    except ValueError as e:
        raise ParseError(str(e)) from None
    sys.stdout.write(serialize_cpnet(random_ml_net(spec)))
    return 0


def bench_records(
    trials,
    n_vars,
    max_domain,
    max_parents,
    seed,
    node_cap=DEFAULT_NODE_CAP,
    check_oracle=False,
    oracle_budget=DEFAULT_OUTCOME_BUDGET,
):
    """One random net and one random query per trial, run through both
    the restricted and the naive search.  Any verdict disagreement
    (including with the oracle when check_oracle is set and the net is
    within budget) raises _BenchDisagreement carrying a reproducer."""
    records = []
    for trial in range(trials):
        net = random_ml_net(
            GenSpec(n_vars=n_vars, max_domain=max_domain, max_parents=max_parents, seed=seed + trial)
        )
        qrng = random.Random(seed * 1_000_003 + trial)
        sizes = [len(v.domain) for v in net.variables]
        worse_vals = [qrng.randrange(s) for s in sizes]
        while True:
            better_vals = [qrng.randrange(s) for s in sizes]
            if better_vals != worse_vals:
                break
        worse = {v.name: v.domain.value_at(x) for v, x in zip(net.variables, worse_vals)}
        better = {v.name: v.domain.value_at(x) for v, x in zip(net.variables, better_vals)}

        res = dominates(net, better, worse, node_cap=node_cap)
        naive = dominates_naive(net, better, worse, node_cap=node_cap)
        if res.entailed != naive.entailed:
            raise _BenchDisagreement(
                net,
                better,
                worse,
                "restricted=%s naive=%s" % (res.entailed, naive.entailed),
            )
        if check_oracle and net.outcome_count() <= oracle_budget:
            expected = oracle_dominates(net, better, worse, budget=oracle_budget)
            if expected != res.entailed:
                raise _BenchDisagreement(
                    net,
                    better,
                    worse,
                    "restricted=%s oracle=%s" % (res.entailed, expected),
                )
        records.append(
            BenchRecord(
                net.name,
                format_outcome(net, better),
                format_outcome(net, worse),
                res.entailed,
                res.nodes_expanded,
                naive.nodes_expanded,
            )
        )
    return records


def write_bench_csv(records, stream):
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(["net", "better", "worse", "verdict", "restricted_nodes", "naive_nodes"])
    for r in records:
        w.writerow(
            [
                r.net,
                r.better,
                r.worse,
                "true" if r.verdict else "false",
                r.restricted_nodes,
                r.naive_nodes,
            ]
        )


def _cmd_bench(args):
    try:
        records = bench_records(
            trials=args.trials,
            n_vars=args.vars,
            max_domain=args.domain,
            max_parents=args.parents,
            seed=args.seed,
            node_cap=args.node_cap,
            check_oracle=args.oracle,
            oracle_budget=_oracle_budget(args.budget),
        )
    except ValueError as e:
        raise ParseError(str(e)) from None
    except _BenchDisagreement as e:
        path = "bench-failure-%s.mlcp" % e.net.name
        with open(path, "w") as f:
            f.write("# disagreement: %s\n" % e.detail)
            f.write("# better: %s\n" % format_outcome(e.net, e.better))
            f.write("# worse: %s\n" % format_outcome(e.net, e.worse))
            f.write(serialize_cpnet(e.net))
        print(
            "bench: searches disagree on %s (%s); reproducer written to %s"
            % (e.net.name, e.detail, path),
            file=sys.stderr,
        )
        return 1
    if args.out:
        with open(args.out, "w") as f:
            write_bench_csv(records, f)
    else:
        write_bench_csv(records, sys.stdout)
    entailed = sum(1 for r in records if r.verdict)
    print("%d trials, %d entailed" % (len(records), entailed), file=sys.stderr)
    return 0


# -- parser ---------------------------------------------------------------


def _add_query_args(p):
    p.add_argument("net", help=".mlcp file")
    p.add_argument("better", help="outcome literal, e.g. X=1,Y=a")
    p.add_argument("worse", help="outcome literal")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="mlcp", description="Reasoning over more-or-less CP-nets."
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="structure and monotonicity report")
    p.add_argument("net")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("optimize", help="best completion of a partial assignment")
    p.add_argument("net")
    p.add_argument("--given", help="partial outcome literal")
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("order", help="arrange outcomes, most preferred first")
    p.add_argument("net")
    p.add_argument("outcomes", nargs="+", help="outcome literals")
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("dominate", help="category-restricted dominance query")
    _add_query_args(p)
    p.add_argument("--naive", action="store_true", help="full-space baseline search")
    p.add_argument("--show-sequence", action="store_true", help="print the witness")
    p.add_argument("--stats", action="store_true", help="print node and depth counts")
    p.add_argument("--rep-exhaustive", action="store_true",
                   help="sweep all free representative choices")
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--no-suffix-fixing", action="store_true")
    p.add_argument("--no-forward-pruning", action="store_true")
    p.add_argument("--least-var", choices=("auto", "on", "off"), default="auto")
    p.set_defaults(func=_cmd_dominate)

    p = sub.add_parser("oracle", help="ground-truth dominance by graph search")
    _add_query_args(p)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("graph", help="induced preference graph as DOT")
    p.add_argument("net")
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=_cmd_graph)

    p = sub.add_parser("gen", help="generate a random more-or-less net")
    p.add_argument("--vars", type=int, required=True)
    p.add_argument("--domain", type=int, default=4, help="max domain size")
    p.add_argument("--parents", type=int, default=2, help="max parents per variable")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default=None)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("bench", help="compare restricted and naive search")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--vars", type=int, default=4)
    p.add_argument("--domain", type=int, default=6, help="max domain size")
    p.add_argument("--parents", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    p.add_argument("--oracle", action="store_true",
                   help="cross-check verdicts against the oracle when in budget")
    p.add_argument("--budget", type=int, default=None, help="oracle outcome budget")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=_cmd_bench)
    return ap


def run_cli(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except (BudgetExceededError, ResourceCapError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 4
    except MlcpError as e:
        print("error: %s" % e, file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
