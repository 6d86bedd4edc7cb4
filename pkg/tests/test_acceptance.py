"""Acceptance gate: one test per published criterion.

Every test logs an ACCEPTANCE line into the terminal summary (see
conftest) so a run shows the full pass/fail slate at a glance.  Each
criterion states its own tolerance; the asserts here pin exactly that,
nothing looser and nothing stricter."""

import random
import statistics
from itertools import product
from time import perf_counter

from mlcp import (
    GenSpec,
    RepMap,
    RepresentativeSet,
    check_monotonic,
    check_more_or_less,
    default_repmap,
    dominates,
    is_improving_sequence,
    is_irreducible,
    is_skip_flipping,
    less_values,
    optimize,
    oracle_dominates,
    oracle_path,
    order_outcomes,
    parse_outcome,
    random_ml_net,
    reachability_closure,
    reduce_to_skip,
)
from mlcp.cli import bench_records
from mlcp._kernel import kernel_for
from mlcp._tables import net_tables
from mlcp.fixtures import load_fixture

from conftest import ACCEPTANCE_LINES, all_outcomes


def record(name, ok, detail):
    line = "ACCEPTANCE %s: %s (%s)" % (name, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def seq_of(net, *texts):
    from mlcp import FlipSequence

    return FlipSequence.from_literals(net, texts)


# 1. validator verdicts on the bundled nets, plus the Price break point


def test_validator_verdicts(fig1, fig2, fig3, fig6a, fig6b):
    t0 = perf_counter()
    problems = []
    for name, net in (("fig1", fig1), ("fig2", fig2), ("fig3", fig3), ("fig6b", fig6b)):
        if not check_more_or_less(net).ml:
            problems.append("%s not accepted" % name)
    rep = check_more_or_less(fig6a)
    if rep.ml or rep.offending != ("meetingTime",):
        problems.append("fig6a offending=%r" % (rep.offending,))
    price = check_monotonic(fig2, "Price")
    if not price.monotonic or price.c_value != "50":
        problems.append("Price c=%r" % (price.c_value,))
    if less_values(fig2, "Price") != tuple(str(i) for i in range(1, 51)):
        problems.append("Price less-category wrong")
    elapsed = perf_counter() - t0
    if elapsed >= 1.0:
        problems.append("took %.2fs" % elapsed)
    record(
        "validator-verdicts",
        not problems,
        "; ".join(problems) or "5 verdicts, break point 50, %.2fs" % elapsed,
    )


# 2. representative sets and skip-flipping on the two-variable worked example


def test_representative_replication(fig4):
    t0 = perf_counter()
    o = lambda s: parse_outcome(fig4, s)
    problems = []

    rm = default_repmap(fig4, o("X=1,Y=a"), o("X=5,Y=b"))
    if rm.for_var("X").values() != ("1", "5"):
        problems.append("Rep(X)=%r" % (rm.for_var("X").values(),))
    if rm.for_var("Y").values() != ("a", "b"):
        problems.append("Rep(Y)=%r" % (rm.for_var("Y").values(),))

    direct = seq_of(fig4, "X=1,Y=a", "X=1,Y=b", "X=5,Y=b")
    detour = seq_of(fig4, "X=1,Y=a", "X=2,Y=a", "X=2,Y=b", "X=5,Y=b")
    for label, seq, want in (("direct", direct, True), ("detour", detour, False)):
        if not is_improving_sequence(fig4, list(seq)):
            problems.append("%s not improving" % label)
        elif not is_irreducible(fig4, list(seq)):
            problems.append("%s not irreducible" % label)
        elif is_skip_flipping(fig4, seq, rm) != want:
            problems.append("%s skip-flipping != %s" % (label, want))

    from mlcp import representative_candidates

    cands = representative_candidates(fig4, "X", o("X=4,Y=b"), o("X=6,Y=a"))
    if [c.values() for c in cands] != [("1", "6"), ("2", "6"), ("3", "6")]:
        problems.append("candidates=%r" % [c.values() for c in cands])
    climb = seq_of(fig4, "X=4,Y=b", "X=4,Y=a", "X=6,Y=a")
    for cand in cands:
        rm2 = RepMap((cand, RepresentativeSet("Y", "a", "b")))
        if not is_skip_flipping(fig4, climb, rm2):
            problems.append("climb not skip under Rep(X)=%r" % (cand.values(),))

    elapsed = perf_counter() - t0
    if elapsed >= 1.0:
        problems.append("took %.2fs" % elapsed)
    record(
        "representative-replication",
        not problems,
        "; ".join(problems) or "all exact, %.2fs" % elapsed,
    )


# 3. restricted search equals the graph oracle, fixtures and random suite


def test_oracle_equivalence(fig1, fig3, fig4, random_suite):
    t0 = perf_counter()
    rng = random.Random(61)
    pairs = 0
    bad = 0

    for net in (fig1, fig3, fig4):
        outs = all_outcomes(net)
        for b in outs:
            for w in outs:
                if b == w:
                    continue
                if dominates(net, b, w).entailed != oracle_dominates(net, b, w):
                    bad += 1
                pairs += 1

    for net in random_suite:
        outs = all_outcomes(net)
        clo = reachability_closure(net)
        if len(outs) <= 150:
            queries = [(b, w) for b in outs for w in outs if b != w]
        else:
            queries = []
            while len(queries) < 3000:
                b, w = rng.sample(outs, 2)
                queries.append((b, w))
        for b, w in queries:
            if dominates(net, b, w).entailed != clo.dominates(b, w):
                bad += 1
            pairs += 1
        # the closure itself is cross-checked against the per-query search
        for _ in range(20):
            b, w = rng.sample(outs, 2)
            if clo.dominates(b, w) != oracle_dominates(net, b, w):
                bad += 1
            pairs += 1

    elapsed = perf_counter() - t0
    ok = bad == 0 and elapsed < 300.0
    record(
        "oracle-equivalence",
        ok,
        "%d disagreements over %d pairs, 53 nets, %.1fs" % (bad, pairs, elapsed),
    )


# 4. every harvested irreducible path rewrites to a skip-flipping sequence


def test_skip_rewrite_of_harvested_paths(fig1, fig3, fig4, random_suite):
    rng = random.Random(62)
    nets = [fig1, fig3, fig4] + list(random_suite)
    outcome_lists = [all_outcomes(net) for net in nets]
    harvested = 0
    failures = []
    attempts = 0
    while harvested < 210 and attempts < 12000:
        attempts += 1
        k = rng.randrange(len(nets))
        net, outs = nets[k], outcome_lists[k]
        b, w = rng.sample(outs, 2)
        path = oracle_path(net, b, w)
        if path is None or len(path) < 2:
            continue
        harvested += 1
        reduced = reduce_to_skip(net, path)
        if reduced[0] != w or reduced[-1] != b:
            failures.append("endpoints moved on %s" % net.name)
            continue
        rm = default_repmap(net, w, b)
        if not is_skip_flipping(net, reduced, rm):
            failures.append("not skip-flipping on %s" % net.name)
    ok = harvested >= 200 and not failures
    record(
        "skip-rewrite",
        ok,
        "; ".join(failures[:3])
        or "%d paths rewritten cleanly (%d attempts)" % (harvested, attempts),
    )


# 5. node counts: restricted never above naive, big-domain nets at least halved


def test_node_reduction_over_naive():
    configs = [
        dict(trials=80, n_vars=4, max_domain=8, max_parents=2, seed=7000),
        dict(trials=40, n_vars=3, max_domain=6, max_parents=2, seed=7100),
    ]
    above = 0
    total = 0
    ratios = []
    for cfg in configs:
        records = bench_records(**cfg)
        for trial, rec in enumerate(records):
            total += 1
            if rec.restricted_nodes > rec.naive_nodes:
                above += 1
            net = random_ml_net(
                GenSpec(
                    n_vars=cfg["n_vars"],
                    max_domain=cfg["max_domain"],
                    max_parents=cfg["max_parents"],
                    seed=cfg["seed"] + trial,
                )
            )
            if max(len(v.domain) for v in net.variables) >= 6:
                ratios.append(rec.naive_nodes / max(rec.restricted_nodes, 1))
    median = statistics.median(ratios)
    ok = above == 0 and median >= 2.0
    record(
        "node-reduction",
        ok,
        "%d/%d queries above naive, median reduction %.1fx on %d big-domain queries"
        % (above, total, median, len(ratios)),
    )


# 6. optimize's completion is never dominated by another completion


def test_optimal_completions(fig1, fig2, fig3, fig4, fig6b, random_suite):
    rng = random.Random(63)
    nets = [fig1, fig2, fig3, fig4, fig6b] + list(random_suite)
    violations = 0
    checked = 0
    for net in nets:
        t = net_tables(net)
        kern = kernel_for(net)
        names = [v.name for v in net.variables]
        domains = [v.domain.values for v in net.variables]
        for _ in range(20):
            partial = {
                name: rng.choice(dom)
                for name, dom in zip(names, domains)
                if rng.random() < 0.5
            }
            opt = optimize(net, partial)
            reach = kern.reach_set(t.encode(opt), net.outcome_count())
            assert reach is not None
            reach_codes = set(reach)
            free = [(n, d) for n, d in zip(names, domains) if n not in partial]
            for combo in product(*(d for _, d in free)):
                other = dict(partial)
                other.update(zip((n for n, _ in free), combo))
                if t.pack(t.encode(other)) in reach_codes:
                    violations += 1
            checked += 1
    ok = violations == 0
    record(
        "optimal-completion",
        ok,
        "%d dominated completions over %d partials on %d nets"
        % (violations, checked, len(nets)),
    )


# 7. order_outcomes never puts a dominated outcome ahead of its dominator


def test_ordering_consistency(random_suite):
    rng = random.Random(64)
    closures = {}
    trials = 0
    violations = 0
    while trials < 200:
        net = random_suite[trials % len(random_suite)]
        outs = all_outcomes(net)
        if len(outs) < 6:
            net = random_suite[(trials + 7) % len(random_suite)]
            outs = all_outcomes(net)
            if len(outs) < 6:
                trials += 1
                continue
        if id(net) not in closures:
            closures[id(net)] = reachability_closure(net)
        clo = closures[id(net)]
        subset = rng.sample(outs, 6)
        ordered = order_outcomes(net, subset)
        for i in range(len(ordered)):
            for j in range(i + 1, len(ordered)):
                if clo.dominates(ordered[j], ordered[i]):
                    violations += 1
        trials += 1
    ok = violations == 0
    record(
        "ordering-consistency",
        ok,
        "%d violations across %d trials" % (violations, trials),
    )


# 8. all-binary nets are always in scope and agree with the oracle


def test_binary_subsumption(binary_suite):
    rng = random.Random(65)
    not_ml = 0
    bad = 0
    pairs = 0
    for net in binary_suite:
        if not check_more_or_less(net).ml:
            not_ml += 1
            continue
        outs = all_outcomes(net)
        clo = reachability_closure(net)
        for b in outs:
            for w in outs:
                if b == w:
                    continue
                if dominates(net, b, w).entailed != clo.dominates(b, w):
                    bad += 1
                pairs += 1
        for _ in range(10):
            b, w = rng.sample(outs, 2)
            if clo.dominates(b, w) != oracle_dominates(net, b, w):
                bad += 1
            pairs += 1
    ok = not_ml == 0 and bad == 0
    record(
        "binary-subsumption",
        ok,
        "%d/50 rejected, %d disagreements over %d pairs" % (not_ml, bad, pairs),
    )
