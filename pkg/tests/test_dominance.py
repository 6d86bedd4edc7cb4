"""Category-restricted dominance: representatives, skip rewriting, the
search itself, and the ordering helpers."""

import random

import pytest

from mlcp import (
    BadRepMapError,
    FlipSequence,
    ModelError,
    NotImprovingError,
    NotIrreducibleError,
    NotMoreOrLessError,
    PruningRules,
    RepMap,
    RepresentativeSet,
    ResourceCapError,
    can_order_before,
    default_repmap,
    dominates,
    dominates_naive,
    flip_in_category,
    flip_out_category,
    is_skip_flipping,
    optimize,
    oracle_dominates,
    order_outcomes,
    parse_outcome,
    reachability_closure,
    reduce_to_skip,
    representative_candidates,
)
from mlcp.analysis import LESS, MORE

from conftest import all_outcomes


def seq_of(net, *texts):
    return FlipSequence.from_literals(net, texts)


# -- representatives ---------------------------------------------------------


def test_default_repmap_forced_and_free(fig4):
    o = lambda s: parse_outcome(fig4, s)
    # endpoints across the break: both are forced in
    rm = default_repmap(fig4, o("X=1,Y=a"), o("X=5,Y=b"))
    assert rm.for_var("X").values() == ("1", "5")
    assert rm.for_var("Y").values() == ("a", "b")
    # endpoints on the same side: better is in, the free slot sits just
    # across the break
    rm = default_repmap(fig4, o("X=4,Y=b"), o("X=6,Y=a"))
    assert rm.for_var("X").values() == ("3", "6")
    assert rm.for_var("Y").values() == ("a", "b")


def test_representative_set_helpers():
    rep = RepresentativeSet("X", "1", "5")
    assert rep.values() == ("1", "5")
    assert "1" in rep and "5" in rep and "3" not in rep
    assert rep.rep_for(LESS) == "1"
    assert rep.rep_for(MORE) == "5"


def test_repmap_unknown_variable():
    rm = RepMap((RepresentativeSet("X", "1", "5"),))
    with pytest.raises(BadRepMapError):
        rm.for_var("Y")


def test_candidates_forced_when_categories_differ(fig4):
    o = lambda s: parse_outcome(fig4, s)
    cands = representative_candidates(fig4, "X", o("X=1,Y=a"), o("X=5,Y=b"))
    assert [c.values() for c in cands] == [("1", "5")]


def test_candidates_sweep_the_free_category(fig4):
    o = lambda s: parse_outcome(fig4, s)
    cands = representative_candidates(fig4, "X", o("X=4,Y=b"), o("X=6,Y=a"))
    assert [c.values() for c in cands] == [("1", "6"), ("2", "6"), ("3", "6")]


# -- single flips --------------------------------------------------------------


def test_flip_out_category(fig4):
    o = parse_outcome(fig4, "X=2,Y=a")
    rep_x = RepresentativeSet("X", "1", "5")
    rep_y = RepresentativeSet("Y", "a", "b")
    assert flip_out_category(fig4, o, "X", rep_x) == parse_outcome(fig4, "X=5,Y=a")
    assert flip_out_category(fig4, o, "Y", rep_y) == parse_outcome(fig4, "X=2,Y=b")
    # at X=5 the Y flip to b would worsen, so no flip
    high = parse_outcome(fig4, "X=5,Y=a")
    assert flip_out_category(fig4, high, "Y", rep_y) is None


def test_flip_in_category(fig2):
    rep_price = RepresentativeSet("Price", "1", "1000")
    buy = parse_outcome(
        fig2, "Action=buy,Site=yahoo,Price=40,Payment=check,Transaction=direct"
    )
    flipped = flip_in_category(fig2, buy, "Price", rep_price)
    assert flipped["Price"] == "1"
    # a seller prefers high prices, so the same move is refused
    sell = dict(buy, Action="sell")
    assert flip_in_category(fig2, sell, "Price", rep_price) is None
    # already on the representative
    assert flip_in_category(fig2, flipped, "Price", rep_price) is None


def test_flip_rejects_misplaced_representative(fig4):
    o = parse_outcome(fig4, "X=2,Y=a")
    with pytest.raises(BadRepMapError):
        flip_in_category(fig4, o, "X", RepresentativeSet("X", "4", "6"))
    with pytest.raises(BadRepMapError):
        flip_out_category(fig4, o, "X", RepresentativeSet("X", "1", "2"))


# -- skip-flipping sequences ---------------------------------------------------


def test_skip_flipping_verdicts(fig4):
    o = lambda s: parse_outcome(fig4, s)
    rm = default_repmap(fig4, o("X=1,Y=a"), o("X=5,Y=b"))
    direct = seq_of(fig4, "X=1,Y=a", "X=1,Y=b", "X=5,Y=b")
    detour = seq_of(fig4, "X=1,Y=a", "X=2,Y=a", "X=2,Y=b", "X=5,Y=b")
    assert is_skip_flipping(fig4, direct, rm)
    assert not is_skip_flipping(fig4, detour, rm)  # lands on X=2, off the map


def test_skip_flipping_preconditions(fig4):
    o = lambda s: parse_outcome(fig4, s)
    rm = default_repmap(fig4, o("X=1,Y=a"), o("X=5,Y=b"))
    with pytest.raises(NotImprovingError):
        is_skip_flipping(fig4, seq_of(fig4, "X=2,Y=a", "X=1,Y=a"), rm)
    with pytest.raises(NotIrreducibleError):
        is_skip_flipping(fig4, seq_of(fig4, "X=1,Y=a", "X=2,Y=a", "X=3,Y=a"), rm)
    # endpoint constraint: the better endpoint must be a representative
    bad = RepMap((RepresentativeSet("X", "1", "4"), RepresentativeSet("Y", "a", "b")))
    with pytest.raises(BadRepMapError):
        is_skip_flipping(fig4, seq_of(fig4, "X=1,Y=a", "X=1,Y=b", "X=5,Y=b"), bad)


def test_reduce_to_skip_worked_example(fig4):
    o = lambda s: parse_outcome(fig4, s)
    detour = seq_of(fig4, "X=1,Y=a", "X=2,Y=a", "X=2,Y=b", "X=5,Y=b")
    reduced = reduce_to_skip(fig4, detour)
    assert list(reduced) == [o("X=1,Y=a"), o("X=1,Y=b"), o("X=5,Y=b")]
    rm = default_repmap(fig4, o("X=1,Y=a"), o("X=5,Y=b"))
    assert is_skip_flipping(fig4, reduced, rm)


def test_reduce_to_skip_preconditions(fig4):
    with pytest.raises(NotImprovingError):
        reduce_to_skip(fig4, seq_of(fig4, "X=2,Y=a", "X=1,Y=a"))
    with pytest.raises(NotIrreducibleError):
        reduce_to_skip(fig4, seq_of(fig4, "X=1,Y=a", "X=2,Y=a", "X=3,Y=a"))


def test_reduce_to_skip_on_harvested_paths(random_suite):
    # oracle shortest paths are irreducible; every one must rewrite cleanly
    from mlcp import oracle_path

    rng = random.Random(23)
    done = 0
    for net in random_suite[:10]:
        outs = all_outcomes(net)
        for _ in range(8):
            b, w = rng.sample(outs, 2)
            path = oracle_path(net, b, w)
            if path is None or len(path) < 2:
                continue
            reduced = reduce_to_skip(net, path)
            assert reduced[0] == w and reduced[-1] == b
            assert len(reduced) <= len(path)
            done += 1
    assert done >= 15


# -- the restricted search -----------------------------------------------------


def test_dominates_fixture_verdicts(fig4):
    o = lambda s: parse_outcome(fig4, s)
    res = dominates(fig4, o("X=5,Y=b"), o("X=1,Y=a"))
    assert res.entailed
    assert res.witness == (o("X=1,Y=a"), o("X=1,Y=b"), o("X=5,Y=b"))
    assert res.nodes_expanded == 4
    assert res.max_depth == 2
    assert res.witness_length == 3
    assert not dominates(fig4, o("X=1,Y=a"), o("X=5,Y=b")).entailed


def test_dominates_equal_outcomes(fig4):
    o = parse_outcome(fig4, "X=3,Y=b")
    res = dominates(fig4, o, dict(o))
    assert not res.entailed
    assert res.nodes_expanded == 0


def test_dominates_witness_is_improving(fig1, fig3, fig4, fig6b):
    rng = random.Random(5)
    seen = 0
    for net in (fig1, fig3, fig4, fig6b):
        outs = all_outcomes(net)
        for _ in range(40):
            b, w = rng.sample(outs, 2)
            res = dominates(net, b, w)
            if not res.entailed:
                continue
            from mlcp import is_improving_sequence

            assert res.witness[0] == w and res.witness[-1] == b
            assert is_improving_sequence(net, res.witness)
            seen += 1
    assert seen >= 20


def test_dominates_needs_more_or_less(fig6a):
    outs = all_outcomes(fig6a)
    with pytest.raises(NotMoreOrLessError) as e:
        dominates(fig6a, outs[0], outs[1])
    assert "meetingTime" in str(e.value)


def test_naive_search_works_without_monotonicity(fig6a):
    rng = random.Random(31)
    outs = all_outcomes(fig6a)
    for _ in range(60):
        b, w = rng.sample(outs, 2)
        assert dominates_naive(fig6a, b, w).entailed == oracle_dominates(fig6a, b, w)


def test_node_cap(fig2):
    best = parse_outcome(
        fig2, "Action=sell,Site=ebay,Price=1000,Payment=charge,Transaction=auction"
    )
    low = parse_outcome(
        fig2, "Action=sell,Site=yahoo,Price=1,Payment=check,Transaction=direct"
    )
    with pytest.raises(ResourceCapError):
        dominates_naive(fig2, best, low, node_cap=2)
    # the restricted search answers the same query in a handful of nodes
    res = dominates(fig2, best, low, node_cap=50)
    assert res.entailed


def test_rule_toggles_keep_verdicts(fig4, fig6b):
    rng = random.Random(11)
    combos = [
        PruningRules(suffix_fixing=False, forward_pruning=False),
        PruningRules(suffix_fixing=True, forward_pruning=False),
        PruningRules(suffix_fixing=False, forward_pruning=True),
        PruningRules(suffix_fixing=True, forward_pruning=True),
        PruningRules(least_var=True),
        PruningRules(suffix_fixing=False, forward_pruning=False, least_var=True),
    ]
    for net in (fig4, fig6b):
        outs = all_outcomes(net)
        for _ in range(25):
            b, w = rng.sample(outs, 2)
            verdicts = {dominates(net, b, w, rules=r).entailed for r in combos}
            assert len(verdicts) == 1


def test_rep_exhaustive_fixture_sweep(fig4, fig1):
    rng = random.Random(17)
    for net in (fig4, fig1):
        outs = all_outcomes(net)
        for _ in range(30):
            b, w = rng.sample(outs, 2)
            plain = dominates(net, b, w).entailed
            swept = dominates(net, b, w, rep_exhaustive=True).entailed
            assert plain == swept


def test_least_var_on_binary_tree_matches_oracle():
    from mlcp import parse_cpnet

    net = parse_cpnet(
        "NET btree\nVAR A : 0, 1\nVAR B : 0, 1\nVAR C : 0, 1\nVAR D : 0, 1\n"
        "CPT A\n  : ASC\n"
        "CPT B | A\n  A=0 : ASC\n  A=1 : DESC\n"
        "CPT C | A\n  A=0 : DESC\n  A=1 : ASC\n"
        "CPT D | B\n  B=0 : ASC\n  B=1 : DESC\n"
    )
    clo = reachability_closure(net)
    outs = all_outcomes(net)
    forced = PruningRules(least_var=True)
    for b in outs:
        for w in outs:
            if b == w:
                continue
            assert dominates(net, b, w, rules=forced).entailed == clo.dominates(b, w)
            # the default rules pick least-variable flipping here on their own
            assert dominates(net, b, w).entailed == clo.dominates(b, w)


# -- optimization and ordering ---------------------------------------------------


def test_optimize_full_and_partial(fig2):
    best = optimize(fig2)
    assert best == parse_outcome(
        fig2, "Action=sell,Site=ebay,Price=1000,Payment=charge,Transaction=auction"
    )
    buy = optimize(fig2, {"Action": "buy"})
    assert buy == parse_outcome(
        fig2, "Action=buy,Site=yahoo,Price=1,Payment=check,Transaction=direct"
    )
    # a full assignment is returned unchanged
    fixed = parse_outcome(
        fig2, "Action=buy,Site=ebay,Price=77,Payment=check,Transaction=direct"
    )
    assert optimize(fig2, fixed) == fixed


def test_optimize_rejects_bad_input(fig2):
    with pytest.raises(ModelError):
        optimize(fig2, {"Price": "1001"})
    with pytest.raises(ModelError):
        optimize(fig2, {"Quantity": "3"})


def test_optimize_is_undominated(fig4):
    clo = reachability_closure(fig4)
    best = optimize(fig4)
    for o in all_outcomes(fig4):
        assert not clo.dominates(o, best)


def test_can_order_before(fig4):
    o = lambda s: parse_outcome(fig4, s)
    assert can_order_before(fig4, o("X=6,Y=a"), o("X=1,Y=a"))
    assert not can_order_before(fig4, o("X=1,Y=a"), o("X=6,Y=a"))
    with pytest.raises(ModelError):
        can_order_before(fig4, o("X=1,Y=a"), o("X=1,Y=a"))


def test_order_outcomes_respects_dominance(fig4):
    clo = reachability_closure(fig4)
    outs = all_outcomes(fig4)
    rng = random.Random(3)
    for _ in range(40):
        subset = rng.sample(outs, 6)
        ordered = order_outcomes(fig4, subset)
        assert sorted(map(str, ordered)) == sorted(map(str, subset))
        for i, o in enumerate(ordered):
            for p in ordered[i + 1 :]:
                assert not clo.dominates(p, o)


def test_order_outcomes_rejects_duplicates(fig4):
    o = parse_outcome(fig4, "X=1,Y=a")
    with pytest.raises(ModelError):
        order_outcomes(fig4, [o, dict(o)])


def test_describe_renders_both_verdicts(fig4):
    o = lambda s: parse_outcome(fig4, s)
    yes = dominates(fig4, o("X=5,Y=b"), o("X=1,Y=a")).describe(fig4)
    assert yes.splitlines()[0] == "ENTAILED"
    assert "X=1,Y=b" in yes and "len=3" in yes
    no = dominates(fig4, o("X=1,Y=a"), o("X=5,Y=b")).describe(fig4)
    assert no.splitlines()[0] == "NOT-ENTAILED"
