"""Category-restricted dominance reasoning for more-or-less nets.

The key idea: when every variable is monotonic, a dominance query only
needs to consider one representative value per category per variable
(the query's own endpoint values, completed with a free representative
on the other side of the break point where the endpoints leave a
category uncovered).  The search space shrinks from the product of the
domain sizes to at most 3^n states, independent of domain size.

The search itself alternates a greedy pass that pulls variables sitting
outside their representative set onto the representative of their own
category (each variable can need this at most once), with branching on
category-crossing flips.  Three independently switchable rules ride on
top: suffix fixing and forward pruning cut branches, least-variable
flipping reorders them.

dominates_naive runs the same improving-flip search over the full
outcome space and is the baseline the restricted search is measured
against.
"""

from dataclasses import dataclass
from functools import cmp_to_key

from . import analysis
from ._kernel import (
    RULE_FORWARD,
    RULE_LEASTVAR,
    RULE_SUFFIX,
    kernel_for,
)
from ._tables import net_tables
from .errors import (
    BadRepMapError,
    ModelError,
    NotImprovingError,
    NotIrreducibleError,
    NotMoreOrLessError,
    ReductionError,
    RepIndependenceError,
    ResourceCapError,
)
from .model import format_outcome, lookup_ranking
from .oracle import FlipSequence, _outcomes_of, is_improving_sequence, is_irreducible

DEFAULT_NODE_CAP = 1_000_000


@dataclass(frozen=True)
class RepresentativeSet:
    """One representative value per category of one variable."""

    variable: str
    x_less: str
    x_more: str

    def values(self):
        return (self.x_less, self.x_more)

    def __contains__(self, token):
        return token == self.x_less or token == self.x_more

    def rep_for(self, category):
        return self.x_less if category == analysis.LESS else self.x_more


@dataclass(frozen=True)
class RepMap:
    """RepresentativeSet for every variable of a net."""

    reps: tuple

    def __post_init__(self):
        object.__setattr__(self, "_by_var", {r.variable: r for r in self.reps})

    def for_var(self, name):
        r = self._by_var.get(name)
        if r is None:
            raise BadRepMapError("no representatives for %s" % name)
        return r

    def __iter__(self):
        return iter(self.reps)


@dataclass(frozen=True)
class PruningRules:
    """Switches for the search-reduction rules.

    suffix_fixing and forward_pruning discard branches outright; both
    preserve completeness.  least_var is gentler: it reorders branches so
    the least variable still differing from the goal is flipped first.
    Pruning on that variable alone is unsound (even on binary chains a
    proof can need a detour through a variable that already agrees), so
    the rule only steers exploration order and never drops a branch.
    least_var None means automatic: on for binary tree-shaped nets, where
    the ordering tends to find witnesses with the fewest expansions, off
    otherwise."""

    suffix_fixing: bool = True
    forward_pruning: bool = True
    least_var: bool = None


@dataclass(frozen=True)
class DominanceResult:
    entailed: bool
    witness: tuple  # outcome dicts, worst first; None when not entailed
    nodes_expanded: int
    max_depth: int

    @property
    def witness_length(self):
        return len(self.witness) if self.witness is not None else None

    def describe(self, net):
        if not self.entailed:
            return "NOT-ENTAILED\nnodes=%d depth=%d" % (self.nodes_expanded, self.max_depth)
        lines = ["ENTAILED"]
        for o in self.witness:
            lines.append("  " + format_outcome(net, o))
        lines.append(
            "nodes=%d depth=%d len=%d"
            % (self.nodes_expanded, self.max_depth, len(self.witness))
        )
        return "\n".join(lines)


# -- context shared by the category-based operations --------------------


def _ml_context(net, report=None):
    if report is None:
        report = analysis.check_more_or_less(net)
    if not report.ml:
        raise NotMoreOrLessError(
            "net %s is not more-or-less (offending: %s)"
            % (net.name, ", ".join(report.offending))
        )
    t = net_tables(net)
    c_idx = [report.check(x).c_index for x in t.names]
    return t, report, c_idx


def _category_of(idx, c):
    return analysis.LESS if idx <= c else analysis.MORE


def _default_free(c, endpoint_is_less):
    """Free representative for the category the endpoints do not touch:
    the value just across the break point."""
    return c + 1 if endpoint_is_less else c


def _rep_indices(t, c_idx, w, b):
    """Default per-variable representative indices (less, more)."""
    rep_l = []
    rep_m = []
    for i in range(t.n):
        c = c_idx[i]
        wl = w[i] <= c
        bl = b[i] <= c
        if wl != bl:
            lo, hi = (w[i], b[i]) if wl else (b[i], w[i])
        else:
            free = _default_free(c, bl)
            lo, hi = (b[i], free) if bl else (free, b[i])
        rep_l.append(lo)
        rep_m.append(hi)
    return rep_l, rep_m


def _repmap_from_indices(net, t, rep_l, rep_m):
    reps = []
    for i, name in enumerate(t.names):
        dom = net.domain(name)
        reps.append(RepresentativeSet(name, dom.value_at(rep_l[i]), dom.value_at(rep_m[i])))
    return RepMap(tuple(reps))


def default_repmap(net, worse, better, report=None):
    """The representative map dominates() uses for this query."""
    t, _, c_idx = _ml_context(net, report)
    w = t.encode(worse)
    b = t.encode(better)
    rep_l, rep_m = _rep_indices(t, c_idx, w, b)
    return _repmap_from_indices(net, t, rep_l, rep_m)


def representative_candidates(net, name, outcome, better, report=None):
    """All admissible RepresentativeSets for one variable of a query.

    When outcome and better put the variable in different categories the
    set is forced.  Otherwise the free slot ranges over the untouched
    category, in comparison order."""
    t, report, c_idx = _ml_context(net, report)
    i = net.index(name)
    dom = net.domain(name)
    c = c_idx[i]
    v = dom.position(outcome[name])
    b = dom.position(better[name])
    vl = v <= c
    bl = b <= c
    if vl != bl:
        lo, hi = (v, b) if vl else (b, v)
        return [RepresentativeSet(name, dom.value_at(lo), dom.value_at(hi))]
    out = []
    if bl:
        frees = range(c + 1, len(dom))
    else:
        frees = range(0, c + 1)
    for f in frees:
        lo, hi = (b, f) if bl else (f, b)
        out.append(RepresentativeSet(name, dom.value_at(lo), dom.value_at(hi)))
    return out


def _check_rep_categories(net, rep, c_idx, t, i):
    dom = net.domain(rep.variable)
    if dom.position(rep.x_less) > c_idx[i]:
        raise BadRepMapError(
            "%s: %s is not in the less category" % (rep.variable, rep.x_less)
        )
    if dom.position(rep.x_more) <= c_idx[i]:
        raise BadRepMapError(
            "%s: %s is not in the more category" % (rep.variable, rep.x_more)
        )


def _check_repmap(net, repmap, first, last, t, c_idx):
    """Enforce the endpoint constraints: the better endpoint's value is
    always a representative, the worse endpoint's exactly when its
    category differs or the values coincide."""
    for i, name in enumerate(t.names):
        rep = repmap.for_var(name)
        _check_rep_categories(net, rep, c_idx, t, i)
        dom = net.domain(name)
        b = last[name]
        v = first[name]
        if b not in rep:
            raise BadRepMapError("%s: better value %s is not a representative" % (name, b))
        cats_differ = (dom.position(v) <= c_idx[i]) != (dom.position(b) <= c_idx[i])
        if cats_differ or v == b:
            if v not in rep:
                raise BadRepMapError(
                    "%s: start value %s must be a representative" % (name, v)
                )
        elif v in rep:
            raise BadRepMapError(
                "%s: start value %s must not be a representative" % (name, v)
            )


# -- single flips --------------------------------------------------------


def flip_in_category(net, outcome, name, rep, report=None):
    """Flip name to its own category's representative when that improves
    the outcome; None when it is already there or would not improve."""
    t, report, c_idx = _ml_context(net, report)
    i = net.index(name)
    _check_rep_categories(net, rep, c_idx, t, i)
    dom = net.domain(name)
    v = outcome[name]
    target = rep.rep_for(_category_of(dom.position(v), c_idx[i]))
    if target == v:
        return None
    ranking = lookup_ranking(net, name, outcome)
    if ranking.index(target) < ranking.index(v):
        out = dict(outcome)
        out[name] = target
        return out
    return None


def flip_out_category(net, outcome, name, rep, report=None):
    """Flip name to the other category's representative when that
    improves the outcome; None otherwise."""
    t, report, c_idx = _ml_context(net, report)
    i = net.index(name)
    _check_rep_categories(net, rep, c_idx, t, i)
    dom = net.domain(name)
    v = outcome[name]
    cat = _category_of(dom.position(v), c_idx[i])
    target = rep.rep_for(analysis.MORE if cat == analysis.LESS else analysis.LESS)
    ranking = lookup_ranking(net, name, outcome)
    if ranking.index(target) < ranking.index(v):
        out = dict(outcome)
        out[name] = target
        return out
    return None


# -- skip-flipping sequences ----------------------------------------------


def is_skip_flipping(net, seq, repmap, report=None):
    """True when every flip of the sequence lands on a representative.

    Preconditions, each with its own error: the sequence must be an
    improving flip sequence (NotImprovingError), irreducible
    (NotIrreducibleError), and repmap must satisfy the endpoint
    constraints (BadRepMapError)."""
    outcomes = _outcomes_of(seq)
    if not is_improving_sequence(net, outcomes):
        raise NotImprovingError("sequence is not an improving flip sequence")
    if not is_irreducible(net, outcomes):
        raise NotIrreducibleError("sequence is reducible")
    t, report, c_idx = _ml_context(net, report)
    _check_repmap(net, repmap, outcomes[0], outcomes[-1], t, c_idx)
    for a, b in zip(outcomes, outcomes[1:]):
        for name in t.names:
            if a[name] != b[name]:
                if b[name] not in repmap.for_var(name):
                    return False
                break
    return True


def reduce_to_skip(net, seq, repmap=None, report=None):
    """Rewrite an irreducible improving sequence into a skip-flipping one
    over repmap (the default map for its endpoints when not given).

    Mirrors the original flips one by one: each flip is redirected to the
    representative of the category it entered, dropped when the mapped
    outcome already sits there or when redirection would not improve.
    Interior blocks that become cuttable are cut.  The result starts and
    ends at the original endpoints.  Violations of any of that raise
    ReductionError; they are never repaired silently."""
    outcomes = _outcomes_of(seq)
    if not is_improving_sequence(net, outcomes):
        raise NotImprovingError("sequence is not an improving flip sequence")
    if not is_irreducible(net, outcomes):
        raise NotIrreducibleError("sequence is reducible")
    t, report, c_idx = _ml_context(net, report)
    first, last = outcomes[0], outcomes[-1]
    if repmap is None:
        w = t.encode(first)
        b = t.encode(last)
        rep_l, rep_m = _rep_indices(t, c_idx, w, b)
        repmap = _repmap_from_indices(net, t, rep_l, rep_m)
    _check_repmap(net, repmap, first, last, t, c_idx)

    rep_idx = []
    for i, name in enumerate(t.names):
        rep = repmap.for_var(name)
        dom = net.domain(name)
        rep_idx.append((dom.position(rep.x_less), dom.position(rep.x_more)))

    values = [t.encode(o) for o in outcomes]
    m = values[0].copy()
    reduced = [m.copy()]
    for a, b in zip(values, values[1:]):
        i = next(x for x in range(t.n) if a[x] != b[x])
        target = rep_idx[i][0] if b[i] <= c_idx[i] else rep_idx[i][1]
        if target == m[i]:
            continue
        if t.improving(i, m, target):
            m[i] = target
            reduced.append(m.copy())

    # cut interior blocks that became single improving flips
    cut = True
    while cut:
        cut = False
        k = len(reduced)
        for i in range(k):
            for j in range(k - 1, i + 1, -1):
                diff = [x for x in range(t.n) if reduced[i][x] != reduced[j][x]]
                if len(diff) == 1 and t.improving(diff[0], reduced[i], reduced[j][diff[0]]):
                    reduced = reduced[: i + 1] + reduced[j:]
                    cut = True
                    break
            if cut:
                break

    result = [t.decode(v) for v in reduced]
    if result[0] != first or result[-1] != last:
        raise ReductionError("rewritten sequence does not keep the endpoints")
    if not is_improving_sequence(net, result):
        raise ReductionError("rewritten sequence is not improving")
    if not is_irreducible(net, result):
        raise ReductionError("rewritten sequence is reducible")
    if not is_skip_flipping(net, result, repmap, report):
        raise ReductionError("rewritten sequence leaves the representative set")
    return FlipSequence(tuple(result))


# -- dominance queries -----------------------------------------------------


def _rules_mask(net, t, rules):
    if rules is None:
        rules = PruningRules()
    mask = 0
    if rules.suffix_fixing:
        mask |= RULE_SUFFIX
    if rules.forward_pruning:
        mask |= RULE_FORWARD
    least = rules.least_var
    if least is None:
        least = t.tree and all(d == 2 for d in t.dom)
    if least:
        mask |= RULE_LEASTVAR
    return mask


def _witness_outcomes(t, w, flips):
    values = list(w)
    out = [t.decode(values)]
    for i, target in flips:
        values[i] = target
        out.append(t.decode(values))
    return tuple(out)


def dominates(
    net,
    better,
    worse,
    rules=None,
    node_cap=DEFAULT_NODE_CAP,
    rep_exhaustive=False,
    report=None,
):
    """Category-restricted dominance: does the net entail better > worse?

    Equal outcomes are never entailed (strict semantics).  Raises
    NotMoreOrLessError on nets with a non-monotonic variable and
    ResourceCapError past node_cap.  With rep_exhaustive=True the query
    is re-run once per admissible free representative per variable, and
    any verdict flip raises RepIndependenceError."""
    t, report, c_idx = _ml_context(net, report)
    w = t.encode(worse)
    b = t.encode(better)
    if w == b:
        return DominanceResult(False, None, 0, 0)
    rep_l, rep_m = _rep_indices(t, c_idx, w, b)
    mask = _rules_mask(net, t, rules)
    kernel = kernel_for(net)

    def run(rl, rm):
        status, flips, nodes, depth = kernel.search_restricted(
            w, b, c_idx, rl, rm, mask, node_cap
        )
        if status < 0:
            raise ResourceCapError(
                "dominance search expanded %d nodes, cap is %d" % (nodes, node_cap),
                nodes=nodes,
            )
        return status, flips, nodes, depth

    status, flips, nodes, depth = run(rep_l, rep_m)
    result = DominanceResult(
        bool(status),
        _witness_outcomes(t, w, flips) if status else None,
        nodes,
        depth,
    )

    if rep_exhaustive:
        for i in range(t.n):
            c = c_idx[i]
            if (w[i] <= c) != (b[i] <= c):
                continue  # forced set, nothing to sweep
            frees = range(c + 1, t.dom[i]) if b[i] <= c else range(0, c + 1)
            for f in frees:
                if f == (rep_m[i] if b[i] <= c else rep_l[i]):
                    continue
                rl = rep_l.copy()
                rm = rep_m.copy()
                if b[i] <= c:
                    rm[i] = f
                else:
                    rl[i] = f
                other_status, _, _, _ = run(rl, rm)
                if bool(other_status) != result.entailed:
                    dom = net.domain(t.names[i])
                    raise RepIndependenceError(
                        "verdict for %s changed with free representative %s of %s"
                        % (net.name, dom.value_at(f), t.names[i])
                    )
    return result


def dominates_naive(net, better, worse, node_cap=DEFAULT_NODE_CAP):
    """Improving-flip search over the full outcome space.  The baseline
    the restricted search is compared against; no monotonicity needed."""
    t = net_tables(net)
    w = t.encode(worse)
    b = t.encode(better)
    if w == b:
        return DominanceResult(False, None, 0, 0)
    status, flips, nodes, depth = kernel_for(net).search_naive(w, b, node_cap)
    if status < 0:
        raise ResourceCapError(
            "dominance search expanded %d nodes, cap is %d" % (nodes, node_cap),
            nodes=nodes,
        )
    return DominanceResult(
        bool(status),
        _witness_outcomes(t, w, flips) if status else None,
        nodes,
        depth,
    )


# -- outcome optimization and ordering -------------------------------------


def optimize(net, partial=None):
    """Best completion of a partial assignment: sweep the variables in
    topological order, keeping given values and taking each CPT's most
    preferred value otherwise."""
    partial = dict(partial or {})
    for name, tok in partial.items():
        dom = net.domain(name)  # raises on unknown variable
        if tok not in dom:
            raise ModelError("unknown value %r for %s" % (tok, name))
    out = {}
    for name in net.topological_order:
        if name in partial:
            out[name] = partial[name]
        else:
            out[name] = lookup_ranking(net, name, out)[0]
    return {v.name: out[v.name] for v in net.variables}


def can_order_before(net, o, p):
    """Certificate that p does not dominate o, so o can safely precede p:
    some variable whose parents agree in both outcomes prefers o's value.
    Sound but one-sided; False only means no certificate was found."""
    t = net_tables(net)
    a = t.encode(o)
    b = t.encode(p)
    if a == b:
        raise ModelError("outcomes are equal")
    for i in range(t.n):
        if a[i] == b[i]:
            continue
        if any(a[par] != b[par] for par in t.parents[i]):
            continue
        ri = t.match_row(i, a)
        if t.pref_pos(i, ri, a[i]) < t.pref_pos(i, ri, b[i]):
            return True
    return False


def order_outcomes(net, outcomes):
    """Arrange outcomes most preferred first under one fixed consistent
    ranking.

    Two outcomes are compared at the first variable, in topological
    order, where they differ; everything before it agrees, so in
    particular that variable's parents agree, and its CPT row for the
    shared parent assignment decides.  This is a total order, and every
    improving flip raises an outcome in it, so an outcome entailed
    better than another can never be placed after it."""
    outcomes = list(outcomes)
    t = net_tables(net)
    coded = []
    seen = set()
    for o in outcomes:
        a = t.encode(o)
        code = t.pack(a)
        if code in seen:
            raise ModelError("duplicate outcome %s" % format_outcome(net, o))
        seen.add(code)
        coded.append((a, o))

    def prefer(x, y):
        for i in t.topo:
            if x[0][i] == y[0][i]:
                continue
            ri = t.match_row(i, x[0])
            return -1 if t.pref_pos(i, ri, x[0][i]) < t.pref_pos(i, ri, y[0][i]) else 1
        return 0

    coded.sort(key=cmp_to_key(prefer))
    return [o for _, o in coded]
