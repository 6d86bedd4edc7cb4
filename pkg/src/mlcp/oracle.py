"""Ground-truth preference semantics at desk scale.

The induced preference graph has one node per outcome and one edge per
improving flip (worse to better).  Dominance "better over worse" means
better is reachable from worse; a consistent total ranking is a linear
extension of the graph.  Everything here enumerates real outcomes, so
operations are budgeted: eager ones fail fast on the full product, lazy
ones give up once they have visited too many outcomes.
"""

from dataclasses import dataclass

from ._kernel import kernel_for
from ._tables import net_tables
from .errors import BudgetExceededError, MlcpError, ModelError, NotImprovingError

DEFAULT_OUTCOME_BUDGET = 100_000


@dataclass(frozen=True)
class FlipSequence:
    """Outcomes one flip apart, worst first."""

    outcomes: tuple

    @classmethod
    def from_literals(cls, net, texts):
        from .model import parse_outcome

        return cls(tuple(parse_outcome(net, t) for t in texts))

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __getitem__(self, i):
        return self.outcomes[i]


@dataclass(frozen=True)
class TotalRanking:
    """A total order over all outcomes, most preferred first."""

    outcomes: tuple

    def __len__(self):
        return len(self.outcomes)

    def __iter__(self):
        return iter(self.outcomes)

    def __getitem__(self, i):
        return self.outcomes[i]


def _outcomes_of(seq):
    if isinstance(seq, (FlipSequence, TotalRanking)):
        return seq.outcomes
    return tuple(seq)


def improving_flips(net, outcome):
    """All single-variable improvements of outcome, in topological
    variable order and most preferred value first."""
    t = net_tables(net)
    values = t.encode(outcome)
    out = []
    for i in t.topo:
        name = t.names[i]
        dom = net.domain(name)
        for target in t.improving_targets(i, values):
            out.append((name, dom.value_at(target)))
    return out


class PreferenceGraph:
    """The induced preference graph, nodes eager and edges lazy.

    Nodes are all outcomes; edges are improving flips, directed from the
    worse outcome to the better one.  Edge storage is never materialized,
    which keeps thousand-value domains affordable."""

    def __init__(self, net):
        self.net = net
        self.tables = net_tables(net)

    @property
    def node_count(self):
        return self.tables.product

    def outcomes(self):
        """All outcomes in mixed-radix code order."""
        t = self.tables
        for code in range(t.product):
            yield t.decode(t.unpack(code))

    def successors(self, outcome):
        t = self.tables
        values = t.encode(outcome)
        out = []
        for i in t.topo:
            for target in t.improving_targets(i, values):
                child = values.copy()
                child[i] = target
                out.append(t.decode(child))
        return out

    def edges(self):
        for outcome in self.outcomes():
            for succ in self.successors(outcome):
                yield outcome, succ

    def has_edge(self, worse, better):
        t = self.tables
        a = t.encode(worse)
        b = t.encode(better)
        diff = [i for i in range(t.n) if a[i] != b[i]]
        if len(diff) != 1:
            return False
        return t.improving(diff[0], a, b[diff[0]])

    def is_acyclic(self):
        return kernel_for(self.net).check_acyclic()

    def to_dot(self):
        from .model import format_outcome

        lines = ["digraph \"%s\" {" % self.net.name]
        for outcome in self.outcomes():
            lines.append("  \"%s\";" % format_outcome(self.net, outcome))
        for worse, better in self.edges():
            lines.append(
                "  \"%s\" -> \"%s\";"
                % (format_outcome(self.net, worse), format_outcome(self.net, better))
            )
        lines.append("}")
        return "\n".join(lines)


def induced_graph(net, budget=DEFAULT_OUTCOME_BUDGET):
    """PreferenceGraph over all outcomes; fails fast when the outcome
    product exceeds the budget."""
    t = net_tables(net)
    if t.product > budget:
        raise BudgetExceededError(
            "induced graph needs %d outcomes, budget is %d" % (t.product, budget),
            count=t.product,
        )
    return PreferenceGraph(net)


def oracle_dominates(net, better, worse, budget=DEFAULT_OUTCOME_BUDGET):
    """Reachability query on the induced graph, expanded lazily so it can
    run on nets whose full graph is over budget.  Strict: an outcome never
    dominates itself."""
    t = net_tables(net)
    b = t.encode(better)
    w = t.encode(worse)
    if b == w:
        return False
    r = kernel_for(net).reachable(w, b, budget)
    if r < 0:
        raise BudgetExceededError(
            "dominance query visited more than %d outcomes" % budget,
            count=budget + 1,
        )
    return bool(r)


def oracle_path(net, better, worse, budget=DEFAULT_OUTCOME_BUDGET):
    """A shortest improving sequence from worse to better, or None.

    Shortest paths in the induced graph are always irreducible: a
    deletable interior block would mean an edge shortcutting it, giving a
    shorter path.  Runs in Python over packed codes, so keep it to
    desk-scale nets."""
    t = net_tables(net)
    b = t.encode(better)
    w = t.encode(worse)
    if b == w:
        return None
    target = t.pack(b)
    start = t.pack(w)
    parent = {start: None}
    frontier = [w]
    while frontier:
        nxt = []
        for state in frontier:
            code = t.pack(state)
            for i in t.topo:
                for tv in t.improving_targets(i, state):
                    child = state.copy()
                    child[i] = tv
                    ck = t.pack(child)
                    if ck in parent:
                        continue
                    parent[ck] = code
                    if ck == target:
                        path = [ck]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        path.reverse()
                        return [t.decode(t.unpack(c)) for c in path]
                    if len(parent) > budget:
                        raise BudgetExceededError(
                            "path search visited more than %d outcomes" % budget,
                            count=len(parent),
                        )
                    nxt.append(child)
        frontier = nxt
    return None


def is_improving_sequence(net, seq):
    """True when consecutive outcomes are exactly one flip apart and each
    flip improves.  Sequences of length one hold trivially."""
    outcomes = _outcomes_of(seq)
    if not outcomes:
        raise ModelError("empty sequence")
    t = net_tables(net)
    values = [t.encode(o) for o in outcomes]
    for a, b in zip(values, values[1:]):
        diff = [i for i in range(t.n) if a[i] != b[i]]
        if len(diff) != 1:
            return False
        if not t.improving(diff[0], a, b[diff[0]]):
            return False
    return True


def is_irreducible(net, seq):
    """True when no interior block can be cut: no two outcomes more than
    one step apart are themselves a single improving flip apart.

    Requires an improving sequence and raises NotImprovingError otherwise.
    """
    if not is_improving_sequence(net, seq):
        raise NotImprovingError("sequence is not an improving flip sequence")
    outcomes = _outcomes_of(seq)
    t = net_tables(net)
    values = [t.encode(o) for o in outcomes]
    k = len(values)
    for i in range(k):
        for j in range(i + 2, k):
            diff = [x for x in range(t.n) if values[i][x] != values[j][x]]
            if len(diff) == 1 and t.improving(diff[0], values[i], values[j][diff[0]]):
                return False
    return True


def ranking_satisfies(net, ranking, budget=DEFAULT_OUTCOME_BUDGET):
    """True when the ranking is a linear extension of the induced graph.

    The ranking must list every outcome exactly once, most preferred
    first; anything else raises ModelError."""
    outcomes = _outcomes_of(ranking)
    t = net_tables(net)
    if t.product > budget:
        raise BudgetExceededError(
            "ranking check needs %d outcomes, budget is %d" % (t.product, budget),
            count=t.product,
        )
    if len(outcomes) != t.product:
        raise ModelError(
            "ranking lists %d outcomes, net has %d" % (len(outcomes), t.product)
        )
    pos = {}
    for p, o in enumerate(outcomes):
        code = t.pack(t.encode(o))
        if code in pos:
            raise ModelError("ranking repeats an outcome")
        pos[code] = p
    for p, o in enumerate(outcomes):
        values = t.encode(o)
        for i in t.topo:
            for target in t.improving_targets(i, values):
                child = values.copy()
                child[i] = target
                if pos[t.pack(child)] >= p:
                    return False
    return True


class Closure:
    """Full reachability of the induced graph, packed into one bitset per
    outcome.  dominates() then answers any ordered pair in O(1)."""

    def __init__(self, net, budget=DEFAULT_OUTCOME_BUDGET):
        t = net_tables(net)
        if t.product > budget:
            raise BudgetExceededError(
                "closure needs %d outcomes, budget is %d" % (t.product, budget),
                count=t.product,
            )
        self.tables = t
        product = t.product
        reach = [0] * product
        color = bytearray(product)  # 0 new, 1 on stack, 2 resolved

        def children(code):
            state = t.unpack(code)
            kids = []
            for i in t.topo:
                for target in t.improving_targets(i, state):
                    child = state.copy()
                    child[i] = target
                    kids.append(t.pack(child))
            return kids

        # iterative postorder: a node's bitset is the union of each
        # child's bit and bitset, so children resolve first
        for root in range(product):
            if color[root]:
                continue
            frames = [[root, None, 0]]
            while frames:
                fr = frames[-1]
                code = fr[0]
                if fr[1] is None:
                    if color[code] == 2:
                        frames.pop()
                        continue
                    color[code] = 1
                    fr[1] = children(code)
                if fr[2] < len(fr[1]):
                    k = fr[1][fr[2]]
                    fr[2] += 1
                    if color[k] == 1:
                        raise ModelError("induced preference graph has a cycle")
                    if color[k] == 0:
                        frames.append([k, None, 0])
                    continue
                mask = 0
                for k in fr[1]:
                    mask |= (1 << k) | reach[k]
                reach[code] = mask
                color[code] = 2
                frames.pop()
        self.reach = reach

    def dominates_codes(self, better_code, worse_code):
        return bool((self.reach[worse_code] >> better_code) & 1)

    def dominates(self, better, worse):
        t = self.tables
        return self.dominates_codes(t.pack(t.encode(better)), t.pack(t.encode(worse)))

    def code(self, outcome):
        t = self.tables
        return t.pack(t.encode(outcome))


def reachability_closure(net, budget=DEFAULT_OUTCOME_BUDGET):
    """Closure for a net, cached on the instance."""
    c = net._cache.get("closure")
    if c is None:
        c = Closure(net, budget)
        net._cache["closure"] = c
    return c
