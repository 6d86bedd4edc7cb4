"""Core model: ordered domains, CPTs, nets, and the .mlcp text format.

A net is built either programmatically or by parsing the line-based .mlcp
format.  Construction enforces well-formedness (known names, aligned
conditions, values inside domains).  Semantic health of the tables, i.e.
whether each CPT's rows partition the parent space and whether the parent
graph is acyclic, is reported by validate_structure rather than enforced,
so suspect nets can be loaded and inspected.

Nets are immutable in practice: nothing in the package mutates one after
construction, and derived structures are cached on the instance.  Sharing
a net between threads is safe as long as callers follow the same rule.
"""

import re
from dataclasses import dataclass, field

from .errors import (
    CptLookupError,
    CyclicNetError,
    ModelError,
    ParseError,
)

ASC = "asc"
DESC = "desc"
EXPLICIT = "explicit"

_VAR_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_VALUE_RE = re.compile(r"^[A-Za-z0-9_+\-][A-Za-z0-9_.+\-]*$")
_RANGE_RE = re.compile(r"^(-?\d+)\s*\.\.\s*(-?\d+)$")
_EQ_COND_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(\S+)$")
_IN_COND_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s+in\s+(.+)$")

# Tokens that would be ambiguous as domain values.
_RESERVED_VALUES = {"ASC", "DESC"}


def _is_int_token(tok):
    try:
        int(tok)
    except ValueError:
        return False
    return True


class OrderedDomain:
    """Totally ordered set of values for one variable.

    Values are kept in their declared comparison order, least first.  Two
    kinds exist: an enumerated list of distinct tokens, and an integer
    range lo..hi whose values render as decimal strings.  Ranges are never
    materialized for indexing, so 1..1000 costs the same as 1..3.
    """

    __slots__ = ("kind", "lo", "hi", "_values", "_pos")

    def __init__(self, kind, values=None, lo=None, hi=None):
        self.kind = kind
        if kind == "enum":
            values = tuple(values)
            if len(values) < 2:
                raise ModelError("domain too small: need at least 2 values, got %d" % len(values))
            seen = set()
            saw_int = saw_sym = False
            for tok in values:
                if not _VALUE_RE.match(tok):
                    raise ModelError("bad domain value %r" % tok)
                if tok in _RESERVED_VALUES:
                    raise ModelError("%r is reserved and cannot be a domain value" % tok)
                if tok in seen:
                    raise ModelError("duplicate domain value %r" % tok)
                seen.add(tok)
                if _is_int_token(tok):
                    saw_int = True
                else:
                    saw_sym = True
            if saw_int and saw_sym:
                raise ModelError("domain mixes numeric and symbolic values")
            self._values = values
            self._pos = {tok: i for i, tok in enumerate(values)}
            self.lo = self.hi = None
        elif kind == "range":
            if lo >= hi:
                raise ModelError("domain too small: range %d..%d has fewer than 2 values" % (lo, hi))
            self.lo = lo
            self.hi = hi
            self._values = None
            self._pos = None
        else:
            raise ModelError("unknown domain kind %r" % kind)

    @classmethod
    def enumerated(cls, tokens):
        return cls("enum", values=tokens)

    @classmethod
    def integer_range(cls, lo, hi):
        return cls("range", lo=lo, hi=hi)

    def __len__(self):
        if self.kind == "enum":
            return len(self._values)
        return self.hi - self.lo + 1

    def __contains__(self, token):
        if self.kind == "enum":
            return token in self._pos
        if not _is_int_token(token):
            return False
        v = int(token)
        return self.lo <= v <= self.hi and str(v) == token

    def position(self, token):
        """Index of token in comparison order; raises ModelError if absent."""
        if self.kind == "enum":
            i = self._pos.get(token)
            if i is None:
                raise ModelError("unknown value %r" % token)
            return i
        if token not in self:
            raise ModelError("unknown value %r" % token)
        return int(token) - self.lo

    def value_at(self, i):
        if i < 0 or i >= len(self):
            raise ModelError("domain index %d out of range" % i)
        if self.kind == "enum":
            return self._values[i]
        return str(self.lo + i)

    @property
    def values(self):
        """All values in comparison order (materialized for range domains)."""
        if self._values is None:
            return tuple(str(v) for v in range(self.lo, self.hi + 1))
        return self._values

    def render(self):
        if self.kind == "range":
            return "%d..%d" % (self.lo, self.hi)
        return ", ".join(self._values)

    def __eq__(self, other):
        if not isinstance(other, OrderedDomain):
            return NotImplemented
        if self.kind != other.kind:
            return False
        if self.kind == "range":
            return self.lo == other.lo and self.hi == other.hi
        return self._values == other._values

    def __hash__(self):
        if self.kind == "range":
            return hash(("range", self.lo, self.hi))
        return hash(("enum", self._values))

    def __repr__(self):
        return "OrderedDomain(%s)" % self.render()


@dataclass(frozen=True)
class Ranking:
    """Preference ranking over one domain.

    kind is "asc" (last declared value most preferred), "desc" (first
    declared value most preferred), or "explicit" with values listed most
    preferred first.  Explicit rankings may be partial at construction
    time; totality is a validation verdict, and resolve() refuses partial
    rankings because positions would be undefined.
    """

    kind: str
    values: tuple = None

    def __post_init__(self):
        if self.kind not in (ASC, DESC, EXPLICIT):
            raise ModelError("unknown ranking kind %r" % self.kind)
        if self.kind == EXPLICIT:
            if not self.values:
                raise ModelError("explicit ranking needs values")
            object.__setattr__(self, "values", tuple(self.values))
        elif self.values is not None:
            raise ModelError("%s ranking takes no values" % self.kind)

    def is_total(self, domain):
        if self.kind != EXPLICIT:
            return True
        return len(self.values) == len(domain) and all(v in domain for v in self.values)

    def resolve(self, domain):
        """The ranking as a most-preferred-first tuple of values."""
        if self.kind == ASC:
            return tuple(reversed(domain.values))
        if self.kind == DESC:
            return domain.values
        if not self.is_total(domain):
            raise ModelError("ranking %r is not total over the domain" % (self.values,))
        return self.values

    def check_values(self, domain):
        """Raise ModelError on unknown or repeated values (explicit only)."""
        if self.kind != EXPLICIT:
            return
        seen = set()
        for v in self.values:
            if v not in domain:
                raise ModelError("unknown value %r in ranking" % v)
            if v in seen:
                raise ModelError("duplicate value %r in ranking" % v)
            seen.add(v)

    def render(self):
        if self.kind == ASC:
            return "ASC"
        if self.kind == DESC:
            return "DESC"
        return " > ".join(self.values)


@dataclass(frozen=True)
class Predicate:
    """Condition on one parent: equality, integer interval, or value set."""

    parent: str
    kind: str  # "eq", "range" or "set"
    value: str = None
    lo: int = None
    hi: int = None
    values: frozenset = None

    @classmethod
    def eq(cls, parent, value):
        return cls(parent, "eq", value=value)

    @classmethod
    def interval(cls, parent, lo, hi):
        return cls(parent, "range", lo=lo, hi=hi)

    @classmethod
    def value_set(cls, parent, values):
        return cls(parent, "set", values=frozenset(values))

    def check(self, domain):
        """Raise ModelError unless the predicate fits the parent domain."""
        if self.kind == "eq":
            if self.value not in domain:
                raise ModelError("unknown value %r for %s" % (self.value, self.parent))
        elif self.kind == "range":
            if domain.kind != "range":
                raise ModelError("interval condition on non-range variable %s" % self.parent)
            if self.lo > self.hi:
                raise ModelError("empty interval %d..%d" % (self.lo, self.hi))
            if self.lo < domain.lo or self.hi > domain.hi:
                raise ModelError(
                    "interval %d..%d outside domain %s" % (self.lo, self.hi, domain.render())
                )
        elif self.kind == "set":
            if not self.values:
                raise ModelError("empty value set for %s" % self.parent)
            for v in self.values:
                if v not in domain:
                    raise ModelError("unknown value %r for %s" % (v, self.parent))
        else:
            raise ModelError("unknown condition kind %r" % self.kind)

    def matches(self, domain, token):
        if self.kind == "eq":
            return token == self.value
        if self.kind == "range":
            return self.lo <= int(token) <= self.hi
        return token in self.values

    def index_intervals(self, domain):
        """The matched positions as sorted disjoint (lo, hi) index pairs."""
        if self.kind == "eq":
            i = domain.position(self.value)
            return ((i, i),)
        if self.kind == "range":
            return ((self.lo - domain.lo, self.hi - domain.lo),)
        idxs = sorted(domain.position(v) for v in self.values)
        runs = []
        start = prev = idxs[0]
        for i in idxs[1:]:
            if i == prev + 1:
                prev = i
                continue
            runs.append((start, prev))
            start = prev = i
        runs.append((start, prev))
        return tuple(runs)

    def render(self, domain):
        if self.kind == "eq":
            return "%s=%s" % (self.parent, self.value)
        if self.kind == "range":
            return "%s in %d..%d" % (self.parent, self.lo, self.hi)
        ordered = sorted(self.values, key=domain.position)
        return "%s in {%s}" % (self.parent, ", ".join(ordered))


@dataclass(frozen=True)
class CptRow:
    """One CPT row: conditions aligned with the variable's parent list."""

    conds: tuple
    ranking: Ranking
    line: int = field(default=None, compare=False)


@dataclass(frozen=True)
class CPT:
    var: str
    rows: tuple


@dataclass(frozen=True)
class Variable:
    name: str
    domain: OrderedDomain
    parents: tuple = ()


class CPNet:
    """A conditional preference network.

    variables come in declaration order; cpts map variable name to table.
    Construction checks well-formedness and raises ModelError on failure.
    """

    def __init__(self, name, variables, cpts):
        if not _VAR_NAME_RE.match(name or ""):
            raise ModelError("bad net name %r" % name)
        self.name = name
        self.variables = tuple(variables)
        if not self.variables:
            raise ModelError("net has no variables")
        self._by_name = {}
        for v in self.variables:
            if not _VAR_NAME_RE.match(v.name):
                raise ModelError("bad variable name %r" % v.name)
            if v.name in self._by_name:
                raise ModelError("duplicate variable %s" % v.name)
            self._by_name[v.name] = v
        for v in self.variables:
            seen = set()
            for p in v.parents:
                if p == v.name:
                    raise ModelError("%s cannot be its own parent" % v.name)
                if p not in self._by_name:
                    raise ModelError("unknown parent %s of %s" % (p, v.name))
                if p in seen:
                    raise ModelError("duplicate parent %s of %s" % (p, v.name))
                seen.add(p)

        self.cpts = {}
        for cpt in cpts:
            if cpt.var not in self._by_name:
                raise ModelError("CPT for unknown variable %s" % cpt.var)
            if cpt.var in self.cpts:
                raise ModelError("duplicate CPT for %s" % cpt.var)
            self._check_cpt(cpt)
            self.cpts[cpt.var] = cpt
        for v in self.variables:
            if v.name not in self.cpts:
                raise ModelError("no CPT for %s" % v.name)

        self._index = {v.name: i for i, v in enumerate(self.variables)}
        self._topo = None
        self._cache = {}

    def _check_cpt(self, cpt):
        var = self._by_name[cpt.var]
        if not cpt.rows:
            raise ModelError("CPT for %s has no rows" % cpt.var)
        for row in cpt.rows:
            if len(row.conds) != len(var.parents):
                raise ModelError(
                    "row of %s has %d conditions for %d parents"
                    % (cpt.var, len(row.conds), len(var.parents))
                )
            for pred, parent in zip(row.conds, var.parents):
                if pred.parent != parent:
                    raise ModelError(
                        "row of %s: condition on %s where %s expected"
                        % (cpt.var, pred.parent, parent)
                    )
                pred.check(self._by_name[parent].domain)
            row.ranking.check_values(var.domain)

    # -- lookups ------------------------------------------------------

    def variable(self, name):
        v = self._by_name.get(name)
        if v is None:
            raise ModelError("unknown variable %s" % name)
        return v

    def domain(self, name):
        return self.variable(name).domain

    def parents(self, name):
        return self.variable(name).parents

    def cpt(self, name):
        self.variable(name)
        return self.cpts[name]

    def index(self, name):
        i = self._index.get(name)
        if i is None:
            raise ModelError("unknown variable %s" % name)
        return i

    @property
    def var_names(self):
        return tuple(v.name for v in self.variables)

    def outcome_count(self):
        n = 1
        for v in self.variables:
            n *= len(v.domain)
        return n

    # -- order --------------------------------------------------------

    def _kahn(self):
        """(order, cycle): order is None when a cycle exists, else a
        declaration-order-stable topological order of variable names."""
        indeg = {v.name: len(v.parents) for v in self.variables}
        children = {v.name: [] for v in self.variables}
        for v in self.variables:
            for p in v.parents:
                children[p].append(v.name)
        ready = [v.name for v in self.variables if indeg[v.name] == 0]
        order = []
        while ready:
            # pop the declaration-earliest ready variable for stability
            ready.sort(key=self._index.get)
            name = ready.pop(0)
            order.append(name)
            for c in children[name]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        if len(order) == len(self.variables):
            return order, None
        rest = {n for n, d in indeg.items() if d > 0}
        # walk parent links inside the leftover set until a repeat shows up
        start = min(rest, key=self._index.get)
        seen = {}
        walk = []
        node = start
        while node not in seen:
            seen[node] = len(walk)
            walk.append(node)
            node = next(p for p in self.parents(node) if p in rest)
        cycle = tuple(walk[seen[node]:]) + (node,)
        return None, cycle

    @property
    def is_acyclic(self):
        order, _ = self._topo_info()
        return order is not None

    def _topo_info(self):
        if self._topo is None:
            self._topo = self._kahn()
        return self._topo

    @property
    def topological_order(self):
        order, cycle = self._topo_info()
        if order is None:
            raise CyclicNetError(
                "parent graph has a cycle: %s" % " -> ".join(cycle)
            )
        return tuple(order)

    # -- equality -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, CPNet):
            return NotImplemented
        return (
            self.name == other.name
            and self.variables == other.variables
            and [self.cpts[v.name] for v in self.variables]
            == [other.cpts[v.name] for v in other.variables]
        )

    __hash__ = None

    def __repr__(self):
        return "CPNet(%s, %d variables)" % (self.name, len(self.variables))


# -- row matching and ranking lookup -----------------------------------


def match_row(net, name, outcome):
    """The unique CPT row of name whose conditions hold under outcome.

    outcome only needs to assign the variable's parents.  Raises
    CptLookupError when no row or several rows match, which means the
    table is not a partition (validate_structure would have flagged it).
    """
    var = net.variable(name)
    hits = []
    for i, row in enumerate(net.cpts[name].rows):
        ok = True
        for pred, parent in zip(row.conds, var.parents):
            tok = outcome.get(parent)
            if tok is None:
                raise ModelError("outcome does not assign parent %s of %s" % (parent, name))
            if tok not in net.domain(parent):
                raise ModelError("unknown value %r for %s" % (tok, parent))
            if not pred.matches(net.domain(parent), tok):
                ok = False
                break
        if ok:
            hits.append(i)
    if len(hits) != 1:
        raise CptLookupError(
            "%d rows of CPT %s match %s" % (len(hits), name, format_assignment(outcome))
        )
    return hits[0], net.cpts[name].rows[hits[0]]


def lookup_ranking(net, name, outcome):
    """Resolved most-preferred-first value tuple for name under outcome."""
    _, row = match_row(net, name, outcome)
    return row.ranking.resolve(net.domain(name))


# -- outcome literals ---------------------------------------------------


def parse_outcome(net, text, total=True):
    """Parse "X=1,Y=a" into a dict; with total=True every variable must
    be assigned."""
    out = {}
    text = text.strip()
    parts = [p for p in (s.strip() for s in text.split(","))] if text else []
    for part in parts:
        if not part:
            raise ParseError("empty assignment in outcome %r" % text)
        if "=" not in part:
            raise ParseError("expected name=value, got %r" % part)
        name, _, tok = part.partition("=")
        name = name.strip()
        tok = tok.strip()
        if name not in net.var_names:
            raise ParseError("unknown variable %r in outcome" % name)
        if name in out:
            raise ParseError("variable %s assigned twice in outcome" % name)
        if tok not in net.domain(name):
            raise ParseError("unknown value %r for %s" % (tok, name))
        out[name] = tok
    if total:
        for v in net.variables:
            if v.name not in out:
                raise ParseError("outcome does not assign %s" % v.name)
    return out


def format_outcome(net, outcome):
    """Render an outcome dict as a literal in declaration order."""
    return ",".join("%s=%s" % (v.name, outcome[v.name]) for v in net.variables if v.name in outcome)


def format_assignment(outcome):
    return ",".join("%s=%s" % (k, v) for k, v in sorted(outcome.items()))


# -- parsing ------------------------------------------------------------


def _parse_domain_spec(spec, line):
    m = _RANGE_RE.match(spec)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo >= hi:
            raise ParseError("range %d..%d has fewer than 2 values" % (lo, hi), line)
        return OrderedDomain.integer_range(lo, hi)
    tokens = [t.strip() for t in spec.split(",")]
    if any(not t for t in tokens):
        raise ParseError("empty value in domain list", line)
    for t in tokens:
        if not _VALUE_RE.match(t):
            raise ParseError("bad domain value %r" % t, line)
    try:
        return OrderedDomain.enumerated(tokens)
    except ModelError as e:
        raise ParseError(str(e), line) from None


def _parse_ranking(text, line):
    text = text.strip()
    if "~" in text:
        raise ParseError("ties are not supported: %r" % text, line)
    if text == "ASC":
        return Ranking(ASC)
    if text == "DESC":
        return Ranking(DESC)
    tokens = [t.strip() for t in text.split(">")]
    if any(not t for t in tokens) or not tokens:
        raise ParseError("bad ranking %r" % text, line)
    for t in tokens:
        if not _VALUE_RE.match(t):
            raise ParseError("bad ranking value %r" % t, line)
    return Ranking(EXPLICIT, tuple(tokens))


def _parse_condition(text, line):
    text = text.strip()
    m = _EQ_COND_RE.match(text)
    if m:
        return m.group(1), ("eq", m.group(2))
    m = _IN_COND_RE.match(text)
    if m:
        name, rhs = m.group(1), m.group(2).strip()
        if rhs.startswith("{"):
            if not rhs.endswith("}"):
                raise ParseError("unterminated value set %r" % rhs, line)
            toks = [t.strip() for t in rhs[1:-1].split(",")]
            if any(not t for t in toks) or not toks:
                raise ParseError("bad value set %r" % rhs, line)
            return name, ("set", tuple(toks))
        r = _RANGE_RE.match(rhs)
        if r:
            return name, ("range", int(r.group(1)), int(r.group(2)))
        raise ParseError("bad condition %r" % text, line)
    raise ParseError("bad condition %r" % text, line)


def parse_cpnet(text):
    """Parse .mlcp text into a CPNet.

    Raises ParseError naming the offending line for both syntax problems
    and semantic ones (unknown values, misaligned conditions and so on).
    """
    net_name = None
    var_order = []
    domains = {}
    var_lines = {}
    cpt_order = []
    cpt_parents = {}
    cpt_lines = {}
    cpt_rows = {}
    current = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stmt = raw.split("#", 1)[0].strip()
        if not stmt:
            continue
        if stmt.startswith("NET "):
            if net_name is not None:
                raise ParseError("duplicate NET line", lineno)
            name = stmt[4:].strip()
            if not _VAR_NAME_RE.match(name):
                raise ParseError("bad net name %r" % name, lineno)
            net_name = name
            continue
        if stmt.startswith("VAR "):
            body = stmt[4:]
            if ":" not in body:
                raise ParseError("expected VAR name : values", lineno)
            name, _, spec = body.partition(":")
            name = name.strip()
            if not _VAR_NAME_RE.match(name):
                raise ParseError("bad variable name %r" % name, lineno)
            if name in domains:
                raise ParseError("duplicate variable %s" % name, lineno)
            domains[name] = _parse_domain_spec(spec.strip(), lineno)
            var_order.append(name)
            var_lines[name] = lineno
            continue
        if stmt.startswith("CPT "):
            body = stmt[4:]
            if "|" in body:
                name, _, ptext = body.partition("|")
                parents = [p.strip() for p in ptext.split(",")]
                if any(not p for p in parents):
                    raise ParseError("bad parent list", lineno)
            else:
                name, parents = body, []
            name = name.strip()
            if name not in domains:
                raise ParseError("CPT for unknown variable %r" % name, lineno)
            if name in cpt_parents:
                raise ParseError("duplicate CPT for %s" % name, lineno)
            seen = set()
            for p in parents:
                if p not in domains:
                    raise ParseError("unknown parent %r of %s" % (p, name), lineno)
                if p == name:
                    raise ParseError("%s cannot be its own parent" % name, lineno)
                if p in seen:
                    raise ParseError("duplicate parent %s of %s" % (p, name), lineno)
                seen.add(p)
            cpt_order.append(name)
            cpt_parents[name] = tuple(parents)
            cpt_lines[name] = lineno
            cpt_rows[name] = []
            current = name
            continue
        # anything else must be a CPT row
        if current is None:
            raise ParseError("row outside any CPT: %r" % stmt, lineno)
        if ":" not in stmt:
            raise ParseError("expected conditions : ranking, got %r" % stmt, lineno)
        ctext, _, rtext = stmt.partition(":")
        ranking = _parse_ranking(rtext, lineno)
        parents = cpt_parents[current]
        ctext = ctext.strip()
        conds = {}
        if ctext:
            for piece in ctext.split("&"):
                pname, payload = _parse_condition(piece, lineno)
                if pname not in parents:
                    raise ParseError(
                        "condition on %s, which is not a parent of %s" % (pname, current), lineno
                    )
                if pname in conds:
                    raise ParseError("two conditions on %s" % pname, lineno)
                conds[pname] = payload
        missing = [p for p in parents if p not in conds]
        if missing:
            raise ParseError("row of %s misses condition on %s" % (current, missing[0]), lineno)
        preds = []
        for p in parents:
            payload = conds[p]
            if payload[0] == "eq":
                pred = Predicate.eq(p, payload[1])
            elif payload[0] == "set":
                toks = payload[1]
                if len(set(toks)) != len(toks):
                    raise ParseError("repeated value in set for %s" % p, lineno)
                pred = Predicate.value_set(p, toks)
            else:
                pred = Predicate.interval(p, payload[1], payload[2])
            try:
                pred.check(domains[p])
            except ModelError as e:
                raise ParseError(str(e), lineno) from None
            preds.append(pred)
        try:
            ranking.check_values(domains[current])
        except ModelError as e:
            raise ParseError(str(e), lineno) from None
        if ranking.kind == EXPLICIT and not ranking.is_total(domains[current]):
            raise ParseError(
                "ranking must mention every value of %s exactly once" % current, lineno
            )
        cpt_rows[current].append(CptRow(tuple(preds), ranking, line=lineno))

    if net_name is None:
        raise ParseError("missing NET line")
    for name in var_order:
        if name not in cpt_parents:
            raise ParseError("no CPT for %s" % name, var_lines[name])
    for name in cpt_order:
        if not cpt_rows[name]:
            raise ParseError("CPT for %s has no rows" % name, cpt_lines[name])

    variables = [Variable(n, domains[n], cpt_parents[n]) for n in var_order]
    cpts = [CPT(n, tuple(cpt_rows[n])) for n in var_order]
    try:
        return CPNet(net_name, variables, cpts)
    except ModelError as e:
        raise ParseError(str(e)) from None


def serialize_cpnet(net):
    """Canonical .mlcp text: declaration order, normalized whitespace,
    range and shorthand notations preserved.  Stable across round trips."""
    out = ["NET %s" % net.name]
    for v in net.variables:
        out.append("VAR %s : %s" % (v.name, v.domain.render()))
    for v in net.variables:
        head = "CPT %s" % v.name
        if v.parents:
            head += " | " + ", ".join(v.parents)
        out.append(head)
        for row in net.cpts[v.name].rows:
            conds = " & ".join(p.render(net.domain(p.parent)) for p in row.conds)
            if conds:
                out.append("  %s : %s" % (conds, row.ranking.render()))
            else:
                out.append("  : %s" % row.ranking.render())
    return "\n".join(out) + "\n"


# -- structural validation ----------------------------------------------

_PARTITION_CELL_CAP = 2_000_000


@dataclass(frozen=True)
class CptCheck:
    variable: str
    exhaustive: bool
    non_overlapping: bool
    rankings_total: bool
    problems: tuple = ()

    @property
    def ok(self):
        return self.exhaustive and self.non_overlapping and self.rankings_total


@dataclass(frozen=True)
class StructureReport:
    net: str
    acyclic: bool
    cycle: tuple
    checks: tuple

    @property
    def ok(self):
        return self.acyclic and all(c.ok for c in self.checks)

    def render(self):
        lines = ["net %s: %s" % (self.net, "OK" if self.ok else "INVALID")]
        if self.acyclic:
            lines.append("  acyclic: yes")
        else:
            lines.append("  acyclic: no (cycle: %s)" % " -> ".join(self.cycle))
        for c in self.checks:
            if c.ok:
                lines.append("  CPT %s: ok" % c.variable)
            else:
                lines.append("  CPT %s: %s" % (c.variable, "; ".join(c.problems)))
        return "\n".join(lines)


def _axis_segments(domain, rows_intervals):
    """Atomic index segments induced by all interval endpoints on one axis.

    Every predicate interval is a union of whole segments, so checking a
    segment's first index decides the whole segment.
    """
    size = len(domain)
    cuts = {0, size}
    for intervals in rows_intervals:
        for lo, hi in intervals:
            cuts.add(lo)
            cuts.add(hi + 1)
    edges = sorted(cuts)
    return [(edges[i], edges[i + 1] - 1) for i in range(len(edges) - 1)]


def _segment_text(domain, lo, hi):
    if lo == hi:
        return domain.value_at(lo)
    return "%s..%s" % (domain.value_at(lo), domain.value_at(hi))


def _check_partition(net, name):
    """(exhaustive, non_overlapping, problems) for one CPT."""
    var = net.variable(name)
    rows = net.cpts[name].rows
    if not var.parents:
        if len(rows) == 1:
            return True, True, []
        return True, False, ["%d unconditional rows" % len(rows)]

    pdoms = [net.domain(p) for p in var.parents]
    # index intervals per row per axis
    row_axes = []
    for row in rows:
        row_axes.append([pred.index_intervals(dom) for pred, dom in zip(row.conds, pdoms)])
    axes = []
    for j, dom in enumerate(pdoms):
        axes.append(_axis_segments(dom, [ra[j] for ra in row_axes]))

    cells = 1
    for segs in axes:
        cells *= len(segs)
    if cells > _PARTITION_CELL_CAP:
        raise ModelError(
            "partition check for %s needs %d cells, too many" % (name, cells)
        )

    def row_covers(ri, cell):
        for j, seg in enumerate(cell):
            point = seg[0]
            if not any(lo <= point <= hi for lo, hi in row_axes[ri][j]):
                return False
        return True

    exhaustive = True
    non_overlapping = True
    problems = []
    gap_example = overlap_example = None
    import itertools

    for cell in itertools.product(*axes):
        hits = [ri for ri in range(len(rows)) if row_covers(ri, cell)]
        if not hits and gap_example is None:
            exhaustive = False
            gap_example = cell
        elif len(hits) > 1 and overlap_example is None:
            non_overlapping = False
            overlap_example = (hits, cell)
        if gap_example is not None and overlap_example is not None:
            break

    if gap_example is not None:
        where = " & ".join(
            "%s=%s" % (p, _segment_text(dom, seg[0], seg[1]))
            for p, dom, seg in zip(var.parents, pdoms, gap_example)
        )
        problems.append("no row covers %s" % where)
    if overlap_example is not None:
        hits, cell = overlap_example
        where = " & ".join(
            "%s in %s" % (p, _segment_text(dom, seg[0], seg[1]))
            for p, dom, seg in zip(var.parents, pdoms, cell)
        )
        problems.append(
            "rows %d and %d overlap on %s" % (hits[0] + 1, hits[1] + 1, where)
        )
    return exhaustive, non_overlapping, problems


def validate_structure(net):
    """Check acyclicity and, per CPT, exhaustiveness, non-overlap and
    ranking totality.  Returns a StructureReport; never raises on an
    unhealthy net."""
    order, cycle = net._topo_info()
    checks = []
    for v in net.variables:
        exhaustive, non_overlapping, problems = _check_partition(net, v.name)
        total = all(row.ranking.is_total(v.domain) for row in net.cpts[v.name].rows)
        if not total:
            problems = list(problems) + ["a ranking does not cover the domain"]
        checks.append(
            CptCheck(v.name, exhaustive, non_overlapping, total, tuple(problems))
        )
    return StructureReport(net.name, order is not None, cycle, tuple(checks))
