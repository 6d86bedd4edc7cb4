"""Monotonicity analysis: break points, categories, more-or-less checks.

A variable is monotonic when every ranking in its own CPT sweeps the
declared value order in one direction or the other, and all of its
children switch rankings at one common break point along that order.
Values up to the break point form the "less" category, the rest "more".
A net where every variable is monotonic is called more-or-less here.

Break points are found by interval arithmetic on the CPT conditions, so
a 1000-value domain costs no more than a 3-value one.
"""

from dataclasses import dataclass
from itertools import product

from .errors import NotMoreOrLessError
from .model import _axis_segments

LESS = "less"
MORE = "more"

_NON_MONOTONE = "non-monotone ranking"
_MULTI_BOUNDARY = "multiple change boundaries"
_MISALIGNED = "misaligned child boundaries"


@dataclass(frozen=True)
class MonotonicityReport:
    """Verdict for one variable.

    c_value/c_index give the break point (the greatest "less" value);
    c_defaulted marks break points chosen by convention because no child
    ranking forces one.  failure is None for monotonic variables.
    """

    variable: str
    monotonic: bool
    c_value: str = None
    c_index: int = None
    c_defaulted: bool = False
    less_text: str = None
    failure: str = None

    def render(self):
        return "%s monotonic=%s c=%s less=%s" % (
            self.variable,
            "true" if self.monotonic else "false",
            self.c_value if self.monotonic else "-",
            self.less_text if self.monotonic else "-",
        )


@dataclass(frozen=True)
class MlReport:
    net: str
    checks: tuple

    @property
    def ml(self):
        return all(c.monotonic for c in self.checks)

    @property
    def offending(self):
        return tuple(c.variable for c in self.checks if not c.monotonic)

    def check(self, name):
        for c in self.checks:
            if c.variable == name:
                return c
        raise KeyError(name)

    def render(self):
        return "\n".join(c.render() for c in self.checks)


def _aligned(net, name):
    """True when every ranking of name follows the declared order or its
    reverse."""
    dom = net.domain(name)
    forward = dom.values
    backward = tuple(reversed(forward))
    for row in net.cpts[name].rows:
        resolved = row.ranking.resolve(dom)
        if resolved != forward and resolved != backward:
            return False
    return True


def _child_boundaries(net, child, along):
    """Positions p of along's order where child's ranking changes between
    value p and p+1, for at least one assignment of the other parents.

    Works on atomic segments of each parent axis, so only O(rows) points
    are probed per axis regardless of domain sizes.
    """
    var = net.variable(child)
    axis = var.parents.index(along)
    pdoms = [net.domain(p) for p in var.parents]
    rows = net.cpts[child].rows
    row_axes = [
        [pred.index_intervals(dom) for pred, dom in zip(row.conds, pdoms)]
        for row in rows
    ]
    resolved = [row.ranking.resolve(net.domain(child)) for row in rows]

    segs = [
        _axis_segments(dom, [ra[j] for ra in row_axes])
        for j, dom in enumerate(pdoms)
    ]
    along_segs = segs[axis]
    other_segs = [s for j, s in enumerate(segs) if j != axis]

    def row_at(ri, points):
        for j, point in enumerate(points):
            if not any(lo <= point <= hi for lo, hi in row_axes[ri][j]):
                return False
        return True

    boundaries = set()
    for combo in product(*other_segs):
        points = [seg[0] for seg in combo]
        prev = None
        for lo, hi in along_segs:
            full = points[:axis] + [lo] + points[axis:]
            hits = [ri for ri in range(len(rows)) if row_at(ri, full)]
            if len(hits) != 1:
                # partition trouble; validate_structure reports it, here we
                # simply cannot place a boundary reliably
                raise NotMoreOrLessError(
                    "CPT of %s does not partition its parent space" % child
                )
            cur = resolved[hits[0]]
            if prev is not None and cur != prev[0]:
                boundaries.add(prev[1])
            prev = (cur, hi)
    return boundaries


def _less_text(dom, c_index):
    if dom.kind == "range":
        return "%s..%s" % (dom.value_at(0), dom.value_at(c_index))
    return "{%s}" % ",".join(dom.value_at(i) for i in range(c_index + 1))


def check_monotonic(net, name):
    """MonotonicityReport for one variable."""
    dom = net.domain(name)
    if not _aligned(net, name):
        return MonotonicityReport(name, False, failure=_NON_MONOTONE)

    children = [v.name for v in net.variables if name in v.parents]
    union = set()
    for child in children:
        bs = _child_boundaries(net, child, name)
        if len(bs) > 1:
            return MonotonicityReport(name, False, failure=_MULTI_BOUNDARY)
        union |= bs
    if len(union) > 1:
        return MonotonicityReport(name, False, failure=_MISALIGNED)

    if union:
        c_index = union.pop()
        defaulted = False
    else:
        # nothing downstream distinguishes the values; keep the least one
        # alone in "less" by convention
        c_index = 0
        defaulted = True
    return MonotonicityReport(
        name,
        True,
        c_value=dom.value_at(c_index),
        c_index=c_index,
        c_defaulted=defaulted,
        less_text=_less_text(dom, c_index),
    )


def check_more_or_less(net):
    """MlReport over all variables, cached on the net."""
    cached = net._cache.get("ml_report")
    if cached is None:
        cached = MlReport(net.name, tuple(check_monotonic(net, v.name) for v in net.variables))
        net._cache["ml_report"] = cached
    return cached


def _require_ml_check(net, name, report=None):
    if report is None:
        report = check_more_or_less(net)
    c = report.check(name)
    if not c.monotonic:
        raise NotMoreOrLessError("%s is not monotonic (%s)" % (name, c.failure))
    return c


def categories(net, name, token, report=None):
    """LESS or MORE for one value of a monotonic variable."""
    c = _require_ml_check(net, name, report)
    return LESS if net.domain(name).position(token) <= c.c_index else MORE


def less_values(net, name, report=None):
    c = _require_ml_check(net, name, report)
    dom = net.domain(name)
    return tuple(dom.value_at(i) for i in range(c.c_index + 1))


def more_values(net, name, report=None):
    c = _require_ml_check(net, name, report)
    dom = net.domain(name)
    return tuple(dom.value_at(i) for i in range(c.c_index + 1, len(dom)))
