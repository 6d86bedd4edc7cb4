"""Random more-or-less nets for testing and benchmarking.

Nets are monotonic by construction: every ranking is a full sweep of the
declared order, and each CPT splits every parent's domain at that
parent's chosen break point, so no child can introduce a second change
boundary.  Everything is driven by one seeded generator, which makes a
GenSpec reproducible down to the byte.
"""

import random
from dataclasses import dataclass
from itertools import product
from string import ascii_lowercase

from .model import ASC, DESC, CPNet, CPT, CptRow, OrderedDomain, Predicate, Ranking, Variable


@dataclass(frozen=True)
class GenSpec:
    n_vars: int
    max_domain: int = 4
    max_parents: int = 2
    seed: int = 0
    name: str = None

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be at least 1")
        if self.max_domain < 2:
            raise ValueError("max_domain must be at least 2")
        if self.max_parents < 0:
            raise ValueError("max_parents cannot be negative")


def _token(j):
    if j < len(ascii_lowercase):
        return ascii_lowercase[j]
    return "v%d" % j


def _category_predicate(parent, dom, lo, hi):
    """Condition matching positions lo..hi of the parent's domain."""
    if dom.kind == "range":
        if lo == hi:
            return Predicate.eq(parent, dom.value_at(lo))
        return Predicate.interval(parent, dom.lo + lo, dom.lo + hi)
    if lo == hi:
        return Predicate.eq(parent, dom.value_at(lo))
    return Predicate.value_set(parent, [dom.value_at(i) for i in range(lo, hi + 1)])


def random_ml_net(spec):
    """Generate a random more-or-less net from a GenSpec."""
    rng = random.Random(spec.seed)
    names = ["X%d" % (i + 1) for i in range(spec.n_vars)]

    domains = []
    for i in range(spec.n_vars):
        size = rng.randint(2, spec.max_domain)
        if rng.random() < 0.5:
            lo = rng.randint(0, 3)
            domains.append(OrderedDomain.integer_range(lo, lo + size - 1))
        else:
            domains.append(OrderedDomain.enumerated([_token(j) for j in range(size)]))

    parents = []
    for i in range(spec.n_vars):
        k = rng.randint(0, min(spec.max_parents, i))
        parents.append(sorted(rng.sample(range(i), k)))

    breaks = [rng.randrange(0, len(d) - 1) for d in domains]

    variables = []
    cpts = []
    for i, name in enumerate(names):
        ps = parents[i]
        variables.append(Variable(name, domains[i], tuple(names[p] for p in ps)))
        blocks = []
        for p in ps:
            c = breaks[p]
            blocks.append(
                [
                    (p, 0, c),
                    (p, c + 1, len(domains[p]) - 1),
                ]
            )
        rows = []
        for combo in product(*blocks):
            conds = tuple(
                _category_predicate(names[p], domains[p], lo, hi) for p, lo, hi in combo
            )
            ranking = Ranking(ASC) if rng.random() < 0.5 else Ranking(DESC)
            rows.append(CptRow(conds, ranking))
        cpts.append(CPT(name, tuple(rows)))

    return CPNet(spec.name or "rand%d" % spec.seed, variables, cpts)
