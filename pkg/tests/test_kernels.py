"""The two search kernels must be interchangeable: same answers, same
node counts, same witnesses, on every net and every rule combination."""

import os
import random
import subprocess
import sys

import pytest

from mlcp import parse_cpnet
from mlcp._kernel import Kernel, backend_name, kernel_for
from mlcp._kernel_py import RULE_FORWARD, RULE_LEASTVAR, RULE_SUFFIX
from mlcp import _kernel_py
from mlcp._tables import net_tables
from mlcp.dominance import _ml_context, _rep_indices
from mlcp.gen import GenSpec, random_ml_net

try:
    from mlcp import _kernel_cy
except ImportError:
    _kernel_cy = None

needs_compiled = pytest.mark.skipif(
    _kernel_cy is None, reason="compiled kernel not built"
)

ALL_MASKS = (
    0,
    RULE_SUFFIX,
    RULE_FORWARD,
    RULE_SUFFIX | RULE_FORWARD,
    RULE_LEASTVAR,
    RULE_SUFFIX | RULE_FORWARD | RULE_LEASTVAR,
)


def restricted_args(net, t, rng):
    tml, _, c_idx = _ml_context(net)
    while True:
        w = tuple(rng.randrange(d) for d in t.dom)
        b = tuple(rng.randrange(d) for d in t.dom)
        if w != b:
            rep_l, rep_m = _rep_indices(tml, c_idx, w, b)
            return w, b, c_idx, rep_l, rep_m


# -- backend selection --------------------------------------------------------


def test_backend_name_matches_available_extension():
    if _kernel_cy is None:
        assert backend_name() == "pure"
    else:
        assert backend_name() == "compiled"


def test_env_override_forces_pure_backend():
    env = dict(os.environ, MLCP_KERNEL="pure")
    out = subprocess.run(
        [sys.executable, "-c", "from mlcp._kernel import backend_name; print(backend_name())"],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    assert out.stdout.strip() == "pure"


def test_kernel_is_cached_on_the_net():
    net = random_ml_net(GenSpec(n_vars=3, seed=4))
    assert kernel_for(net) is kernel_for(net)


# -- twin parity --------------------------------------------------------------


@needs_compiled
def test_twins_agree_exactly_on_random_nets():
    # not just the verdict: flips, node counts and depths must match too
    specs = (
        [GenSpec(n_vars=3, max_domain=6, max_parents=2, seed=700 + i) for i in range(8)]
        + [GenSpec(n_vars=4, max_domain=4, max_parents=2, seed=760 + i) for i in range(6)]
        + [GenSpec(n_vars=5, max_domain=2, max_parents=1, seed=820 + i) for i in range(4)]
    )
    rng = random.Random(31)
    for spec in specs:
        net = random_ml_net(spec)
        t = net_tables(net)
        pure = _kernel_py.Engine(t)
        fast = _kernel_cy.Engine(t)
        for _ in range(12):
            w, b, c_idx, rep_l, rep_m = restricted_args(net, t, rng)
            for mask in ALL_MASKS:
                got_p = pure.search_restricted(w, b, c_idx, rep_l, rep_m, mask, 100000)
                got_f = fast.search_restricted(w, b, c_idx, rep_l, rep_m, mask, 100000)
                assert got_p == got_f
            assert pure.search_naive(w, b, 200000) == fast.search_naive(w, b, 200000)


@needs_compiled
def test_twins_agree_on_reachability():
    rng = random.Random(32)
    for i in range(6):
        net = random_ml_net(GenSpec(n_vars=3, max_domain=4, max_parents=2, seed=880 + i))
        t = net_tables(net)
        pure = _kernel_py.Engine(t)
        fast = _kernel_cy.Engine(t)
        assert pure.check_acyclic() == fast.check_acyclic()
        for _ in range(8):
            src = tuple(rng.randrange(d) for d in t.dom)
            dst = tuple(rng.randrange(d) for d in t.dom)
            assert pure.reachable(src, dst, 10000) == fast.reachable(src, dst, 10000)
            assert pure.reach_set(src, 10000) == list(fast.reach_set(src, 10000))


@needs_compiled
def test_twins_agree_when_caps_bite():
    net = random_ml_net(GenSpec(n_vars=4, max_domain=5, max_parents=2, seed=940))
    t = net_tables(net)
    pure = _kernel_py.Engine(t)
    fast = _kernel_cy.Engine(t)
    rng = random.Random(33)
    tripped = 0
    for _ in range(40):
        w, b, c_idx, rep_l, rep_m = restricted_args(net, t, rng)
        for cap in (1, 3, 7):
            got_p = pure.search_restricted(w, b, c_idx, rep_l, rep_m, RULE_SUFFIX, cap)
            got_f = fast.search_restricted(w, b, c_idx, rep_l, rep_m, RULE_SUFFIX, cap)
            assert got_p == got_f
            if got_p[0] == -1:
                tripped += 1
    assert tripped  # at least some queries must actually hit the cap


# -- routing guards -----------------------------------------------------------


def test_wide_net_routes_restricted_search_to_pure():
    # 41 variables exceeds the compiled kernel's base-3 key width
    net = random_ml_net(GenSpec(n_vars=41, max_domain=2, max_parents=1, seed=51))
    t = net_tables(net)
    k = Kernel(t)
    assert not k._restricted_fast
    rng = random.Random(34)
    w, b, c_idx, rep_l, rep_m = restricted_args(net, t, rng)
    want = _kernel_py.Engine(t).search_restricted(
        w, b, c_idx, rep_l, rep_m, RULE_SUFFIX | RULE_FORWARD, 5000
    )
    assert k.search_restricted(w, b, c_idx, rep_l, rep_m, RULE_SUFFIX | RULE_FORWARD, 5000) == want


def test_huge_outcome_space_routes_packed_walks_to_pure():
    lines = ["NET wide"]
    for i in range(7):
        lines.append("VAR V%d : 1..1000" % i)
    for i in range(7):
        lines.append("CPT V%d" % i)
        lines.append("  : ASC")
    net = parse_cpnet("\n".join(lines) + "\n")
    t = net_tables(net)
    assert not t.fits_uint63()
    k = Kernel(t)
    assert not k._packed_fast
    # the pure twin still runs, it just stops at the cap
    worse = tuple(0 for _ in range(7))
    better = tuple(999 for _ in range(7))
    status, flips, nodes, depth = k.search_naive(worse, better, 3)
    assert status == -1 and nodes > 3
