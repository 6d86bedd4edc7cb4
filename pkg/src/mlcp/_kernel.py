"""Kernel backend selection.

The compiled kernel is used when the extension imported and the net fits
its fixed-width state keys (40 variables for the base-3 restricted keys,
a sub-2^63 outcome product for the mixed-radix ones).  Anything else
falls back to the pure twin, which has no such limits.  Setting
MLCP_KERNEL=pure in the environment forces the pure twin everywhere.
"""

import os

from . import _kernel_py
from ._tables import net_tables

RULE_SUFFIX = _kernel_py.RULE_SUFFIX
RULE_FORWARD = _kernel_py.RULE_FORWARD
RULE_LEASTVAR = _kernel_py.RULE_LEASTVAR

if os.environ.get("MLCP_KERNEL") == "pure":
    _impl = _kernel_py
else:
    try:
        from . import _kernel_cy as _impl
    except ImportError:
        _impl = _kernel_py


def backend_name():
    return _impl.BACKEND


class Kernel:
    """Routes each operation to the fastest engine that supports the net."""

    def __init__(self, tables):
        self.tables = tables
        self._pure = _kernel_py.Engine(tables)
        if _impl is _kernel_py:
            self._fast = self._pure
            self._restricted_fast = self._packed_fast = False
        else:
            self._fast = _impl.Engine(tables)
            self._restricted_fast = tables.n <= 40
            self._packed_fast = tables.fits_uint63()

    def search_restricted(self, worse, better, c, rep_l, rep_m, rules, node_cap):
        eng = self._fast if self._restricted_fast else self._pure
        return eng.search_restricted(worse, better, c, rep_l, rep_m, rules, node_cap)

    def search_naive(self, worse, better, node_cap):
        eng = self._fast if self._packed_fast else self._pure
        return eng.search_naive(worse, better, node_cap)

    def reachable(self, src, dst, visit_cap):
        eng = self._fast if self._packed_fast else self._pure
        return eng.reachable(src, dst, visit_cap)

    def reach_set(self, src, visit_cap):
        eng = self._fast if self._packed_fast else self._pure
        return eng.reach_set(src, visit_cap)

    def check_acyclic(self):
        eng = self._fast if self._packed_fast else self._pure
        return eng.check_acyclic()


def kernel_for(net):
    k = net._cache.get("kernel")
    if k is None:
        k = Kernel(net_tables(net))
        net._cache["kernel"] = k
    return k
