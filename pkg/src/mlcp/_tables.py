"""Flattened numeric form of a net, shared by both search kernels.

Variables become indices, values become positions in their domain order,
and CPT rows become interval lists over parent positions.  The compiled
kernel reads the same data through flat typed arrays (the arr_* fields),
so both kernels see identical tables by construction.

Tables assume the net is structurally valid: row matching returns the
first hit and leaves partition enforcement to validate_structure.
"""

from array import array

from .errors import CptLookupError, ModelError
from .model import EXPLICIT, ASC

_KIND_ASC = 0
_KIND_DESC = 1
_KIND_EXPLICIT = 2


class NetTables:
    def __init__(self, net):
        self.net = net
        names = net.var_names
        self.n = len(names)
        self.names = names
        self.dom = [len(net.domain(x)) for x in names]
        self.topo = [net.index(x) for x in net.topological_order]
        self.parents = [[net.index(p) for p in net.parents(x)] for x in names]
        self.tree = all(len(ps) <= 1 for ps in self.parents)
        self.product = 1
        for d in self.dom:
            self.product *= d

        # rows[i] is a list of (intervals, kind, pos, val) where intervals
        # holds one ((lo, hi), ...) tuple per parent, pos maps value index
        # to preference position and val is its inverse (explicit only).
        self.rows = []
        for i, x in enumerate(names):
            var = net.variable(x)
            pdoms = [net.domain(p) for p in var.parents]
            table = []
            for row in net.cpts[x].rows:
                intervals = tuple(
                    pred.index_intervals(dom) for pred, dom in zip(row.conds, pdoms)
                )
                if row.ranking.kind == EXPLICIT:
                    val = [var.domain.position(t) for t in row.ranking.resolve(var.domain)]
                    pos = [0] * len(val)
                    for p, v in enumerate(val):
                        pos[v] = p
                    table.append((intervals, _KIND_EXPLICIT, pos, val))
                elif row.ranking.kind == ASC:
                    table.append((intervals, _KIND_ASC, None, None))
                else:
                    table.append((intervals, _KIND_DESC, None, None))
            self.rows.append(table)
        self._arrays = None

    # -- outcome codecs ------------------------------------------------

    def encode(self, outcome):
        net = self.net
        vals = []
        for x in self.names:
            if x not in outcome:
                raise ModelError("outcome does not assign %s" % x)
            vals.append(net.domain(x).position(outcome[x]))
        return vals

    def decode(self, values):
        net = self.net
        return {x: net.domain(x).value_at(v) for x, v in zip(self.names, values)}

    def pack(self, values):
        """Mixed-radix code of a full assignment (arbitrary precision)."""
        code = 0
        for v, d in zip(values, self.dom):
            code = code * d + v
        return code

    def unpack(self, code):
        out = [0] * self.n
        for i in range(self.n - 1, -1, -1):
            out[i] = code % self.dom[i]
            code //= self.dom[i]
        return out

    def fits_uint63(self):
        return self.product < (1 << 63)

    # -- CPT access ------------------------------------------------------

    def match_row(self, i, values):
        """Index of the first row of variable i matching the parent values."""
        ps = self.parents[i]
        for ri, (intervals, _, _, _) in enumerate(self.rows[i]):
            ok = True
            for j, p in enumerate(ps):
                v = values[p]
                if not any(lo <= v <= hi for lo, hi in intervals[j]):
                    ok = False
                    break
            if ok:
                return ri
        raise CptLookupError(
            "no row of %s matches its parent assignment" % self.names[i]
        )

    def pref_pos(self, i, ri, v):
        """Preference position of value v under row ri (0 is best)."""
        _, kind, pos, _ = self.rows[i][ri]
        if kind == _KIND_ASC:
            return self.dom[i] - 1 - v
        if kind == _KIND_DESC:
            return v
        return pos[v]

    def value_at_pos(self, i, ri, p):
        _, kind, _, val = self.rows[i][ri]
        if kind == _KIND_ASC:
            return self.dom[i] - 1 - p
        if kind == _KIND_DESC:
            return p
        return val[p]

    def improving(self, i, values, t):
        """True when flipping variable i to t strictly improves values."""
        ri = self.match_row(i, values)
        return self.pref_pos(i, ri, t) < self.pref_pos(i, ri, values[i])

    def improving_targets(self, i, values):
        """All strictly better values for i, most preferred first."""
        ri = self.match_row(i, values)
        stop = self.pref_pos(i, ri, values[i])
        return [self.value_at_pos(i, ri, p) for p in range(stop)]

    # -- flat arrays for the compiled kernel -----------------------------

    def arrays(self):
        if self._arrays is not None:
            return self._arrays
        dom = array("i", self.dom)
        topo = array("i", self.topo)
        pptr = array("i", [0])
        pidx = array("i")
        for ps in self.parents:
            pidx.extend(ps)
            pptr.append(len(pidx))

        rptr = array("i", [0])
        rkind = array("b")
        rpos_off = array("i")
        rpos = array("i")
        rval = array("i")
        sptr = array("i", [0])
        iptr = array("i", [0])
        ivlo = array("i")
        ivhi = array("i")
        for i in range(self.n):
            for intervals, kind, pos, val in self.rows[i]:
                rkind.append(kind)
                if kind == _KIND_EXPLICIT:
                    rpos_off.append(len(rpos))
                    rpos.extend(pos)
                    rval.extend(val)
                else:
                    rpos_off.append(-1)
                for ivs in intervals:
                    for lo, hi in ivs:
                        ivlo.append(lo)
                        ivhi.append(hi)
                    iptr.append(len(ivlo))
                sptr.append(len(iptr) - 1)
            rptr.append(len(rkind))
        # empty-array buffers still need one slot for memoryview casts
        for arr in (pidx, rkind, rpos_off, rpos, rval, ivlo, ivhi):
            if not len(arr):
                arr.append(0)
        self._arrays = {
            "dom": dom,
            "topo": topo,
            "pptr": pptr,
            "pidx": pidx,
            "rptr": rptr,
            "rkind": rkind,
            "rpos_off": rpos_off,
            "rpos": rpos,
            "rval": rval,
            "sptr": sptr,
            "iptr": iptr,
            "ivlo": ivlo,
            "ivhi": ivhi,
        }
        return self._arrays


def net_tables(net):
    """Tables for a net, cached on the instance."""
    t = net._cache.get("tables")
    if t is None:
        t = NetTables(net)
        net._cache["tables"] = t
    return t
