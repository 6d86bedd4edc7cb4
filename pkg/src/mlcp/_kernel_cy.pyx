# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled search kernel.

Twin of _kernel_py: same searches, same traversal order, same node
counts and witnesses.  Any behavioral difference between the two is a
bug, and the parity tests treat it as one.  Keep the two files in sync.
"""

from libc.stdint cimport int32_t, uint64_t
from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set
from libcpp.algorithm cimport sort as cpp_sort

BACKEND = "compiled"

RULE_SUFFIX = 1
RULE_FORWARD = 2
RULE_LEASTVAR = 4


cdef class Engine:
    cdef object tables
    cdef int n
    cdef int[:] dom
    cdef int[:] topo
    cdef int[:] pptr
    cdef int[:] pidx
    cdef int[:] rptr
    cdef int[:] rpos_off
    cdef int[:] rpos
    cdef int[:] rval
    cdef int[:] sptr
    cdef int[:] iptr
    cdef int[:] ivlo
    cdef int[:] ivhi
    cdef signed char[:] rkind

    def __init__(self, tables):
        arrs = tables.arrays()
        self.tables = tables
        self.n = tables.n
        self.dom = arrs["dom"]
        self.topo = arrs["topo"]
        self.pptr = arrs["pptr"]
        self.pidx = arrs["pidx"]
        self.rptr = arrs["rptr"]
        self.rkind = arrs["rkind"]
        self.rpos_off = arrs["rpos_off"]
        self.rpos = arrs["rpos"]
        self.rval = arrs["rval"]
        self.sptr = arrs["sptr"]
        self.iptr = arrs["iptr"]
        self.ivlo = arrs["ivlo"]
        self.ivhi = arrs["ivhi"]

    # -- table access ---------------------------------------------------

    cdef int _match_row(self, int i, int32_t* state):
        cdef int r, j, s, k, p, v, ok, hit, base, np
        np = self.pptr[i + 1] - self.pptr[i]
        for r in range(self.rptr[i], self.rptr[i + 1]):
            ok = 1
            base = self.sptr[r]
            for j in range(np):
                p = self.pidx[self.pptr[i] + j]
                v = state[p]
                s = base + j
                hit = 0
                for k in range(self.iptr[s], self.iptr[s + 1]):
                    if self.ivlo[k] <= v and v <= self.ivhi[k]:
                        hit = 1
                        break
                if not hit:
                    ok = 0
                    break
            if ok:
                return r
        return -1

    cdef int _pref_pos(self, int i, int r, int v):
        cdef signed char k = self.rkind[r]
        if k == 0:
            return self.dom[i] - 1 - v
        if k == 1:
            return v
        return self.rpos[self.rpos_off[r] + v]

    cdef int _val_at_pos(self, int i, int r, int p):
        cdef signed char k = self.rkind[r]
        if k == 0:
            return self.dom[i] - 1 - p
        if k == 1:
            return p
        return self.rval[self.rpos_off[r] + p]

    cdef uint64_t _pack(self, int32_t* state):
        cdef uint64_t code = 0
        cdef int i
        for i in range(self.n):
            code = code * <uint64_t> self.dom[i] + <uint64_t> state[i]
        return code

    cdef void _unpack(self, uint64_t code, int32_t* state):
        cdef int i
        for i in range(self.n - 1, -1, -1):
            state[i] = <int32_t> (code % <uint64_t> self.dom[i])
            code //= <uint64_t> self.dom[i]

    # -- restricted search ------------------------------------------------

    def search_restricted(self, worse, better, c, rep_l, rep_m, int rules, long long node_cap):
        cdef int n = self.n
        if n > 40:
            raise ValueError("restricted kernel limited to 40 variables")
        cdef vector[int32_t] w, b, cc, rl, rm
        cdef int i, j, k, p, v, target, ri
        w.resize(n); b.resize(n); cc.resize(n); rl.resize(n); rm.resize(n)
        for i in range(n):
            w[i] = worse[i]
            b[i] = better[i]
            cc[i] = c[i]
            rl[i] = rep_l[i]
            rm[i] = rep_m[i]

        # forward pruning: possibility masks over the per-variable value
        # slots (start value, less rep, more rep; first slot wins on dups)
        cdef vector[int32_t] mask
        cdef vector[int32_t] scratch
        cdef int changed, slot, tslot
        if rules & RULE_FORWARD:
            mask.resize(n)
            scratch.resize(n)
            for i in range(n):
                mask[i] = 1
            changed = 1
            while changed:
                changed = 0
                for i in range(n):
                    for tslot in range(1, 3):
                        target = rl[i] if tslot == 1 else rm[i]
                        slot = self._slot_of(i, target, &w[0], &rl[0], &rm[0])
                        if mask[i] & (1 << slot):
                            continue
                        if self._relax_admits(i, target, &w[0], &rl[0], &rm[0], &mask[0], &scratch[0]):
                            mask[i] |= 1 << slot
                            changed = 1
            for i in range(n):
                slot = self._slot_of(i, b[i], &w[0], &rl[0], &rm[0])
                if not (mask[i] & (1 << slot)):
                    return 0, None, 0, 0

        # stack buffers: states flat, branch and flip trails segmented per
        # frame so pops are vector truncations
        cdef vector[int32_t] states
        cdef vector[int32_t] bvar, bval
        cdef vector[int32_t] fvar, fval
        cdef vector[int32_t] f_bstart, f_bend, f_bcur, f_fstart, f_fend
        cdef vector[int32_t] tvar, tval
        cdef unordered_set[uint64_t] visited
        cdef long long nodes = 0
        cdef int depth = 0, top
        cdef uint64_t key

        states.resize(n)
        for i in range(n):
            states[i] = w[i]
        tvar.clear(); tval.clear()
        self._normalize(&states[0], &w[0], &cc[0], &rl[0], &rm[0], &tvar, &tval)
        visited.insert(self._key3(&states[0], &w[0], &rl[0], &rm[0]))
        nodes = 1
        if self._equals(&states[0], &b[0]):
            return 1, self._flip_list(&tvar, &tval, 0, <int> tvar.size()), nodes, 0

        # root frame
        f_fstart.push_back(0); f_fend.push_back(<int32_t> tvar.size())
        for j in range(<int> tvar.size()):
            fvar.push_back(tvar[j]); fval.push_back(tval[j])
        f_bstart.push_back(0)
        self._branches(&states[0], &b[0], &cc[0], &rl[0], &rm[0],
                       rules, &mask, &w[0], &bvar, &bval)
        f_bend.push_back(<int32_t> bvar.size())
        f_bcur.push_back(0)

        cdef vector[int32_t] child
        child.resize(n)
        while f_bstart.size() > 0:
            top = <int> f_bstart.size() - 1
            if f_bcur[top] >= f_bend[top] - f_bstart[top]:
                # pop: truncate every stack to this frame's start marks
                bvar.resize(f_bstart[top]); bval.resize(f_bstart[top])
                fvar.resize(f_fstart[top]); fval.resize(f_fstart[top])
                states.resize(top * n)
                f_bstart.pop_back(); f_bend.pop_back(); f_bcur.pop_back()
                f_fstart.pop_back(); f_fend.pop_back()
                continue
            j = f_bstart[top] + f_bcur[top]
            f_bcur[top] += 1
            i = bvar[j]
            target = bval[j]
            for k in range(n):
                child[k] = states[top * n + k]
            child[i] = target
            tvar.clear(); tval.clear()
            tvar.push_back(i); tval.push_back(target)
            self._normalize(&child[0], &w[0], &cc[0], &rl[0], &rm[0], &tvar, &tval)
            key = self._key3(&child[0], &w[0], &rl[0], &rm[0])
            if visited.count(key):
                continue
            visited.insert(key)
            nodes += 1
            if top + 1 > depth:
                depth = top + 1
            if nodes > node_cap:
                return -1, None, nodes, depth
            if self._equals(&child[0], &b[0]):
                out = []
                for k in range(<int> fvar.size()):
                    out.append((fvar[k], fval[k]))
                for k in range(<int> tvar.size()):
                    out.append((tvar[k], tval[k]))
                return 1, out, nodes, depth
            # push child frame
            f_fstart.push_back(<int32_t> fvar.size())
            for k in range(<int> tvar.size()):
                fvar.push_back(tvar[k]); fval.push_back(tval[k])
            f_fend.push_back(<int32_t> fvar.size())
            for k in range(n):
                states.push_back(child[k])
            f_bstart.push_back(<int32_t> bvar.size())
            self._branches(&states[(top + 1) * n], &b[0], &cc[0], &rl[0], &rm[0],
                           rules, &mask, &w[0], &bvar, &bval)
            f_bend.push_back(<int32_t> bvar.size())
            f_bcur.push_back(0)
        return 0, None, nodes, depth

    cdef int _slot_of(self, int i, int value, int32_t* w, int32_t* rl, int32_t* rm):
        if value == w[i]:
            return 0
        if value == rl[i]:
            return 1
        return 2

    cdef int _relax_admits(self, int i, int target, int32_t* w, int32_t* rl, int32_t* rm,
                           int32_t* mask, int32_t* scratch):
        cdef int np = self.pptr[i + 1] - self.pptr[i]
        cdef int32_t ctx_vals[16][3]
        cdef int ctx_len[16]
        cdef int idx[16]
        cdef vector[int32_t] big_vals
        cdef vector[int] big_len, big_idx
        cdef int j, p, k, slot, ri, tp, v, vslot
        cdef int use_big = np > 16
        if use_big:
            big_vals.resize(np * 3)
            big_len.resize(np)
            big_idx.resize(np)
        # gather possible values per parent, slot order, dups skipped
        for j in range(np):
            p = self.pidx[self.pptr[i] + j]
            k = 0
            for slot in range(3):
                v = w[p] if slot == 0 else (rl[p] if slot == 1 else rm[p])
                if slot == self._slot_of(p, v, w, rl, rm) and (mask[p] & (1 << slot)):
                    if use_big:
                        big_vals[j * 3 + k] = v
                    else:
                        ctx_vals[j][k] = v
                    k += 1
            if use_big:
                big_len[j] = k
                big_idx[j] = 0
            else:
                ctx_len[j] = k
                idx[j] = 0
        while True:
            for j in range(np):
                p = self.pidx[self.pptr[i] + j]
                if use_big:
                    scratch[p] = big_vals[j * 3 + big_idx[j]]
                else:
                    scratch[p] = ctx_vals[j][idx[j]]
            ri = self._match_row(i, scratch)
            if ri >= 0:
                tp = self._pref_pos(i, ri, target)
                for slot in range(3):
                    if not (mask[i] & (1 << slot)):
                        continue
                    v = w[i] if slot == 0 else (rl[i] if slot == 1 else rm[i])
                    if slot != self._slot_of(i, v, w, rl, rm):
                        continue
                    if v != target and tp < self._pref_pos(i, ri, v):
                        return 1
            j = np - 1
            while j >= 0:
                if use_big:
                    big_idx[j] += 1
                    if big_idx[j] < big_len[j]:
                        break
                    big_idx[j] = 0
                else:
                    idx[j] += 1
                    if idx[j] < ctx_len[j]:
                        break
                    idx[j] = 0
                j -= 1
            if j < 0:
                return 0

    cdef void _normalize(self, int32_t* state, int32_t* w, int32_t* c,
                         int32_t* rl, int32_t* rm, vector[int32_t]* tvar,
                         vector[int32_t]* tval):
        cdef int pos, i, v, target, ri
        for pos in range(self.n):
            i = self.topo[pos]
            v = state[i]
            if v == rl[i] or v == rm[i]:
                continue
            if v != w[i]:
                raise AssertionError("greedy pass would flip a variable twice")
            target = rl[i] if v <= c[i] else rm[i]
            ri = self._match_row(i, state)
            if ri >= 0 and self._pref_pos(i, ri, target) < self._pref_pos(i, ri, v):
                state[i] = target
                tvar[0].push_back(i)
                tval[0].push_back(target)

    cdef void _branches(self, int32_t* state, int32_t* b, int32_t* c,
                        int32_t* rl, int32_t* rm, int rules,
                        vector[int32_t]* mask, int32_t* w,
                        vector[int32_t]* bvar, vector[int32_t]* bval):
        cdef int limit = self.n
        cdef int j, pos, i, v, target, slot, ri
        cdef int seg = <int> bvar[0].size()  # this frame's slice starts here
        if rules & RULE_SUFFIX:
            j = self.n - 1
            while j >= 0 and state[self.topo[j]] == b[self.topo[j]]:
                j -= 1
            limit = j + 1
        for pos in range(limit):
            i = self.topo[pos]
            v = state[i]
            target = rm[i] if v <= c[i] else rl[i]
            if rules & RULE_FORWARD:
                slot = self._slot_of(i, target, w, rl, rm)
                if not (mask[0][i] & (1 << slot)):
                    continue
            ri = self._match_row(i, state)
            if ri >= 0 and self._pref_pos(i, ri, target) < self._pref_pos(i, ri, v):
                bvar[0].push_back(i)
                bval[0].push_back(target)
        if rules & RULE_LEASTVAR and <int> bvar[0].size() - seg > 1:
            # goal-directed move ordering: explore the least variable
            # that still differs from the goal first
            for pos in range(seg, <int> bvar[0].size()):
                if state[bvar[0][pos]] != b[bvar[0][pos]]:
                    if pos > seg:
                        i = bvar[0][pos]
                        v = bval[0][pos]
                        for j in range(pos, seg, -1):
                            bvar[0][j] = bvar[0][j - 1]
                            bval[0][j] = bval[0][j - 1]
                        bvar[0][seg] = i
                        bval[0][seg] = v
                    break

    cdef uint64_t _key3(self, int32_t* state, int32_t* w, int32_t* rl, int32_t* rm):
        cdef uint64_t code = 0
        cdef int i, d, v
        for i in range(self.n - 1, -1, -1):
            v = state[i]
            if v == w[i]:
                d = 0
            elif v == rl[i]:
                d = 1
            else:
                d = 2
            code = code * 3 + <uint64_t> d
        return code

    cdef int _equals(self, int32_t* a, int32_t* b):
        cdef int i
        for i in range(self.n):
            if a[i] != b[i]:
                return 0
        return 1

    cdef list _flip_list(self, vector[int32_t]* tvar, vector[int32_t]* tval, int start, int end):
        out = []
        cdef int k
        for k in range(start, end):
            out.append((tvar[0][k], tval[0][k]))
        return out

    # -- unrestricted baseline ------------------------------------------

    def search_naive(self, worse, better, long long node_cap):
        if not self.tables.fits_uint63():
            raise ValueError("outcome space too large for 63-bit state keys")
        cdef int n = self.n
        cdef vector[int32_t] w, b
        cdef int i, j, k, target, top
        w.resize(n); b.resize(n)
        for i in range(n):
            w[i] = worse[i]
            b[i] = better[i]

        cdef vector[int32_t] states, bvar, bval, fvar, fval
        cdef vector[int32_t] f_bstart, f_bend, f_bcur
        cdef unordered_set[uint64_t] visited
        cdef long long nodes
        cdef int depth = 0
        cdef uint64_t key
        cdef vector[int32_t] child
        child.resize(n)

        states.resize(n)
        for i in range(n):
            states[i] = w[i]
        visited.insert(self._pack(&states[0]))
        nodes = 1
        if self._equals(&states[0], &b[0]):
            return 1, [], nodes, 0
        f_bstart.push_back(0)
        self._naive_branches(&states[0], &bvar, &bval)
        f_bend.push_back(<int32_t> bvar.size())
        f_bcur.push_back(0)
        fvar.push_back(0); fval.push_back(0)  # root has no incoming flip

        while f_bstart.size() > 0:
            top = <int> f_bstart.size() - 1
            if f_bcur[top] >= f_bend[top] - f_bstart[top]:
                bvar.resize(f_bstart[top]); bval.resize(f_bstart[top])
                states.resize(top * n)
                f_bstart.pop_back(); f_bend.pop_back(); f_bcur.pop_back()
                fvar.pop_back(); fval.pop_back()
                continue
            j = f_bstart[top] + f_bcur[top]
            f_bcur[top] += 1
            i = bvar[j]
            target = bval[j]
            for k in range(n):
                child[k] = states[top * n + k]
            child[i] = target
            key = self._pack(&child[0])
            if visited.count(key):
                continue
            visited.insert(key)
            nodes += 1
            if top + 1 > depth:
                depth = top + 1
            if nodes > node_cap:
                return -1, None, nodes, depth
            if self._equals(&child[0], &b[0]):
                out = []
                for k in range(1, <int> fvar.size()):
                    out.append((fvar[k], fval[k]))
                out.append((i, target))
                return 1, out, nodes, depth
            for k in range(n):
                states.push_back(child[k])
            fvar.push_back(i); fval.push_back(target)
            f_bstart.push_back(<int32_t> bvar.size())
            self._naive_branches(&states[(top + 1) * n], &bvar, &bval)
            f_bend.push_back(<int32_t> bvar.size())
            f_bcur.push_back(0)
        return 0, None, nodes, depth

    cdef void _naive_branches(self, int32_t* state, vector[int32_t]* bvar, vector[int32_t]* bval):
        cdef int pos, i, ri, stop, p
        for pos in range(self.n):
            i = self.topo[pos]
            ri = self._match_row(i, state)
            if ri < 0:
                continue
            stop = self._pref_pos(i, ri, state[i])
            for p in range(stop):
                bvar[0].push_back(i)
                bval[0].push_back(self._val_at_pos(i, ri, p))

    # -- reachability -----------------------------------------------------

    def reachable(self, src, dst, long long visit_cap):
        if not self.tables.fits_uint63():
            raise ValueError("outcome space too large for 63-bit state keys")
        cdef int n = self.n
        cdef vector[int32_t] s, d, state, child
        cdef int i, j, pos, ri, stop, p, vv
        cdef uint64_t key
        s.resize(n); d.resize(n); state.resize(n); child.resize(n)
        cdef int same = 1
        for i in range(n):
            s[i] = src[i]
            d[i] = dst[i]
            if s[i] != d[i]:
                same = 0
        if same:
            return 0
        cdef unordered_set[uint64_t] visited
        cdef vector[uint64_t] queue
        cdef size_t head = 0
        cdef uint64_t code
        visited.insert(self._pack(&s[0]))
        queue.push_back(self._pack(&s[0]))
        while head < queue.size():
            code = queue[head]
            head += 1
            self._unpack(code, &state[0])
            for pos in range(n):
                i = self.topo[pos]
                ri = self._match_row(i, &state[0])
                if ri < 0:
                    continue
                stop = self._pref_pos(i, ri, state[i])
                for p in range(stop):
                    vv = self._val_at_pos(i, ri, p)
                    for j in range(n):
                        child[j] = state[j]
                    child[i] = vv
                    if self._equals(&child[0], &d[0]):
                        return 1
                    key = self._pack(&child[0])
                    if visited.count(key):
                        continue
                    visited.insert(key)
                    if <long long> visited.size() > visit_cap:
                        return -1
                    queue.push_back(key)
        return 0

    def reach_set(self, src, long long visit_cap):
        if not self.tables.fits_uint63():
            raise ValueError("outcome space too large for 63-bit state keys")
        cdef int n = self.n
        cdef vector[int32_t] s, state, child
        cdef int i, j, pos, ri, stop, p, vv
        s.resize(n); state.resize(n); child.resize(n)
        for i in range(n):
            s[i] = src[i]
        cdef unordered_set[uint64_t] visited
        cdef vector[uint64_t] queue
        cdef size_t head = 0
        cdef uint64_t code, start, key
        start = self._pack(&s[0])
        visited.insert(start)
        queue.push_back(start)
        while head < queue.size():
            code = queue[head]
            head += 1
            self._unpack(code, &state[0])
            for pos in range(n):
                i = self.topo[pos]
                ri = self._match_row(i, &state[0])
                if ri < 0:
                    continue
                stop = self._pref_pos(i, ri, state[i])
                for p in range(stop):
                    vv = self._val_at_pos(i, ri, p)
                    for j in range(n):
                        child[j] = state[j]
                    child[i] = vv
                    key = self._pack(&child[0])
                    if visited.count(key):
                        continue
                    visited.insert(key)
                    if <long long> (visited.size() - 1) > visit_cap:
                        return None
                    queue.push_back(key)
        cdef vector[uint64_t] codes
        codes.reserve(visited.size())
        for code in visited:
            if code != start:
                codes.push_back(code)
        cpp_sort(codes.begin(), codes.end())
        out = []
        for j in range(<int> codes.size()):
            out.append(codes[j])
        return out

    # -- acyclicity -------------------------------------------------------

    def check_acyclic(self):
        if not self.tables.fits_uint63():
            raise ValueError("outcome space too large for 63-bit state keys")
        cdef uint64_t product = <uint64_t> self.tables.product
        cdef vector[signed char] colors
        colors.resize(product)
        cdef int n = self.n
        cdef vector[int32_t] state
        state.resize(n)
        cdef vector[uint64_t] cbuf
        cdef vector[uint64_t] f_code
        cdef vector[int] f_bstart, f_bcur
        cdef uint64_t start, code, ch
        cdef int top
        cdef signed char cc
        for start in range(product):
            if colors[start]:
                continue
            colors[start] = 1
            f_code.push_back(start)
            f_bstart.push_back(0)
            self._acyclic_children(start, &state[0], &cbuf)
            f_bcur.push_back(0)
            while f_code.size() > 0:
                top = <int> f_code.size() - 1
                if f_bcur[top] >= <int> cbuf.size() - f_bstart[top]:
                    colors[f_code[top]] = 2
                    cbuf.resize(f_bstart[top])
                    f_code.pop_back(); f_bstart.pop_back(); f_bcur.pop_back()
                    continue
                ch = cbuf[f_bstart[top] + f_bcur[top]]
                f_bcur[top] += 1
                cc = colors[ch]
                if cc == 1:
                    return False
                if cc == 0:
                    colors[ch] = 1
                    f_code.push_back(ch)
                    f_bstart.push_back(<int> cbuf.size())
                    self._acyclic_children(ch, &state[0], &cbuf)
                    f_bcur.push_back(0)
        return True

    cdef void _acyclic_children(self, uint64_t code, int32_t* state, vector[uint64_t]* cbuf):
        cdef int pos, i, ri, stop, p, vv, old
        self._unpack(code, state)
        for pos in range(self.n):
            i = self.topo[pos]
            ri = self._match_row(i, state)
            if ri < 0:
                continue
            stop = self._pref_pos(i, ri, state[i])
            old = state[i]
            for p in range(stop):
                vv = self._val_at_pos(i, ri, p)
                state[i] = vv
                cbuf[0].push_back(self._pack(state))
            state[i] = old
