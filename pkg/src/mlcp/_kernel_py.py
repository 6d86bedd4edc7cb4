"""Pure-Python search kernel.

This is the reference implementation of the hot loops: category-restricted
dominance search, unrestricted baseline search, reachability over the
induced flip graph, and an acyclicity check.  The compiled twin in
_kernel_cy.pyx mirrors it operation for operation; traversal order,
witnesses and node counts must match exactly, and the parity tests hold
both to that.

States are lists of value indices.  The restricted search visits at most
three values per variable (start value and the two representatives), so
its visited keys fit base 3; the other searches key states by their
mixed-radix code.
"""

from collections import deque

BACKEND = "pure"

RULE_SUFFIX = 1
RULE_FORWARD = 2
RULE_LEASTVAR = 4


class Engine:
    def __init__(self, tables):
        self.t = tables

    # -- shared helpers -------------------------------------------------

    def _improving(self, i, state, t):
        return self.t.improving(i, state, t)

    # -- restricted search ------------------------------------------------

    def search_restricted(self, worse, better, c, rep_l, rep_m, rules, node_cap):
        """Category-restricted dominance search.

        Returns (status, flips, nodes, depth): status 1 with a witness
        flip list when better is reached, 0 when the restricted space is
        exhausted, -1 when node_cap is hit.  nodes counts admitted states
        including the root.
        """
        t = self.t
        n = t.n
        topo = t.topo
        better = list(better)

        # distinct values each variable can take, start value first
        uvals = []
        for i in range(n):
            u = [worse[i]]
            if rep_l[i] not in u:
                u.append(rep_l[i])
            if rep_m[i] not in u:
                u.append(rep_m[i])
            uvals.append(u)

        def key(state):
            code = 0
            for i in range(n - 1, -1, -1):
                code = code * 3 + uvals[i].index(state[i])
            return code

        poss = None
        if rules & RULE_FORWARD:
            poss = [{worse[i]} for i in range(n)]
            scratch = [0] * n
            changed = True
            while changed:
                changed = False
                for i in range(n):
                    ps = t.parents[i]
                    for target in (rep_l[i], rep_m[i]):
                        if target in poss[i]:
                            continue
                        if self._relax_admits(i, target, ps, poss, scratch):
                            poss[i].add(target)
                            changed = True
            for i in range(n):
                if better[i] not in poss[i]:
                    return 0, None, 0, 0

        def normalize(state, flips):
            # greedy pass: pull out-of-set values to the representative of
            # their own category when that improves the outcome
            for i in topo:
                v = state[i]
                if v == rep_l[i] or v == rep_m[i]:
                    continue
                # a variable leaves its start value at most once
                assert v == worse[i], "greedy pass would flip a variable twice"
                target = rep_l[i] if v <= c[i] else rep_m[i]
                if t.improving(i, state, target):
                    state[i] = target
                    flips.append((i, target))

        def branches(state):
            limit = n
            if rules & RULE_SUFFIX:
                j = n - 1
                while j >= 0 and state[topo[j]] == better[topo[j]]:
                    j -= 1
                limit = j + 1
            out = []
            for pos in range(limit):
                i = topo[pos]
                v = state[i]
                target = rep_m[i] if v <= c[i] else rep_l[i]
                if poss is not None and target not in poss[i]:
                    continue
                if t.improving(i, state, target):
                    out.append((i, target))
            if rules & RULE_LEASTVAR and len(out) > 1:
                # goal-directed move ordering: explore the least variable
                # that still differs from the goal first
                for k in range(len(out)):
                    if state[out[k][0]] != better[out[k][0]]:
                        if k:
                            out.insert(0, out.pop(k))
                        break
            return out

        state = list(worse)
        flips0 = []
        normalize(state, flips0)
        visited = {key(state)}
        nodes = 1
        depth = 0
        if state == better:
            return 1, flips0, nodes, 0
        frames = [[state, branches(state), 0, flips0]]
        while frames:
            fr = frames[-1]
            if fr[2] >= len(fr[1]):
                frames.pop()
                continue
            i, target = fr[1][fr[2]]
            fr[2] += 1
            child = fr[0].copy()
            child[i] = target
            flips = [(i, target)]
            normalize(child, flips)
            k = key(child)
            if k in visited:
                continue
            visited.add(k)
            nodes += 1
            if len(frames) > depth:
                depth = len(frames)
            if nodes > node_cap:
                return -1, None, nodes, depth
            if child == better:
                out = []
                for f in frames:
                    out.extend(f[3])
                out.extend(flips)
                return 1, out, nodes, depth
            frames.append([child, branches(child), 0, flips])
        return 0, None, nodes, depth

    def _relax_admits(self, i, target, ps, poss, scratch):
        """True when some value in poss[i] can flip to target under some
        combination of possible parent values."""
        t = self.t
        ctx_lists = [sorted(poss[p]) for p in ps]
        idx = [0] * len(ps)
        while True:
            for j, p in enumerate(ps):
                scratch[p] = ctx_lists[j][idx[j]]
            ri = t.match_row(i, scratch)
            tp = t.pref_pos(i, ri, target)
            for v in poss[i]:
                if v != target and tp < t.pref_pos(i, ri, v):
                    return True
            j = len(ps) - 1
            while j >= 0:
                idx[j] += 1
                if idx[j] < len(ctx_lists[j]):
                    break
                idx[j] = 0
                j -= 1
            if j < 0:
                return False

    # -- unrestricted baseline ------------------------------------------

    def search_naive(self, worse, better, node_cap):
        """Plain improving-flip DFS over the full outcome space."""
        t = self.t
        topo = t.topo
        better = list(better)
        pack = t.pack

        def branches(state):
            out = []
            for i in topo:
                for target in t.improving_targets(i, state):
                    out.append((i, target))
            return out

        state = list(worse)
        visited = {pack(state)}
        nodes = 1
        depth = 0
        if state == better:
            return 1, [], nodes, 0
        frames = [[state, branches(state), 0, None]]
        while frames:
            fr = frames[-1]
            if fr[2] >= len(fr[1]):
                frames.pop()
                continue
            i, target = fr[1][fr[2]]
            fr[2] += 1
            child = fr[0].copy()
            child[i] = target
            k = pack(child)
            if k in visited:
                continue
            visited.add(k)
            nodes += 1
            if len(frames) > depth:
                depth = len(frames)
            if nodes > node_cap:
                return -1, None, nodes, depth
            if child == better:
                out = [f[3] for f in frames[1:]]
                out.append((i, target))
                return 1, out, nodes, depth
            frames.append([child, branches(child), 0, (i, target)])
        return 0, None, nodes, depth

    # -- reachability over the induced graph ------------------------------

    def reachable(self, src, dst, visit_cap):
        """1 when dst is reachable from src by improving flips, 0 when
        not, -1 when more than visit_cap states were visited."""
        t = self.t
        topo = t.topo
        dst = list(dst)
        if list(src) == dst:
            return 0
        pack = t.pack
        visited = {pack(src)}
        queue = deque([list(src)])
        while queue:
            state = queue.popleft()
            for i in topo:
                for target in t.improving_targets(i, state):
                    child = state.copy()
                    child[i] = target
                    if child == dst:
                        return 1
                    k = pack(child)
                    if k in visited:
                        continue
                    visited.add(k)
                    if len(visited) > visit_cap:
                        return -1
                    queue.append(child)
        return 0

    def reach_set(self, src, visit_cap):
        """Sorted packed codes of all states strictly reachable from src,
        or None when the set would exceed visit_cap."""
        t = self.t
        topo = t.topo
        pack = t.pack
        start = pack(src)
        visited = {start}
        queue = deque([list(src)])
        while queue:
            state = queue.popleft()
            for i in topo:
                for target in t.improving_targets(i, state):
                    child = state.copy()
                    child[i] = target
                    k = pack(child)
                    if k in visited:
                        continue
                    visited.add(k)
                    if len(visited) - 1 > visit_cap:
                        return None
                    queue.append(child)
        visited.discard(start)
        return sorted(visited)

    # -- acyclicity of the induced graph ----------------------------------

    def check_acyclic(self):
        """DFS three-coloring over the whole outcome space.  The caller
        is responsible for budget-gating on t.product."""
        t = self.t
        topo = t.topo
        product = t.product
        pack = t.pack
        unpack = t.unpack
        colors = bytearray(product)

        def children(code):
            state = unpack(code)
            out = []
            for i in topo:
                for target in t.improving_targets(i, state):
                    child = state.copy()
                    child[i] = target
                    out.append(pack(child))
            return out

        for start in range(product):
            if colors[start]:
                continue
            colors[start] = 1
            stack = [[start, children(start), 0]]
            while stack:
                fr = stack[-1]
                if fr[2] >= len(fr[1]):
                    colors[fr[0]] = 2
                    stack.pop()
                    continue
                ch = fr[1][fr[2]]
                fr[2] += 1
                cc = colors[ch]
                if cc == 1:
                    return False
                if cc == 0:
                    colors[ch] = 1
                    stack.append([ch, children(ch), 0])
        return True
