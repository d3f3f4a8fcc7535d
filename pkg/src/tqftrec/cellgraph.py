"""Cell graphs (ribbon graphs with labeled vertices) and their amplitudes.

A cell graph is stored as per-vertex cyclic lists of half-edges plus a
perfect matching.  The genus comes from face tracing and the Euler
formula.  ``eca_evaluate`` computes the TQFT amplitude of a decorated
graph by repeated edge contraction: contracting an edge between distinct
vertices multiplies their decorations; contracting a loop applies the
coproduct to the vertex decoration, splitting its cyclic order in two,
with a product of component amplitudes when the loop disconnects the
graph.  The module also houses two brute-force enumerators used as
oracles: arrowed-graph counts by perfect-matching enumeration and a small
catalog-based lattice-point count.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Iterator, Mapping, Sequence

from .exact import BudgetError, Rational
from .frobenius import AlgebraElement, FrobeniusAlgebra, counit, product

DEFAULT_HALF_EDGE_BUDGET = 16

try:  # the jitted enumerator is optional; the pure fallback is authoritative
    import numpy as _np
    from numba import njit as _njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _HAVE_NUMBA = False


class CellGraph:
    """Ribbon graph with n labeled vertices.

    ``degrees[v]`` is the number of half-edges at vertex v+1 (vertices are
    1-based externally); half-edge slots are 0-based with the arrow at
    slot 0.  ``matching`` pairs half-edges given as (vertex, slot).
    """

    def __init__(self, degrees: Sequence[int], matching):
        self.degrees = tuple(int(d) for d in degrees)
        if any(d < 0 for d in self.degrees):
            raise ValueError("degrees must be non-negative")
        total = sum(self.degrees)
        if total % 2:
            raise ValueError("odd number of half-edges cannot be matched")
        self.n = len(self.degrees)
        offsets = [0]
        for d in self.degrees:
            offsets.append(offsets[-1] + d)
        self._offsets = tuple(offsets)
        pairs = []
        used = set()
        for pair in matching:
            (v1, h1), (v2, h2) = pair
            a = self._gid(v1, h1)
            b = self._gid(v2, h2)
            if a == b:
                raise ValueError("half-edge matched with itself")
            for x in (a, b):
                if x in used:
                    raise ValueError("half-edge matched twice")
                used.add(x)
            pairs.append((a, b))
        if len(used) != total:
            raise ValueError("matching is not perfect")
        partner = [0] * total
        for a, b in pairs:
            partner[a] = b
            partner[b] = a
        self.partner = tuple(partner)

    def _gid(self, v: int, h: int) -> int:
        if not 1 <= v <= self.n:
            raise ValueError(f"vertex {v} out of range 1..{self.n}")
        if not 0 <= h < self.degrees[v - 1]:
            raise ValueError(f"slot {h} out of range at vertex {v}")
        return self._offsets[v - 1] + h

    def vertex_of(self, gid: int) -> int:
        for v in range(self.n):
            if gid < self._offsets[v + 1]:
                return v
        raise ValueError("half-edge id out of range")

    @property
    def edges(self) -> int:
        return sum(self.degrees) // 2

    def faces(self) -> int:
        total = sum(self.degrees)
        nxt = [0] * total
        for v in range(self.n):
            off = self._offsets[v]
            d = self.degrees[v]
            for s in range(d):
                nxt[off + s] = off + (s + 1) % d
        seen = [False] * total
        count = 0
        for h in range(total):
            if seen[h]:
                continue
            count += 1
            cur = h
            while not seen[cur]:
                seen[cur] = True
                cur = nxt[self.partner[cur]]
        return count

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        total = sum(self.degrees)
        for h in range(total):
            a = find(self.vertex_of(h))
            b = find(self.vertex_of(self.partner[h]))
            if a != b:
                parent[a] = b
        root = find(0)
        return all(find(v) == root for v in range(self.n))

    def genus(self) -> int:
        chi = self.n - self.edges + self.faces()
        if (2 - chi) % 2:
            raise ValueError("malformed ribbon structure: half-integral genus")
        g = (2 - chi) // 2
        if g < 0:
            raise ValueError("malformed ribbon structure: negative genus")
        return g

    def to_json(self) -> dict:
        pairs = []
        done = set()
        total = sum(self.degrees)
        for h in range(total):
            p = self.partner[h]
            if h in done or p in done:
                continue
            done.add(h)
            done.add(p)
            v1 = self.vertex_of(h)
            v2 = self.vertex_of(p)
            pairs.append([[v1 + 1, h - self._offsets[v1]],
                          [v2 + 1, p - self._offsets[v2]]])
        return {"degrees": list(self.degrees), "matching": pairs}

    @classmethod
    def from_json(cls, data: Mapping) -> "CellGraph":
        return cls(data["degrees"], data["matching"])

    def __repr__(self):
        return f"CellGraph(degrees={self.degrees}, edges={self.edges})"


def genus(graph: CellGraph) -> int:
    return graph.genus()


# -- edge-contraction evaluation ----------------------------------------------

# internal state: verts = tuple of (coeffs tuple, cycle tuple of tokens),
# partner = mapping token -> token


def _initial_state(graph: CellGraph, vs: Sequence[AlgebraElement]):
    verts = []
    for v in range(graph.n):
        off = graph._offsets[v]
        cyc = tuple(range(off, off + graph.degrees[v]))
        verts.append((vs[v].coeffs, cyc))
    partner = {h: graph.partner[h] for h in range(sum(graph.degrees))}
    return tuple(verts), partner


def _components(verts, partner):
    pos = {}
    for vi, (_, cyc) in enumerate(verts):
        for tok in cyc:
            pos[tok] = vi
    parent = list(range(len(verts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in partner.items():
        ra, rb = find(pos[a]), find(pos[b])
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for vi in range(len(verts)):
        groups.setdefault(find(vi), []).append(vi)
    return list(groups.values())


def _contract_edge(verts, partner, vi, p_idx):
    """Contract the edge whose one half-edge sits at vertex vi, slot p_idx.

    Returns ("join", new_verts, new_partner) for an edge between distinct
    vertices (decoration of the merged vertex left as a placeholder pair),
    or ("loop", new_verts, new_partner, piece_positions) for a loop, where
    the split vertex occupies two consecutive positions.
    """
    coeffs_i, cyc_i = verts[vi]
    h = cyc_i[p_idx]
    p = partner[h]
    new_partner = {k: w for k, w in partner.items() if k not in (h, p)}
    if p in cyc_i:
        q_idx = cyc_i.index(p)
        a, b = sorted((p_idx, q_idx))
        cycle1 = cyc_i[a + 1:b]
        cycle2 = cyc_i[b + 1:] + cyc_i[:a]
        new_verts = (
            verts[:vi]
            + ((None, cycle1), (None, cycle2))
            + verts[vi + 1:]
        )
        return "loop", new_verts, new_partner, (vi, vi + 1)
    # edge between distinct vertices
    vj = None
    for w, (_, cyc) in enumerate(verts):
        if p in cyc:
            vj = w
            break
    cyc_j = verts[vj][1]
    q_idx = cyc_j.index(p)
    merged = (
        cyc_i[:p_idx]
        + cyc_j[q_idx + 1:]
        + cyc_j[:q_idx]
        + cyc_i[p_idx + 1:]
    )
    lo, hi = min(vi, vj), max(vi, vj)
    new_verts = (
        verts[:lo]
        + (((vi, vj), merged),)
        + verts[lo + 1:hi]
        + verts[hi + 1:]
    )
    return "join", new_verts, new_partner, (vi, vj, lo)


def _eval_state(A: FrobeniusAlgebra, verts, partner, choose_all: bool,
                memo=None):
    """Evaluate a connected decorated state.  With choose_all, return the
    set of values over every admissible contraction order; otherwise a
    single value using the fixed rule (first half-edge at the lowest
    vertex).  Orders reconverge on common intermediate states, so the
    all-orders walk memoizes on the state itself."""
    if memo is not None:
        # hash coefficients as integer pairs; Fraction.__hash__ is costly
        state_key = (
            tuple(
                (tuple((c.numerator, c.denominator) for c in coeffs), cyc)
                for coeffs, cyc in verts
            ),
            tuple(sorted(partner.items())),
        )
        hit = memo.get(state_key)
        if hit is not None:
            return hit
    live = [vi for vi, (_, cyc) in enumerate(verts) if cyc]
    if not live:
        if len(verts) != 1:
            raise ValueError("disconnected state reached terminal evaluation")
        val = sum(
            (c * e for c, e in zip(verts[0][0], A.counit)), Fraction(0))
        return {val} if choose_all else val

    if choose_all:
        choices = []
        seen_edges = set()
        for vi in live:
            cyc = verts[vi][1]
            for idx, tok in enumerate(cyc):
                edge = frozenset((tok, partner[tok]))
                if edge in seen_edges:
                    continue
                seen_edges.add(edge)
                choices.append((vi, idx))
        results = set()
        for vi, idx in choices:
            results |= _eval_choice(A, verts, partner, vi, idx, True, memo)
        if memo is not None:
            memo[state_key] = results
        return results
    vi = live[0]
    return _eval_choice(A, verts, partner, vi, 0, False)


def _eval_choice(A, verts, partner, vi, idx, choose_all, memo=None):
    kind, new_verts, new_partner, info = _contract_edge(verts, partner, vi, idx)
    s = A.dim
    if kind == "join":
        _, _, lo = info
        cu = verts[info[0]][0]
        cw = verts[info[1]][0]
        merged = [Fraction(0)] * s
        pt = A.product_tensor
        for i, ci in enumerate(cu):
            if ci == 0:
                continue
            for j, cj in enumerate(cw):
                if cj == 0:
                    continue
                cij = ci * cj
                for k, c in enumerate(pt[i][j]):
                    if c != 0:
                        merged[k] += cij * c
        merged_coeffs = tuple(merged)
        new_verts = (
            new_verts[:lo]
            + ((merged_coeffs, new_verts[lo][1]),)
            + new_verts[lo + 1:]
        )
        return _eval_state(A, new_verts, new_partner, choose_all, memo)
    # loop: coproduct of the decoration, distributed over the two pieces
    pos1, pos2 = info
    coeffs = verts[vi][0]
    W = [
        [
            sum((coeffs[i] * A.coproduct_tensor[i][a][b] for i in range(s)),
                Fraction(0))
            for b in range(s)
        ]
        for a in range(s)
    ]
    comps = _components(new_verts, new_partner)
    comp_of = {}
    for comp in comps:
        for v in comp:
            comp_of[v] = tuple(comp)
    connected = comp_of[pos1] == comp_of[pos2] and len(comps) == 1

    def with_basis(vts, pos, a):
        e = [Fraction(0)] * s
        e[a] = Fraction(1)
        return vts[:pos] + ((tuple(e), vts[pos][1]),) + vts[pos + 1:]

    if connected:
        if choose_all:
            acc = None
            for a in range(s):
                for b in range(s):
                    if W[a][b] == 0:
                        continue
                    sub = _eval_state(
                        A, with_basis(with_basis(new_verts, pos1, a), pos2, b),
                        new_partner, True, memo)
                    term = {W[a][b] * x for x in sub}
                    acc = term if acc is None else {
                        x + y for x in acc for y in term}
            return acc if acc is not None else {Fraction(0)}
        total = Fraction(0)
        for a in range(s):
            for b in range(s):
                if W[a][b] == 0:
                    continue
                total += W[a][b] * _eval_state(
                    A, with_basis(with_basis(new_verts, pos1, a), pos2, b),
                    new_partner, False)
        return total
    # the loop separated the graph: evaluate the two components apart
    comp1 = comp_of[pos1]
    comp2 = comp_of[pos2]
    if set(comp1) | set(comp2) != set(range(len(new_verts))) or comp1 == comp2:
        raise ValueError("unexpected component structure after loop split")

    def restrict(vts, comp):
        sub = tuple(vts[v] for v in comp)
        toks = {tok for v in comp for tok in vts[v][1]}
        subp = {k: w for k, w in new_partner.items() if k in toks}
        return sub, subp

    if choose_all:
        acc = None
        for a in range(s):
            for b in range(s):
                if W[a][b] == 0:
                    continue
                v1, p1 = restrict(with_basis(new_verts, pos1, a), comp1)
                v2, p2 = restrict(with_basis(new_verts, pos2, b), comp2)
                s1 = _eval_state(A, v1, p1, True, memo)
                s2 = _eval_state(A, v2, p2, True, memo)
                term = {W[a][b] * x * y for x in s1 for y in s2}
                acc = term if acc is None else {
                    x + y for x in acc for y in term}
        return acc if acc is not None else {Fraction(0)}
    total = Fraction(0)
    for a in range(s):
        for b in range(s):
            if W[a][b] == 0:
                continue
            v1, p1 = restrict(with_basis(new_verts, pos1, a), comp1)
            v2, p2 = restrict(with_basis(new_verts, pos2, b), comp2)
            total += W[a][b] * _eval_state(A, v1, p1, False) \
                * _eval_state(A, v2, p2, False)
    return total


def eca_evaluate(graph: CellGraph, A: FrobeniusAlgebra,
                 vs: Sequence[AlgebraElement]) -> Rational:
    """Amplitude of the decorated graph by edge contraction, using the
    fixed order: always the slot-0 half-edge at the lowest live vertex."""
    if len(vs) != graph.n:
        raise ValueError("need one decoration per vertex")
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    verts, partner = _initial_state(graph, vs)
    return _eval_state(A, verts, partner, False)


def eca_evaluate_all_orders(graph: CellGraph, A: FrobeniusAlgebra,
                            vs: Sequence[AlgebraElement],
                            memo: dict = None) -> set:
    """All values reachable over every contraction order; a singleton set
    certifies order independence for this graph and decoration.

    A state fully determines its value set, so a caller sweeping many
    graphs or decorations over one algebra may pass a shared ``memo``
    dict to reuse work across calls."""
    if len(vs) != graph.n:
        raise ValueError("need one decoration per vertex")
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    verts, partner = _initial_state(graph, vs)
    return _eval_state(A, verts, partner, True, {} if memo is None else memo)


def eca_functional_all_orders(graph: CellGraph, A: FrobeniusAlgebra,
                              memo: dict = None) -> dict:
    """Map every basis decoration tuple to its set of values over all
    contraction orders.

    Decorations enter the contraction rules linearly, so the whole
    functional can be computed on decoration-free structural states; this
    is how exhaustive sweeps over decorations stay affordable.  A shared
    ``memo`` dict reuses structural states across graphs for one algebra.
    """
    if not graph.is_connected():
        raise ValueError("graph must be connected")
    verts, partner = _initial_state(
        graph, [AlgebraElement(A, A.counit) for _ in range(graph.n)])
    cycles = tuple(cyc for _, cyc in verts)
    return _functional_state(
        A, cycles, partner, {} if memo is None else memo)


def _functional_state(A, cycles, partner, memo):
    from itertools import product as iproduct

    key = (cycles, tuple(sorted(partner.items())))
    hit = memo.get(key)
    if hit is not None:
        return hit
    s = A.dim
    n = len(cycles)
    if all(not cyc for cyc in cycles):
        if n != 1:
            raise ValueError("disconnected state reached terminal evaluation")
        out = {(i,): {A.counit[i]} for i in range(s)}
        memo[key] = out
        return out
    choices = []
    seen_edges = set()
    for vi, cyc in enumerate(cycles):
        for idx, tok in enumerate(cyc):
            edge = frozenset((tok, partner[tok]))
            if edge in seen_edges:
                continue
            seen_edges.add(edge)
            choices.append((vi, idx))
    out = {}
    for vi, idx in choices:
        piece = _functional_choice(A, cycles, partner, vi, idx, memo)
        for d, vals in piece.items():
            out.setdefault(d, set()).update(vals)
    memo[key] = out
    return out


def _functional_choice(A, cycles, partner, vi, idx, memo):
    from itertools import product as iproduct

    s = A.dim
    n = len(cycles)
    verts = tuple((None, cyc) for cyc in cycles)
    kind, new_verts, new_partner, info = _contract_edge(verts, partner, vi, idx)
    new_cycles = tuple(cyc for _, cyc in new_verts)
    zero = Fraction(0)
    if kind == "join":
        va, vb, lo = info
        Tc = _functional_state(A, new_cycles, new_partner, memo)
        pt = A.product_tensor
        out = {}
        for d in iproduct(range(s), repeat=n):
            i, j = d[va], d[vb]
            rest = [d[p] for p in range(n) if p != va and p != vb]
            acc = None
            for k in range(s):
                c = pt[i][j][k]
                if c == 0:
                    continue
                sub = Tc[tuple(rest[:lo] + [k] + rest[lo:])]
                term = {c * x for x in sub}
                acc = term if acc is None else {x + y for x in acc for y in term}
            out[d] = acc if acc is not None else {zero}
        return out
    pos1, pos2 = info
    delta = A.coproduct_tensor
    comps = _components(new_verts, new_partner)
    connected = len(comps) == 1
    if connected:
        Tc = _functional_state(A, new_cycles, new_partner, memo)
        out = {}
        for d in iproduct(range(s), repeat=n):
            i = d[vi]
            acc = None
            for a in range(s):
                for b in range(s):
                    w = delta[i][a][b]
                    if w == 0:
                        continue
                    sub = Tc[d[:vi] + (a, b) + d[vi + 1:]]
                    term = {w * x for x in sub}
                    acc = term if acc is None else {
                        x + y for x in acc for y in term}
            out[d] = acc if acc is not None else {zero}
        return out
    comp_of = {}
    for comp in comps:
        for v in comp:
            comp_of[v] = tuple(sorted(comp))
    comp1 = comp_of[pos1]
    comp2 = comp_of[pos2]
    if set(comp1) | set(comp2) != set(range(len(new_cycles))) or comp1 == comp2:
        raise ValueError("unexpected component structure after loop split")

    def restrict(comp):
        sub = tuple(new_cycles[v] for v in comp)
        toks = {tok for v in comp for tok in new_cycles[v]}
        subp = {k2: w for k2, w in new_partner.items() if k2 in toks}
        return sub, subp

    c1, p1 = restrict(comp1)
    c2, p2 = restrict(comp2)
    T1 = _functional_state(A, c1, p1, memo)
    T2 = _functional_state(A, c2, p2, memo)
    out = {}
    for d in iproduct(range(s), repeat=n):
        i = d[vi]
        acc = None
        for a in range(s):
            for b in range(s):
                w = delta[i][a][b]
                if w == 0:
                    continue
                full = d[:vi] + (a, b) + d[vi + 1:]
                s1 = T1[tuple(full[p] for p in comp1)]
                s2 = T2[tuple(full[p] for p in comp2)]
                term = {w * x * y for x in s1 for y in s2}
                acc = term if acc is None else {
                    x + y for x in acc for y in term}
        out[d] = acc if acc is not None else {zero}
    return out


# -- matching enumeration oracle ----------------------------------------------


def _count_by_genus_py(degrees: Sequence[int]) -> dict:
    """Counts of perfect matchings by genus of the resulting connected
    graph; pure-python reference."""
    vert = []
    for v, d in enumerate(degrees):
        vert.extend([v] * d)
    H = len(vert)
    nxt = {}
    start = 0
    for v, d in enumerate(degrees):
        for s in range(d):
            nxt[start + s] = start + (s + 1) % d
        start += d
    res: dict[int, int] = {}
    n = len(degrees)

    def tally(partner):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for a, b in partner.items():
            ra, rb = find(vert[a]), find(vert[b])
            if ra != rb:
                parent[ra] = rb
        if len({find(v) for v in range(n)}) > 1:
            return
        seen = set()
        F = 0
        for h in range(H):
            if h in seen:
                continue
            F += 1
            cur = h
            while cur not in seen:
                seen.add(cur)
                cur = nxt[partner[cur]]
        g = (2 - (n - H // 2 + F)) // 2
        res[g] = res.get(g, 0) + 1

    def rec(unmatched, partner):
        if not unmatched:
            tally(partner)
            return
        a = unmatched[0]
        for i in range(1, len(unmatched)):
            b = unmatched[i]
            partner[a] = b
            partner[b] = a
            rec(unmatched[1:i] + unmatched[i + 1:], partner)
            del partner[a]
            del partner[b]

    rec(list(range(H)), {})
    return res


if _HAVE_NUMBA:

    @_njit(cache=True)
    def _count_by_genus_jit(vert, nxt, n):  # pragma: no cover - jitted
        H = vert.shape[0]
        counts = _np.zeros(H, dtype=_np.int64)
        partner = _np.full(H, -1, dtype=_np.int64)
        a_stack = _np.zeros(H // 2, dtype=_np.int64)
        b_stack = _np.zeros(H // 2, dtype=_np.int64)
        parent = _np.zeros(n, dtype=_np.int64)
        seen = _np.zeros(H, dtype=_np.uint8)
        level = 0
        b_stack[0] = 0
        while level >= 0:
            # find the first unmatched half-edge
            a = -1
            for h in range(H):
                if partner[h] < 0:
                    a = h
                    break
            if a < 0:
                # complete matching: connectivity then face count
                for v in range(n):
                    parent[v] = v
                for h in range(H):
                    x = vert[h]
                    while parent[x] != x:
                        x = parent[x]
                    y = vert[partner[h]]
                    while parent[y] != y:
                        y = parent[y]
                    if x != y:
                        parent[x] = y
                root = 0
                while parent[root] != root:
                    root = parent[root]
                connected = True
                for v in range(n):
                    x = v
                    while parent[x] != x:
                        x = parent[x]
                    if x != root:
                        connected = False
                        break
                if connected:
                    for h in range(H):
                        seen[h] = 0
                    F = 0
                    for h in range(H):
                        if seen[h] == 1:
                            continue
                        F += 1
                        cur = h
                        while seen[cur] == 0:
                            seen[cur] = 1
                            cur = nxt[partner[cur]]
                    g = (2 - (n - H // 2 + F)) // 2
                    counts[g] += 1
                # backtrack
                level -= 1
                if level >= 0:
                    partner[a_stack[level]] = -1
                    partner[b_stack[level]] = -1
                    b_stack[level] += 1
                continue
            # advance: try candidates for a starting at b_stack[level]
            b = b_stack[level]
            if b <= a:
                b = a + 1
            found = -1
            for h in range(b, H):
                if partner[h] < 0 and h != a:
                    found = h
                    break
            if found < 0:
                level -= 1
                if level >= 0:
                    partner[a_stack[level]] = -1
                    partner[b_stack[level]] = -1
                    b_stack[level] += 1
                continue
            partner[a] = found
            partner[found] = a
            a_stack[level] = a
            b_stack[level] = found
            level += 1
            if level < H // 2:
                b_stack[level] = 0
        return counts


def count_matchings_by_genus(degrees: Sequence[int],
                             budget: int = DEFAULT_HALF_EDGE_BUDGET) -> dict:
    """Counts of connected arrowed graphs with the given vertex degrees,
    keyed by genus.  Every perfect matching of labeled half-edges is one
    arrowed graph."""
    total = sum(degrees)
    if total % 2:
        return {}
    if total > budget:
        raise BudgetError(
            f"{total} half-edges exceed budget {budget}")
    if total == 0:
        return {0: 1} if len(degrees) == 1 else {}
    if _HAVE_NUMBA:
        vert = []
        for v, d in enumerate(degrees):
            vert.extend([v] * d)
        nxt = _np.zeros(total, dtype=_np.int64)
        start = 0
        for v, d in enumerate(degrees):
            for s in range(d):
                nxt[start + s] = start + (s + 1) % d
            start += d
        counts = _count_by_genus_jit(
            _np.array(vert, dtype=_np.int64), nxt, len(degrees))
        return {g: int(c) for g, c in enumerate(counts) if c}
    return _count_by_genus_py(degrees)


def count_arrowed_graphs(g: int, n: int, mu: Sequence[int],
                         budget: int = DEFAULT_HALF_EDGE_BUDGET) -> int:
    """Number of connected arrowed cell graphs of genus g with n labeled
    vertices of degrees mu (one arrow per vertex; matchings of labeled
    half-edges realize exactly that)."""
    if len(mu) != n:
        raise ValueError("need one degree per vertex")
    if sum(mu) % 2:
        return 0
    if n == 1 and mu[0] == 0:
        return 1 if g == 0 else 0
    if any(m == 0 for m in mu):
        return 0
    return count_matchings_by_genus(mu, budget).get(g, 0)


def all_matchings(degrees: Sequence[int]) -> Iterator[CellGraph]:
    """All cell graphs with the given degrees (one per perfect matching),
    connected or not."""
    total = sum(degrees)
    if total % 2:
        return
    offsets = [0]
    for d in degrees:
        offsets.append(offsets[-1] + d)

    def locate(gid):
        for v in range(len(degrees)):
            if gid < offsets[v + 1]:
                return (v + 1, gid - offsets[v])
        raise AssertionError

    def rec(unmatched, pairs):
        if not unmatched:
            yield CellGraph(degrees,
                            [(locate(a), locate(b)) for a, b in pairs])
            return
        a = unmatched[0]
        for i in range(1, len(unmatched)):
            b = unmatched[i]
            yield from rec(unmatched[1:i] + unmatched[i + 1:],
                           pairs + [(a, b)])

    yield from rec(list(range(total)), [])


# -- lattice-point counting oracle --------------------------------------------

# catalog of ribbon-graph topologies with labeled faces, per type:
# each entry is (automorphism order, list of face-perimeter linear forms in
# the edge lengths; a form is a tuple of per-edge multiplicities)
_LATTICE_CATALOG = {
    (0, 3): [
        # two non-crossing loops at one vertex: faces l1, l2, l1+l2
        (2, [(1, 0), (0, 1), (1, 1)]),
        # theta graph: faces l1+l2, l2+l3, l1+l3
        (6, [(1, 1, 0), (0, 1, 1), (1, 0, 1)]),
        # dumbbell: faces l1, l3, l1+2*l2+l3
        (2, [(1, 0, 0), (0, 0, 1), (1, 2, 1)]),
    ],
    (1, 1): [
        # two crossing loops at one vertex: one face of perimeter 2(l1+l2)
        (4, [(2, 2)]),
        # theta graph on the torus: one face of perimeter 2(l1+l2+l3)
        (6, [(2, 2, 2)]),
    ],
}


def count_lattice_points(g: int, n: int, mu: Sequence[int]) -> Rational:
    """Weighted count of integral metric ribbon graphs of type (g,n) with
    labeled face perimeters mu: sum over catalog topologies of
    (1/|Aut|) * #{(face labeling, positive integer edge lengths)} matching
    the perimeters.  Values are rational because of the 1/|Aut| weights."""
    if len(mu) != n:
        raise ValueError("need one perimeter per face")
    if (g, n) not in _LATTICE_CATALOG:
        raise BudgetError(
            f"lattice catalog covers types {sorted(_LATTICE_CATALOG)}, "
            f"not ({g},{n})")
    if any(m > 12 for m in mu) or any(m < 1 for m in mu):
        raise BudgetError("perimeters must lie in 1..12")
    total = Fraction(0)
    for aut, forms in _LATTICE_CATALOG[(g, n)]:
        k = len(forms[0])
        hits = 0
        for perm in set(permutations(range(n))):
            target = [mu[perm[f]] for f in range(n)]
            hits += _count_positive_solutions(forms, target, k)
        total += Fraction(hits, aut)
    return total


def _count_positive_solutions(forms, target, k) -> int:
    """Number of positive integer length vectors with the given face
    perimeters; exhaustive over the bounded box."""
    bound = max(target)
    count = 0

    def rec(idx, lengths):
        nonlocal count
        if idx == k:
            for form, t in zip(forms, target):
                if sum(c * l for c, l in zip(form, lengths)) != t:
                    return
            count += 1
            return
        for val in range(1, bound + 1):
            # prune: no face perimeter may be exceeded
            ok = True
            for form, t in zip(forms, target):
                partial = sum(c * l for c, l in zip(form, lengths))
                partial += form[idx] * val
                rest = sum(form[j] for j in range(idx + 1, k))
                if partial + rest > t:
                    ok = False
                    break
            if ok:
                rec(idx + 1, lengths + [val])

    rec(0, [])
    return count
