"""Backtracking search for simplicial maps under face constraints.

A problem is a list of variables, one per nondegenerate simplex to be
mapped.  Each variable names its target simplicial set, its dimension and
the variables (plus degeneracy operators) its faces are sent to, so a
candidate value must have exactly the faces already assigned.  The search
order lists faces before cofaces, so pruning happens as early as possible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Callable, Iterator, Sequence

from .sset import BudgetExceeded, Simplex, SimplicialMap, SimplicialSet

__all__ = [
    "SearchExhausted",
    "Var",
    "solve",
    "closure_order",
    "map_problem",
    "enumerate_maps",
    "find_map",
    "find_lift",
    "HomotopyChain",
    "find_homotopy",
    "find_homotopy_lift",
    "verify_homotopy",
]


class SearchExhausted(BudgetExceeded):
    """The node budget ran out before the search finished."""


@dataclass
class Var:
    target: SimplicialSet
    dim: int
    faces: list[tuple[tuple[int, ...], int]]  # (op, position) per face index
    forced: Callable[[list], Simplex | None] | None = None
    over: tuple[SimplicialMap, Callable[[list], Simplex]] | None = None


def _candidates(var: Var, values: list, over_index: dict) -> list[Simplex]:
    tgt = var.target
    if var.dim == 0:
        pool = None
    else:
        need = tuple(tgt.apply(values[pos], op) for op, pos in var.faces)
    if var.forced is not None:
        c = var.forced(values)
        if c is None or c.dim != var.dim:
            return []
        if var.dim and tgt.faces_of(c) != need:
            return []
        if var.over is not None and var.over[0](c) != var.over[1](values):
            return []
        return [c]
    if var.over is not None:
        h, want_fn = var.over
        want = want_fn(values)
        idx = over_index.get(id(h), {}).get(var.dim)
        if idx is None:
            idx = {}
            for s in tgt.all_simplices(var.dim):
                f = tgt.faces_of(s) if var.dim else ()
                idx.setdefault((f, h(s)), []).append(s)
            over_index.setdefault(id(h), {})[var.dim] = idx
        return idx.get((need if var.dim else (), want), [])
    if var.dim == 0:
        return tgt.nd(0)
    return tgt.face_index(var.dim).get(need, [])


def solve(variables: Sequence[Var], limit: int | None = None, budget: int | None = None) -> Iterator[list[Simplex]]:
    """Yield complete assignments (lists aligned with `variables`)."""
    n = len(variables)
    values: list = [None] * n
    over_index: dict = {}
    if n == 0:
        yield []
        return
    nodes = 0
    found = 0
    stack = [iter(_candidates(variables[0], values, over_index))]
    while stack:
        pos = len(stack) - 1
        nxt = next(stack[-1], None)
        if nxt is None:
            stack.pop()
            values[pos] = None
            continue
        nodes += 1
        if budget is not None and nodes > budget:
            raise SearchExhausted("map search", nodes, budget)
        values[pos] = nxt
        if pos + 1 == n:
            yield list(values)
            found += 1
            if limit is not None and found >= limit:
                return
            continue
        stack.append(iter(_candidates(variables[pos + 1], values, over_index)))


def closure_order(K: SimplicialSet, roots: Sequence[Simplex] | None = None) -> list[tuple[int, int]]:
    """Nondegenerate simplices of K, each preceded by all of its faces."""
    seen: set = set()
    out: list = []
    if roots is None:
        roots = [s for n in range(len(K.counts) - 1, -1, -1) for s in K.nd(n)]
    for root in roots:
        if root.ref in seen:
            continue
        stack = [(root.ref, False)]
        while stack:
            ref, done = stack.pop()
            if done:
                if ref not in seen:
                    seen.add(ref)
                    out.append(ref)
                continue
            if ref in seen:
                continue
            stack.append((ref, True))
            if ref[0] > 0:
                for f in reversed(K.faces[ref[0]][ref[1]]):
                    if f.ref not in seen:
                        stack.append((f.ref, False))
    return out


def map_problem(K: SimplicialSet, X: SimplicialSet, fixed: dict | None = None, over=None, order=None):
    """Variables for maps K -> X; returns (variables, refs in variable order)."""
    order = order or closure_order(K)
    pos = {ref: i for i, ref in enumerate(order)}
    variables = []
    for ref in order:
        n, idx = ref
        faces = [(f.op, pos[f.ref]) for f in K.faces[n][idx]] if n else []
        forced = None
        if fixed and ref in fixed:
            val = fixed[ref]
            forced = lambda values, v=val: v
        ov = None
        if over is not None:
            h, psi = over
            ov = (h, lambda values, r=ref: psi[r])
        variables.append(Var(X, n, faces, forced, ov))
    return variables, order


def _to_map(K, X, order, values, name=""):
    images = [[None] * K.count(n) for n in range(len(K.counts))]
    for (n, i), v in zip(order, values):
        images[n][i] = v
    return SimplicialMap(K, X, images, name=name)


def enumerate_maps(K: SimplicialSet, X: SimplicialSet, fixed: dict | None = None, limit=None, budget=None) -> Iterator[SimplicialMap]:
    variables, order = map_problem(K, X, fixed)
    for values in solve(variables, limit, budget):
        yield _to_map(K, X, order, values)


def find_map(K, X, fixed=None, budget=None) -> SimplicialMap | None:
    return next(enumerate_maps(K, X, fixed, limit=1, budget=budget), None)


def find_lift(g: SimplicialMap, target: SimplicialMap, budget=None) -> SimplicialMap | None:
    """s: K -> C with g o s == target exactly (K = target.source)."""
    K, C = target.source, g.source
    psi = {s.ref: target(s) for s in K.all_nd()}
    variables, order = map_problem(K, C, over=(g, psi))
    for values in solve(variables, 1, budget):
        return _to_map(K, C, order, values, name="lift")
    return None


# -- homotopies ----------------------------------------------------------------


@dataclass
class HomotopyChain:
    """A zigzag of elementary homotopies K x Z -> Y, stored as one map."""

    pattern: tuple[int, ...]
    cylinder: SimplicialSet | None = field(default=None, repr=False)
    homotopy: SimplicialMap | None = field(default=None, repr=False)

    @property
    def length(self) -> int:
        return len(self.pattern)

    def to_dict(self):
        out = {"pattern": list(self.pattern)}
        if self.homotopy is not None:
            out["images"] = [[[list(s.op), s.level, s.index] for s in lv] for lv in self.homotopy.images]
        return out


def _patterns(max_len: int):
    for L in range(1, max_len + 1):
        for pat in iproduct((1, -1), repeat=L):
            yield pat


def _cylinder(K: SimplicialSet, pattern):
    from .constructions import product
    from .corpus import zigzag

    Z = zigzag(pattern)
    return product(K, Z), Z


def _end_refs(KZ, end: int):
    """{cylinder ref: K ref} for nondegenerate simplices of K x {end}."""
    out = {}
    for n in range(len(KZ.obj.counts)):
        for idx, (a, b) in enumerate(KZ.obj.keys[n]):
            if b.level == 0 and b.index == end:
                out[(n, idx)] = a.ref
    return out


def _bfs_rank(K: SimplicialSet) -> dict[int, int]:
    adj: dict[int, set] = {v: set() for v in range(K.count(0))}
    for fs in K.faces[1] if len(K.faces) > 1 else ():
        a, b = fs[0].index, fs[1].index
        adj[a].add(b)
        adj[b].add(a)
    rank: dict[int, int] = {}
    for start in range(K.count(0)):
        if start in rank:
            continue
        queue = [start]
        rank[start] = len(rank)
        while queue:
            v = queue.pop(0)
            for w in sorted(adj[v]):
                if w not in rank:
                    rank[w] = len(rank)
                    queue.append(w)
    return rank


def _cylinder_order(K: SimplicialSet, KZ, ends) -> list[tuple[int, int]]:
    """Ends of the cylinder first, then the rest swept along a BFS of K.

    Sweeping keeps every simplex close to its already placed neighbours, so
    conflicts show up a few levels after the choice that caused them.
    """
    cyl = KZ.obj
    rank = _bfs_rank(K)
    end_roots = [cyl.simplex(*r) for r in sorted(ends, key=lambda r: (-r[0], r[1]))]

    def key(s):
        a = cyl.key_of(s)[0]
        return (max(rank[v] for v in K.vertices(a)), -s.dim, s.index)

    rest = sorted((s for n in range(len(cyl.counts)) for s in cyl.nd(n) if s.ref not in ends), key=key)
    return closure_order(cyl, end_roots + rest)


def find_homotopy(phi: SimplicialMap, psi: SimplicialMap, max_len: int = 2, budget: int | None = None) -> HomotopyChain | None:
    """A zigzag homotopy phi ~ psi of length <= max_len, or None.

    Raises SearchExhausted if some pattern could not be decided in budget.
    """
    if phi.agrees_with(psi):
        return HomotopyChain(())
    K, Y = phi.source, phi.target
    exhausted = None
    for pat in _patterns(max_len):
        KZ, Z = _cylinder(K, pat)
        fixed = {}
        for ref, a in _end_refs(KZ, 0).items():
            fixed[ref] = phi(K.simplex(*a))
        for ref, a in _end_refs(KZ, len(pat)).items():
            fixed[ref] = psi(K.simplex(*a))
        variables, order = map_problem(KZ.obj, Y, fixed, order=_cylinder_order(K, KZ, fixed))
        try:
            for values in solve(variables, 1, budget):
                return HomotopyChain(pat, KZ.obj, _to_map(KZ.obj, Y, order, values, name="homotopy"))
        except SearchExhausted as e:
            exhausted = e
    if exhausted is not None:
        raise exhausted
    return None


def find_homotopy_lift(g: SimplicialMap, target: SimplicialMap, max_len: int = 2, budget: int | None = None):
    """s: K -> C with g o s homotopic to target (zigzag in the base), or None.

    Returns (s, chain); the chain runs from g o s (end 0) to target (end L).
    """
    s = find_lift(g, target, budget)
    if s is not None:
        return s, HomotopyChain(())
    K, C, B = target.source, g.source, g.target
    exhausted = None
    for pat in _patterns(max_len):
        KZ, Z = _cylinder(K, pat)
        cyl = KZ.obj
        start = _end_refs(KZ, 0)
        stop = _end_refs(KZ, len(pat))
        # lift variables come first, then the cylinder in closure order
        k_order = closure_order(K)
        cyl_order = _cylinder_order(K, KZ, set(start) | set(stop))
        kpos = {ref: i for i, ref in enumerate(k_order)}
        off = len(k_order)
        cpos = {ref: off + i for i, ref in enumerate(cyl_order)}
        variables = []
        for ref in k_order:
            n, idx = ref
            faces = [(f.op, kpos[f.ref]) for f in K.faces[n][idx]] if n else []
            variables.append(Var(C, n, faces))
        for ref in cyl_order:
            n, idx = ref
            faces = [(f.op, cpos[f.ref]) for f in cyl.faces[n][idx]] if n else []
            forced = None
            if ref in start:
                p = kpos[start[ref]]
                forced = lambda values, p=p: g(values[p])
            elif ref in stop:
                val = target(K.simplex(*stop[ref]))
                forced = lambda values, v=val: v
            variables.append(Var(B, n, faces, forced))
        try:
            for values in solve(variables, 1, budget):
                s = _to_map(K, C, k_order, values[:off], name="section")
                H = _to_map(cyl, B, cyl_order, values[off:], name="homotopy")
                return s, HomotopyChain(pat, cyl, H)
        except SearchExhausted as e:
            exhausted = e
    if exhausted is not None:
        raise exhausted
    return None


def verify_homotopy(chain: HomotopyChain, phi: SimplicialMap, psi: SimplicialMap) -> bool:
    """Replay a stored chain: a valid map K x Z -> Y restricting to phi and psi."""
    if not chain.pattern:
        return phi.agrees_with(psi)
    from .constructions import product
    from .corpus import zigzag

    K = phi.source
    KZ = product(K, zigzag(chain.pattern))
    H = SimplicialMap(KZ.obj, phi.target, chain.homotopy.images)
    if H.validate():
        return False
    for end, f in ((0, phi), (len(chain.pattern), psi)):
        for ref, a in _end_refs(KZ, end).items():
            if H.images[ref[0]][ref[1]] != f(K.simplex(*a)):
                return False
    return True
