"""Edge-path presentations of the fundamental group, Tietze moves, folding.

Words are tuples of nonzero integers: generator g is ``g + 1`` and its
inverse is ``-(g + 1)``.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .linalg import smith
from .sset import SimplicialMap, SimplicialSet

__all__ = [
    "GroupPresentation",
    "pi1_presentation",
    "tietze_reduce",
    "induced_pi1",
    "generates_free_group",
    "free_reduce",
    "abelian_invariants",
]

Word = tuple[int, ...]


def free_reduce(w) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def _canonical_relator(w: Word) -> Word:
    """Least rotation of w or its inverse, so duplicates are recognized."""
    w = _cyclic_reduce(w)
    if not w:
        return w
    cands = []
    for v in (w, _inverse(w)):
        cands.extend(v[i:] + v[:i] for i in range(len(v)))
    return min(cands, key=lambda v: (len(v), tuple(abs(x) for x in v), v))


@dataclass
class GroupPresentation:
    generators: list  # labels (edge refs of the source complex, or names after reduction)
    relators: list[Word]
    edge_words: dict = field(default_factory=dict, repr=False)  # edge ref -> word in generators
    reduced: bool = False
    paths: dict = field(default_factory=dict, repr=False)  # vertex -> tree path from the base
    loops: dict = field(default_factory=dict, repr=False)  # generator label -> edge loop

    @property
    def rank(self) -> int:
        return len(self.generators)

    def is_trivial(self) -> bool:
        return not self.generators

    def is_free(self) -> bool:
        return not self.relators

    def is_abelian(self) -> bool:
        """Sufficient test: at most one generator, or every relator a commutator of generators."""
        if len(self.generators) <= 1:
            return True
        comms = set()
        n = len(self.generators)
        for a in range(1, n + 1):
            for b in range(a + 1, n + 1):
                comms.add(_canonical_relator((a, b, -a, -b)))
        have = {_canonical_relator(r) for r in self.relators}
        return comms <= have

    def to_dict(self):
        return {"generators": [str(g) for g in self.generators], "relators": [list(r) for r in self.relators]}


def _spanning_tree(X: SimplicialSet, base: int):
    """BFS tree on the component of base; returns (vertices, tree edge refs)."""
    adj: dict[int, list] = {}
    for i, fs in enumerate(X.faces[1] if len(X.faces) > 1 else ()):
        a, b = fs[1].index, fs[0].index
        adj.setdefault(a, []).append((b, i))
        adj.setdefault(b, []).append((a, i))
    seen = {base}
    tree = set()
    paths: dict[int, list] = {base: []}
    queue = [base]
    while queue:
        v = queue.pop(0)
        for w, e in sorted(adj.get(v, ())):
            if w not in seen:
                seen.add(w)
                tree.add(e)
                forward = X.faces[1][e][1].index == v
                paths[w] = paths[v] + [((1, e), 1 if forward else -1)]
                queue.append(w)
    return seen, tree, paths


def pi1_presentation(X: SimplicialSet, base: int | None = None) -> GroupPresentation:
    """Generators: edges of the base component off a BFS spanning tree."""
    if base is None:
        base = X.basepoint if X.basepoint is not None else 0
    if X.is_empty:
        raise ValueError("empty simplicial set has no fundamental group")
    comps = X.components()
    if len(comps) > 1:
        warnings.warn("disconnected simplicial set: presenting the component of the base vertex", stacklevel=2)
    verts, tree, paths = _spanning_tree(X, base)
    gens = []
    words = {}
    for i, fs in enumerate(X.faces[1] if len(X.faces) > 1 else ()):
        if fs[1].index not in verts:
            continue
        if i in tree:
            words[(1, i)] = ()
        else:
            gens.append((1, i))
            words[(1, i)] = (len(gens),)
    rels = []
    if len(X.faces) > 2:
        for fs in X.faces[2]:
            if fs[0].index is None:
                continue
            if X.apply(fs[0], (0,)).index not in verts:
                continue

            def w(f):
                return words[f.ref] if f.nondegenerate else ()

            # d2 then d0 equals d1
            r = _cyclic_reduce(w(fs[2]) + w(fs[0]) + _inverse(w(fs[1])))
            if r:
                rels.append(r)
    return GroupPresentation(gens, sorted(set(rels)), words, paths=paths, loops={g: _loop(X, g, paths) for g in gens})


def _loop(X: SimplicialSet, ref, paths) -> list:
    """The based loop of an edge: tree path to its source, the edge, tree path back."""
    fs = X.faces[1][ref[1]]
    back = [(e, -sgn) for e, sgn in reversed(paths[fs[0].index])]
    return paths[fs[1].index] + [(ref, 1)] + back


def _substitute(w: Word, g: int, repl: Word) -> Word:
    out: list[int] = []
    for x in w:
        if abs(x) == g:
            out.extend(repl if x > 0 else _inverse(repl))
        else:
            out.append(x)
    return free_reduce(out)


def tietze_reduce(P: GroupPresentation, budget: int = 1000) -> GroupPresentation:
    """Eliminate generators occurring exactly once in some relator; drop trivial/duplicate relators."""
    gens = list(P.generators)
    alive = list(range(1, len(gens) + 1))
    rels = [_cyclic_reduce(r) for r in P.relators]
    words = dict(P.edge_words)
    moves = 0
    while moves < budget:
        rels = sorted({_canonical_relator(r) for r in rels if _cyclic_reduce(r)}, key=lambda v: (len(v), v))
        done = True
        for r in rels:
            counts: dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            once = sorted(g for g, c in counts.items() if c == 1)
            if not once:
                continue
            g = once[0]
            i = next(t for t, x in enumerate(r) if abs(x) == g)
            rest = r[i + 1:] + r[:i]  # r rotated: x * rest == 1
            repl = _inverse(rest) if r[i] > 0 else rest
            rels = [_substitute(s, g, repl) for s in rels if s is not r]
            words = {k: _substitute(v, g, repl) for k, v in words.items()}
            alive.remove(g)
            moves += 1
            done = False
            break
        if done:
            break
    renum = {g: t + 1 for t, g in enumerate(alive)}

    def rn(w):
        return tuple(renum[abs(x)] * (1 if x > 0 else -1) for x in w)

    rels = sorted({_canonical_relator(rn(r)) for r in rels if r}, key=lambda v: (len(v), v))
    return GroupPresentation([gens[g - 1] for g in alive], rels, {k: rn(v) for k, v in words.items()},
                             reduced=True, paths=P.paths, loops=P.loops)


def induced_pi1(f: SimplicialMap, PX: GroupPresentation, PY: GroupPresentation) -> list[Word]:
    """Images of the generators of PX as words in the generators of PY.

    Each generator is the based edge loop of an edge of the source; its image
    is the product of target edge words along the image path (a conjugate of
    the image loop when f moves the base vertex, which is harmless for
    surjectivity and isomorphism questions).
    """
    out = []
    for ref in PX.generators:
        w: list[int] = []
        for eref, sgn in PX.loops[ref]:
            img = f(f.source.simplex(*eref))
            piece = PY.edge_words.get(img.ref, ()) if img.nondegenerate else ()
            w.extend(piece if sgn > 0 else _inverse(piece))
        out.append(free_reduce(w))
    return out


def generates_free_group(words: list[Word], rank: int) -> bool:
    """Whether the words generate the free group of the given rank (Stallings folding)."""
    if rank == 0:
        return True
    # graph: vertex 0 is the base; edges (u, label, v) with positive labels
    nxt = 1
    edges: set = set()
    for w in words:
        w = free_reduce(w)
        if not w:
            continue
        cur = 0
        for t, x in enumerate(w):
            end = 0 if t == len(w) - 1 else None
            if end is None:
                end = nxt
                nxt += 1
            if x > 0:
                edges.add((cur, x, end))
            else:
                edges.add((end, -x, cur))
            cur = end
    parent = list(range(nxt))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    changed = True
    while changed:
        changed = False
        out_map: dict = {}
        in_map: dict = {}
        for (u, lab, v) in list(edges):
            u, v = find(u), find(v)
            for key, other, table in (((u, lab), v, out_map), ((v, lab), u, in_map)):
                prev = table.get(key)
                if prev is None:
                    table[key] = other
                elif find(prev) != find(other):
                    a, b = sorted((find(prev), find(other)))
                    parent[b] = a
                    changed = True
        edges = {(find(u), lab, find(v)) for (u, lab, v) in edges}
    # prune to the core: repeatedly drop non-base degree-one vertices
    while True:
        deg: dict = {}
        for (u, _, v) in edges:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        leaves = {x for x, d in deg.items() if d == 1 and x != find(0)}
        if not leaves:
            break
        edges = {e for e in edges if e[0] not in leaves and e[2] not in leaves}
    base = find(0)
    loops = {lab for (u, lab, v) in edges if u == base and v == base}
    return all(e[0] == base and e[2] == base for e in edges) and loops == set(range(1, rank + 1))


def abelian_invariants(P: GroupPresentation) -> tuple[int, tuple[int, ...]]:
    """(free rank, torsion) of the abelianization, via Smith normal form of the relator matrix."""
    n = len(P.generators)
    if n == 0:
        return 0, ()
    rows = []
    for r in P.relators:
        v = [0] * n
        for x in r:
            v[abs(x) - 1] += 1 if x > 0 else -1
        rows.append(v)
    sf = smith(rows, n, transforms=False)
    return n - sf.rank, tuple(d for d in sf.invariant_factors if d > 1)
