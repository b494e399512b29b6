"""Limits, colimits and standard functors on finite simplicial sets.

Every construction returns fresh objects whose simplices are keyed by their
construction provenance and sorted, so results are canonical.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Callable, NamedTuple, Sequence

from . import corpus
from .solver import SearchExhausted, map_problem, solve
from .sset import (
    BudgetExceeded,
    Simplex,
    SimplicialMap,
    SimplicialSet,
    codegeneracy,
    coface,
    identity_op,
    surjections,
)

__all__ = [
    "Product",
    "Pullback",
    "Pushout",
    "MappingCylinder",
    "Subdivision",
    "product",
    "product_map",
    "pair_into",
    "pullback",
    "pushout",
    "pushout_induced",
    "coproduct",
    "subcomplex",
    "cylinder",
    "mapping_cylinder",
    "subdivide",
    "subdivision_counts",
    "subdivision_size",
    "product_size",
    "subdivide_map",
    "iterated_subdivision",
    "HomComplex",
    "ex",
    "ex_unit",
    "function_complex",
    "evaluation",
    "constant_paths",
    "constant_path",
    "delta",
    "delta_map",
    "terminal_map",
    "vertex_inclusion",
]


class Product(NamedTuple):
    obj: SimplicialSet
    pr1: SimplicialMap
    pr2: SimplicialMap


class Pullback(NamedTuple):
    obj: SimplicialSet
    pr1: SimplicialMap
    pr2: SimplicialMap


class Pushout(NamedTuple):
    obj: SimplicialSet
    leg1: SimplicialMap  # from the target of the injective leg
    leg2: SimplicialMap  # from the target of the other leg


class MappingCylinder(NamedTuple):
    obj: SimplicialSet
    front: SimplicialMap  # X -> M_f, injective
    retraction: SimplicialMap  # M_f -> Y
    base: SimplicialMap  # Y -> M_f


class Subdivision(NamedTuple):
    obj: SimplicialSet
    last_vertex: SimplicialMap


def _build(keys_by_level: Sequence[Sequence], face_fn, *, truncated=False, dim_bound=None, name="", basepoint=None, labels=None):
    """Materialize a simplicial set from sorted keys and a face function.

    face_fn(level, key) returns, for each face index, a (op, level, key) triple.
    """
    levels = [sorted(set(lv)) for lv in keys_by_level]
    index = [{k: i for i, k in enumerate(lv)} for lv in levels]
    faces = []
    for n, lv in enumerate(levels):
        row = []
        for key in lv:
            if n == 0:
                row.append(())
            else:
                row.append(tuple(Simplex(op, m, index[m][k]) for op, m, k in face_fn(n, key)))
        faces.append(row)
    return SimplicialSet(faces, keys=levels, truncated=truncated, dim_bound=dim_bound, name=name,
                         basepoint=basepoint, labels=labels)


def _bound(*sets: SimplicialSet, cap: int | None = None) -> tuple[bool, int | None]:
    bounds = [X.dim_bound for X in sets if X.truncated]
    if cap is not None:
        bounds.append(cap)
    return (bool(bounds), min(bounds) if bounds else None)


# -- products and pullbacks ----------------------------------------------------


def _repeats(op):
    return {t for t in range(len(op) - 1) if op[t] == op[t + 1]}


def normalize_pair(a: Simplex, b: Simplex) -> tuple[tuple[int, ...], Simplex, Simplex]:
    """Split a pair of n-simplices into (common degeneracy, nondegenerate pair)."""
    n = a.dim
    common = sorted(_repeats(a.op) & _repeats(b.op))
    if not common:
        return identity_op(n), a, b
    drop = {t + 1 for t in common}
    ra = tuple(a.op[t] for t in range(n + 1) if t not in drop)
    rb = tuple(b.op[t] for t in range(n + 1) if t not in drop)
    rho = []
    k = 0
    for t in range(n + 1):
        if t in drop:
            k += 1
        rho.append(t - k)
    return tuple(rho), Simplex(ra, a.level, a.index), Simplex(rb, b.level, b.index)


def _pair_faces(X: SimplicialSet, Y: SimplicialSet):
    def face_fn(n, key):
        a, b = key
        out = []
        for i in range(n + 1):
            rho, fa, fb = normalize_pair(X.face(a, i), Y.face(b, i))
            out.append((rho, fa.dim, (fa, fb)))
        return out

    return face_fn


def _limit_top(X: SimplicialSet, Y: SimplicialSet, cap: int | None):
    """(top level to build, truncated flag, dim bound) for a two-factor construction."""
    bounds = [Z.dim_bound for Z in (X, Y) if Z.truncated]
    top = X.dim + Y.dim
    if cap is not None and top > cap:
        bounds.append(cap)
    bound = min(bounds) if bounds else None
    if bound is not None:
        top = min(top, bound)
    return top, bound is not None, bound


# products larger than this many nondegenerate simplices are refused
PRODUCT_SIMPLICES = 150_000


def product_size(X: SimplicialSet, Y: SimplicialSet, top: int | None = None) -> int:
    """Nondegenerate simplices of X x Y up to dimension `top`.

    A nondegenerate n-simplex over (p-simplex, q-simplex) is a lattice path
    from (0, 0) to (p, q) with n steps (1, 0), (0, 1) or (1, 1).
    """
    total = 0
    for p in range(X.dim + 1):
        for q in range(Y.dim + 1):
            paths = sum(factorial(p + q - k) // (factorial(p - k) * factorial(q - k) * factorial(k))
                        for k in range(min(p, q) + 1) if top is None or p + q - k <= top)
            total += X.count(p) * Y.count(q) * paths
    return total


def product(X: SimplicialSet, Y: SimplicialSet, cap: int | None = None) -> Product:
    """X x Y via shuffles; nondegenerate simplices above `cap` are dropped and flagged."""
    top, truncated, bound = _limit_top(X, Y, cap)
    size = product_size(X, Y, top)
    if size > PRODUCT_SIMPLICES:
        raise BudgetExceeded(f"product {X.name}x{Y.name}", size, PRODUCT_SIMPLICES)
    keys: list[list] = [[] for _ in range(max(top, -1) + 1)]
    for p in range(X.dim + 1):
        for q in range(Y.dim + 1):
            for n in range(max(p, q), min(p + q, top) + 1):
                sig = surjections(n, p)
                tau = surjections(n, q)
                for s in sig:
                    rs = _repeats(s)
                    for t in tau:
                        if rs & _repeats(t):
                            continue
                        for x in range(X.count(p)):
                            for y in range(Y.count(q)):
                                keys[n].append((Simplex(s, p, x), Simplex(t, q, y)))
    P = _build(keys, _pair_faces(X, Y), truncated=truncated, dim_bound=bound, name=f"{X.name}x{Y.name}")
    if X.basepoint is not None and Y.basepoint is not None:
        P.basepoint = P.index_of_key(0, (X.simplex(0, X.basepoint), Y.simplex(0, Y.basepoint)))
    P.factors = (X, Y)
    pr1 = SimplicialMap.from_function(P, X, lambda s: P.key_of(s)[0], name="pr1")
    pr2 = SimplicialMap.from_function(P, Y, lambda s: P.key_of(s)[1], name="pr2")
    return Product(P, pr1, pr2)


def pair_into(P: SimplicialSet, f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    """The map (f, g) into a product or pullback built by this module."""

    def fn(s):
        rho, a, b = normalize_pair(f(s), g(s))
        idx = P.index_of_key(a.dim, (a, b))
        return Simplex(rho, a.dim, idx)

    return SimplicialMap.from_function(f.source, P, fn, name="pair")


def product_map(src: Product, dst: Product, f: SimplicialMap, g: SimplicialMap) -> SimplicialMap:
    return pair_into(dst.obj, f.compose(src.pr1), g.compose(src.pr2))


def pullback(f: SimplicialMap, g: SimplicialMap, cap: int | None = None) -> Pullback:
    """Levelwise fiber product of f: X -> B and g: Y -> B."""
    if f.target is not g.target and f.target.faces != g.target.faces:
        raise ValueError("pullback needs a common target")
    X, Y = f.source, g.source
    top, truncated, bound = _limit_top(X, Y, cap)
    keys: list[list] = [[] for _ in range(max(top, -1) + 1)]
    for n in range(top + 1):
        bucket: dict = {}
        for a in X.all_simplices(n):
            bucket.setdefault(f(a), []).append(a)
        for b in Y.all_simplices(n):
            rb = _repeats(b.op)
            for a in bucket.get(g(b), ()):
                if not (rb & _repeats(a.op)):
                    keys[n].append((a, b))
    P = _build(keys, _pair_faces(X, Y), truncated=truncated, dim_bound=bound,
               name=f"{X.name}x_{f.target.name}{Y.name}")
    P.factors = (X, Y)
    pr1 = SimplicialMap.from_function(P, X, lambda s: P.key_of(s)[0], name="pr1")
    pr2 = SimplicialMap.from_function(P, Y, lambda s: P.key_of(s)[1], name="pr2")
    return Pullback(P, pr1, pr2)


# -- pushouts ------------------------------------------------------------------


def pushout(i: SimplicialMap, g: SimplicialMap) -> Pushout:
    """Pushout of i: A -> X and g: A -> Y, with i injective.

    If only g is injective the roles are swapped internally; leg1 always
    starts at i.target and leg2 at g.target.
    """
    if i.source is not g.source and i.source.faces != g.source.faces:
        raise ValueError("pushout needs a common source")
    if not i.is_injective():
        if g.is_injective():
            po = pushout(g, i)
            return Pushout(po.obj, po.leg2, po.leg1)
        raise ValueError("pushout requires an injective leg")
    A, X, Y = i.source, i.target, g.target
    pre = {}
    for s in A.all_nd():
        pre[i(s).ref] = s
    keys: list[list] = [[] for _ in range(max(len(X.counts), len(Y.counts)))]
    for s in Y.all_nd():
        keys[s.level].append(("Y", s.index))
    for s in X.all_nd():
        if s.ref not in pre:
            keys[s.level].append(("X", s.index))
    truncated, bound = _bound(A, X, Y)
    levels = [sorted(lv) for lv in keys]
    index = [{k: j for j, k in enumerate(lv)} for lv in levels]

    def from_y(s: Simplex) -> Simplex:
        return Simplex(s.op, s.level, index[s.level][("Y", s.index)])

    def from_x(s: Simplex) -> Simplex:
        a = pre.get(s.ref)
        if a is None:
            return Simplex(s.op, s.level, index[s.level][("X", s.index)])
        img = g(a)
        base = Simplex(img.op, img.level, index[img.level][("Y", img.index)])
        return _apply_raw(base, s.op)

    faces = []
    for n, lv in enumerate(levels):
        row = []
        for tag, idx in lv:
            if n == 0:
                row.append(())
                continue
            src = Y if tag == "Y" else X
            conv = from_y if tag == "Y" else from_x
            row.append(tuple(conv(f) for f in src.faces[n][idx]))
        faces.append(row)
    P = SimplicialSet(faces, keys=levels, truncated=truncated, dim_bound=bound, name=f"{X.name}+{Y.name}")
    leg_y = SimplicialMap.from_function(Y, P, from_y, name="leg2")
    leg_x = SimplicialMap.from_function(X, P, from_x, name="leg1")
    if Y.basepoint is not None:
        P.basepoint = leg_y.images[0][Y.basepoint].index
    elif X.basepoint is not None:
        P.basepoint = leg_x.images[0][X.basepoint].index
    return Pushout(P, leg_x, leg_y)


def _apply_raw(base: Simplex, op) -> Simplex:
    """Compose degeneracies without consulting face tables (both parts surjective)."""
    return Simplex(tuple(base.op[t] for t in op), base.level, base.index)


def pushout_induced(po: Pushout, h1: SimplicialMap, h2: SimplicialMap) -> SimplicialMap:
    """The map out of a pushout restricting to h1 on leg1 and h2 on leg2."""
    P = po.obj
    X, Y = po.leg1.source, po.leg2.source

    def fn(s):
        tag, idx = P.key_of(s)
        return h2(Y.simplex(s.level, idx)) if tag == "Y" else h1(X.simplex(s.level, idx))

    return SimplicialMap.from_function(P, h1.target, fn, name="induced")


def coproduct(X: SimplicialSet, Y: SimplicialSet) -> Pushout:
    e = corpus.empty()
    return pushout(terminal_like(e, X), terminal_like(e, Y))


def terminal_like(E: SimplicialSet, X: SimplicialSet) -> SimplicialMap:
    """The unique map from an empty simplicial set."""
    return SimplicialMap(E, X, [], name="empty")


# -- subcomplexes and cylinders ------------------------------------------------------


def subcomplex(X: SimplicialSet, simplices) -> tuple[SimplicialSet, SimplicialMap]:
    """Smallest subcomplex containing the given simplices, with its inclusion."""
    refs = X.closure(simplices)
    keys: list[list] = [[] for _ in range(max((r[0] for r in refs), default=-1) + 1)]
    for n, i in refs:
        keys[n].append(i)

    def face_fn(n, i):
        return [(f.op, f.level, f.index) for f in X.faces[n][i]]

    S = _build(keys, face_fn, truncated=X.truncated, dim_bound=X.dim_bound if X.truncated else None, name=f"sub{X.name}")
    if X.basepoint is not None and (0, X.basepoint) in refs:
        S.basepoint = S.index_of_key(0, X.basepoint)
    inc = SimplicialMap.from_function(S, X, lambda s: X.simplex(s.level, S.key_of(s)), name="incl")
    return S, inc


@lru_cache(maxsize=None)
def delta(n: int) -> SimplicialSet:
    return corpus.simplex(n)


def delta_map(theta: Sequence[int], m: int, n: int) -> SimplicialMap:
    """Delta^m -> Delta^n induced by the monotone map theta: [m] -> [n]."""
    D, E = delta(m), delta(n)

    def fn(s):
        verts = tuple(theta[v] for v in D.key_of(s))
        distinct = tuple(sorted(set(verts)))
        op = tuple(distinct.index(v) for v in verts)
        return Simplex(op, len(distinct) - 1, E.index_of_key(len(distinct) - 1, distinct))

    return SimplicialMap.from_function(D, E, fn)


def simplex_as_monotone(D: SimplicialSet, s: Simplex) -> tuple[int, ...]:
    """The monotone map [dim s] -> [n] of a simplex of a standard simplex."""
    verts = D.key_of(Simplex(identity_op(s.level), s.level, s.index))
    return tuple(verts[o] for o in s.op)


def terminal_map(X: SimplicialSet) -> SimplicialMap:
    P = delta(0)
    return SimplicialMap.from_function(X, P, lambda s: Simplex((0,) * (s.dim + 1), 0, 0), name="!")


def vertex_inclusion(X: SimplicialSet, vertex: int | None = None) -> SimplicialMap:
    """Delta^0 -> X picking a vertex (the basepoint by default)."""
    v = X.basepoint if vertex is None else vertex
    if v is None:
        raise ValueError("space is not pointed")
    return SimplicialMap(delta(0), X, [[X.simplex(0, v)]], name=f"pt{v}")


def cylinder(X: SimplicialSet) -> Product:
    return product(X, delta(1))


def _end(cyl: Product, e: int) -> SimplicialMap:
    X = cyl.pr1.target
    D1 = delta(1)
    const = SimplicialMap.from_function(X, D1, lambda s: Simplex((0,) * (s.dim + 1), 0, e))
    return pair_into(cyl.obj, SimplicialMap.identity(X), const)


def mapping_cylinder(f: SimplicialMap) -> MappingCylinder:
    """M_f = (X x Delta^1) glued along X x {1} to Y through f."""
    X, Y = f.source, f.target
    cyl = cylinder(X)
    po = pushout(_end(cyl, 1), f)
    front = po.leg1.compose(_end(cyl, 0))
    r = pushout_induced(po, f.compose(cyl.pr1), SimplicialMap.identity(Y))
    M = po.obj
    M.name = f"M({f.name or 'f'})"
    return MappingCylinder(M, front, r, po.leg2)


# -- subdivision -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _chains(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Strict chains of nonempty subsets of [n] ending at [n]."""
    full = tuple(range(n + 1))
    out = []

    def grow(chain):
        out.append(tuple(reversed(chain)))
        top = chain[-1]
        for k in range(1, len(top)):
            for sub in combinations(top, k):
                grow(chain + [sub])

    grow([full])
    return tuple(out)


def _push_chain(chain, tau, positions):
    """Image chain under tau, deduplicated, with the collapsing operator."""
    imgs = [tuple(sorted({tau[positions[v]] for v in S})) for S in chain]
    distinct = []
    op = []
    for T in imgs:
        if not distinct or distinct[-1] != T:
            distinct.append(T)
        op.append(len(distinct) - 1)
    return tuple(op), tuple(distinct)


# subdivisions larger than this many nondegenerate simplices are refused
SUBDIVISION_SIMPLICES = 300_000


def subdivision_counts(counts) -> list[int]:
    """Counts by dimension of Sd X.

    The chains ending at an n-simplex with k links are the ordered set
    partitions of its n + 1 vertices into k blocks; each has dimension k - 1.
    """
    def surj(n, k):
        return sum((-1) ** i * comb(k, i) * (k - i) ** n for i in range(k + 1))

    out = [0] * len(counts)
    for n, c in enumerate(counts):
        for k in range(1, n + 2):
            out[k - 1] += c * surj(n + 1, k)
    return out


def subdivision_size(counts) -> int:
    """Number of nondegenerate simplices of Sd X."""
    return sum(subdivision_counts(counts))


def subdivide(X: SimplicialSet) -> Subdivision:
    """Barycentric subdivision with its last-vertex map."""
    if X.truncated:
        raise ValueError("subdivision of a truncated simplicial set is not supported")
    size = subdivision_size(X.counts)
    if size > SUBDIVISION_SIMPLICES:
        raise BudgetExceeded(f"subdivision of {X.name}", size, SUBDIVISION_SIMPLICES)
    keys: list[list] = [[] for _ in range(max(X.dim, -1) + 1)]
    for n in range(X.dim + 1):
        for i in range(X.count(n)):
            for chain in _chains(n):
                keys[len(chain) - 1].append(((n, i), chain))

    def face_fn(k, key):
        ref, chain = key
        out = []
        for i in range(k + 1):
            if i < k:
                out.append((identity_op(k - 1), k - 1, (ref, chain[:i] + chain[i + 1:])))
            else:
                sub = chain[k - 1]
                y = X.apply(X.simplex(*ref), sub)
                positions = {v: p for p, v in enumerate(sub)}
                op, dchain = _push_chain(chain[:k], y.op, positions)
                out.append((op, len(dchain) - 1, (y.ref, dchain)))
        return out

    S = _build(keys, face_fn, name=f"Sd{X.name}")
    if X.basepoint is not None:
        S.basepoint = S.index_of_key(0, ((0, X.basepoint), ((0,),)))

    def lv(s):
        ref, chain = S.key_of(s)
        return X.apply(X.simplex(*ref), tuple(max(c) for c in chain))

    return Subdivision(S, SimplicialMap.from_function(S, X, lv, name="last_vertex"))


def subdivide_map(f: SimplicialMap, src: Subdivision, dst: Subdivision) -> SimplicialMap:
    """Sd f between previously computed subdivisions."""
    S, T = src.obj, dst.obj

    def fn(s):
        ref, chain = S.key_of(s)
        img = f(f.source.simplex(*ref))
        positions = {v: v for v in range(ref[0] + 1)}
        op, dchain = _push_chain(chain, img.op, positions)
        idx = T.index_of_key(len(dchain) - 1, (img.ref, dchain))
        return Simplex(op, len(dchain) - 1, idx)

    return SimplicialMap.from_function(S, T, fn, name="Sd")


def iterated_subdivision(X: SimplicialSet, j: int) -> Subdivision:
    """Sd^j X with the composite last-vertex map to X."""
    cur = Subdivision(X, SimplicialMap.identity(X))
    for _ in range(j):
        nxt = subdivide(cur.obj)
        cur = Subdivision(nxt.obj, cur.last_vertex.compose(nxt.last_vertex))
    return cur


# -- hom complexes: Ex and function complexes ------------------------------------------


class _Cosimplicial:
    """n -> C_n with coface/codegeneracy maps, cached."""

    def __init__(self, obj_fn, coface_fn, codeg_fn):
        self._obj, self._coface, self._codeg = obj_fn, coface_fn, codeg_fn
        self._cache: dict = {}

    def _memo(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def obj(self, n):
        return self._memo(("o", n), lambda: self._obj(n))

    def flat(self, n):
        def mk():
            C = self.obj(n)
            refs = [s.ref for s in C.all_nd()]
            return refs, {r: i for i, r in enumerate(refs)}

        return self._memo(("f", n), mk)

    def coface(self, n, i):
        return self._memo(("d", n, i), lambda: self._coface(n, i))

    def codeg(self, n, j):
        return self._memo(("s", n, j), lambda: self._codeg(n, j))


class HomComplex(SimplicialSet):
    """Levels 0..cap of the simplicial set n -> Hom(C_n, X)."""

    def __init__(self, cos: _Cosimplicial, X: SimplicialSet, cap: int, budget: int | None = None, name: str = ""):
        self.cos, self.target_space, self.budget = cos, X, budget
        elems = []
        for n in range(cap + 1):
            C = cos.obj(n)
            if X.truncated and C.dim > X.dim_bound:
                cap = n - 1
                break
            variables, order = map_problem(C, X)
            refs, pos = cos.flat(n)
            perm = [pos[r] for r in order]
            level = []
            try:
                for values in solve(variables, budget=budget):
                    row = [None] * len(refs)
                    for p, v in zip(perm, values):
                        row[p] = v
                    level.append(tuple(row))
                    if budget is not None and len(level) > budget:
                        raise BudgetExceeded(f"Hom(C_{n}, {X.name})", len(level), budget)
            except SearchExhausted as e:
                raise BudgetExceeded(f"Hom(C_{n}, {X.name}) search", e.estimate, e.limit) from e
            elems.append(sorted(level))
        self.cap = cap
        self._tables: dict = {}
        # normal forms of every element: degenerate ones are exactly the
        # degeneracies of the level below
        self._normal: list[dict] = []
        nd_keys: list[list] = []
        for n, level in enumerate(elems):
            normal: dict = {}
            if n:
                for y in elems[n - 1]:
                    base = self._normal[n - 1][y]
                    for j in range(n):
                        sj = codegeneracy(n - 1, j)
                        normal.setdefault(self.elem_degeneracy(n - 1, y, j),
                                          Simplex(tuple(base.op[t] for t in sj), base.level, base.index))
            nd = [phi for phi in level if phi not in normal]
            for i, phi in enumerate(nd):
                normal[phi] = Simplex(identity_op(n), n, i)
            self._normal.append(normal)
            nd_keys.append(nd)

        faces = []
        for n, lv in enumerate(nd_keys):
            row = []
            for phi in lv:
                row.append(() if n == 0 else tuple(self.element_simplex(n - 1, self.elem_face(n, phi, i)) for i in range(n + 1)))
            faces.append(row)
        super().__init__(faces, keys=nd_keys, truncated=True, dim_bound=cap, name=name)

    def _table(self, kind: str, n: int, i: int):
        """[(source position, operator or None)] for a coface ("d") or codegeneracy ("s")."""
        key = (kind, n, i)
        hit = self._tables.get(key)
        if hit is None:
            m = self.cos.coface(n, i) if kind == "d" else self.cos.codeg(n, i)
            refs, _ = self.cos.flat(n - 1 if kind == "d" else n + 1)
            _, pos = self.cos.flat(n)
            hit = []
            for r in refs:
                img = m.images[r[0]][r[1]]
                hit.append((pos[img.ref], None if img.nondegenerate else img.op))
            self._tables[key] = hit
        return hit

    def _run(self, table, phi):
        X = self.target_space
        return tuple(phi[q] if op is None else X.apply(phi[q], op) for q, op in table)

    def elem_face(self, n, phi, i):
        return self._run(self._table("d", n, i), phi)

    def elem_degeneracy(self, n, phi, j):
        return self._run(self._table("s", n, j), phi)

    def element_simplex(self, n, phi) -> Simplex:
        """Normal form of an arbitrary element of level n."""
        return self._normal[n][phi]


def _sd_cosimplicial():
    sds: dict = {}

    def sd(n):
        if n not in sds:
            sds[n] = subdivide(delta(n))
        return sds[n]

    return _Cosimplicial(
        lambda n: sd(n).obj,
        lambda n, i: subdivide_map(delta_map(coface(n, i), n - 1, n), sd(n - 1), sd(n)),
        lambda n, j: subdivide_map(delta_map(codegeneracy(n, j), n + 1, n), sd(n + 1), sd(n)),
    ), sd


_SD_COS = None


def _sd_cosimplicial_cached():
    global _SD_COS
    if _SD_COS is None:
        _SD_COS = _sd_cosimplicial()
    return _SD_COS


def ex(X: SimplicialSet, k: int = 1, cap: int = 3, budget: int | None = None):
    """(Ex^k X, unit X -> Ex^k X), levels up to `cap`; always flagged truncated."""
    cos, _ = _sd_cosimplicial_cached()
    cur = X
    unit = SimplicialMap.identity(X)
    for _ in range(k):
        nxt = HomComplex(cos, cur, cap, budget, name=f"Ex{cur.name}")
        unit = ex_unit(cur, nxt).compose(unit)
        cur = nxt
    return cur, unit


def ex_unit(X: SimplicialSet, E: HomComplex) -> SimplicialMap:
    """x |-> x o (last vertex map Sd Delta^n -> Delta^n)."""
    _, sd = _sd_cosimplicial_cached()

    def fn(x):
        n = x.dim
        if n > E.cap:
            raise BudgetExceeded(f"unit beyond Ex cap {E.cap}")
        S = sd(n)
        refs, _ = E.cos.flat(n)
        phi = tuple(X.apply(x, simplex_as_monotone(delta(n), S.last_vertex.images[r[0]][r[1]])) for r in refs)
        return E.element_simplex(n, phi)

    return SimplicialMap.from_function(X, E, fn, name="unit")


def function_complex(K: SimplicialSet, Y: SimplicialSet, cap: int = 2, budget: int | None = None) -> HomComplex:
    """Levels 0..cap of Map(K, Y): n-simplices are maps K x Delta^n -> Y."""
    prods: dict = {}

    def prod(n):
        if n not in prods:
            prods[n] = product(K, delta(n))
        return prods[n]

    idK = SimplicialMap.identity(K)
    cos = _Cosimplicial(
        lambda n: prod(n).obj,
        lambda n, i: product_map(prod(n - 1), prod(n), idK, delta_map(coface(n, i), n - 1, n)),
        lambda n, j: product_map(prod(n + 1), prod(n), idK, delta_map(codegeneracy(n, j), n + 1, n)),
    )
    F = HomComplex(cos, Y, cap, budget, name=f"Map({K.name},{Y.name})")
    F.source_space = K
    F._prod = prod
    return F


def evaluation(F: HomComplex, vertex: int) -> SimplicialMap:
    """Evaluation Map(K, Y) -> Y at a vertex of K."""
    K = F.source_space

    def fn(s):
        n = s.dim
        P = F._prod(n).obj
        key = (Simplex((0,) * (n + 1), 0, vertex), Simplex(identity_op(n), n, 0))
        ref = (n, P.index_of_key(n, key))
        _, pos = F.cos.flat(n)
        return F.keys[n][s.index][pos[ref]]

    return SimplicialMap.from_function(F, F.target_space, fn, name=f"ev{vertex}")


def constant_path(F: HomComplex, y: Simplex) -> Simplex:
    """The simplex y o pr2 of Map(K, Y)."""
    Y = F.target_space
    n = y.dim
    if n > F.cap:
        raise BudgetExceeded(f"constant path of a {n}-simplex above the cap {F.cap}")
    P = F._prod(n).obj
    refs, _ = F.cos.flat(n)
    phi = tuple(Y.apply(y, simplex_as_monotone(delta(n), P.key_of(P.simplex(*r))[1])) for r in refs)
    return F.element_simplex(n, phi)


def constant_paths(F: HomComplex) -> SimplicialMap:
    """Y -> Map(K, Y), y |-> y o pr2."""
    Y = F.target_space
    if Y.dim > F.cap:
        raise BudgetExceeded(f"constant paths: {Y.name} has simplices above the cap {F.cap}")
    return SimplicialMap.from_function(Y, F, lambda y: constant_path(F, y), name="const")
