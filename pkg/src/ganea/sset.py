"""Finite simplicial sets stored in Eilenberg-Zilber normal form.

Every simplex is a :class:`Simplex`: a surjective monotone map ``op: [n] -> [m]``
(the degeneracy part, stored as the tuple of its values) applied to the
nondegenerate m-simplex ``(level, index)``.  Degenerate simplices are never
materialized; they are computed on demand from the face tables.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Simplex",
    "SimplicialSet",
    "SimplicialMap",
    "BudgetExceeded",
    "identity_op",
    "surjections",
    "degeneracy_word",
    "op_from_word",
    "coface",
    "codegeneracy",
]


class BudgetExceeded(RuntimeError):
    """Raised when a construction would exceed its configured size budget."""

    def __init__(self, what: str, estimate: int | None = None, limit: int | None = None):
        self.what = what
        self.estimate = estimate
        self.limit = limit
        msg = what
        if estimate is not None:
            msg += f" (size {estimate} > limit {limit})"
        super().__init__(msg)


class Simplex(NamedTuple):
    op: tuple[int, ...]
    level: int
    index: int

    @property
    def dim(self) -> int:
        return len(self.op) - 1

    @property
    def ref(self) -> tuple[int, int]:
        return (self.level, self.index)

    @property
    def nondegenerate(self) -> bool:
        return len(self.op) == self.level + 1

    def word(self) -> tuple[int, ...]:
        return degeneracy_word(self.op)


def identity_op(n: int) -> tuple[int, ...]:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> tuple[int, ...]:
    """delta_i: [n-1] -> [n] skipping i."""
    return tuple(t for t in range(n + 1) if t != i)


def codegeneracy(n: int, j: int) -> tuple[int, ...]:
    """sigma_j: [n+1] -> [n] hitting j twice."""
    return tuple(t if t <= j else t - 1 for t in range(n + 2))


def surjections(k: int, m: int) -> list[tuple[int, ...]]:
    """All monotone surjections [k] -> [m], in lexicographic order."""
    if m > k or m < 0:
        return []
    out = []
    for steps in combinations(range(k), m):
        s = set(steps)
        op = [0]
        for t in range(k):
            op.append(op[-1] + 1 if t in s else op[-1])
        out.append(tuple(op))
    out.sort()
    return out


def degeneracy_word(op: Sequence[int]) -> tuple[int, ...]:
    """EZ degeneracy word (strictly decreasing indices) of a surjection."""
    return tuple(sorted((t for t in range(len(op) - 1) if op[t] == op[t + 1]), reverse=True))


def op_from_word(word: Sequence[int], level: int) -> tuple[int, ...]:
    word = tuple(word)
    if any(a <= b for a, b in zip(word, word[1:])):
        raise ValueError(f"degeneracy word {word} is not strictly decreasing")
    n = level + len(word)
    rep = set(word)
    if any(j < 0 or j >= n for j in rep):
        raise ValueError(f"degeneracy word {word} out of range for level {level}")
    op = [0]
    for t in range(n):
        op.append(op[-1] if t in rep else op[-1] + 1)
    return tuple(op)


def _factor(theta: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a monotone map into (surjection, injection-as-image)."""
    image = tuple(sorted(set(theta)))
    pos = {v: i for i, v in enumerate(image)}
    return tuple(pos[v] for v in theta), image


class SimplicialSet:
    """A finitely generated simplicial set.

    ``faces[n][i]`` is the tuple ``(d_0 x, ..., d_n x)`` of the i-th
    nondegenerate n-simplex, each entry a normal-form :class:`Simplex`.
    Level 0 entries are empty tuples.  When ``truncated`` is set, only
    levels ``<= dim_bound`` are known to be complete.
    """

    def __init__(
        self,
        faces: Sequence[Sequence[Sequence[Simplex]]],
        *,
        basepoint: int | None = None,
        labels: Sequence[Sequence[str]] | None = None,
        dim_bound: int | None = None,
        truncated: bool = False,
        keys: Sequence[Sequence] | None = None,
        name: str = "",
    ):
        levels = [tuple(tuple(Simplex(*s) for s in f) for f in level) for level in faces]
        while levels and not levels[-1] and (dim_bound is None or len(levels) - 1 > dim_bound):
            levels.pop()
        self.faces: tuple[tuple[tuple[Simplex, ...], ...], ...] = tuple(levels)
        self.counts = tuple(len(level) for level in self.faces)
        top = max((n for n, c in enumerate(self.counts) if c), default=-1)
        self.dim = top
        self.dim_bound = max(top, 0) if dim_bound is None else dim_bound
        self.truncated = truncated
        self.basepoint = basepoint
        self.labels = tuple(tuple(level) for level in labels) if labels is not None else None
        self.keys = tuple(tuple(level) for level in keys) if keys is not None else None
        self._key_index = None
        self.name = name
        self._restrict_cache: dict = {}
        self._apply_cache: dict = {}
        self._all_cache: dict = {}
        self._index_cache: dict = {}

    def __repr__(self):
        tag = f" {self.name}" if self.name else ""
        trunc = f", truncated@{self.dim_bound}" if self.truncated else ""
        return f"<SimplicialSet{tag} counts={list(self.counts)}{trunc}>"

    # -- inventory ---------------------------------------------------------

    def count(self, n: int) -> int:
        return self.counts[n] if 0 <= n < len(self.counts) else 0

    def nd(self, n: int) -> list[Simplex]:
        op = identity_op(n)
        return [Simplex(op, n, i) for i in range(self.count(n))]

    def simplex(self, n: int, i: int) -> Simplex:
        return Simplex(identity_op(n), n, i)

    def all_nd(self) -> list[Simplex]:
        return [s for n in range(len(self.counts)) for s in self.nd(n)]

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def is_empty(self) -> bool:
        return self.count(0) == 0

    def key_of(self, s: Simplex):
        return self.keys[s.level][s.index]

    def index_of_key(self, level: int, key) -> int:
        if self._key_index is None:
            self._key_index = [{k: i for i, k in enumerate(lv)} for lv in self.keys]
        return self._key_index[level][key]

    def label(self, s: Simplex) -> str:
        if self.labels is not None and s.level < len(self.labels) and s.index < len(self.labels[s.level]):
            return self.labels[s.level][s.index]
        return f"x{s.level}_{s.index}"

    # -- simplicial operators ---------------------------------------------

    def apply(self, s: Simplex, theta: Sequence[int]) -> Simplex:
        """theta^* s for a monotone theta: [k] -> [dim s], in normal form."""
        key = (s, tuple(theta))
        hit = self._apply_cache.get(key)
        if hit is not None:
            return hit
        comp = tuple(s.op[t] for t in theta)
        rho, image = _factor(comp)
        z = self._restrict(s.level, s.index, image)
        out = Simplex(tuple(z.op[r] for r in rho), z.level, z.index)
        self._apply_cache[key] = out
        return out

    def _restrict(self, level: int, index: int, image: tuple[int, ...]) -> Simplex:
        if len(image) == level + 1:
            return Simplex(identity_op(level), level, index)
        key = (level, index, image)
        hit = self._restrict_cache.get(key)
        if hit is not None:
            return hit
        present = set(image)
        j = max(t for t in range(level + 1) if t not in present)
        f = self.faces[level][index][j]
        shifted = tuple(t if t < j else t - 1 for t in image)
        out = self.apply(f, shifted)
        self._restrict_cache[key] = out
        return out

    def face(self, s: Simplex, i: int) -> Simplex:
        return self.apply(s, coface(s.dim, i))

    def degeneracy(self, s: Simplex, j: int) -> Simplex:
        return self.apply(s, codegeneracy(s.dim, j))

    def vertices(self, s: Simplex) -> tuple[int, ...]:
        return tuple(self.apply(s, (t,)).index for t in range(s.dim + 1))

    def faces_of(self, s: Simplex) -> tuple[Simplex, ...]:
        if s.dim == 0:
            return ()
        return tuple(self.face(s, i) for i in range(s.dim + 1))

    def all_simplices(self, k: int) -> list[Simplex]:
        """Every k-simplex, degenerate ones included, in canonical order."""
        hit = self._all_cache.get(k)
        if hit is None:
            hit = []
            for m in range(min(k, len(self.counts) - 1), -1, -1):
                for op in surjections(k, m):
                    hit.extend(Simplex(op, m, i) for i in range(self.count(m)))
            self._all_cache[k] = hit
        return hit

    def face_index(self, k: int) -> dict[tuple[Simplex, ...], list[Simplex]]:
        """Map from face tuple to the k-simplices having those faces."""
        hit = self._index_cache.get(k)
        if hit is None:
            hit = {}
            for s in self.all_simplices(k):
                hit.setdefault(self.faces_of(s), []).append(s)
            self._index_cache[k] = hit
        return hit

    def closure(self, simplices: Iterable[Simplex]) -> set[tuple[int, int]]:
        """Refs of all nondegenerate simplices in the closure of the given ones."""
        seen: set[tuple[int, int]] = set()
        stack = [s.ref for s in simplices]
        while stack:
            ref = stack.pop()
            if ref in seen:
                continue
            seen.add(ref)
            if ref[0] > 0:
                stack.extend(f.ref for f in self.faces[ref[0]][ref[1]])
        return seen

    # -- checks ------------------------------------------------------------

    def validate(self) -> list[str]:
        """Violated invariants; an empty list means the set is well formed."""
        out: list[str] = []
        top = len(self.counts)
        for n, level in enumerate(self.faces):
            for idx, fs in enumerate(level):
                if n == 0:
                    if fs:
                        out.append(f"vertex {idx} carries faces")
                    continue
                if len(fs) != n + 1:
                    out.append(f"simplex ({n},{idx}) has {len(fs)} faces, expected {n + 1}")
                    continue
                for i, f in enumerate(fs):
                    if not (0 <= f.level < top and 0 <= f.index < self.count(f.level)):
                        out.append(f"d{i}({n},{idx}) targets missing simplex {f.ref}")
                    elif f.dim != n - 1:
                        out.append(f"d{i}({n},{idx}) has dimension {f.dim}, expected {n - 1}")
                    elif tuple(f.op) not in set(surjections(n - 1, f.level)):
                        out.append(f"d{i}({n},{idx}) is not in normal form")
        if out:
            return out
        for n in range(2, top):
            for idx in range(self.count(n)):
                x = self.simplex(n, idx)
                for i in range(n + 1):
                    for j in range(i + 1, n + 1):
                        lhs = self.face(self.face(x, j), i)
                        rhs = self.face(self.face(x, i), j - 1)
                        if lhs != rhs:
                            out.append(f"d{i}d{j} != d{j - 1}d{i} on ({n},{idx})")
        if self.basepoint is not None and not (0 <= self.basepoint < self.count(0)):
            out.append(f"basepoint {self.basepoint} is not a vertex")
        return out

    # -- conveniences -------------------------------------------------------

    def pointed(self, vertex: int = 0) -> "SimplicialSet":
        if self.is_empty:
            raise ValueError("the empty simplicial set cannot be pointed")
        return SimplicialSet(
            self.faces, basepoint=vertex, labels=self.labels, dim_bound=self.dim_bound,
            truncated=self.truncated, keys=self.keys, name=self.name,
        )

    def components(self) -> list[list[int]]:
        """Vertex sets of the connected components, in canonical order."""
        parent = list(range(self.count(0)))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for fs in self.faces[1] if len(self.faces) > 1 else ():
            a, b = find(fs[0].index), find(fs[1].index)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in range(self.count(0)):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1


class SimplicialMap:
    """A simplicial map, given by the images of the nondegenerate simplices."""

    def __init__(self, source: SimplicialSet, target: SimplicialSet, images: Sequence[Sequence[Simplex]], name: str = ""):
        self.source = source
        self.target = target
        self.images = tuple(tuple(Simplex(*s) for s in level) for level in images)
        self.name = name

    def __repr__(self):
        return f"<SimplicialMap {self.name or ''} {self.source!r} -> {self.target!r}>"

    def __call__(self, s: Simplex) -> Simplex:
        img = self.images[s.level][s.index]
        if s.nondegenerate:
            return img
        return self.target.apply(img, s.op)

    def __eq__(self, other):
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return self.source is other.source and self.target is other.target and self.images == other.images

    __hash__ = object.__hash__

    def agrees_with(self, other: "SimplicialMap") -> bool:
        """Equality of underlying functions, ignoring object identity of endpoints."""
        return self.images == other.images

    @classmethod
    def identity(cls, X: SimplicialSet) -> "SimplicialMap":
        return cls(X, X, [X.nd(n) for n in range(len(X.counts))], name="id")

    @classmethod
    def from_function(cls, source: SimplicialSet, target: SimplicialSet, fn, name: str = "") -> "SimplicialMap":
        return cls(source, target, [[fn(s) for s in source.nd(n)] for n in range(len(source.counts))], name=name)

    @classmethod
    def constant(cls, source: SimplicialSet, target: SimplicialSet, vertex: int) -> "SimplicialMap":
        v = target.simplex(0, vertex)
        return cls.from_function(source, target, lambda s: target.apply(v, (0,) * (s.dim + 1)), name=f"const{vertex}")

    def compose(self, first: "SimplicialMap") -> "SimplicialMap":
        """self o first."""
        return SimplicialMap.from_function(first.source, self.target, lambda s: self(first(s)))

    def validate(self) -> list[str]:
        out = []
        src, tgt = self.source, self.target
        if len(self.images) < len(src.counts) or any(len(self.images[n]) != src.count(n) for n in range(len(src.counts))):
            return ["image table does not match source inventory"]
        for n in range(len(src.counts)):
            for s in src.nd(n):
                img = self.images[n][s.index]
                if img.dim != n:
                    out.append(f"image of {s.ref} has dimension {img.dim}")
                    continue
                if not (img.level < len(tgt.counts) and img.index < tgt.count(img.level)):
                    out.append(f"image of {s.ref} is missing in target")
                    continue
                for i in range(n + 1 if n else 0):
                    if self(src.face(s, i)) != tgt.face(img, i):
                        out.append(f"face d{i} not preserved at {s.ref}")
        if src.basepoint is not None and tgt.basepoint is not None and not out:
            if self.images[0][src.basepoint].index != tgt.basepoint:
                out.append("basepoint not preserved")
        return out

    def is_injective(self) -> bool:
        seen = set()
        for level in self.images:
            for img in level:
                if not img.nondegenerate or img in seen:
                    return False
                seen.add(img)
        return True

    def is_surjective(self) -> bool:
        hit = {img.ref for level in self.images for img in level if img.nondegenerate}
        return len(hit) == self.target.size

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective() and self.source.size == self.target.size
