"""Small standard models: simplices, spheres, circles, wedges, torus, projective plane."""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .sset import Simplex, SimplicialMap, SimplicialSet, identity_op

__all__ = [
    "from_complex",
    "simplex",
    "boundary",
    "horn",
    "point",
    "empty",
    "discrete",
    "sphere0",
    "minimal_circle",
    "square_circle",
    "square_to_minimal_circle",
    "wedge_of_circles",
    "boundary_wedge",
    "torus",
    "projective_plane",
    "zigzag",
    "CORPUS",
]


def from_complex(facets: Iterable[Sequence[int]], *, name: str = "", basepoint: int | None = None) -> SimplicialSet:
    """Ordered simplicial complex on integer vertices; vertex order orients simplices."""
    simplices: set[tuple[int, ...]] = set()
    for f in facets:
        f = tuple(sorted(f))
        for k in range(1, len(f) + 1):
            simplices.update(combinations(f, k))
    verts = sorted(s[0] for s in simplices if len(s) == 1)
    relabel = {v: i for i, v in enumerate(verts)}
    by_dim: dict[int, list[tuple[int, ...]]] = {}
    for s in simplices:
        by_dim.setdefault(len(s) - 1, []).append(tuple(relabel[v] for v in s))
    top = max(by_dim, default=-1)
    levels = [sorted(by_dim.get(n, [])) for n in range(top + 1)]
    index = [{s: i for i, s in enumerate(lv)} for lv in levels]
    faces = []
    for n, lv in enumerate(levels):
        row = []
        for s in lv:
            if n == 0:
                row.append(())
            else:
                row.append(tuple(
                    Simplex(identity_op(n - 1), n - 1, index[n - 1][s[:i] + s[i + 1:]]) for i in range(n + 1)
                ))
        faces.append(row)
    labels = [["".join(map(str, (verts[v] for v in s))) for s in lv] for lv in levels]
    return SimplicialSet(faces, labels=labels, keys=levels, name=name, basepoint=basepoint)


def simplex(n: int) -> SimplicialSet:
    return from_complex([range(n + 1)], name=f"Delta{n}")


def boundary(n: int) -> SimplicialSet:
    return from_complex(combinations(range(n + 1), n), name=f"dDelta{n}")


def horn(n: int, k: int) -> SimplicialSet:
    facets = [tuple(t for t in range(n + 1) if t != i) for i in range(n + 1) if i != k]
    return from_complex(facets, name=f"Horn{n},{k}")


def point() -> SimplicialSet:
    return simplex(0)


def empty() -> SimplicialSet:
    return SimplicialSet([], name="empty")


def discrete(n: int) -> SimplicialSet:
    return SimplicialSet([[()] * n], labels=[[str(i) for i in range(n)]], name=f"discrete{n}")


def sphere0() -> SimplicialSet:
    return SimplicialSet([[(), ()]], labels=[["-", "+"]], name="S0")


def _one_vertex(edges: Sequence[str], triangles: Sequence[tuple[Simplex, ...]] = (), tri_labels=(), name=""):
    v = Simplex((0,), 0, 0)
    faces = [[()], [(v, v) for _ in edges]]
    labels = [["v"], list(edges)]
    if triangles:
        faces.append(list(triangles))
        labels.append(list(tri_labels))
    return SimplicialSet(faces, labels=labels, basepoint=0, name=name)


def minimal_circle() -> SimplicialSet:
    """One vertex v, one edge e."""
    return _one_vertex(["e"], name="S1")


def square_circle() -> SimplicialSet:
    return from_complex([(0, 1), (1, 2), (2, 3), (0, 3)], name="S1sq", basepoint=0)


def square_to_minimal_circle() -> SimplicialMap:
    """Weak equivalence S1sq -> S1: edge 0-1 wraps the loop, the other three edges collapse."""
    S1 = minimal_circle()
    v, e = S1.simplex(0, 0), S1.simplex(1, 0)

    def image(s: Simplex) -> Simplex:
        if s.level == 0:
            return v
        return e if s.index == 0 else S1.apply(v, (0, 0))

    return SimplicialMap.from_function(square_circle(), S1, image, name="S1sq->S1")


def wedge_of_circles(k: int = 2) -> SimplicialSet:
    return _one_vertex([f"e{i}" for i in range(k)], name=f"wedge{k}S1")


def boundary_wedge() -> SimplicialSet:
    """Two copies of the boundary of Delta^2 glued at vertex 0."""
    return from_complex([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)], name="dD2vdD2", basepoint=0)


def torus() -> SimplicialSet:
    """One vertex, edges a, b, c (diagonal) and two triangles."""
    e = lambda i: Simplex((0, 1), 1, i)
    a, b, c = e(0), e(1), e(2)
    upper = (b, c, a)  # d0 = b, d1 = c, d2 = a
    lower = (a, c, b)
    return _one_vertex(["a", "b", "c"], [upper, lower], ["U", "L"], name="T2")


def projective_plane() -> SimplicialSet:
    """The six-vertex triangulation."""
    tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
            (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3)]
    return from_complex(tris, name="RP2", basepoint=0)


def zigzag(pattern: Sequence[int]) -> SimplicialSet:
    """A path of edges between vertices 0..L; +1 orients t -> t+1, -1 orients t+1 -> t."""
    L = len(pattern)
    faces = [[()] * (L + 1), []]
    for t, d in enumerate(pattern):
        src, dst = (t, t + 1) if d > 0 else (t + 1, t)
        faces[1].append((Simplex((0,), 0, dst), Simplex((0,), 0, src)))
    if not pattern:
        faces.pop()
    return SimplicialSet(faces, name="Z" + "".join("+" if d > 0 else "-" for d in pattern))


CORPUS = {
    "point": point,
    "Delta1": lambda: simplex(1),
    "Delta2": lambda: simplex(2),
    "S0": sphere0,
    "S1": minimal_circle,
    "S1sq": square_circle,
    "dDelta2": lambda: boundary(2),
    "wedge2S1": wedge_of_circles,
    "dD2vdD2": boundary_wedge,
    "T2": torus,
    "RP2": projective_plane,
}
