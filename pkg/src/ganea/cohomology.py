"""Cohomology rings over prime fields and cup-length style lower bounds.

Cochains are functions on nondegenerate simplices; the cup product uses the
front-face/back-face rule, and classes are expressed in a fixed basis of
cocycle representatives chosen in canonical simplex order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .homology import normalized_chains
from .linalg import complement_basis, nullspace_mod, rref_mod, solve_mod, transpose
from .sset import SimplicialMap, SimplicialSet

__all__ = [
    "INF",
    "CohomologyRing",
    "BoundResult",
    "cohomology_ring",
    "cup_length",
    "zero_divisor_cup_length",
    "schwarz_bound",
    "TensorSquare",
]

INF = math.inf
DEFAULT_PRIMES = (2, 3)


@dataclass
class BoundResult:
    """A cohomological lower bound with the witnessing product."""

    value: int | float
    prime: int
    factors: list = field(default_factory=list)  # [(degree, coordinates)] whose product is nonzero
    lower_bound_only: bool = False  # truncation may hide longer products

    def to_dict(self):
        return {
            "value": "inf" if self.value == INF else self.value,
            "prime": self.prime,
            "factors": [[d, list(c)] for d, c in self.factors],
            "lower_bound_only": self.lower_bound_only,
        }


class CohomologyRing:
    """H^*(X; GF(p)) through the reliable degrees of X."""

    def __init__(self, X: SimplicialSet, p: int = 2):
        self.space, self.p = X, p
        C = normalized_chains(X)
        self.top = min(len(C.ranks) - 1, C.reliable)
        self.truncated = X.truncated
        self.ranks = [C.rank(n) for n in range(self.top + 1)]
        self.boundaries: dict[int, list] = {}
        self.basis: dict[int, list[list[int]]] = {}
        for n in range(self.top + 1):
            # delta_n: C^n -> C^{n+1} is the transpose of d_{n+1}
            d_next = C.boundary(n + 1)
            delta = transpose(d_next, C.rank(n + 1)) if C.rank(n + 1) else []
            cocycles = nullspace_mod(delta, p, self.ranks[n]) if delta else [
                [int(i == j) for j in range(self.ranks[n])] for i in range(self.ranks[n])]
            if n > 0:
                # row j of d_n is the coboundary of the j-th basis (n-1)-cochain
                cob, _ = rref_mod(C.boundary(n), p, self.ranks[n])
            else:
                cob = []
            self.boundaries[n] = [list(r) for r in cob]
            self.basis[n] = complement_basis(cob, cocycles, p, self.ranks[n])

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, []))

    def betti(self) -> list[int]:
        return [self.dim(n) for n in range(self.top + 1)]

    def coordinates(self, n: int, cocycle: list[int]) -> list[int]:
        """Coordinates of a cocycle's class in the representative basis."""
        B = self.boundaries[n]
        c = solve_mod(B + self.basis[n], cocycle, self.p, self.ranks[n])
        if c is None:
            raise ValueError("not a cocycle")
        return c[len(B):]

    def cocycle(self, n: int, coords: list[int]) -> list[int]:
        out = [0] * self.ranks[n]
        for c, v in zip(coords, self.basis[n]):
            if c:
                for i, x in enumerate(v):
                    if x:
                        out[i] = (out[i] + c * x) % self.p
        return out

    def cup_cochains(self, a: list[int], da: int, b: list[int], db: int) -> list[int] | None:
        n = da + db
        if n > self.top:
            return None
        X, p = self.space, self.p
        out = []
        for s in X.nd(n):
            front = X.apply(s, tuple(range(da + 1)))
            back = X.apply(s, tuple(range(da, n + 1)))
            if not (front.nondegenerate and back.nondegenerate):
                out.append(0)
                continue
            out.append((a[front.index] * b[back.index]) % p)
        return out

    def cup(self, da: int, a: list[int], db: int, b: list[int]) -> list[int] | None:
        """Product of two classes given by coordinates; None if beyond the reliable degrees."""
        prod = self.cup_cochains(self.cocycle(da, a), da, self.cocycle(db, b), db)
        if prod is None:
            return None
        return self.coordinates(da + db, prod)

    def table(self) -> dict:
        """{(i, a, j, b): coordinates of e^i_a cup e^j_b} for all basis pairs in range."""
        out = {}
        for i in range(self.top + 1):
            for j in range(self.top + 1 - i):
                for a in range(self.dim(i)):
                    for b in range(self.dim(j)):
                        ea = [int(t == a) for t in range(self.dim(i))]
                        eb = [int(t == b) for t in range(self.dim(j))]
                        out[(i, a, j, b)] = self.cup(i, ea, j, eb)
        return out

    def pullback(self, f: SimplicialMap, source_ring: "CohomologyRing", n: int) -> list[list[int]]:
        """Matrix columns: images of basis classes of H^n(target) in H^n(source)."""
        cols = []
        for v in self.basis[n]:
            pulled = []
            for img in f.images[n] if n < len(f.images) else ():
                pulled.append(v[img.index] if img.nondegenerate else 0)
            cols.append(source_ring.coordinates(n, pulled) if source_ring.dim(n) or pulled else [])
        return cols


def cohomology_ring(X: SimplicialSet, p: int = 2) -> CohomologyRing:
    return CohomologyRing(X, p)


def _span(vectors, p, n):
    R, _ = rref_mod(vectors, p, n)
    return [list(r) for r in R]


class TensorSquare:
    """H (x) H for a cohomology ring H over a field, with the Koszul sign rule."""

    def __init__(self, R: CohomologyRing):
        self.ring, self.p = R, R.p
        self.top = 2 * R.top
        self.truncated = R.truncated
        self.basis: dict[int, list[tuple]] = {}
        for i in range(R.top + 1):
            for j in range(R.top + 1):
                for a in range(R.dim(i)):
                    for b in range(R.dim(j)):
                        self.basis.setdefault(i + j, []).append(((i, a), (j, b)))
        self.index = {d: {k: t for t, k in enumerate(v)} for d, v in self.basis.items()}
        self._mult: dict = {}

    def dim(self, d: int) -> int:
        return len(self.basis.get(d, []))

    def _m(self, x, y):
        if (x, y) not in self._mult:
            (i, a), (j, b) = x, y
            R = self.ring
            c = R.cup(i, [int(t == a) for t in range(R.dim(i))], j, [int(t == b) for t in range(R.dim(j))])
            self._mult[(x, y)] = [] if c is None else [((i + j, t), v) for t, v in enumerate(c) if v]
        return self._mult[(x, y)]

    def cup(self, d1: int, u: list[int], d2: int, v: list[int]) -> list[int]:
        p = self.p
        d = d1 + d2
        out = [0] * self.dim(d)
        for s, us in enumerate(u):
            if not us:
                continue
            x1, x2 = self.basis[d1][s]
            for t, vt in enumerate(v):
                if not vt:
                    continue
                y1, y2 = self.basis[d2][t]
                sign = -1 if (x2[0] * y1[0]) % 2 else 1
                for z1, c1 in self._m(x1, y1):
                    for z2, c2 in self._m(x2, y2):
                        k = self.index[d][(z1, z2)]
                        out[k] = (out[k] + sign * us * vt * c1 * c2) % p
        return out

    def multiplication_kernel(self) -> dict[int, list[list[int]]]:
        """Kernel of the product map H (x) H -> H, per total degree."""
        R, p = self.ring, self.p
        out = {}
        for d, keys in self.basis.items():
            if d > R.top:
                # everything in these degrees maps to zero (or beyond reliable range)
                out[d] = [[int(i == j) for j in range(len(keys))] for i in range(len(keys))]
                continue
            cols = []
            for (x1, x2) in keys:
                col = [0] * R.dim(d)
                for z, c in self._m(x1, x2):
                    col[z[1]] = (col[z[1]] + c) % p
                cols.append(col)
            rows = transpose(cols, R.dim(d))
            out[d] = nullspace_mod(rows, p, len(keys)) if R.dim(d) else [
                [int(i == j) for j in range(len(keys))] for i in range(len(keys))]
        return {d: v for d, v in out.items() if v}


def _ideal_length(A, ideal: dict[int, list[list[int]]]) -> BoundResult:
    """Largest k with ideal^k != 0, INF when the powers stabilize at a nonzero ideal.

    The powers of an ideal decrease, so equal dimensions in consecutive
    powers mean they have stabilized.
    """
    p = A.p
    ideal = {n: _span(v, p, A.dim(n)) for n, v in ideal.items() if v}
    ideal = {n: v for n, v in ideal.items() if v}
    if not ideal:
        return BoundResult(0, p, [], A.truncated)
    cur = ideal
    k = 1
    while True:
        raw: dict[int, list] = {}
        for n, vs in cur.items():
            for m, ws in ideal.items():
                if n + m > A.top:
                    continue
                for v in vs:
                    for w in ws:
                        prod = A.cup(n, v, m, w)
                        if prod is not None and any(prod):
                            raw.setdefault(n + m, []).append(prod)
        nxt = {d: _span(v, p, A.dim(d)) for d, v in raw.items()}
        nxt = {d: v for d, v in nxt.items() if v}
        if not nxt:
            return BoundResult(k, p, _witness(A, ideal, k), A.truncated)
        if {d: len(v) for d, v in nxt.items()} == {d: len(v) for d, v in cur.items()}:
            return BoundResult(INF, p, [], A.truncated)
        k += 1
        cur = nxt


def _witness(A, ideal, k):
    """k ideal basis elements with a nonzero product, first in canonical order."""
    gens = [(n, v) for n in sorted(ideal) for v in ideal[n]]
    dead: set = set()

    def go(d, vec, depth, path):
        if depth == k:
            return path
        key = (d, tuple(vec), depth)
        if key in dead:
            return None
        for n, v in gens:
            if d + n > A.top:
                continue
            prod = A.cup(d, vec, n, v)
            if prod is not None and any(prod):
                found = go(d + n, prod, depth + 1, path + [(n, v)])
                if found:
                    return found
        dead.add(key)
        return None

    for n, v in gens:
        found = go(n, v, 1, [(n, v)])
        if found:
            return found
    return []


def cup_length(X: SimplicialSet, primes=DEFAULT_PRIMES) -> BoundResult:
    """Longest nonzero product of positive-degree classes, maximized over the primes."""
    if X.is_empty:
        return BoundResult(0, primes[0])
    best = None
    for p in primes:
        R = CohomologyRing(X, p)
        ideal = {n: [[int(i == j) for j in range(R.dim(n))] for i in range(R.dim(n))] for n in range(1, R.top + 1)}
        r = _ideal_length(R, ideal)
        if best is None or r.value > best.value:
            best = r
    return best


def schwarz_bound(f: SimplicialMap, primes=DEFAULT_PRIMES) -> BoundResult:
    """Nilpotency length of ker(f^*: H^*(Y) -> H^*(X)); a lower bound for secat(f)."""
    best = None
    X, Y = f.source, f.target
    for p in primes:
        RY = CohomologyRing(Y, p)
        if X.is_empty:
            # the whole ring, unit included, is the kernel
            r = BoundResult(INF if RY.dim(0) else 0, p, [], RY.truncated)
        else:
            RX = CohomologyRing(X, p)
            ideal = {}
            for n in range(RY.top + 1):
                if n > RX.top:
                    if not RX.truncated and RY.dim(n):
                        # H^n(X) = 0 above the dimension of X
                        ideal[n] = [[int(i == j) for j in range(RY.dim(n))] for i in range(RY.dim(n))]
                    continue
                cols = RY.pullback(f, RX, n)
                if not cols:
                    continue
                if RX.dim(n):
                    ker = nullspace_mod(transpose(cols, RX.dim(n)), p, len(cols))
                else:
                    ker = [[int(i == j) for j in range(len(cols))] for i in range(len(cols))]
                if ker:
                    ideal[n] = ker
            r = _ideal_length(RY, ideal)
            r.lower_bound_only = RY.truncated or (RX.truncated and RX.top < RY.top)
        if best is None or r.value > best.value:
            best = r
    return best


def zero_divisor_cup_length(X: SimplicialSet, primes=DEFAULT_PRIMES) -> BoundResult:
    """Longest nonzero product of zero-divisors, computed in H^*(X) (x) H^*(X).

    The tensor algebra is assembled from the structure constants of H^*(X),
    independently of any product complex.
    """
    if X.is_empty:
        return BoundResult(0, primes[0])
    best = None
    for p in primes:
        T = TensorSquare(CohomologyRing(X, p))
        r = _ideal_length(T, T.multiplication_kernel())
        if best is None or r.value > best.value:
            best = r
    return best
