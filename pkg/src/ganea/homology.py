"""Normalized chains, integral homology with representatives, induced maps."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import compress

from .linalg import Matrix, matvec, smith, spans_lattice, zeros
from .sset import BudgetExceeded, SimplicialMap, SimplicialSet

__all__ = [
    "ChainComplex",
    "HomologyGroup",
    "HomologyResult",
    "normalized_chains",
    "homology",
    "chain_map_matrix",
    "induced_homology",
    "mapping_cone",
    "is_surjective_on",
    "reduced_betti",
]


@dataclass
class ChainComplex:
    ranks: list[int]
    boundaries: dict[int, Matrix]  # boundaries[n]: C_n -> C_{n-1}, shape ranks[n-1] x ranks[n]
    reliable: int  # homology is exact in degrees <= reliable

    def boundary(self, n: int) -> Matrix:
        if n <= 0 or n >= len(self.ranks):
            rows = self.ranks[n - 1] if 0 < n <= len(self.ranks) else 0
            cols = self.ranks[n] if 0 <= n < len(self.ranks) else 0
            return zeros(rows, cols)
        return self.boundaries[n]

    def rank(self, n: int) -> int:
        return self.ranks[n] if 0 <= n < len(self.ranks) else 0

    def check(self) -> bool:
        """d o d == 0 in every degree."""
        for n in range(2, len(self.ranks)):
            A, B = self.boundaries[n - 1], self.boundaries[n]
            for i in range(len(A)):
                for j in range(self.ranks[n]):
                    if sum(A[i][k] * B[k][j] for k in range(self.ranks[n - 1])):
                        return False
        return True


# boundary matrices are dense; past this many entries in one of them the
# construction is refused rather than exhausting memory
MATRIX_ENTRIES = 25_000_000


def normalized_chains(X: SimplicialSet) -> ChainComplex:
    top = len(X.counts) - 1
    ranks = [X.count(n) for n in range(top + 1)]
    worst = max((ranks[n - 1] * ranks[n] for n in range(1, top + 1)), default=0)
    if worst > MATRIX_ENTRIES:
        raise BudgetExceeded("boundary matrix entries", worst, MATRIX_ENTRIES)
    bnd = {}
    for n in range(1, top + 1):
        M = zeros(ranks[n - 1], ranks[n])
        for x in X.nd(n):
            for i, f in enumerate(X.faces[n][x.index]):
                if f.nondegenerate:
                    M[f.index][x.index] += -1 if i % 2 else 1
        bnd[n] = M
    reliable = X.dim_bound - 1 if X.truncated else max(top, 0) + 1
    return ChainComplex(ranks, bnd, reliable)


@dataclass
class HomologyGroup:
    """Z^free + sum Z/t for t in torsion, with generator cycles and a coordinate map."""

    degree: int
    free: int
    torsion: list[int]
    generators: list[list[int]] = field(default_factory=list, repr=False)
    moduli: list[int] = field(default_factory=list, repr=False)  # 0 for free coordinates
    _proj: Matrix | None = field(default=None, repr=False)  # chain -> raw coordinates
    _keep: list[int] = field(default_factory=list, repr=False)

    @property
    def is_zero(self) -> bool:
        return self.free == 0 and not self.torsion

    def coordinates(self, chain: list[int]) -> list[int]:
        if self._proj is None:
            raise ValueError("homology computed without generators")
        raw = matvec(self._proj, chain) if self._proj else []
        return [raw[i] % d if d else raw[i] for i, d in zip(self._keep, self.moduli)]

    def describe(self) -> str:
        parts = ["Z"] * self.free + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass
class HomologyResult:
    groups: dict[int, HomologyGroup]
    reliable: int

    def betti(self, n: int) -> int:
        return self.groups[n].free

    def torsion(self, n: int) -> list[int]:
        return self.groups[n].torsion

    def table(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(self.groups[n].free, tuple(self.groups[n].torsion)) for n in sorted(self.groups)]

    def unreliable(self) -> list[int]:
        return [n for n in self.groups if n > self.reliable]


def _matmul(A, B, width: int):
    """A @ B by sparse row combination; B has `width` columns."""
    out = []
    cols = range(width)
    for row in A:
        acc = [0] * width
        for t in compress(range(len(row)), row):
            a, Bt = row[t], B[t]
            for j in compress(cols, Bt):
                acc[j] += a * Bt[j]
        out.append(acc)
    return out


def _degree(C: ChainComplex, n: int, generators: bool) -> HomologyGroup:
    mn = C.rank(n)
    A = C.boundary(n)
    B = C.boundary(n + 1)
    if not generators:
        r = smith(A, mn, transforms=False).rank if n > 0 else 0
        sfB = smith(B, C.rank(n + 1), transforms=False)
        tors = [d for d in sfB.invariant_factors if d > 1]
        return HomologyGroup(n, mn - r - sfB.rank, tors)
    if n > 0:
        sfA = smith(A, mn)
        r, Qinv, Q = sfA.rank, sfA.Qinv, sfA.Q
    else:
        r = 0
        Q = [[int(i == j) for j in range(mn)] for i in range(mn)]
        Qinv = Q
    k = mn - r
    proj1 = Qinv[r:]  # chain -> kernel-basis coordinates (valid on cycles)
    mB = C.rank(n + 1)
    Cm = _matmul(proj1, B, mB)
    sfC = smith(Cm, mB)
    diag = sfC.diag + [0] * (k - len(sfC.diag))
    keep = [i for i, d in enumerate(diag) if d != 1]
    proj = _matmul(sfC.P, proj1, mn)
    gens = []
    for i in keep:
        zc = [sfC.Pinv[t][i] for t in range(k)]  # kernel-basis coordinates
        gens.append([sum(Q[row][r + t] * zc[t] for t in range(k) if zc[t]) for row in range(mn)])
    moduli = [diag[i] for i in keep]
    free = sum(1 for d in moduli if d == 0)
    tors = sorted(d for d in moduli if d)
    return HomologyGroup(n, free, tors, gens, moduli, proj, keep)


def homology(X_or_C, degrees=None, generators: bool = True) -> HomologyResult:
    C = X_or_C if isinstance(X_or_C, ChainComplex) else normalized_chains(X_or_C)
    if degrees is None:
        degrees = range(0, min(len(C.ranks), C.reliable + 1))
    return HomologyResult({n: _degree(C, n, generators) for n in degrees}, C.reliable)


def reduced_betti(X: SimplicialSet, degrees=None) -> dict[int, tuple[int, tuple[int, ...]]]:
    """Reduced homology table {n: (free rank, torsion)}."""
    H = homology(X, degrees, generators=False)
    out = {}
    for n, g in H.groups.items():
        free = g.free - 1 if n == 0 and not X.is_empty else g.free
        out[n] = (free, tuple(g.torsion))
    return out


def chain_map_matrix(f: SimplicialMap, n: int) -> Matrix:
    M = zeros(f.target.count(n), f.source.count(n))
    if n < len(f.images):
        for j, img in enumerate(f.images[n]):
            if img.nondegenerate:
                M[img.index][j] += 1
    return M


def induced_homology(f: SimplicialMap, degrees=None, HX: HomologyResult | None = None, HY: HomologyResult | None = None):
    """{n: (matrix columns = images of generators, H_n(X), H_n(Y))}."""
    if degrees is None:
        top = min(len(f.source.counts), len(f.target.counts))
        degrees = range(top)
    degrees = list(degrees)
    HX = HX or homology(f.source, degrees)
    HY = HY or homology(f.target, degrees)
    out = {}
    for n in degrees:
        gx, gy = HX.groups[n], HY.groups[n]
        F = chain_map_matrix(f, n)
        cols = []
        for g in gx.generators:
            img = matvec(F, g) if F else []
            cols.append(gy.coordinates(img) if gy.moduli else [])
        out[n] = (cols, gx, gy)
    return out


def is_surjective_on(cols: list[list[int]], target: HomologyGroup) -> bool:
    return spans_lattice(cols, len(target.moduli), target.moduli)


def mapping_cone(f: SimplicialMap) -> ChainComplex:
    """Cone of the chain map: acyclic exactly when f induces isomorphisms."""
    CX, CY = normalized_chains(f.source), normalized_chains(f.target)
    top = max(len(CX.ranks), len(CY.ranks) - 1) + 1
    ranks = [CX.rank(n - 1) + CY.rank(n) for n in range(top + 1)]
    bnd = {}
    for n in range(1, top + 1):
        rows, cols = ranks[n - 1], ranks[n]
        M = zeros(rows, cols)
        ax, by = CX.rank(n - 1), CY.rank(n)
        ax2 = CX.rank(n - 2)
        dX = CX.boundary(n - 1)
        for i in range(ax2):
            for j in range(ax):
                if dX[i][j]:
                    M[i][j] = -dX[i][j]
        F = chain_map_matrix(f, n - 1) if n - 1 >= 0 else []
        for i in range(CY.rank(n - 1)):
            for j in range(ax):
                if F[i][j]:
                    M[ax2 + i][j] = F[i][j]
        dY = CY.boundary(n)
        for i in range(CY.rank(n - 1)):
            for j in range(by):
                if dY[i][j]:
                    M[ax2 + i][ax + j] = dY[i][j]
        bnd[n] = M
    reliable = min(CX.reliable + 1, CY.reliable)
    return ChainComplex(ranks, bnd, reliable)
