"""Exhaustive horn-filling checks for simplicial sets and maps."""
from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import horn
from .solver import SearchExhausted, enumerate_maps
from .sset import SimplicialMap, SimplicialSet

__all__ = ["HornStatus", "HornReport", "FibrationStatus", "horn_filler_report", "fibration_status"]


@dataclass
class HornStatus:
    n: int
    k: int
    checked: int = 0
    unfilled: int = 0
    complete: bool = True  # False when the enumeration budget ran out
    example: tuple | None = None  # an unfilled horn (faces, with None at k) when one exists

    @property
    def status(self) -> str:
        if self.unfilled:
            return "unfilled"
        return "filled" if self.complete else "unknown"


@dataclass
class HornReport:
    entries: dict[tuple[int, int], HornStatus] = field(default_factory=dict)
    certified_dim: int = 0

    @property
    def filled_count(self) -> int:
        return sum(e.checked - e.unfilled for e in self.entries.values())

    def is_kan_through(self, n: int) -> bool:
        return self.certified_dim >= n


# A fibration report has the same shape; the name mirrors its use.
FibrationStatus = HornReport


def _horn_faces(n: int, k: int):
    """The horn, plus the nondegenerate (n-1)-simplex refs of its facets by face index."""
    H = horn(n, k)
    refs = {}
    for i in range(n + 1):
        if i != k:
            key = tuple(t for t in range(n + 1) if t != i)
            # for n == 1 the horn is a single vertex, relabelled to 0
            refs[i] = 0 if n == 1 else H.index_of_key(n - 1, key)
    return H, refs


def _drop(faces, k):
    return tuple(f for i, f in enumerate(faces) if i != k)


def fibration_status(p: SimplicialMap, max_dim: int = 2, budget: int | None = 200000) -> HornReport:
    """Relative horn lifting for p: E -> B through dimension max_dim.

    For every horn in E and every n-simplex of B compatible with its image,
    a filler in E lying over that simplex is searched for exhaustively.
    """
    E, B = p.source, p.target
    report = HornReport()
    top = min([max_dim] + [Z.dim_bound for Z in (E, B) if Z.truncated])
    certified = 0
    remaining = budget
    for n in range(1, top + 1):
        ok = True
        for k in range(n + 1):
            st = HornStatus(n, k)
            report.entries[(n, k)] = st
            fill_index: dict = {}
            for e in E.all_simplices(n):
                fill_index.setdefault((_drop(E.faces_of(e), k), p(e)), True)
            base_index: dict = {}
            for b in B.all_simplices(n):
                base_index.setdefault(_drop(B.faces_of(b), k), []).append(b)
            H, refs = _horn_faces(n, k)
            try:
                for h in enumerate_maps(H, E, budget=remaining):
                    faces = tuple(h.images[n - 1][refs[i]] for i in range(n + 1) if i != k)
                    down = tuple(p(f) for f in faces)
                    for b in base_index.get(down, ()):
                        st.checked += 1
                        if remaining is not None:
                            remaining -= 1
                            if remaining <= 0:
                                raise SearchExhausted("horn enumeration", budget, budget)
                        if (faces, b) not in fill_index:
                            st.unfilled += 1
                            if st.example is None:
                                st.example = (faces, b)
            except SearchExhausted:
                st.complete = False
            if st.unfilled or not st.complete:
                ok = False
        if not ok:
            break
        certified = n
    report.certified_dim = certified
    return report


def horn_filler_report(X: SimplicialSet, max_dim: int = 2, budget: int | None = 200000) -> HornReport:
    """Kan condition of X through max_dim (lifting against X -> point)."""
    from .constructions import terminal_map

    return fibration_status(terminal_map(X), max_dim, budget)
