"""Cofibrations, weak equivalences, fibrations and the two factorizations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import constructions as cx
from .fundamental_group import generates_free_group, induced_pi1, pi1_presentation, tietze_reduce
from .homology import homology, induced_homology, is_surjective_on
from .kan import HornReport, fibration_status
from .sset import BudgetExceeded, SimplicialMap, SimplicialSet

__all__ = [
    "Verdict",
    "Factorization",
    "is_cofibration",
    "is_weak_equivalence",
    "f_factorize",
    "c_factorize",
    "Square",
    "homotopy_pullback_check",
    "homotopy_pushout_check",
]

YES, NO, UNKNOWN = "Yes", "No", "Unknown"


@dataclass
class Verdict:
    status: str
    witness: dict = field(default_factory=dict)

    def __bool__(self):
        return self.status == YES

    def to_dict(self):
        return {"status": self.status, "witness": self.witness}


def is_cofibration(f: SimplicialMap) -> Verdict:
    """Cofibrations are the levelwise injections."""
    if f.is_injective():
        return Verdict(YES)
    seen = {}
    for level in f.images:
        for s, img in enumerate(level):
            if not img.nondegenerate:
                return Verdict(NO, {"degenerate_image": [img.level, img.index]})
            if img in seen:
                return Verdict(NO, {"collision": [list(seen[img]), [img.level, s]]})
            seen[img] = (img.level, s)
    return Verdict(NO)


def _homology_check(f: SimplicialMap, top: int):
    """First degree <= top where f_* fails to be an isomorphism, or None."""
    degrees = range(top + 1)
    HX = homology(f.source, degrees)
    HY = homology(f.target, degrees)
    ind = induced_homology(f, degrees, HX, HY)
    for n in degrees:
        cols, gx, gy = ind[n]
        if not is_surjective_on(cols, gy):
            return {"degree": n, "reason": "not surjective", "matrix": cols,
                    "source": gx.describe(), "target": gy.describe()}
        if gx.free != gy.free or gx.torsion != gy.torsion:
            return {"degree": n, "reason": "groups differ", "source": gx.describe(), "target": gy.describe()}
    return None


def _reliable(X: SimplicialSet) -> int:
    return X.dim_bound - 1 if X.truncated else max(X.dim, 0) + 1


def _pi1_check(f: SimplicialMap, budget: int) -> Verdict:
    """Fundamental groups of corresponding components, assuming H_0 and H_1 isomorphisms."""
    X, Y = f.source, f.target
    if (X.truncated and X.dim_bound < 2) or (Y.truncated and Y.dim_bound < 2):
        return Verdict(UNKNOWN, {"reason": "2-skeleton not available"})
    for comp in X.components():
        x = comp[0]
        y = f.images[0][x].index
        PX = tietze_reduce(pi1_presentation(X, x), budget)
        PY = tietze_reduce(pi1_presentation(Y, y), budget)
        if PX.is_trivial() and PY.is_trivial():
            continue
        if PX.is_abelian() and PY.is_abelian():
            continue  # both equal their abelianization, handled by H_1
        if PX.is_free() and PY.is_free() and PX.rank == PY.rank:
            words = induced_pi1(f, PX, PY)
            if generates_free_group(words, PY.rank):
                continue
            return Verdict(NO, {"reason": "pi1 image is a proper subgroup of a free group",
                                "component": x, "images": [list(w) for w in words]})
        return Verdict(UNKNOWN, {"reason": "fundamental groups not decided", "component": x,
                                 "source": PX.to_dict(), "target": PY.to_dict()})
    return Verdict(YES)


def is_weak_equivalence(f: SimplicialMap, tietze_budget: int = 2000) -> Verdict:
    """Three-valued test: homology in all reliable degrees, then fundamental groups."""
    X, Y = f.source, f.target
    if X.is_empty or Y.is_empty:
        if X.is_empty and Y.is_empty:
            return Verdict(YES)
        return Verdict(NO, {"degree": 0, "reason": "empty versus nonempty"})
    top = min(_reliable(X), _reliable(Y))
    bad = _homology_check(f, top)
    if bad is not None:
        return Verdict(NO, bad)
    pi = _pi1_check(f, tietze_budget)
    if pi.status != YES:
        return pi
    return Verdict(YES, {"checked_through": top})


# -- factorizations -------------------------------------------------------------


@dataclass
class Factorization:
    """right o left == shift o original (shift is the identity unless recorded)."""

    kind: str  # "F" or "C"
    left: SimplicialMap
    middle: SimplicialSet
    right: SimplicialMap
    original: SimplicialMap
    strategy: str = "direct"
    shift: SimplicialMap | None = None  # unit B -> B' when the target was replaced
    ex_iterations: int = 0
    verified: dict = field(default_factory=dict)
    parts: dict = field(default_factory=dict, repr=False)

    @property
    def base(self) -> SimplicialSet:
        return self.right.target

    def shifted(self, g: SimplicialMap) -> SimplicialMap:
        """g composed with the recorded shift (g itself when there is none)."""
        return g if self.shift is None else self.shift.compose(g)

    def composition_holds(self) -> bool:
        return self.right.compose(self.left).agrees_with(self.shifted(self.original))

    def to_dict(self):
        return {
            "kind": self.kind,
            "strategy": self.strategy,
            "ex_iterations": self.ex_iterations,
            "middle_counts": list(self.middle.counts),
            "truncated": self.middle.truncated,
            "verified": self.verified,
        }


def _certified(status: HornReport, max_dim: int) -> bool:
    return status.certified_dim >= max_dim


def f_factorize(f: SimplicialMap, K: int = 1, strategy: str = "auto", max_dim: int = 2, cap: int = 3,
                budget: int | None = 500000, check: bool = True) -> Factorization:
    """Weak equivalence followed by a fibration.

    "direct" returns (id, X, f) when horn lifting for f is certified through
    max_dim; "mapping-path" replaces the target by Ex^K of it and uses the
    path space; "auto" tries them in that order.
    """
    X, Y = f.source, f.target
    if strategy in ("direct", "auto"):
        st = fibration_status(f, max_dim)
        if _certified(st, max_dim):
            fac = Factorization("F", SimplicialMap.identity(X), X, f, f, "direct")
            fac.verified = {"composition": True, "left_weak_equivalence": YES, "fibration_certified_dim": st.certified_dim}
            return fac
        if strategy == "direct":
            raise ValueError(f"direct strategy needs a fibration certified through {max_dim}; got {st.certified_dim}")
    if strategy not in ("mapping-path", "auto"):
        raise ValueError(f"unknown strategy {strategy!r}")
    Yp, unit = cx.ex(Y, K, cap, budget)
    P = cx.function_complex(cx.delta(1), Yp, cap - 1, budget)
    ev0, ev1 = cx.evaluation(P, 0), cx.evaluation(P, 1)
    uf = unit.compose(f)
    N = cx.pullback(uf, ev0)
    const = lambda s: cx.constant_path(P, uf(s))
    left = cx.pair_into(N.obj, SimplicialMap.identity(X), SimplicialMap.from_function(X, P, const))
    right = ev1.compose(N.pr2)
    fac = Factorization("F", left, N.obj, right, f, "mapping-path", unit, K)
    fac.parts = {"path_space": P, "ev0": ev0, "ev1": ev1, "pullback": N}
    if check:
        fac.verified = {
            "composition": fac.composition_holds(),
            "left_weak_equivalence": is_weak_equivalence(left).status,
        }
    return fac


def c_factorize(f: SimplicialMap, check: bool = True) -> Factorization:
    """Front inclusion into the mapping cylinder, then its retraction."""
    M = cx.mapping_cylinder(f)
    fac = Factorization("C", M.front, M.obj, M.retraction, f, "mapping-cylinder")
    fac.parts = {"base_inclusion": M.base}
    if check:
        fac.verified = {
            "composition": fac.composition_holds(),
            "left_cofibration": is_cofibration(M.front).status,
            "right_weak_equivalence": is_weak_equivalence(M.retraction).status,
        }
    return fac


# -- homotopy pullbacks and pushouts ------------------------------------------------


@dataclass
class Square:
    """   P --top--> Z
          |          |
        left       right
          v          v
          X --bottom-> B
    """

    top: SimplicialMap
    left: SimplicialMap
    right: SimplicialMap
    bottom: SimplicialMap

    def commutes(self) -> bool:
        return self.right.compose(self.top).agrees_with(self.bottom.compose(self.left))

    def transpose(self) -> "Square":
        return Square(self.left, self.top, self.bottom, self.right)


def homotopy_pullback_check(sq: Square, K: int = 1, **kw) -> Verdict:
    """Compare P with the pullback of an F-factorization of the bottom map."""
    if not sq.commutes():
        raise ValueError("square does not commute")
    try:
        fac = f_factorize(sq.bottom, K, check=False, **kw)
    except BudgetExceeded as e:
        return Verdict(UNKNOWN, {"reason": "budget", "detail": str(e)})
    g = fac.shifted(sq.right)
    pb = cx.pullback(fac.right, g)
    comp = cx.pair_into(pb.obj, fac.left.compose(sq.left), sq.top)
    v = is_weak_equivalence(comp)
    v.witness = dict(v.witness, strategy=fac.strategy, comparison_target=list(pb.obj.counts))
    return v


def homotopy_pushout_check(sq: Square) -> Verdict:
    """Square read as  P -> X (left), P -> Z (top), X -> B (bottom), Z -> B (right).

    The left leg is C-factorized through its mapping cylinder and the
    comparison out of the strict pushout is tested.
    """
    if not sq.commutes():
        raise ValueError("square does not commute")
    fac = c_factorize(sq.left, check=False)
    po = cx.pushout(fac.left, sq.top)
    comp = cx.pushout_induced(po, sq.bottom.compose(fac.right), sq.right)
    return is_weak_equivalence(comp)
