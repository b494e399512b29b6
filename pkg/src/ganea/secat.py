"""Weak sections, Ganea sectional category, LS-category and topological complexity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import constructions as cx
from .cohomology import INF, BoundResult, schwarz_bound, zero_divisor_cup_length
from .fundamental_group import free_reduce, generates_free_group, induced_pi1, pi1_presentation, tietze_reduce
from .homology import homology, induced_homology, is_surjective_on
from .linalg import in_lattice, spans_lattice
from .model import f_factorize
from .solver import HomotopyChain, SearchExhausted, find_homotopy_lift, verify_homotopy
from .sset import BudgetExceeded, SimplicialMap, SimplicialSet
from .tower import GaneaTower

__all__ = [
    "SectionBudget",
    "SectionCertificate",
    "SecatReport",
    "weak_section_exists",
    "homology_obstruction",
    "image_obstruction",
    "verify_certificate",
    "schwarz_lower_bound",
    "gsecat",
    "cat",
    "tc",
    "diagonal",
    "fmt_value",
]


def fmt_value(v) -> int | str:
    return "inf" if v == INF else int(v)


@dataclass(frozen=True)
class SectionBudget:
    subdivisions: int = 2  # j_max for Sd^j of the base
    homotopy_length: int = 2  # longest zigzag of elementary homotopies
    nodes: int = 200000  # search nodes per attempt
    ex_iterations: int = 1  # K for the Ex-shifted attempts (0 disables them)
    ex_cap: int = 3

    def to_dict(self):
        return {"subdivisions": self.subdivisions, "homotopy_length": self.homotopy_length,
                "nodes": self.nodes, "ex_iterations": self.ex_iterations, "ex_cap": self.ex_cap}


@dataclass
class SectionCertificate:
    verdict: str  # "Yes" | "No" | "Unknown"
    # Yes: s: Sd^j(D) -> C with g' o s homotopic to w o lv^j through `chain`
    section: SimplicialMap | None = field(default=None, repr=False)
    chain: HomotopyChain | None = field(default=None, repr=False)
    subdivisions: int = 0
    ex_iterations: int = 0
    # No: the named necessary condition and its matrix
    obstruction: dict = field(default_factory=dict)
    # Unknown: what was tried
    attempts: list = field(default_factory=list)
    _target: SimplicialMap | None = field(default=None, repr=False)  # w o lv^j
    _map: SimplicialMap | None = field(default=None, repr=False)  # g' (g possibly shifted)

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.verdict == "Yes":
            out["subdivisions"] = self.subdivisions
            out["ex_iterations"] = self.ex_iterations
            out["section"] = [[[list(s.op), s.level, s.index] for s in lv] for lv in self.section.images]
            out["homotopy"] = self.chain.to_dict() if self.chain else {"pattern": []}
        elif self.verdict == "No":
            out["obstruction"] = self.obstruction
        if self.attempts:
            out["attempts"] = self.attempts
        return out


def _reliable(X: SimplicialSet) -> int:
    return X.dim_bound - 1 if X.truncated else max(X.dim, 0) + 1


def homology_obstruction(g: SimplicialMap) -> dict | None:
    """First reliable degree where g_* is not onto, with the induced matrix."""
    C, B = g.source, g.target
    top = min(_reliable(C), _reliable(B), max(B.dim, 0))
    ind = induced_homology(g, range(top + 1))
    for n in range(top + 1):
        cols, gc, gb = ind[n]
        if not is_surjective_on(cols, gb):
            return {"condition": "homology surjectivity", "degree": n, "matrix": [list(c) for c in cols],
                    "moduli": list(gb.moduli), "source": gc.describe(), "target": gb.describe()}
    return None


def pi1_obstruction(g: SimplicialMap, tietze_budget: int = 2000) -> dict | None:
    """pi_1 surjectivity, decided only when the base group reduces to a free group."""
    C, B = g.source, g.target
    if not (C.is_connected() and B.is_connected()):
        return None
    if (C.truncated and C.dim_bound < 2) or (B.truncated and B.dim_bound < 2):
        return None
    x = C.basepoint if C.basepoint is not None else 0
    PB = tietze_reduce(pi1_presentation(B, g.images[0][x].index), tietze_budget)
    if not PB.is_free() or PB.rank == 0:
        return None
    PC = tietze_reduce(pi1_presentation(C, x), tietze_budget)
    words = induced_pi1(g, PC, PB)
    if generates_free_group(words, PB.rank):
        return None
    return {"condition": "pi1 surjectivity", "rank": PB.rank, "images": [list(w) for w in words]}


def image_obstruction(g: SimplicialMap, t: SimplicialMap) -> dict | None:
    """First reliable degree where t_* does not land in the image of g_* (maps to a common base)."""
    D, C, B = t.source, g.source, g.target
    top = min(_reliable(D), _reliable(C), _reliable(B), max(B.dim, 0))
    degrees = range(top + 1)
    HB = homology(B, degrees)
    it = induced_homology(t, degrees, HY=HB)
    ig = induced_homology(g, degrees, HY=HB)
    for n in degrees:
        cols_t, gd, gb = it[n]
        cols_g = ig[n][0]
        for k, col in enumerate(cols_t):
            if not in_lattice(cols_g, len(gb.moduli), gb.moduli, col):
                return {"condition": "homology image containment", "degree": n, "column": k,
                        "matrix": [list(c) for c in cols_t], "image": [list(c) for c in cols_g],
                        "moduli": list(gb.moduli), "target": gb.describe()}
    return None


def trivial_pi1_obstruction(g: SimplicialMap, t: SimplicialMap, tietze_budget: int = 2000) -> dict | None:
    """When g kills pi_1 and the base group is free, t must kill pi_1 on every component too."""
    D, C, B = t.source, g.source, g.target
    if not B.is_connected() or (B.truncated and B.dim_bound < 2) or (D.truncated and D.dim_bound < 2):
        return None
    PB = tietze_reduce(pi1_presentation(B, t.images[0][0].index), tietze_budget)
    if not PB.is_free() or PB.rank == 0:
        return None
    for comp in C.components():
        PC = tietze_reduce(pi1_presentation(C, comp[0]), tietze_budget)
        if any(induced_pi1(g, PC, PB)):
            return None
    for comp in D.components():
        PD = tietze_reduce(pi1_presentation(D, comp[0]), tietze_budget)
        words = [w for w in induced_pi1(t, PD, PB) if w]
        if words:
            return {"condition": "pi1 image nontrivial", "rank": PB.rank, "component": comp[0],
                    "images": [list(w) for w in words]}
    return None


def _no_certificate(g: SimplicialMap, route: str, K: int) -> dict | None:
    """Necessary conditions, on g itself or on the fibration leg of its F-factorization.

    The two routes agree: the left leg of an F-factorization is a weak
    equivalence, so surjectivity transfers in both directions.
    """
    if route == "fibration":
        fac = f_factorize(g, K, check=False)
        ob = homology_obstruction(fac.right)
        if ob is not None:
            ob["route"] = f"fibration leg ({fac.strategy})"
        return ob
    ob = homology_obstruction(g)
    if ob is None:
        ob = pi1_obstruction(g)
    if ob is not None:
        ob["route"] = "map"
    return ob


def weak_section_exists(g: SimplicialMap, budget: SectionBudget = SectionBudget(), base_map: SimplicialMap | None = None,
                        route: str = "map", local: bool = False) -> SectionCertificate:
    """Does g: C -> B admit a weak section?

    base_map w: D -> B is a weak equivalence from the space of interest
    (identity by default).  A Yes certificate is a map s: Sd^j D -> C with
    g o s homotopic to w o lv^j, either in B or after composing with the Ex
    unit of B; a No certificate is a failed necessary condition.

    With local set, w is any map (a piece of a cover, say) and the necessary
    conditions become image containment instead of surjectivity.
    """
    C, B = g.source, g.target
    w = base_map if base_map is not None else SimplicialMap.identity(B)
    D = w.source
    if D.is_empty:
        return SectionCertificate("Yes", SimplicialMap(D, C, []), HomotopyChain(()), _target=w, _map=g)
    if C.is_empty:
        return SectionCertificate("No", obstruction={"condition": "homology surjectivity", "degree": 0, "matrix": [],
                                                     "moduli": [0] * len(D.components()), "source": "0",
                                                     "target": "nonempty", "route": "map"})
    if local:
        ob = image_obstruction(g, w) or trivial_pi1_obstruction(g, w)
        if ob is not None:
            ob["route"] = "map"
    else:
        try:
            ob = _no_certificate(g, route, budget.ex_iterations or 1)
        except BudgetExceeded as e:
            ob, skipped = None, {"necessary_conditions": f"over budget: {e.what}"}
        else:
            skipped = None
    if ob is not None:
        return SectionCertificate("No", obstruction=ob)
    attempts = [skipped] if not local and skipped else []
    exes: dict = {}
    for j in range(budget.subdivisions + 1):
        try:
            sd = cx.iterated_subdivision(D, j)
        except BudgetExceeded as e:
            attempts.append({"subdivisions": j, "result": f"construction over budget: {e.what}"})
            break
        # a truncated base is already an Ex-shifted one; do not shift it again
        for K in range(0, (0 if B.truncated else budget.ex_iterations) + 1):
            tag = {"subdivisions": j, "ex_iterations": K}
            try:
                if K == 0:
                    gK, target = g, w.compose(sd.last_vertex)
                else:
                    if K not in exes:
                        exes[K] = cx.ex(B, K, budget.ex_cap, budget.nodes)
                    _, u = exes[K]
                    gK, target = u.compose(g), u.compose(w.compose(sd.last_vertex))
                found = find_homotopy_lift(gK, target, budget.homotopy_length, budget.nodes)
            except SearchExhausted as e:
                attempts.append(dict(tag, result="budget exhausted"))
                continue
            except BudgetExceeded as e:
                attempts.append(dict(tag, result=f"construction over budget: {e.what}"))
                continue
            if found is not None:
                s, chain = found
                return SectionCertificate("Yes", s, chain, j, K, attempts=attempts, _target=target, _map=gK)
            attempts.append(dict(tag, result="none within homotopy length"))
    return SectionCertificate("Unknown", attempts=attempts)


def verify_certificate(cert: SectionCertificate) -> bool:
    """Replay a certificate: the section is a simplicial map and the homotopy chain checks out."""
    if cert.verdict == "Yes":
        s = cert.section
        if s.validate():
            return False
        return verify_homotopy(cert.chain, cert._map.compose(s), cert._target)
    if cert.verdict == "No":
        ob = cert.obstruction
        if ob.get("condition") == "homology surjectivity":
            dim = len(ob["moduli"])
            return not spans_lattice(ob["matrix"], dim, ob["moduli"])
        if ob.get("condition") == "homology image containment":
            col = ob["matrix"][ob["column"]]
            return not in_lattice(ob["image"], len(ob["moduli"]), ob["moduli"], col)
        if ob.get("condition") == "pi1 image nontrivial":
            return any(free_reduce(tuple(w)) for w in ob["images"])
        if ob.get("condition") == "pi1 surjectivity":
            return not generates_free_group([tuple(w) for w in ob["images"]], ob["rank"])
        return False
    return True


def schwarz_lower_bound(f: SimplicialMap) -> BoundResult:
    return schwarz_bound(f)


@dataclass
class SecatReport:
    invariant: str
    lower: int | float
    upper: int | float
    lower_certificates: list = field(default_factory=list)
    upper_certificate: dict | None = None
    stages: list = field(default_factory=list)
    budgets: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def brackets(self, value) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "lower": fmt_value(self.lower),
            "upper": fmt_value(self.upper),
            "exact": self.exact,
            "lower_certificates": self.lower_certificates,
            "upper_certificate": self.upper_certificate,
            "stages": self.stages,
            "budgets": self.budgets,
            "notes": self.notes,
        }

    def describe(self) -> str:
        if self.exact:
            return f"{self.invariant}: exact {fmt_value(self.lower)}"
        return f"{self.invariant}: between {fmt_value(self.lower)} and {fmt_value(self.upper)}"


def gsecat(f: SimplicialMap, max_stage: int = 1, K: int = 1, budget: SectionBudget = SectionBudget(),
           strategy: str = "auto", invariant: str = "secat", lower_bound: BoundResult | None = None) -> SecatReport:
    """Bounds on the least n such that the n-th Ganea map of f admits a weak section.

    lower_bound replaces the cohomological bound computed from f itself.
    """
    sch = lower_bound if lower_bound is not None else schwarz_lower_bound(f)
    report = SecatReport(invariant, sch.value, INF, budgets=dict(budget.to_dict(), max_stage=max_stage, K=K))
    report.lower_certificates.append({"kind": "cohomology", **sch.to_dict()})
    if sch.value == INF:
        report.notes.append("the unit class lies in the kernel: no stage can admit a section")
        return report
    tower = GaneaTower(f, K, strategy, max_dim=2)
    all_no = True
    for n in range(max_stage + 1):
        if 0 < n < sch.value:
            # no section can exist below the cohomological bound; skip the search
            report.stages.append({"n": n, "verdict": "No", "implied_by": "cohomology"})
            continue
        try:
            st = tower.stage(n)
        except BudgetExceeded as e:
            report.stages.append({"n": n, "verdict": "Unknown", "reason": f"tower: {e}"})
            break
        w = tower.factorization.shift if n > 0 else None
        cert = weak_section_exists(st.h, budget, base_map=w)
        entry = {"n": n, "counts": list(st.obj.counts), "truncated": st.obj.truncated, **cert.to_dict()}
        report.stages.append(entry)
        if cert.verdict == "No" and all_no:
            if n + 1 > report.lower:
                report.lower = n + 1
                report.lower_certificates.append({"kind": "stage", "n": n, "obstruction": cert.obstruction})
        else:
            all_no = False
        if cert.verdict == "Yes":
            report.upper = n
            report.upper_certificate = {"kind": "stage section", "n": n}
            break
    if report.lower > report.upper:
        report.notes.append("lower bound exceeds upper bound")
    return report


def diagonal(X: SimplicialSet) -> SimplicialMap:
    P = cx.product(X, X)
    idX = SimplicialMap.identity(X)
    d = cx.pair_into(P.obj, idX, idX)
    d.name = "diagonal"
    return d


def cat(X: SimplicialSet, **kw) -> SecatReport:
    if X.basepoint is None:
        raise ValueError("cat needs a pointed simplicial set")
    if not X.is_connected():
        raise ValueError("cat needs a connected simplicial set")
    rep = gsecat(cx.vertex_inclusion(X), invariant="cat", **kw)
    rep.notes.append("delegated to the basepoint inclusion")
    return rep


def tc(X: SimplicialSet, **kw) -> SecatReport:
    if X.is_empty:
        raise ValueError("tc needs a nonempty simplicial set")
    # Kunneth over a field: the kernel of the cup product on H*(X) (x) H*(X)
    # is the diagonal's kernel, without forming the cohomology of X x X
    kw.setdefault("lower_bound", zero_divisor_cup_length(X))
    rep = gsecat(diagonal(X), invariant="tc", **kw)
    rep.notes.append("delegated to the diagonal")
    return rep
