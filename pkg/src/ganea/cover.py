"""Cover oracles: sectional category, LS-category and TC from explicit covers.

Open covers are replaced by covers of Sd^j of the base by subcomplexes.
Pieces come from one of two families: unions of closed vertex stars (sound
upper bounds, searched by backtracking) or all subcomplexes (exhaustive, for
small bases only; the only source of cover-theoretic lower bounds).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import constructions as cx
from .cohomology import INF, schwarz_bound, zero_divisor_cup_length
from .homology import induced_homology, homology
from .linalg import in_lattice
from .model import is_weak_equivalence
from .secat import (SecatReport, SectionBudget, cat as tower_cat, diagonal, fmt_value, gsecat, image_obstruction,
                    tc as tower_tc, trivial_pi1_obstruction, weak_section_exists)
from .solver import HomotopyChain, SearchExhausted, find_homotopy, verify_homotopy
from .sset import BudgetExceeded, SimplicialMap, SimplicialSet

__all__ = [
    "Cover",
    "PieceCheck",
    "collapse_certificate",
    "replay_collapse",
    "local_section_check",
    "secat_cover",
    "cat_cover",
    "tc_cover",
    "consistency_harness",
    "closed_star",
    "all_subcomplexes",
]

STARS, ALL = "stars", "all"

# piece checks run many times per level, so they get a smaller search budget than a single section test
COVER_BUDGET = SectionBudget(subdivisions=1, homotopy_length=2, nodes=20000, ex_iterations=1)

@dataclass
class PieceCheck:
    verdict: str  # Yes | No | Unknown
    method: str  # collapse | homotopy | section | obstruction | budget
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"verdict": self.verdict, "method": self.method, **self.detail}


@dataclass
class Cover:
    """Subcomplexes of Sd^j of the base; pieces are sorted lists of refs."""

    pieces: list[list[tuple[int, int]]]
    family: str
    subdivisions: int
    checks: list[PieceCheck] = field(default_factory=list)
    base: SimplicialSet | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.pieces)

    def covers(self, base: SimplicialSet | None = None) -> bool:
        Y = base if base is not None else self.base
        have = set()
        for p in self.pieces:
            have.update(map(tuple, p))
        return all((n, i) in have for n in range(len(Y.counts)) for i in range(Y.count(n)))

    def to_dict(self):
        return {
            "family": self.family,
            "subdivisions": self.subdivisions,
            "pieces": [[list(r) for r in p] for p in self.pieces],
            "checks": [c.to_dict() for c in self.checks],
        }


# -- collapses ------------------------------------------------------------------


def _cofaces(Y: SimplicialSet, refs: set) -> dict:
    """ref -> {coface ref: number of times ref occurs among its faces}, inside refs."""
    co: dict = {r: {} for r in refs}
    for (n, i) in refs:
        if n == 0:
            continue
        for f in Y.faces[n][i]:
            if f.nondegenerate and f.ref in co:
                co[f.ref][(n, i)] = co[f.ref].get((n, i), 0) + 1
    return co


def collapse_core(Y: SimplicialSet, refs) -> tuple[list, set]:
    """Greedy elementary collapses of a subcomplex; returns (pairs, remaining refs).

    A pair (tau, sigma) is removed when sigma is maximal and tau is a
    nondegenerate face occurring exactly once in sigma and in nothing else.
    The remaining subcomplex is a deformation retract of the original.
    """
    alive = set(map(tuple, refs))
    co = _cofaces(Y, alive)
    pairs = []
    changed = True
    while changed:
        changed = False
        for tau in sorted(alive, key=lambda r: (-r[0], r[1])):
            if tau not in alive:
                continue
            cs = co[tau]
            if len(cs) != 1:
                continue
            (sigma, mult), = cs.items()
            if mult != 1 or co[sigma]:
                continue
            pairs.append((tau, sigma))
            for r in (sigma, tau):
                alive.discard(r)
                n, i = r
                if n:
                    for f in Y.faces[n][i]:
                        if f.ref in co:
                            co[f.ref].pop(r, None)
                del co[r]
            changed = True
    return pairs, alive


def collapse_certificate(Y: SimplicialSet, refs) -> list | None:
    """Elementary collapses reducing every component of the subcomplex to a vertex.

    Greedy; None when it gets stuck (the piece may still be contractible).
    """
    ncomp = _component_count(Y, set(map(tuple, refs)))
    pairs, alive = collapse_core(Y, refs)
    if any(n > 0 for n, _ in alive) or len(alive) != ncomp:
        return None
    return pairs


def replay_collapse(Y: SimplicialSet, refs, pairs, core=None) -> bool:
    """Re-check a collapse sequence from scratch.

    Without core the sequence must leave one vertex per component; with it,
    exactly the given refs must remain.
    """
    alive = set(map(tuple, refs))
    ncomp = _component_count(Y, alive)
    for tau, sigma in pairs:
        tau, sigma = tuple(tau), tuple(sigma)
        if tau not in alive or sigma not in alive:
            return False
        co = _cofaces(Y, alive)
        if co[sigma] or co[tau] != {sigma: 1}:
            return False
        alive -= {tau, sigma}
    if core is not None:
        return alive == set(map(tuple, core))
    return all(n == 0 for n, _ in alive) and len(alive) == ncomp


def _component_count(Y: SimplicialSet, refs: set) -> int:
    verts = sorted(i for n, i in refs if n == 0)
    parent = {v: v for v in verts}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for n, i in refs:
        if n == 1:
            a, b = find(Y.faces[1][i][0].index), find(Y.faces[1][i][1].index)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return len({find(v) for v in verts})


# -- piece checks ---------------------------------------------------------------


class _Problem:
    """What a piece must satisfy; subclasses for secat, cat and tc."""

    kind = "secat"

    def __init__(self, base: SimplicialSet, budget: SectionBudget):
        self.base = base  # the space being covered (before subdivision)
        self.budget = budget
        self._ex = None

    def ex_target(self, X: SimplicialSet):
        if self._ex is None:
            self._ex = cx.ex(X, self.budget.ex_iterations, self.budget.ex_cap, self.budget.nodes)
        return self._ex

    def contractible_suffices(self) -> bool:
        raise NotImplementedError

    def seeds(self) -> set:
        """Vertices of the base over which a section is evident; cover search grows from them."""
        return set()

    def check(self, piece: SimplicialSet, t: SimplicialMap) -> PieceCheck:
        raise NotImplementedError


class _SecatProblem(_Problem):
    def __init__(self, f: SimplicialMap, budget: SectionBudget):
        super().__init__(f.target, budget)
        self.f = f

    def contractible_suffices(self):
        # a contractible piece maps into one component; f must reach every component
        Y = self.f.target
        hit = {Y.components().index(c) for c in Y.components()
               if any(self.f.images[0][x].index in c for x in range(self.f.source.count(0)))}
        return len(hit) == len(Y.components())

    def seeds(self):
        return {s.index for s in self.f.images[0]}

    def check(self, piece, t):
        cert = weak_section_exists(self.f, self.budget, base_map=t, local=True)
        if cert.verdict == "Yes":
            return PieceCheck("Yes", "section", {"subdivisions": cert.subdivisions, "ex_iterations": cert.ex_iterations,
                                                 "homotopy": cert.chain.to_dict() if cert.chain else {"pattern": []}})
        if cert.verdict == "No":
            return PieceCheck("No", "obstruction", {"obstruction": cert.obstruction})
        return PieceCheck("Unknown", "budget", {"attempts": cert.attempts})


def _homotopy_attempts(phi: SimplicialMap, psi: SimplicialMap, problem: _Problem):
    """phi ~ psi in the target, then after the Ex unit; returns (chain, shifted) or a reason string."""
    b = problem.budget
    reasons = []
    X = phi.target
    for K in (0, b.ex_iterations) if b.ex_iterations and not X.truncated else (0,):
        try:
            if K == 0:
                a, c = phi, psi
            else:
                _, u = problem.ex_target(X)
                a, c = u.compose(phi), u.compose(psi)
            chain = find_homotopy(a, c, b.homotopy_length, b.nodes)
        except SearchExhausted:
            reasons.append({"ex_iterations": K, "result": "budget exhausted"})
            continue
        except BudgetExceeded as e:
            reasons.append({"ex_iterations": K, "result": f"construction over budget: {e.what}"})
            continue
        if chain is not None:
            return chain, K
        reasons.append({"ex_iterations": K, "result": "none within homotopy length"})
    return None, reasons


def _base_vertex(X: SimplicialSet) -> int:
    # for a connected space the choice of vertex does not matter
    return X.basepoint if X.basepoint is not None else 0


class _CatProblem(_Problem):
    kind = "cat"

    def __init__(self, X: SimplicialSet, budget: SectionBudget):
        super().__init__(X, budget)
        self.f = cx.vertex_inclusion(X, _base_vertex(X))

    def contractible_suffices(self):
        return self.base.is_connected()

    def seeds(self):
        return {_base_vertex(self.base)}

    def check(self, piece, t):
        ob = image_obstruction(self.f, t) or trivial_pi1_obstruction(self.f, t)
        if ob is not None:
            return PieceCheck("No", "obstruction", {"obstruction": ob})
        chains = []
        for comp in piece.components():
            sub, inc = _component(piece, comp)
            tc_ = t.compose(inc)
            const = SimplicialMap.constant(sub, t.target, tc_.images[0][0].index)
            chain, info = _homotopy_attempts(tc_, const, self)
            if chain is None:
                return PieceCheck("Unknown", "budget", {"component": comp[0], "attempts": info})
            chains.append({"component": comp[0], "ex_iterations": info, **chain.to_dict()})
        return PieceCheck("Yes", "homotopy", {"null_homotopies": chains})


class _TcProblem(_Problem):
    kind = "tc"

    def __init__(self, X: SimplicialSet, budget: SectionBudget, model: SimplicialMap | None = None):
        self.X = X
        self.model = model if model is not None else SimplicialMap.identity(X)
        M = self.model.source
        P = cx.product(M, M)
        super().__init__(P.obj, budget)
        self.pr1, self.pr2 = P.pr1, P.pr2
        self._homology = {}

    def _hx(self, top):
        if top not in self._homology:
            self._homology[top] = homology(self.X, range(top + 1))
        return self._homology[top]

    def contractible_suffices(self):
        return self.X.is_connected()

    def seeds(self):
        # the diagonal, where the two projections agree
        a, b = self.model.compose(self.pr1), self.model.compose(self.pr2)
        return {v for v in range(self.base.count(0)) if a.images[0][v].index == b.images[0][v].index}

    def check(self, piece, t):
        phi = self.model.compose(self.pr1.compose(t))
        psi = self.model.compose(self.pr2.compose(t))
        top = min(max(piece.dim, 0), max(self.X.dim, 0))
        degrees = range(top + 1)
        HX = self._hx(top)
        a, b = induced_homology(phi, degrees, HY=HX), induced_homology(psi, degrees, HY=HX)
        for n in degrees:
            cols1, _, gx = a[n]
            cols2 = b[n][0]
            for k, (c1, c2) in enumerate(zip(cols1, cols2)):
                diff = [x - y for x, y in zip(c1, c2)]
                if not in_lattice([], len(gx.moduli), gx.moduli, diff):
                    return PieceCheck("No", "obstruction", {"obstruction": {
                        "condition": "projections differ in homology", "degree": n, "column": k,
                        "first": [list(c) for c in cols1], "second": [list(c) for c in cols2],
                        "moduli": list(gx.moduli)}})
        chain, info = _homotopy_attempts(phi, psi, self)
        if chain is None:
            return PieceCheck("Unknown", "budget", {"attempts": info})
        return PieceCheck("Yes", "homotopy", {"ex_iterations": info, **chain.to_dict()})


def _component(Y: SimplicialSet, comp: list[int]):
    verts = set(comp)
    keep = [s for n in range(len(Y.counts)) for s in Y.nd(n) if Y.vertices(s)[0] in verts]
    return cx.subcomplex(Y, keep)


def local_section_check(f: SimplicialMap, piece_refs, budget: SectionBudget = COVER_BUDGET, *,
                        base: SimplicialSet | None = None, last_vertex: SimplicialMap | None = None,
                        problem: _Problem | None = None) -> PieceCheck:
    """Does f admit a homotopy local section over the piece?

    The piece is a subcomplex of `base` (Sd^j of the target of f, mapped to
    it by last_vertex; the target itself by default).  A piece whose
    components collapse needs no search when f reaches every component.
    """
    problem = problem or _SecatProblem(f, budget)
    Y = base if base is not None else problem.base
    lv = last_vertex if last_vertex is not None else SimplicialMap.identity(Y)
    refs = sorted(set(map(tuple, piece_refs)))
    if not refs:
        return PieceCheck("Yes", "empty")
    ncomp = _component_count(Y, set(refs))
    pairs, core = collapse_core(Y, refs)
    collapses = [[list(a), list(b)] for a, b in pairs]
    if all(n == 0 for n, _ in core) and len(core) == ncomp and problem.contractible_suffices():
        return PieceCheck("Yes", "collapse", {"collapses": collapses})
    if not pairs:
        P, inc = cx.subcomplex(Y, [Y.simplex(*r) for r in refs])
        return problem.check(P, lv.compose(inc))
    # the core is a deformation retract of the piece: a section, homotopy
    # or obstruction over it transfers to the whole piece
    Q, qinc = cx.subcomplex(Y, [Y.simplex(*r) for r in sorted(core)])
    res = problem.check(Q, lv.compose(qinc))
    return PieceCheck(res.verdict, res.method, {**res.detail, "collapses": collapses,
                                                 "core": [list(r) for r in sorted(core)]})


# -- enumeration ----------------------------------------------------------------


def closed_star(Y: SimplicialSet, v: int) -> frozenset:
    """Refs of the closure of all nondegenerate simplices having v as a vertex."""
    top = [s for n in range(len(Y.counts)) for s in Y.nd(n) if v in Y.vertices(s)]
    return frozenset(Y.closure(top))


def _maximal(Y: SimplicialSet) -> list[tuple[int, int]]:
    faces = set()
    for n in range(1, len(Y.counts)):
        for fs in Y.faces[n]:
            faces.update(f.ref for f in fs if f.nondegenerate)
    return [(n, i) for n in range(len(Y.counts)) for i in range(Y.count(n)) if (n, i) not in faces]


class _Checker:
    """Memoized piece checks on one subdivision level."""

    def __init__(self, problem: _Problem, Y: SimplicialSet, lv: SimplicialMap, limit: int, escalations: int = 64):
        self.problem, self.Y, self.lv = problem, Y, lv
        self.memo: dict = {}
        self.failed: list = []
        self.limit = limit
        self.calls = 0
        # Unknown verdicts get one retry with a longer homotopy search, this many times per level
        self.escalations = escalations

    def __call__(self, refs: frozenset) -> PieceCheck:
        hit = self.memo.get(refs)
        if hit is None:
            # a piece containing a failed piece fails too (No is inherited soundly; an
            # Unknown is inherited as Unknown, which only costs completeness)
            for T, v in self.failed:
                if T <= refs:
                    hit = PieceCheck(v.verdict, "inherited", {"from": [list(r) for r in sorted(T)]}
                                     if v.verdict == "No" else {})
                    if v.verdict == "No":
                        hit.detail["obstruction"] = v.detail.get("obstruction", v.detail)
                    self.memo[refs] = hit
                    return hit
            self.calls += 1
            if self.calls > self.limit:
                raise SearchExhausted("piece checks", self.calls, self.limit)
            hit = self._check(refs)
            if hit.verdict == "Unknown" and self.escalations > 0:
                self.escalations -= 1
                saved = self.problem.budget
                self.problem.budget = escalated(saved)
                try:
                    again = self._check(refs)
                finally:
                    self.problem.budget = saved
                if again.verdict != "Unknown":
                    again.detail["escalated_budget"] = escalated(saved).to_dict()
                    hit = again
            self.memo[refs] = hit
            if hit.verdict != "Yes":
                self.failed.append((refs, hit))
        return hit

    def _check(self, refs):
        return local_section_check(None, refs, self.problem.budget, base=self.Y, last_vertex=self.lv,
                                   problem=self.problem)


def escalated(b: SectionBudget) -> SectionBudget:
    """The retry budget for an Unknown piece: twice the homotopy length, ten times the nodes."""
    return SectionBudget(b.subdivisions, 2 * b.homotopy_length, 10 * b.nodes, b.ex_iterations, b.ex_cap)


def _star_cover(checker: _Checker, size: int, stars: dict, budget: int):
    """Backtracking over assignments of star centres to `size` pieces.

    Each step takes the first uncovered maximal simplex (a maximal simplex
    lies in star(v) only for its own vertices v) and tries each vertex of it
    in each existing piece, then in a fresh piece.  Complete for the family.
    """
    Y = checker.Y
    maxi = _maximal(Y)
    verts = {r: sorted(set(Y.vertices(Y.simplex(*r)))) for r in maxi}
    nodes = [0]

    def rec(groups: list[frozenset], centres: list[tuple]):
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchExhausted("star cover search", nodes[0], budget)
        covered = frozenset().union(*groups) if groups else frozenset()
        todo = next((r for r in maxi if r not in covered), None)
        if todo is None:
            return groups, centres
        for v in verts[todo]:
            for k in range(len(groups)):
                if v in centres[k]:
                    continue
                cand = groups[k] | stars[v]
                if checker(cand).verdict != "Yes":
                    continue
                found = rec(groups[:k] + [cand] + groups[k + 1:], centres[:k] + [centres[k] + (v,)] + centres[k + 1:])
                if found:
                    return found
            if len(groups) < size and checker(stars[v]).verdict == "Yes":
                found = rec(groups + [stars[v]], centres + [(v,)])
                if found:
                    return found
        return None

    return rec([], [])


def _greedy_star_cover(checker: _Checker, size: int, stars: dict, seeds: set):
    """Grow pieces one at a time by adding stars while the piece still checks Yes.

    The first piece starts on the seeds and thickens in layers of edge
    distance from them.  Later pieces start on the first uncovered maximal
    simplex and take any star reaching uncovered simplices, neighbours first.
    Sound (every piece is certified) but incomplete; the backtracking search
    runs when this fails.
    """
    Y = checker.Y
    maxi = _maximal(Y)
    nbrs: dict = {v: set() for v in range(Y.count(0))}
    for s in Y.nd(1):
        a, b = Y.vertices(s)
        nbrs[a].add(b)
        nbrs[b].add(a)
    dist = {v: 0 for v in seeds}
    layer = sorted(seeds)
    while layer:
        nxt = sorted({w for v in layer for w in nbrs[v]} - set(dist))
        for w in nxt:
            dist[w] = dist[layer[0]] + 1
        layer = nxt
    far = len(nbrs) + 1
    groups, centres = [], []
    covered: frozenset = frozenset()

    def grow(start):
        piece, cs, seen = stars[start], [start], {start}
        while True:
            near = {w for v in cs for w in nbrs[v]}
            if groups:
                cands = [w for w in range(len(nbrs)) if w not in seen and stars[w] - covered - piece]
                key = lambda w: (w in near, len(stars[w] & piece), -w)
            else:
                cands = sorted(near - seen)
                key = lambda w: (-dist.get(w, far), len(stars[w] & piece), -w)
            if not cands:
                return piece, tuple(cs)
            w = max(cands, key=key)
            seen.add(w)
            cand = piece | stars[w]
            if checker(cand).verdict == "Yes":
                piece = cand
                cs.append(w)

    first = next((v for v in sorted(seeds) if checker(stars[v]).verdict == "Yes"), None)
    while True:
        todo = next((r for r in maxi if r not in covered), None)
        if todo is None:
            return groups, centres
        if len(groups) == size:
            return None
        if first is not None and not groups:
            piece, cs = grow(first)
        else:
            start = next((v for v in sorted(set(Y.vertices(Y.simplex(*todo))))
                          if checker(stars[v]).verdict == "Yes"), None)
            if start is None:
                return None
            piece, cs = grow(start)
        groups.append(piece)
        centres.append(cs)
        covered = covered | piece


def all_subcomplexes(Y: SimplicialSet, limit: int = 5000) -> list[frozenset]:
    """Every subcomplex (closed set of nondegenerate simplices), or BudgetExceeded past limit."""
    order = [(n, i) for n in range(len(Y.counts)) for i in range(Y.count(n))]
    faces = {r: {f.ref for f in Y.faces[r[0]][r[1]] if f.nondegenerate} if r[0] else set() for r in order}
    out: list[frozenset] = []

    def rec(k: int, chosen: set):
        if len(out) > limit:
            raise BudgetExceeded("subcomplex enumeration", len(out), limit)
        if k == len(order):
            out.append(frozenset(chosen))
            return
        r = order[k]
        rec(k + 1, chosen)
        if faces[r] <= chosen:
            chosen.add(r)
            rec(k + 1, chosen)
            chosen.discard(r)

    rec(0, set())
    return out


def _exhaustive_level(checker: _Checker, size: int, subs: list[frozenset]):
    """Covers of the given size by subcomplexes, using downward closure of good pieces.

    Returns (cover or None, record).  record["impossible"] is set only when
    every piece outside the candidates is certified No, so that no cover of
    this size exists at this level.
    """
    Y = checker.Y
    every = frozenset((n, i) for n in range(len(Y.counts)) for i in range(Y.count(n)))
    verdicts: dict = {}
    for S in sorted(subs, key=lambda s: (-len(s), sorted(s))):
        if not S:
            verdicts[S] = "Yes"
            continue
        if any(verdicts.get(T) == "Yes" for T in subs if S < T and T in verdicts):
            verdicts[S] = "Yes"  # restriction of a local section
            continue
        verdicts[S] = checker(S).verdict
    good = [S for S in subs if verdicts[S] == "Yes"]
    maybe = [S for S in subs if verdicts[S] != "No"]
    maximal_good = [S for S in good if not any(S < T for T in good)]
    maximal_maybe = [S for S in maybe if not any(S < T for T in maybe)]
    examined = 0
    for combo in combinations(maximal_good, size):
        examined += 1
        if frozenset().union(*combo) == every:
            return list(combo), {"subcomplexes": len(subs), "examined": examined}
    possible = any(frozenset().union(*c) == every for c in combinations(maximal_maybe, size))
    rec = {"subcomplexes": len(subs), "candidates": len(maximal_maybe), "examined": examined,
           "unknown": sum(1 for v in verdicts.values() if v == "Unknown")}
    rec["impossible"] = not possible
    return None, rec


def _cover_search(problem: _Problem, n_max: int, j_max: int, family: str, lower: int | float,
                  invariant: str, budget: SectionBudget, checks_limit: int, nodes: int,
                  subcomplex_limit: int, size_limit: int) -> SecatReport:
    report = SecatReport(invariant, lower, INF, budgets=dict(budget.to_dict(), n_max=n_max, j_max=j_max,
                                                             family=family, piece_checks=checks_limit,
                                                             cover_nodes=nodes, subcomplex_limit=subcomplex_limit,
                                                             size_limit=size_limit))
    Y0 = problem.base
    if lower != INF and lower >= 1 and Y0.size > size_limit:
        # a one-piece cover is already excluded; on a large base the whole-space check would only repeat that
        whole = PieceCheck("No", "lower bound", {})
    else:
        whole = local_section_check(None, [(n, i) for n in range(len(Y0.counts)) for i in range(Y0.count(n))],
                                    budget, base=Y0, problem=problem)
    if whole.verdict == "Yes":
        report.upper = 0
        report.upper_certificate = {"kind": "cover", "cover": Cover([sorted(_all_refs(Y0))], family, 0, [whole]).to_dict()}
        report.lower = 0 if report.lower == INF else report.lower
        return _finish(report)
    if whole.verdict == "No" and whole.method != "lower bound":
        # the one-piece cover is the whole base at every subdivision level
        report.lower = max(report.lower, 1)
        report.lower_certificates.append({"kind": "whole space", **whole.to_dict()})
    if family == STARS:
        report.notes.append("unions-of-closed-stars family: upper bounds only")
    if report.lower == INF:
        return _finish(report)
    levels = []
    best = INF
    counts = list(Y0.counts)
    for j in range(j_max + 1):
        if j:
            counts = cx.subdivision_counts(counts)
        if sum(counts) > size_limit:
            levels.append({"subdivisions": j, "result": f"budget: base has {sum(counts)} simplices "
                                                        f"(size limit {size_limit})"})
            break
        try:
            sd = cx.iterated_subdivision(Y0, j)
        except BudgetExceeded as e:
            levels.append({"subdivisions": j, "result": f"subdivision over budget: {e.what}"})
            break
        Y = sd.obj
        checker = _Checker(problem, Y, sd.last_vertex, checks_limit)
        start = max(2, int(report.lower) + 1 if report.lower != INF else 2)
        subs = None
        for size in range(start, min(n_max + 1, int(best) if best != INF else n_max + 1) + 1):
            entry = {"subdivisions": j, "size": size, "family": family}
            try:
                if family == STARS:
                    stars = {v: closed_star(Y, v) for v in range(Y.count(0))}
                    seeds = {v for v in range(Y.count(0)) if sd.last_vertex.images[0][v].index in problem.seeds()}
                    found = (_greedy_star_cover(checker, size, stars, seeds)
                             or _star_cover(checker, size, stars, nodes))
                    pieces = found[0] if found else None
                    if found:
                        entry["centres"] = [list(c) for c in found[1]]
                    rec = {}
                else:
                    if subs is None:
                        subs = all_subcomplexes(Y, subcomplex_limit)
                    pieces, rec = _exhaustive_level(checker, size, subs)
            except (SearchExhausted, BudgetExceeded) as e:
                entry["result"] = f"budget exhausted: {getattr(e, 'what', e)}"
                levels.append(entry)
                break
            entry.update(rec)
            entry["piece_checks"] = checker.calls
            if pieces is not None:
                cover = Cover([sorted(p) for p in pieces], family, j, [checker(frozenset(p)) for p in pieces], Y)
                entry["result"] = "cover found"
                levels.append(entry)
                if size - 1 < best:
                    best = size - 1
                    report.upper = best
                    report.upper_certificate = {"kind": "cover", "cover": cover.to_dict()}
                break
            if family == ALL and rec.get("impossible"):
                entry["result"] = "no cover of this size at this level"
            else:
                entry["result"] = "none found"
            levels.append(entry)
    report.stages = levels
    return _finish(report)


def _all_refs(Y: SimplicialSet):
    return [(n, i) for n in range(len(Y.counts)) for i in range(Y.count(n))]


def _finish(report: SecatReport) -> SecatReport:
    if report.lower > report.upper:
        report.notes.append("lower bound exceeds upper bound")
    return report


def secat_cover(f: SimplicialMap, n_max: int = 3, j_max: int = 2, budget: SectionBudget = COVER_BUDGET,
                family: str = STARS, checks_limit: int = 2000, nodes: int = 20000,
                subcomplex_limit: int = 5000, size_limit: int = 4000) -> SecatReport:
    """Least n such that Sd^j of the base has a cover by n+1 pieces with homotopy local sections."""
    sch = schwarz_bound(f)
    problem = _SecatProblem(f, budget)
    rep = _cover_search(problem, n_max, j_max, family, sch.value, "secat", budget, checks_limit, nodes,
                        subcomplex_limit, size_limit)
    rep.lower_certificates.insert(0, {"kind": "cohomology", **sch.to_dict()})
    return rep


def cat_cover(X: SimplicialSet, n_max: int = 3, j_max: int = 2, budget: SectionBudget = COVER_BUDGET,
              family: str = STARS, checks_limit: int = 2000, nodes: int = 20000,
              subcomplex_limit: int = 5000, size_limit: int = 4000) -> SecatReport:
    """Covers by pieces whose inclusions are null-homotopic."""
    if X.is_empty or not X.is_connected():
        raise ValueError("cat needs a nonempty connected simplicial set")
    sch = schwarz_bound(cx.vertex_inclusion(X, _base_vertex(X)))
    rep = _cover_search(_CatProblem(X, budget), n_max, j_max, family, sch.value, "cat", budget, checks_limit,
                        nodes, subcomplex_limit, size_limit)
    rep.lower_certificates.insert(0, {"kind": "cohomology", **sch.to_dict()})
    return rep


def tc_cover(X: SimplicialSet, n_max: int = 3, j_max: int = 2, budget: SectionBudget = COVER_BUDGET,
             family: str = STARS, model: SimplicialMap | None = None, checks_limit: int = 2000, nodes: int = 20000,
             subcomplex_limit: int = 5000, size_limit: int = 4000) -> SecatReport:
    """Covers of M x M (M = X or a weakly equivalent model) on which the projections are homotopic."""
    if X.is_empty:
        raise ValueError("tc needs a nonempty simplicial set")
    if model is not None:
        v = is_weak_equivalence(model)
        if v.status != "Yes" or model.target is not X:
            raise ValueError(f"model must be a weak equivalence onto X (got {v.status})")
    zd = zero_divisor_cup_length(X)
    rep = _cover_search(_TcProblem(X, budget, model), n_max, j_max, family, zd.value, "tc", budget, checks_limit,
                        nodes, subcomplex_limit, size_limit)
    rep.lower_certificates.insert(0, {"kind": "cohomology", **zd.to_dict()})
    if model is not None:
        rep.notes.append(f"covers built on the product of the model {model.source.name or 'M'} with itself")
    return rep


# -- consistency ----------------------------------------------------------------


def consistency_harness(tower: SecatReport, oracle: SecatReport) -> dict:
    """Tower bounds must bracket the oracle's bounds, with equality when both are exact."""
    problems = []
    lo = max(tower.lower, oracle.lower)
    hi = min(tower.upper, oracle.upper)
    if lo > hi:
        problems.append(f"bounds disjoint: tower [{fmt_value(tower.lower)}, {fmt_value(tower.upper)}], "
                        f"oracle [{fmt_value(oracle.lower)}, {fmt_value(oracle.upper)}]")
    if tower.exact and oracle.exact and tower.lower != oracle.lower:
        problems.append("both exact but different")
    if oracle.exact and not tower.brackets(oracle.lower):
        problems.append("oracle value outside tower bounds")
    return {
        "invariant": tower.invariant,
        "tower": [fmt_value(tower.lower), fmt_value(tower.upper)],
        "oracle": [fmt_value(oracle.lower), fmt_value(oracle.upper)],
        "combined": [fmt_value(lo), fmt_value(hi)],
        "pass": not problems,
        "discrepancies": problems,
    }
