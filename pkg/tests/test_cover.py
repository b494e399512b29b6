import pytest

from ganea import constructions as cx
from ganea import corpus as C
from ganea.cohomology import INF
from ganea.cover import (ALL, COVER_BUDGET, STARS, Cover, all_subcomplexes, cat_cover, closed_star,
                         collapse_certificate, collapse_core, consistency_harness, local_section_check,
                         replay_collapse, secat_cover, tc_cover)
from ganea.secat import SecatReport, cat
from ganea.sset import SimplicialMap


def _refs(Y):
    return [(n, i) for n in range(len(Y.counts)) for i in range(Y.count(n))]


def _check_cover(rep):
    cert = rep.upper_certificate
    assert cert and cert["kind"] == "cover"
    cov = cert["cover"]
    assert all(c["verdict"] == "Yes" for c in cov["checks"])
    return cov


# -- piece checks ------------------------------------------------------------------

def test_identity_piece_has_section():
    Y = C.square_circle()
    star = closed_star(Y, 0)
    assert local_section_check(SimplicialMap.identity(Y), star).verdict == "Yes"


def test_star_piece_under_global_section():
    Y = C.torus()
    # a product projection has a global section
    P = cx.product(Y, C.simplex(1))
    check = local_section_check(P.pr1, closed_star(Y, 0))
    assert check.verdict == "Yes"


def test_whole_circle_basepoint_piece_fails():
    Y = C.minimal_circle().pointed()
    check = local_section_check(cx.vertex_inclusion(Y), _refs(Y))
    assert check.verdict == "No"
    assert check.detail["obstruction"]["degree"] == 1


def test_collapse_certificate_on_arc():
    Y = C.square_circle()
    arc = Y.closure([Y.simplex(1, 0), Y.simplex(1, 1)])
    pairs = collapse_certificate(Y, arc)
    assert pairs is not None and replay_collapse(Y, arc, pairs)
    assert collapse_certificate(Y, _refs(Y)) is None


def test_collapse_core_of_circle_with_whisker():
    Y = C.from_complex([(0, 1), (1, 2), (0, 2), (2, 3)])
    pairs, core = collapse_core(Y, _refs(Y))
    assert len(pairs) == 1
    assert replay_collapse(Y, _refs(Y), pairs, core)
    assert not replay_collapse(Y, _refs(Y), pairs)


def test_replay_rejects_bad_pair():
    Y = C.simplex(2)
    assert not replay_collapse(Y, _refs(Y), [((0, 0), (1, 0))])


# -- enumeration helpers ------------------------------------------------------------

def test_subcomplexes_of_interval():
    # empty, {0}, {1}, {0,1}, whole
    assert len(all_subcomplexes(C.simplex(1))) == 5


def test_subdivision_size_prediction():
    for X in (C.torus(), C.projective_plane(), C.square_circle()):
        predicted = cx.subdivision_size(list(X.counts))
        assert predicted == cx.subdivide(X).obj.size


def test_cover_covers():
    Y = C.square_circle()
    cov = Cover([sorted(closed_star(Y, 0)), sorted(closed_star(Y, 2))], STARS, 0, base=Y)
    assert cov.covers()
    assert not Cover([sorted(closed_star(Y, 0))], STARS, 0, base=Y).covers()


# -- oracle values ---------------------------------------------------------------------

def test_secat_cover_of_identity():
    rep = secat_cover(SimplicialMap.identity(C.torus()))
    assert (rep.lower, rep.upper) == (0, 0)


def test_secat_cover_basepoint_into_circle():
    rep = secat_cover(cx.vertex_inclusion(C.minimal_circle().pointed()))
    assert (rep.lower, rep.upper) == (1, 1)
    cov = _check_cover(rep)
    assert len(cov["pieces"]) == 2


def test_secat_cover_wedge_of_triangles():
    rep = secat_cover(cx.vertex_inclusion(C.boundary_wedge()))
    assert (rep.lower, rep.upper) == (1, 1)


def test_cat_cover_simplex():
    rep = cat_cover(C.simplex(2))
    assert (rep.lower, rep.upper) == (0, 0)
    assert rep.upper_certificate["cover"]["checks"][0]["method"] == "collapse"


def test_tc_cover_interval():
    rep = tc_cover(C.simplex(1))
    assert (rep.lower, rep.upper) == (0, 0)


def test_cat_cover_triangle_boundary_exhaustive():
    rep = cat_cover(C.boundary(2), family=ALL, j_max=1)
    assert (rep.lower, rep.upper) == (1, 1)
    assert rep.stages[0]["subdivisions"] == 0
    assert any(c["kind"] == "whole space" for c in rep.lower_certificates)


def test_all_family_reports_impossible_sizes():
    # Sd of the point inclusion into a discrete pair: every piece meeting
    # the second point fails, so no cover exists at any size
    X = C.sphere0().pointed()
    rep = secat_cover(cx.vertex_inclusion(X), family=ALL, j_max=0, n_max=2)
    assert rep.upper == INF
    assert rep.lower == INF or all(e["result"] != "cover found" for e in rep.stages)


def test_tc_cover_circle_with_square_model():
    model = C.square_to_minimal_circle()
    S1 = model.target
    assert model.validate() == []
    rep = tc_cover(S1, model=model)
    assert (rep.lower, rep.upper) == (1, 1)
    _check_cover(rep)


def test_tc_cover_rejects_bad_model():
    S1 = C.minimal_circle()
    with pytest.raises(ValueError):
        tc_cover(S1, model=cx.vertex_inclusion(S1.pointed()))


def test_upper_bound_monotone_in_subdivisions():
    f = cx.vertex_inclusion(C.square_circle())
    uppers = [secat_cover(f, j_max=j).upper for j in range(3)]
    assert all(a >= b for a, b in zip(uppers, uppers[1:]))


# -- consistency ----------------------------------------------------------------------

def test_harness_identity():
    f = SimplicialMap.identity(C.point())
    from ganea.secat import gsecat
    h = consistency_harness(gsecat(f), secat_cover(f))
    assert h["pass"] and h["combined"] == [0, 0]


def test_harness_circle_cat():
    X = C.minimal_circle().pointed()
    h = consistency_harness(cat(X, max_stage=1), cat_cover(X))
    assert h["pass"] and h["tower"] == [1, 1] and h["oracle"] == [1, 1]


def test_harness_flags_disjoint_brackets():
    a = SecatReport("cat", 2, 2)
    b = SecatReport("cat", 0, 1)
    h = consistency_harness(a, b)
    assert not h["pass"] and h["discrepancies"]
