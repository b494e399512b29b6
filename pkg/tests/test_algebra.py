import pytest

from ganea import constructions as cx
from ganea import corpus as C
from ganea.cohomology import INF, CohomologyRing, cup_length, schwarz_bound, zero_divisor_cup_length
from ganea.fundamental_group import abelian_invariants, free_reduce, pi1_presentation, tietze_reduce
from ganea.homology import homology, induced_homology, normalized_chains, reduced_betti
from ganea.kan import fibration_status, horn_filler_report
from ganea.linalg import in_lattice, smith, spans_lattice
from ganea.model import is_weak_equivalence
from ganea.sset import SimplicialMap


# -- linear algebra -------------------------------------------------------------

def test_smith_diagonal_divisibility():
    sf = smith([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert sf.diag == [2, 6, 12]


def test_lattice_membership():
    # columns (2, 0) and (0, 3): (4, 3) is in, (1, 0) is not
    cols = [[2, 0], [0, 3]]
    assert in_lattice(cols, 2, [0, 0], [4, 3])
    assert not in_lattice(cols, 2, [0, 0], [1, 0])
    assert in_lattice([], 1, [2], [4])
    assert not spans_lattice(cols, 2)
    assert spans_lattice([[1, 0], [1, 1]], 2)


# -- chains and homology ----------------------------------------------------------

def test_chains_of_point():
    Cc = normalized_chains(C.point())
    assert Cc.ranks[0] == 1 and Cc.check()


def test_chains_of_minimal_circle():
    Cc = normalized_chains(C.minimal_circle())
    assert Cc.boundary(1) == [[0]]


def test_boundary_of_triangle_squares_to_zero():
    assert normalized_chains(C.boundary(2)).check()


def test_homology_minimal_circle():
    assert homology(C.minimal_circle()).table() == [(1, ()), (1, ())]


@pytest.mark.parametrize("n", range(5))
def test_simplices_are_acyclic(n):
    assert all(v == (0, ()) for v in reduced_betti(C.simplex(n)).values())


def test_projective_plane_torsion():
    H = homology(C.projective_plane())
    assert H.table() == [(1, ()), (0, (2,)), (0, ())]


def test_torus_homology():
    assert homology(C.torus()).table() == [(1, ()), (2, ()), (1, ())]


def test_induced_map_on_circle_generator():
    S = C.square_circle()
    sd = cx.subdivide(S)
    cols, hx, hy = induced_homology(sd.last_vertex)[1]
    assert cols in ([[1]], [[-1]])


def test_homology_marks_truncated_degrees():
    E, _ = cx.ex(C.minimal_circle(), 1)
    H = homology(E)
    assert H.reliable == E.dim_bound - 1


# -- cohomology -------------------------------------------------------------------

def test_cup_lengths_of_point():
    assert cup_length(C.point()).value == 0
    assert zero_divisor_cup_length(C.point()).value == 0


def test_cup_length_torus():
    assert cup_length(C.torus()).value == 2


def test_cup_length_projective_plane_mod_two():
    assert cup_length(C.projective_plane(), primes=(2,)).value == 2
    assert cup_length(C.projective_plane(), primes=(3,)).value == 0


def test_zero_divisors_circle():
    assert zero_divisor_cup_length(C.minimal_circle()).value == 1


def test_zero_divisors_torus_and_wedge():
    assert zero_divisor_cup_length(C.torus()).value == 2
    assert zero_divisor_cup_length(C.wedge_of_circles(2)).value == 2


def test_schwarz_bound_identity_and_basepoint():
    S1 = C.minimal_circle().pointed()
    assert schwarz_bound(SimplicialMap.identity(S1)).value == 0
    assert schwarz_bound(cx.vertex_inclusion(S1)).value == 1


def test_schwarz_bound_empty_source_is_infinite():
    S0 = C.sphere0()
    f = cx.terminal_like(C.empty(), S0)
    assert schwarz_bound(f).value == INF


def test_schwarz_bound_of_diagonal_matches_zero_divisors():
    from ganea.secat import diagonal
    for X in (C.minimal_circle(), C.torus(), C.wedge_of_circles(2)):
        assert schwarz_bound(diagonal(X)).value == zero_divisor_cup_length(X).value


def test_cohomology_betti_numbers():
    assert CohomologyRing(C.projective_plane(), 2).betti() == [1, 1, 1]
    assert CohomologyRing(C.projective_plane(), 3).betti() == [1, 0, 0]


# -- fundamental group --------------------------------------------------------------

def test_pi1_of_triangle_is_trivial():
    assert tietze_reduce(pi1_presentation(C.simplex(2), 0)).is_trivial()


def test_pi1_of_minimal_circle():
    P = pi1_presentation(C.minimal_circle(), 0)
    assert len(P.generators) == 1 and P.relators == []


def test_pi1_of_wedge_abelianizes_to_h1():
    assert abelian_invariants(pi1_presentation(C.wedge_of_circles(2), 0)) == (2, ())


def test_pi1_of_torus_is_abelian():
    P = tietze_reduce(pi1_presentation(C.torus(), 0))
    assert P.is_abelian()
    assert abelian_invariants(P) == (2, ())


def test_free_reduction():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)


# -- weak equivalences and horns ------------------------------------------------------

def test_identity_is_weak_equivalence():
    assert is_weak_equivalence(SimplicialMap.identity(C.torus())).status == "Yes"


def test_basepoint_into_circle_is_not():
    v = is_weak_equivalence(cx.vertex_inclusion(C.minimal_circle().pointed()))
    assert v.status == "No"
    assert v.witness["degree"] == 1 and v.witness["matrix"] == []


def test_last_vertex_map_is_weak_equivalence():
    assert is_weak_equivalence(cx.subdivide(C.boundary(2)).last_vertex).status == "Yes"


def test_ex_unit_is_weak_equivalence():
    for X in (C.minimal_circle(), C.square_circle()):
        _, u = cx.ex(X, 1)
        assert is_weak_equivalence(u).status == "Yes"


def test_discrete_sets_are_kan():
    assert horn_filler_report(C.sphere0(), 3).is_kan_through(3)


def test_minimal_circle_is_not_kan():
    r = horn_filler_report(C.minimal_circle(), 2)
    assert not r.is_kan_through(2)
    assert r.entries[(2, 1)].unfilled == 1
    assert r.certified_dim == 1


def test_ex_fills_more_horns():
    E, _ = cx.ex(C.minimal_circle(), 1)
    assert horn_filler_report(E, 2).filled_count > horn_filler_report(C.minimal_circle(), 2).filled_count


def test_fibration_status():
    assert fibration_status(cx.terminal_map(C.sphere0()), 2).certified_dim == 2
    assert fibration_status(cx.terminal_map(C.minimal_circle()), 2).certified_dim == 1
    P = cx.product(C.sphere0(), C.simplex(1))
    assert fibration_status(P.pr2, 2).certified_dim == 2
