from math import comb

import pytest

from ganea import constructions as cx
from ganea import corpus as C
from ganea.homology import homology, induced_homology, reduced_betti
from ganea.sset import SimplicialMap


def _iso_counts(X, Y):
    return tuple(X.counts) == tuple(Y.counts)


def test_product_with_point_is_identity():
    T = C.torus()
    P = cx.product(T, cx.delta(0))
    assert _iso_counts(P.obj, T)
    assert P.pr1.is_isomorphism()


@pytest.mark.parametrize("p,q,top", [(1, 1, 2), (1, 2, 3), (2, 2, 6)])
def test_product_of_simplices_top_count(p, q, top):
    P = cx.product(cx.delta(p), cx.delta(q)).obj
    assert P.count(p + q) == top == comb(p + q, p)
    assert P.validate() == []


def test_product_symmetry_via_swap():
    X, Y = C.minimal_circle(), cx.delta(1)
    P, Q = cx.product(X, Y), cx.product(Y, X)
    swap = cx.pair_into(Q.obj, P.pr2, P.pr1)
    assert swap.validate() == []
    assert swap.is_isomorphism()


def test_pullback_along_identity():
    g = cx.vertex_inclusion(C.square_circle())
    B = g.target
    pb = cx.pullback(SimplicialMap.identity(B), g)
    assert _iso_counts(pb.obj, g.source)


def test_pullback_over_point_is_product():
    X, Y = C.minimal_circle(), cx.delta(1)
    pb = cx.pullback(cx.terminal_map(X), cx.terminal_map(Y))
    assert _iso_counts(pb.obj, cx.product(X, Y).obj)


def test_pullback_of_disjoint_vertices_is_empty():
    D1 = cx.delta(1)
    pb = cx.pullback(cx.vertex_inclusion(D1, 0), cx.vertex_inclusion(D1, 1))
    assert pb.obj.is_empty


def test_pullback_rejects_mismatched_targets():
    with pytest.raises(ValueError):
        cx.pullback(cx.terminal_map(C.sphere0()), SimplicialMap.identity(C.minimal_circle()))


def test_pushout_of_empty_leg_is_coproduct():
    po = cx.coproduct(C.minimal_circle(), cx.delta(1))
    assert po.obj.counts == (3, 2)
    assert po.obj.validate() == []


def test_pushout_glues_circle():
    # two edges glued along their endpoints
    S0 = C.sphere0()
    D1 = cx.delta(1)
    ends = SimplicialMap(S0, D1, [[D1.simplex(0, 0), D1.simplex(0, 1)]])
    po = cx.pushout(ends, ends)
    assert po.obj.counts == (2, 2)
    assert reduced_betti(po.obj) == {0: (0, ()), 1: (1, ())}


def test_pushout_needs_an_injective_leg():
    S0 = C.sphere0()
    t = cx.terminal_map(S0)
    with pytest.raises(ValueError):
        cx.pushout(t, t)


def test_mapping_cylinder_of_identity():
    X = C.square_circle()
    mc = cx.mapping_cylinder(SimplicialMap.identity(X))
    assert _iso_counts(mc.obj, cx.cylinder(X).obj)
    assert mc.retraction.compose(mc.front).agrees_with(SimplicialMap.identity(X))


def test_mapping_cylinder_cone_on_two_points():
    mc = cx.mapping_cylinder(cx.terminal_map(C.sphere0()))
    assert mc.obj.counts == (3, 2)
    assert reduced_betti(mc.obj) == {0: (0, ()), 1: (0, ())}
    assert mc.front.is_injective()


def test_mapping_cylinder_front_injective_for_collapse():
    f = cx.terminal_map(cx.delta(1))
    mc = cx.mapping_cylinder(f)
    assert mc.front.is_injective()
    assert mc.retraction.compose(mc.front).agrees_with(f)


def test_subdivision_of_interval():
    sd = cx.subdivide(cx.delta(1))
    assert sd.obj.counts == (3, 2)
    assert sd.last_vertex.validate() == []


@pytest.mark.parametrize("k", [0, 1, 2])
def test_ex_of_point(k):
    E, u = cx.ex(cx.delta(0), k)
    assert E.count(0) == 1 and all(E.count(n) == 0 for n in range(1, len(E.counts)))


def test_ex_circle_homology():
    E, u = cx.ex(C.minimal_circle(), 1)
    H = homology(E)
    assert H.table()[:2] == [(1, ()), (1, ())]
    m = induced_homology(u, range(2))
    assert m[1][0] in ([[1]], [[-1]])


@pytest.mark.parametrize("name", ["S1", "dDelta2", "T2", "RP2"])
def test_subdivision_preserves_homology(name):
    X = C.CORPUS[name]()
    sd = cx.subdivide(X)
    assert homology(sd.obj, generators=False).table() == homology(X, generators=False).table()
    for n, (cols, hx, hy) in induced_homology(sd.last_vertex).items():
        if hy.free + len(hy.torsion):
            assert cols, n


def test_function_complex_from_point():
    T = C.torus()
    F = cx.function_complex(cx.delta(0), T)
    assert F.counts == T.counts


def test_function_complex_into_point():
    F = cx.function_complex(C.square_circle(), cx.delta(0))
    assert F.counts[0] == 1 and all(c == 0 for c in F.counts[1:])


def test_function_complex_interval_into_circle():
    F = cx.function_complex(cx.delta(1), C.minimal_circle())
    assert F.count(0) == 2
    assert F.truncated


def test_subcomplex_inclusion():
    T = C.torus()
    S, inc = cx.subcomplex(T, [T.simplex(1, 0)])
    assert S.counts == (1, 1)
    assert inc.is_injective() and inc.validate() == []
