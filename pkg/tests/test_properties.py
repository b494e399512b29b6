"""Property tests over randomly generated small simplicial sets and maps."""
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gen
from ganea import constructions as cx
from ganea import corpus as C
from ganea.cohomology import CohomologyRing
from ganea.fundamental_group import abelian_invariants, pi1_presentation
from ganea.homology import homology, normalized_chains
from ganea.model import is_weak_equivalence
from ganea.serialize import dump_sset, load_sset

seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=300)
@given(seeds)
def test_random_sets_are_valid(seed):
    X = gen.random_sset(random.Random(seed))
    assert X.validate() == []


@settings(max_examples=300)
@given(seeds)
def test_corruptions_are_rejected(seed):
    rng = random.Random(seed)
    Y = gen.corrupt(rng, gen.random_sset(rng))
    if Y is not None:
        assert Y.validate()


@settings(max_examples=100)
@given(seeds)
def test_pullback_universal_property(seed):
    gen.check_pullback(random.Random(seed))


@settings(max_examples=100)
@given(seeds)
def test_pushout_universal_property(seed):
    gen.check_pushout(random.Random(seed))


@settings(max_examples=150)
@given(seeds)
def test_boundary_squares_to_zero(seed):
    X = gen.random_sset(random.Random(seed))
    assert normalized_chains(X).check()


@settings(max_examples=40)
@given(st.integers(0, len(gen.KUNNETH_FACTORS) - 1), st.integers(0, len(gen.KUNNETH_FACTORS) - 1))
def test_kunneth(i, j):
    X, Y = gen.KUNNETH_FACTORS[i](), gen.KUNNETH_FACTORS[j]()
    if X.size * Y.size <= 400:
        gen.check_kunneth(X, Y)


@settings(max_examples=100)
@given(seeds)
def test_abelianized_pi1_is_h1(seed):
    X = gen.random_sset(random.Random(seed))
    if not X.is_connected():
        return
    H1 = homology(X, range(2), generators=False).groups[1]
    assert abelian_invariants(pi1_presentation(X, 0)) == (H1.free, tuple(H1.torsion))


@settings(max_examples=30)
@given(st.sampled_from(["T2", "RP2", "S1", "wedge2S1", "dD2vdD2"]), st.sampled_from([2, 3]))
def test_cup_products_graded_commutative_and_associative(name, p):
    R = CohomologyRing(C.CORPUS[name](), p)
    tab = R.table()
    for (i, a, j, b), v in tab.items():
        w = tab[(j, b, i, a)]
        if v is None:
            assert w is None
            continue
        sign = (-1) ** (i * j)
        assert [x % p for x in v] == [(sign * y) % p for y in w]

    def e(n, k):
        return [int(t == k) for t in range(R.dim(n))]

    for i in range(1, R.top + 1):
        for j in range(1, R.top + 1 - i):
            for k in range(1, R.top + 1 - i - j):
                for a in range(R.dim(i)):
                    for b in range(R.dim(j)):
                        for c in range(R.dim(k)):
                            left = R.cup(i + j, R.cup(i, e(i, a), j, e(j, b)), k, e(k, c))
                            right = R.cup(i, e(i, a), j + k, R.cup(j, e(j, b), k, e(k, c)))
                            assert left == right


@pytest.mark.filterwarnings("ignore:disconnected")
@settings(max_examples=60)
@given(seeds)
def test_subdivision_last_vertex_is_weak_equivalence(seed):
    X = gen.random_complex(random.Random(seed), max_vertices=5, max_facets=3, max_dim=2)
    sd = cx.subdivide(X)
    assert sd.obj.validate() == []
    assert is_weak_equivalence(sd.last_vertex).status == "Yes"


@settings(max_examples=50)
@given(seeds)
def test_product_is_symmetric(seed):
    rng = random.Random(seed)
    X = gen.random_complex(rng, max_vertices=3, max_facets=2, max_dim=2)
    Y = gen.random_sset(rng, max_vertices=3, max_facets=2, max_dim=1)
    P, Q = cx.product(X, Y), cx.product(Y, X)
    swap = cx.pair_into(Q.obj, P.pr2, P.pr1)
    assert swap.is_isomorphism()


@given(st.integers(0, 3), st.integers(0, 3))
def test_product_of_simplices_binomial(p, q):
    assert cx.product(cx.delta(p), cx.delta(q)).obj.count(p + q) == comb(p + q, p)


@settings(max_examples=200)
@given(seeds)
def test_serialization_roundtrip(seed):
    X = gen.random_sset(random.Random(seed))
    text = dump_sset(X)
    Y = load_sset(text)
    assert dump_sset(Y) == text
    assert Y.faces == X.faces
