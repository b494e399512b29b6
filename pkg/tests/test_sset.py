import itertools

import pytest

from ganea import corpus as C
from ganea.sset import (Simplex, SimplicialMap, SimplicialSet, codegeneracy, coface, degeneracy_word,
                        op_from_word, surjections)


def test_minimal_circle_is_valid():
    S1 = C.minimal_circle()
    assert S1.counts == (1, 1)
    assert S1.validate() == []
    e = S1.simplex(1, 0)
    assert S1.face(e, 0) == S1.face(e, 1) == S1.simplex(0, 0)


def test_delta2_is_valid():
    D = C.simplex(2)
    assert D.counts == (3, 3, 1)
    assert D.validate() == []


def test_redirected_face_is_reported():
    D = C.simplex(2)
    faces = [[list(fs) for fs in level] for level in D.faces]
    # d0 of the 2-simplex should be the edge 12; point it at 01 instead
    faces[2][0][0] = D.simplex(1, D.index_of_key(1, (0, 1)))
    bad = SimplicialSet(faces)
    problems = bad.validate()
    assert problems and all("d" in p for p in problems)


def test_missing_target_reported():
    faces = [[()], [(Simplex((0,), 0, 0), Simplex((0,), 0, 3))]]
    assert any("missing" in p for p in SimplicialSet(faces).validate())


def test_bad_basepoint_reported():
    X = SimplicialSet(C.point().faces, basepoint=2)
    assert X.validate() == ["basepoint 2 is not a vertex"]


def test_surjection_counts_are_binomial():
    from math import comb
    for k in range(5):
        for m in range(k + 1):
            assert len(surjections(k, m)) == comb(k, m)


def test_degeneracy_words_roundtrip():
    for k in range(5):
        for m in range(k + 1):
            for op in surjections(k, m):
                w = degeneracy_word(op)
                assert list(w) == sorted(w, reverse=True)
                assert len(set(w)) == len(w)
                assert op_from_word(w, m) == op


def test_cosimplicial_identities():
    # d^j d^i = d^i d^{j-1} for i < j, as composable monotone maps
    def comp(a, b):  # a after b
        return tuple(a[x] for x in b)

    for n in range(1, 5):
        for i, j in itertools.combinations(range(n + 2), 2):
            lhs = comp(coface(n + 1, j), coface(n, i))
            rhs = comp(coface(n + 1, i), coface(n, j - 1))
            assert lhs == rhs
        for j in range(n + 1):
            assert comp(codegeneracy(n, j), coface(n + 1, j)) == tuple(range(n + 1))
            assert comp(codegeneracy(n, j), coface(n + 1, j + 1)) == tuple(range(n + 1))


@pytest.mark.parametrize("name", sorted(C.CORPUS))
def test_corpus_is_valid(name):
    assert C.CORPUS[name]().validate() == []


def test_mixed_identities_on_torus():
    T = C.torus()
    for n in range(1, 3):
        for x in T.nd(n):
            for i in range(n + 2):
                for j in range(n + 1):
                    lhs = T.face(T.degeneracy(x, j), i)
                    if i < j:
                        rhs = T.degeneracy(T.face(x, i), j - 1)
                    elif i in (j, j + 1):
                        rhs = x
                    else:
                        rhs = T.degeneracy(T.face(x, i - 1), j)
                    assert lhs == rhs


def test_identity_and_constant_maps():
    T = C.torus()
    assert SimplicialMap.identity(T).validate() == []
    c = SimplicialMap.constant(C.simplex(2), T, 0)
    assert c.validate() == []
    assert not c.is_injective()


def test_broken_map_is_reported():
    D1, S0 = C.simplex(1), C.sphere0()
    f = SimplicialMap(S0, D1, [[D1.simplex(0, 0), D1.simplex(0, 1)]])
    assert f.validate() == []
    g = SimplicialMap(D1, S0, [[S0.simplex(0, 0), S0.simplex(0, 1)], [Simplex((0, 0), 0, 0)]])
    assert g.validate()


def test_pointed_rejects_empty():
    with pytest.raises(ValueError):
        C.empty().pointed()


def test_components():
    X = C.from_complex([(0, 1), (2, 3), (4,)])
    assert len(X.components()) == 3
    assert not X.is_connected()
    assert C.torus().is_connected()
