import itertools
import math

import pytest

from filtsimp import FilteredComplex, InputError, is_isomorphic, validate
from filtsimp.codensity import codensity_matrix, codensity_of
from filtsimp.fixtures import M3, SQ4, circle_with_flares, hollow_triangle, random_complex, random_metric, simplex_star
from filtsimp.interleaving import dgh_exact
from filtsimp.simplify import core
from filtsimp.transforms import (
    DistanceMatrix,
    clique_completion,
    closest_point_delta1,
    diam_k,
    single_vertex_extension,
    tail_transform,
    vietoris_rips,
)


def test_rips_examples():
    c = vietoris_rips(M3, 2)
    assert c.births == {(0,): 0, (1,): 0, (2,): 0, (0, 1): 1, (0, 2): 2, (1, 2): 2, (0, 1, 2): 2}
    assert vietoris_rips([[0.0]], 1).births == {(0,): 0.0}
    sq = vietoris_rips(SQ4, 2)
    r2 = math.sqrt(2)
    for s, b in sq.births.items():
        if len(s) == 2:
            assert b == (r2 if s in [(0, 2), (1, 3)] else 1.0)
        elif len(s) == 3:
            assert b == r2


@pytest.mark.parametrize(
    "d, msg",
    [
        ([[0, 1], [2, 0]], "asymmetric"),
        ([[1, 1], [1, 0]], "diagonal"),
        ([[0, 1, 5], [1, 0, 1], [5, 1, 0]], r"triple \(0,1,2\)"),
        ([[0, -1], [-1, 0]], "negative"),
        ([[0, 1]], "square"),
    ],
)
def test_bad_metrics(d, msg):
    with pytest.raises(InputError, match=msg):
        DistanceMatrix(d)


def test_clique_completion_examples():
    vr = vietoris_rips(M3, 2)
    assert clique_completion(vr, 1).births == vr.births
    late = FilteredComplex(3, {(0, 1): 0.0, (0, 2): 1.0, (1, 2): 0.5, (0, 1, 2): 4.0})
    assert clique_completion(late, 1).size_of([0, 1, 2]) == 1.0
    h = hollow_triangle()
    assert clique_completion(h, 2).births == h.births


def test_clique_completion_is_clique(rng):
    for _ in range(10):
        c = random_complex(rng.randint(3, 6), rng)
        for k in (1, 2):
            cc = clique_completion(c, k)
            assert validate(cc)
            assert cc.clique_order == k


def test_tail_examples(rng):
    c = random_complex(5, rng)
    assert tail_transform(c, 0).births == c.births
    t = tail_transform(vietoris_rips(M3, 2), 1)
    assert t.size_of([0]) == 1
    assert t.size_of([2]) == 2
    assert t.size_of([0, 1]) == 1


def test_tail_oracle(rng):
    # min over cofaces with at least k+1 vertices, computed from scratch
    for _ in range(15):
        n = rng.randint(2, 6)
        c = random_complex(n, rng)
        for k in range(0, n):
            t = tail_transform(c, k)
            for r in range(1, n + 1):
                for a in itertools.combinations(range(n), r):
                    expect = min(
                        c.size_of(b)
                        for rr in range(max(r, k + 1), n + 1)
                        for b in itertools.combinations(range(n), rr)
                        if set(a) <= set(b)
                    )
                    assert t.size_of(a) == expect


def test_tail_errors():
    with pytest.raises(InputError, match="max_dim"):
        tail_transform(vietoris_rips(M3, 1), 2)
    c = FilteredComplex(3, {(0, 1): 0.0, (2,): 0.0}, max_dim=1)
    with pytest.raises(InputError, match="vertex 2"):
        tail_transform(c, 1)


def test_diam_k():
    d = DistanceMatrix(M3)
    assert diam_k(d, 0, [1, 2]) == 2
    assert diam_k(d, 1, [0]) == 1
    assert diam_k(d, 1, [0, 2]) == 2
    with pytest.raises(InputError):
        diam_k(d, 3, [0])


def test_tail_of_rips_is_diam_k(rng):
    for _ in range(5):
        n = rng.randint(3, 6)
        dm = random_metric(n, rng)
        t = tail_transform(vietoris_rips(dm, n - 1), 1)
        for v in range(n):
            assert t.size_of([v]) == diam_k(dm, 1, [v])


def test_closest_point():
    assert closest_point_delta1(M3, 2) == (0, 0.0)
    assert closest_point_delta1([[0, 3], [3, 0]], 0) == (1, 0.0)
    d, flare = circle_with_flares()
    y, val = closest_point_delta1(d, flare[2])
    assert y == flare[1] and val == 0.0


def test_closest_point_matches_tail_codensity(rng):
    for _ in range(10):
        n = rng.randint(3, 7)
        dm = random_metric(n, rng)
        t = tail_transform(vietoris_rips(dm, 2), 1)
        q = codensity_matrix(t, "brute").entries
        for x in range(n):
            y, val = closest_point_delta1(dm, x)
            assert q[x, y] == val


def test_extension_of_simplex_star():
    for n in range(4):
        e = single_vertex_extension(simplex_star(n), n, 1.0)
        assert is_isomorphic(e, simplex_star(n + 1)) is not None


def test_extension_properties(rng):
    for _ in range(10):
        c = random_complex(rng.randint(1, 4), rng)
        w = rng.randrange(c.n_vertices)
        e = single_vertex_extension(c, w, 0.0)
        assert validate(e)
        assert codensity_of(codensity_matrix(e), e.n_vertices - 1) == 0
        assert is_isomorphic(core(e)[0], core(c)[0]) is not None
    c = random_complex(3, rng)
    assert dgh_exact(single_vertex_extension(c, 0, 10.0), c).value >= 5


def test_extension_of_clique_complex():
    e = single_vertex_extension(vietoris_rips(M3, 1), 0, 2.0)
    assert e.clique_order is None
    assert e.size_of([3]) == 2.0
    assert e.size_of([1, 2, 3]) == 4.0
    assert e.labels == (0, 1, 2, 3)
    with pytest.raises(InputError):
        single_vertex_extension(e, 0, -1)
