import random

import pytest
from hypothesis import given, settings, strategies as st

from filtsimp import FilteredComplex, InputError, is_isomorphic, restrict, size_of, validate
from filtsimp.complex import INF, Morphism, compose, ext_sub, remove_vertex
from filtsimp.fixtures import M3, random_complex, random_metric, simplex_star
from filtsimp.transforms import vietoris_rips

import oracles


def test_valid_and_invalid():
    assert validate(FilteredComplex(2, {(0,): 0, (1,): 0, (0, 1): 1}))
    bad = FilteredComplex(2, {(0,): 2, (1,): 0, (0, 1): 1})
    rep = validate(bad)
    assert not rep
    assert rep.violations == [((0,), (0, 1))]


def test_vr_is_valid(rng):
    for _ in range(20):
        n = rng.randint(1, 7)
        assert validate(vietoris_rips(random_metric(n, rng), max(1, n - 1)))


def test_omitted_faces_take_min_coface():
    c = FilteredComplex(3, {(0, 1): 2.0, (0, 2): 1.0, (1, 2): 3.0})
    assert c.size_of([0]) == 1.0
    assert c.size_of([1]) == 2.0
    assert c.size_of([2]) == 1.0
    assert c.size_of([0, 1, 2]) == INF


def test_size_of_examples():
    assert size_of(simplex_star(5), [1, 3]) == 3
    m3 = vietoris_rips(M3, 2)
    assert m3.size_of([0, 1, 2]) == 2
    assert m3.size_of([1]) == 0


def test_clique_sizes_above_max_dim():
    c = vietoris_rips(M3, 1)
    assert c.max_dim == 1
    assert c.size_of([0, 1, 2]) == 2
    assert c.size_table()[0b111] == 2


def test_max_dim_clipped():
    c = FilteredComplex(2, {(0, 1): 0.0}, max_dim=5)
    assert c.max_dim == 1


@pytest.mark.parametrize(
    "births, kw, msg",
    [
        ({(0, 3): 1.0}, {}, "unknown vertex"),
        ({(0, 0): 1.0}, {}, "repeats"),
        ({(0,): float("nan")}, {}, "non-finite"),
        ({(0,): 0.0}, {}, "never enters"),
        ({(0, 1): 0.0}, {"max_dim": 0}, "max_dim"),
    ],
)
def test_input_errors(births, kw, msg):
    with pytest.raises(InputError, match=msg):
        FilteredComplex(2, births, **kw)


def test_restrict_examples():
    d2 = restrict(simplex_star(5), [0, 1, 2])
    assert d2.births == simplex_star(2).births
    c = random_complex(4, random.Random(3))
    assert restrict(c, range(4)) == c
    sub = restrict(vietoris_rips(M3, 2), [0, 2])
    assert sub.births == {(0,): 0.0, (1,): 0.0, (0, 1): 2.0}
    assert sub.labels == (0, 2)


def test_restrict_composes(rng):
    c = random_complex(6, rng)
    a = restrict(c, [0, 2, 3, 5])
    b = restrict(a, [1, 3])
    assert b.labels == (2, 5)
    assert b == restrict(c, [2, 5])


def test_isomorphism():
    d3 = simplex_star(3)
    assert is_isomorphic(d3, d3) == (0, 1, 2, 3)
    assert is_isomorphic(simplex_star(2), d3) is None
    c = random_complex(5, random.Random(7))
    perm = [3, 0, 4, 1, 2]
    moved = FilteredComplex(5, {tuple(perm[v] for v in s): b for s, b in c.births.items()})
    sigma = is_isomorphic(c, moved)
    assert sigma is not None
    for s, b in c.births.items():
        assert moved.size_of([sigma[v] for v in s]) == b
    assert is_isomorphic(moved, c) is not None


def test_isomorphism_rejects_different_sizes():
    c = FilteredComplex(3, {(0,): 1.0, (1,): 0.0, (2,): 0.0, (0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0, (0, 1, 2): 1.0})
    d = FilteredComplex(3, {(0,): 0.0, (1,): 0.0, (2,): 0.0, (0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0, (0, 1, 2): 1.0})
    assert is_isomorphic(c, d) is None


def test_ext_sub():
    assert ext_sub(INF, INF) == 0.0
    assert ext_sub(INF, 3.0) == INF
    assert ext_sub(2.0, INF) == -INF


def test_morphism():
    c = simplex_star(2)
    with pytest.raises(InputError, match="unknown target vertex"):
        Morphism(c, c, (0, 1, 3))
    with pytest.raises(InputError, match="entries"):
        Morphism(c, c, (0, 1))
    f = Morphism(c, c, (1, 1, 2))
    g = Morphism(c, c, (0, 0, 0))
    assert compose(g, f).map == (0, 0, 0)
    assert compose(f, g).map == (1, 1, 1)
    assert remove_vertex(c, 1).labels == (0, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 10_000))
def test_size_table_matches_dict(n, seed):
    D = oracles.random_sizes(n, random.Random(seed))
    c = FilteredComplex(n, oracles.to_births(D))
    tab = c.size_table()
    for s, v in D.items():
        m = sum(1 << x for x in s)
        assert tab[m] == v
        assert c.size_of(sorted(s)) == v


def test_simplices_order():
    c = vietoris_rips(M3, 2)
    order = c.simplices()
    keys = [(b, len(s), s) for b, s in order]
    assert keys == sorted(keys)
    assert len(c) == 7
