import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from filtsimp import FeasibilityError, FilteredComplex, InputError, Morphism
from filtsimp.complex import compose
from filtsimp.fixtures import M3, constant, path_then_simplex, random_complex, simplex_star
from filtsimp.interleaving import (
    Correspondence,
    codegree,
    codegree_inf,
    degree,
    dgh_exact,
    dif_exact,
    dif_strong,
    distortion,
    identity_codegree_inf,
)
from filtsimp.transforms import vietoris_rips

import oracles


def _pair(seed, na, nb):
    r = random.Random(seed)
    Da, Db = oracles.random_sizes(na, r), oracles.random_sizes(nb, r)
    return Da, Db, FilteredComplex(na, oracles.to_births(Da)), FilteredComplex(nb, oracles.to_births(Db))


def test_degree_examples():
    d5, d2 = simplex_star(5), simplex_star(2)
    assert degree(Morphism.identity(d5)) == 0
    pi = Morphism(d5, d2, [min(2, k) for k in range(6)])
    iota = Morphism(d2, d5, [0, 1, 2])
    assert degree(pi) == 0 and degree(iota) == 0
    assert codegree(compose(iota, pi), Morphism.identity(d5)) == 0
    assert codegree_inf(compose(iota, pi), Morphism.identity(d5), cap=6**6) == 0
    m3 = vietoris_rips(M3, 2)
    f = Morphism(m3, m3, [1, 1, 2])
    # sending 0 to 1 never raises a diameter; the removal cost shows up as codegree to id
    assert degree(f) == 0
    assert codegree(f, Morphism.identity(m3)) == 1
    assert codegree_inf(f, f) == degree(f)


def test_path_fixture_codegrees():
    x3 = path_then_simplex(3)
    const = Morphism(x3, x3, [3, 3, 3, 3])
    ident = Morphism.identity(x3)
    assert codegree(const, ident) == 1
    # not contiguous in one step, but a chain of single-vertex moves along the path is free
    assert codegree_inf(const, ident) == 0
    D = {frozenset(s): b for s, b in x3.births.items()}
    maps, W = oracles.codeg_inf_complete(D, D, 4, 4)
    assert W[maps.index((3, 3, 3, 3)), maps.index((0, 1, 2, 3))] == 0


def test_codegree_mismatch():
    a, b = simplex_star(1), simplex_star(2)
    with pytest.raises(InputError):
        codegree(Morphism(a, a, [0, 1]), Morphism(a, b, [0, 1]))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_degree_codegree_oracle(na, nb, seed):
    Da, Db, a, b = _pair(seed, na, nb)
    for fm in itertools.product(range(nb), repeat=na):
        f = Morphism(a, b, fm)
        assert degree(f) == oracles.deg(Da, Db, fm)
    maps = list(itertools.product(range(nb), repeat=na))
    r = random.Random(seed)
    for _ in range(5):
        fm, gm = r.choice(maps), r.choice(maps)
        assert codegree(Morphism(a, b, fm), Morphism(a, b, gm)) == oracles.codeg(Da, Db, fm, gm)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_codegree_inf_single_vertex_steps_suffice(na, nb, seed):
    # complete-graph minimax against the single-vertex-change search
    Da, Db, a, b = _pair(seed, na, nb)
    maps, W = oracles.codeg_inf_complete(Da, Db, na, nb)
    r = random.Random(seed)
    for _ in range(6):
        i, j = r.randrange(len(maps)), r.randrange(len(maps))
        got = codegree_inf(Morphism(a, b, maps[i]), Morphism(a, b, maps[j]))
        assert got == W[i, j]


def test_codegree_inf_ultrametric(rng):
    c = random_complex(3, rng)
    maps = list(itertools.product(range(3), repeat=3))
    ms = [Morphism(c, c, m) for m in rng.sample(maps, 6)]
    for f, g, h in itertools.permutations(ms, 3):
        assert codegree_inf(f, h) <= max(codegree_inf(f, g), codegree_inf(g, h))
        assert codegree_inf(f, g) <= codegree(f, g)


def test_identity_costs():
    c = simplex_star(2)
    out = identity_codegree_inf(c)
    assert out.shape == (27,)
    assert out[0 + 3 * 1 + 9 * 2] == 0


def test_distortion_examples():
    m3 = vietoris_rips(M3, 2)
    ident = Correspondence([(0, 0), (1, 1), (2, 2)])
    assert distortion(ident, m3, m3) == 0
    d5, d2 = simplex_star(5), simplex_star(2)
    graph = Correspondence((k, min(2, k)) for k in range(6))
    assert distortion(graph, d5, d2) == 3
    eps = 0.25
    m3b = vietoris_rips([[0, 1 + eps, 2], [1 + eps, 0, 2], [2, 2, 0]], 2)
    assert distortion(ident, m3, m3b) == eps
    assert distortion(ident, m3, m3b, fast=False) == eps


def test_correspondence_must_cover():
    with pytest.raises(InputError, match="vertex 2"):
        distortion(Correspondence([(0, 0), (1, 1)]), simplex_star(2), simplex_star(1))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_dgh_oracle(na, nb, seed):
    Da, Db, a, b = _pair(seed, na, nb)
    res = dgh_exact(a, b)
    assert res.value == oracles.dgh(Da, Db, na, nb)
    assert distortion(Correspondence(res.witness["correspondence"]), a, b) == 2 * res.value


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10_000))
def test_dif_oracle(na, nb, seed):
    Da, Db, a, b = _pair(seed, na, nb)
    assert dif_exact(a, b).value == oracles.dif(Da, Db, na, nb)
    assert dif_strong(a, b).value == oracles.dif(Da, Db, na, nb, strong=True)


def test_dif_witness(rng):
    for _ in range(10):
        a, b = random_complex(rng.randint(1, 3), rng), random_complex(rng.randint(1, 3), rng)
        res = dif_exact(a, b)
        f = Morphism(a, b, res.witness["f"])
        g = Morphism(b, a, res.witness["g"])
        eps = res.value
        assert degree(f) <= eps and degree(g) <= eps
        assert codegree_inf(compose(g, f), Morphism.identity(a)) <= 2 * eps
        assert codegree_inf(compose(f, g), Morphism.identity(b)) <= 2 * eps


def test_examples():
    c = random_complex(4, random.Random(11))
    assert dgh_exact(c, c).value == 0
    assert dif_exact(c, c).value == 0
    assert dif_strong(c, c).value == 0
    assert dgh_exact(simplex_star(2), simplex_star(5)).value == 1.5
    assert dgh_exact(constant(3, 1.0), constant(5, 1.0)).value == 0
    assert dif_exact(simplex_star(2), simplex_star(5), cap_morphisms=6**6).value == 0


def test_weak_is_symmetric_and_triangle(rng):
    cs = [random_complex(rng.randint(1, 3), rng) for _ in range(5)]
    d = np.array([[dif_exact(a, b).value for b in cs] for a in cs])
    g = np.array([[dgh_exact(a, b).value for b in cs] for a in cs])
    assert np.array_equal(d, d.T)
    assert np.array_equal(g, g.T)
    for i, j, k in itertools.product(range(5), repeat=3):
        assert d[i, k] <= d[i, j] + d[j, k] + 1e-12
        assert g[i, k] <= g[i, j] + g[j, k] + 1e-12


def test_caps():
    with pytest.raises(FeasibilityError, match="morphisms"):
        dif_exact(simplex_star(2), simplex_star(5))
    with pytest.raises(FeasibilityError, match="total vertices"):
        dgh_exact(simplex_star(6), simplex_star(6))
    with pytest.raises(FeasibilityError, match="pairs"):
        dif_exact(simplex_star(3), simplex_star(4), cap_pairs=100)
