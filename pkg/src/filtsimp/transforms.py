"""Constructions that build or reshape filtrations while tracking what they preserve."""

from __future__ import annotations

import itertools
from typing import Iterable

import numpy as np

from .complex import INF, FilteredComplex, mask_of, popcount
from .errors import FeasibilityError, InputError

__all__ = [
    "DistanceMatrix",
    "clique_completion",
    "closest_point_delta1",
    "diam_k",
    "single_vertex_extension",
    "tail_transform",
    "vietoris_rips",
]

_METRIC_TOL = 1e-12


class DistanceMatrix:
    """A validated finite metric: symmetric, zero diagonal, nonnegative, triangle inequality."""

    def __init__(self, d, tol: float = _METRIC_TOL):
        d = np.array(d, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise InputError(f"distance matrix must be square and non-empty, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise InputError("distance matrix has non-finite entries")
        n = d.shape[0]
        for i in range(n):
            if d[i, i] != 0:
                raise InputError(f"nonzero diagonal entry d[{i},{i}] = {d[i, i]}")
        bad = np.argwhere(d != d.T)
        if bad.size:
            i, j = bad[0]
            raise InputError(f"asymmetric entries d[{i},{j}]={d[i, j]} != d[{j},{i}]={d[j, i]}")
        if np.any(d < 0):
            i, j = np.argwhere(d < 0)[0]
            raise InputError(f"negative distance d[{i},{j}] = {d[i, j]}")
        # d[i,k] <= d[i,j] + d[j,k]
        excess = d[:, None, :] - d[:, :, None] - d[None, :, :]
        if np.any(excess > tol):
            i, j, k = np.argwhere(excess > tol)[0]
            raise InputError(
                f"triangle inequality fails for triple ({i},{j},{k}): "
                f"d[{i},{k}]={d[i, k]} > d[{i},{j}]+d[{j},{k}]={d[i, j] + d[j, k]}"
            )
        d.setflags(write=False)
        self.d = d

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def diameter(self, points: Iterable[int]) -> float:
        pts = list(points)
        if len(pts) < 2:
            return 0.0
        return float(self.d[np.ix_(pts, pts)].max())


def _as_metric(d) -> DistanceMatrix:
    return d if isinstance(d, DistanceMatrix) else DistanceMatrix(d)


def vietoris_rips(d, max_dim: int = 2) -> FilteredComplex:
    """Rips filtration: every simplex is born at its diameter."""
    d = _as_metric(d)
    if max_dim < 1:
        raise InputError(f"vietoris_rips needs max_dim >= 1, got {max_dim}")
    n = d.n
    births = {}
    for card in range(1, min(max_dim + 1, n) + 1):
        for alpha in itertools.combinations(range(n), card):
            births[alpha] = d.diameter(alpha)
    return FilteredComplex(n, births, max_dim=max_dim, clique_order=1)


def clique_completion(c: FilteredComplex, k: int) -> FilteredComplex:
    """Fill in every simplex whose ``k``-skeleton is present.

    New size: max over faces with at most ``k + 1`` vertices.  Homology below
    degree ``k`` is untouched.
    """
    if k < 1:
        raise InputError(f"clique_completion needs k >= 1, got {k}")
    n = c.n_vertices
    max_dim = min(max(c.max_dim, k), n - 1)
    small: dict[int, float] = {}
    for card in range(1, min(k + 1, n) + 1):
        for alpha in itertools.combinations(range(n), card):
            m = mask_of(alpha)
            s = c.size_of_mask(m)
            if s < INF:
                small[m] = s
    births = dict(small)
    for card in range(k + 2, max_dim + 2):
        for alpha in itertools.combinations(range(n), card):
            s = max(small.get(mask_of(f), INF) for f in itertools.combinations(alpha, k + 1))
            if s < INF:
                births[mask_of(alpha)] = s
    return FilteredComplex.from_masks(n, births, max_dim=max_dim, clique_order=k, labels=c.labels)


def tail_transform(c: FilteredComplex, k: int) -> FilteredComplex:
    """Lower each simplex with fewer than ``k + 1`` vertices to its cheapest ``k``-dimensional coface.

    Persistent homology in degrees ``>= k`` is unchanged.  Sizes are monotone,
    so the cheapest coface with at least ``k + 1`` vertices always has exactly
    ``k + 1`` (or is the simplex itself).
    """
    if k < 0:
        raise InputError(f"tail_transform needs k >= 0, got {k}")
    n = c.n_vertices
    if k > n - 1:
        raise InputError(f"tail_transform with k={k} needs at least {k + 1} vertices, got {n}")
    if c.max_dim < k:
        raise InputError(f"tail_transform with k={k} needs simplices of dimension {k} stored (max_dim={c.max_dim})")
    top = [(m, b) for m, b in c.birth_masks.items() if popcount(m) == k + 1]
    if not top:
        raise InputError(f"no stored simplex of dimension >= {k}")
    births = {m: b for m, b in c.birth_masks.items() if popcount(m) > k}
    for m, b in top:
        births[m] = b
        sub = (m - 1) & m
        while sub:
            if b < births.get(sub, INF):
                births[sub] = b
            sub = (sub - 1) & m
    missing = [v for v in range(n) if (1 << v) not in births]
    if missing:
        raise InputError(
            f"vertex {missing[0]} lies in no stored {k}-simplex; its tail size would be +inf"
        )
    clique = c.clique_order if c.clique_order is not None and c.clique_order >= k else None
    return FilteredComplex.from_masks(n, births, max_dim=c.max_dim, clique_order=clique, labels=c.labels)


def diam_k(d, k: int, alpha: Iterable[int]) -> float:
    """Smallest diameter of a superset of ``alpha`` with at least ``k + 1`` points."""
    d = _as_metric(d)
    alpha = sorted(set(alpha))
    if not alpha:
        raise InputError("diam_k of an empty set")
    if k + 1 > d.n:
        raise InputError(f"diam_k with k={k} needs at least {k + 1} points, got {d.n}")
    if len(alpha) >= k + 1:
        return d.diameter(alpha)
    others = [p for p in range(d.n) if p not in alpha]
    return min(
        d.diameter(alpha + list(extra))
        for extra in itertools.combinations(others, k + 1 - len(alpha))
    )


def closest_point_delta1(d, x: int) -> tuple[int, float]:
    """Nearest neighbour ``y`` of ``x`` and the degree-1 quasi-distance from ``x`` to ``y``.

    Ties for the nearest neighbour go to the smallest index.
    """
    d = _as_metric(d)
    if d.n < 2:
        raise InputError("closest_point_delta1 needs at least two points")
    if not (0 <= x < d.n):
        raise InputError(f"unknown point {x}")
    row = d.d[x].copy()
    row[x] = INF
    y = int(np.argmin(row))
    value = 0.0
    for p in range(d.n):
        if p != x and p != y:
            value = max(value, float(d.d[y, p] - d.d[x, p]))
    return y, value


def single_vertex_extension(c: FilteredComplex, w: int, r: float, cap: int = 20) -> FilteredComplex:
    """Append a vertex that shadows ``w`` with every size shifted up by ``r``.

    The new vertex gets id ``c.n_vertices``.  A simplex ``alpha + new`` is
    born at ``size(alpha + w) + r``; simplices avoiding the new vertex keep
    their size.
    """
    if not (0 <= w < c.n_vertices):
        raise InputError(f"unknown vertex {w}")
    r = float(r)
    if not r >= 0:
        raise InputError(f"extension offset r must be >= 0, got {r}")
    n = c.n_vertices
    if c.clique_order is not None:
        # not clique any more: materialize the whole face lattice
        if n + 1 > cap:
            raise FeasibilityError(f"extending a clique complex materializes 2**{n + 1} simplices; cap is {cap} vertices")
        max_card = n
        max_dim = n
    else:
        max_card = c.max_dim + 1
        max_dim = c.max_dim + 1
    v0 = 1 << n
    bw = 1 << w
    births: dict[int, float] = {}
    for m, s in c.finite_masks(max_card):
        births[m] = s
    births[v0] = c.size_of_mask(bw) + r
    for m, s in c.finite_masks(max_card):
        if m & bw:
            val = s + r
            births[m | v0] = val
            births[(m ^ bw) | v0] = val if (m ^ bw) else births[v0]
    births = {m: b for m, b in births.items() if popcount(m) <= max_dim + 1}
    labels = tuple(c.labels) + (max(c.labels) + 1,)
    return FilteredComplex.from_masks(n + 1, births, max_dim=max_dim, labels=labels)

