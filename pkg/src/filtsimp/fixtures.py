"""Named example complexes and random generators used by tests and the CLI."""

from __future__ import annotations

import itertools
import math
import random
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .complex import FilteredComplex, mask_of, popcount, vertices_of
from .transforms import DistanceMatrix, vietoris_rips


def simplex_star(n: int) -> FilteredComplex:
    """Vertices ``0..n``; every simplex is born at its largest vertex."""
    births = {}
    for card in range(1, n + 2):
        for s in itertools.combinations(range(n + 1), card):
            births[s] = float(max(s))
    return FilteredComplex(n + 1, births)


def path_then_simplex(n: int) -> FilteredComplex:
    """Vertices ``0..n``: the path edges exist at time 0, everything else at time 1."""
    births = {}
    for card in range(1, n + 2):
        for s in itertools.combinations(range(n + 1), card):
            if card == 1 or (card == 2 and s[1] == s[0] + 1):
                births[s] = 0.0
            else:
                births[s] = 1.0
    return FilteredComplex(n + 1, births)


def constant(n: int, value: float = 0.0) -> FilteredComplex:
    births = {s: value for card in range(1, n + 1) for s in itertools.combinations(range(n), card)}
    return FilteredComplex(n, births)


M3 = [[0.0, 1.0, 2.0], [1.0, 0.0, 2.0], [2.0, 2.0, 0.0]]
SQ4 = [
    [0.0, 1.0, math.sqrt(2), 1.0],
    [1.0, 0.0, 1.0, math.sqrt(2)],
    [math.sqrt(2), 1.0, 0.0, 1.0],
    [1.0, math.sqrt(2), 1.0, 0.0],
]


def hollow_triangle() -> FilteredComplex:
    return FilteredComplex(3, {(0, 1): 0.0, (0, 2): 0.0, (1, 2): 0.0, (0, 1, 2): 1.0})


def circle_with_flares(
    n_circle: int = 12,
    flare_len: int = 3,
    flare_step: float = 1.0,
    anchors: Sequence[int] = (0, 6),
) -> tuple[np.ndarray, list[int]]:
    """Shortest-path metric of a cycle with paths hanging off ``anchors``.

    Circle points come first (unit arcs), then each flare from its anchor
    outward.  Returns the distance matrix and the flare point indices.
    """
    n = n_circle + flare_len * len(anchors)
    w = np.zeros((n, n))
    for i in range(n_circle):
        j = (i + 1) % n_circle
        w[i, j] = w[j, i] = 1.0
    flare = []
    idx = n_circle
    for a in anchors:
        prev = a
        for _ in range(flare_len):
            w[prev, idx] = w[idx, prev] = flare_step
            flare.append(idx)
            prev = idx
            idx += 1
    d = shortest_path(w, method="D", directed=False)
    return d, flare


def random_complex(
    n: int,
    rng: random.Random,
    values: Optional[Sequence[float]] = None,
    max_dim: Optional[int] = None,
) -> FilteredComplex:
    """Random monotone size function: each subset draws a value, then takes the max over its faces.

    Drawing from a small value set produces plenty of ties and zero codensities.
    """
    if values is None:
        values = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0]
    top = n - 1 if max_dim is None else max_dim
    raw = {}
    for card in range(1, top + 2):
        for s in itertools.combinations(range(n), card):
            raw[mask_of(s)] = rng.choice(values)
    sizes = {}
    for m in sorted(raw, key=popcount):
        best = raw[m]
        for v in vertices_of(m):
            sub = m ^ (1 << v)
            if sub:
                best = max(best, sizes[sub])
        sizes[m] = best
    return FilteredComplex.from_masks(n, sizes, max_dim=top)


def random_metric(n: int, rng: random.Random, kind: str = "graph", scale: int = 6) -> np.ndarray:
    """Integer-valued metric, so every derived size is exact in floating point.

    ``graph``: shortest paths on a random connected weighted graph;
    ``linf``: l-infinity distances between random integer points.
    """
    if kind == "linf":
        pts = np.array([[rng.randint(0, scale) for _ in range(2)] for _ in range(n)], dtype=float)
        return np.abs(pts[:, None, :] - pts[None, :, :]).max(axis=2)
    w = np.zeros((n, n))
    for i in range(1, n):
        j = rng.randrange(i)
        w[i, j] = w[j, i] = rng.randint(1, scale)
    for i, j in itertools.combinations(range(n), 2):
        if w[i, j] == 0 and rng.random() < 0.4:
            w[i, j] = w[j, i] = rng.randint(1, scale)
    return shortest_path(w, method="D", directed=False)


def random_vr(n: int, rng: random.Random, max_dim: Optional[int] = None, kind: str = "graph") -> FilteredComplex:
    d = random_metric(n, rng, kind)
    return vietoris_rips(DistanceMatrix(d), max(1, n - 1) if max_dim is None else max_dim)


def named(name: str, n: int = 3) -> FilteredComplex:
    """Look up a fixture by name (CLI ``fixture`` subcommand)."""
    table = {
        "simplex-star": lambda: simplex_star(n),
        "path-simplex": lambda: path_then_simplex(n),
        "constant": lambda: constant(n),
        "hollow-triangle": hollow_triangle,
        "m3": lambda: vietoris_rips(M3, 2),
        "sq4": lambda: vietoris_rips(SQ4, 3),
    }
    if name not in table:
        raise KeyError(name)
    return table[name]()
