"""Persistent homology over Z/2 and the bottleneck distance."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .complex import INF, FilteredComplex, mask_of
from .errors import InputError

__all__ = ["PersistenceDiagram", "barcodes", "bottleneck"]


@dataclass(frozen=True)
class PersistenceDiagram:
    dim: int
    pairs: tuple[tuple[float, float], ...]

    def __init__(self, dim: int, pairs: Iterable[tuple[float, float]]):
        pairs = tuple(sorted((float(b), float(d)) for b, d in pairs))
        for b, d in pairs:
            if not b <= d:
                raise InputError(f"diagram point ({b}, {d}) has death before birth")
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def finite(self) -> list[tuple[float, float]]:
        return [p for p in self.pairs if p[1] < INF]

    @property
    def essential(self) -> list[float]:
        return [b for b, d in self.pairs if d == INF]

    def betti(self, t: float) -> int:
        """Number of bars alive at ``t`` (half-open ``[birth, death)``)."""
        return sum(1 for b, d in self.pairs if b <= t < d)


def _filtration(c: FilteredComplex, top_dim: int) -> list[tuple[float, int, tuple[int, ...]]]:
    needed = min(top_dim, c.n_vertices - 1)
    if c.max_dim >= needed:
        cells = [(b, len(s) - 1, s) for b, s in c.simplices() if len(s) - 1 <= top_dim]
    elif c.clique_order is not None:
        cells = [(b, len(s) - 1, s) for b, s in c.simplices()]
        for card in range(c.max_dim + 2, needed + 2):
            for s in itertools.combinations(range(c.n_vertices), card):
                size = c.size_of_mask(mask_of(s))
                if size < INF:
                    cells.append((size, card - 1, s))
    else:
        raise InputError(
            f"homology up to degree {top_dim - 1} needs simplices of dimension {needed} "
            f"(max_dim >= {needed}); complex stores max_dim={c.max_dim}"
        )
    cells.sort(key=lambda t: (t[0], t[1], t[2]))
    return cells


def barcodes(c: FilteredComplex, max_hdim: int = 1) -> list[PersistenceDiagram]:
    """Diagrams for degrees ``0..max_hdim`` by column reduction in filtration order.

    Zero-length bars are dropped.
    """
    if max_hdim < 0:
        raise InputError(f"max_hdim must be >= 0, got {max_hdim}")
    cells = _filtration(c, max_hdim + 1)
    index = {mask_of(s): i for i, (_, _, s) in enumerate(cells)}
    pivot_of: dict[int, int] = {}  # lowest row index -> reduced column
    paired = set()
    out: list[list[tuple[float, float]]] = [[] for _ in range(max_hdim + 1)]
    for j, (birth, dim, s) in enumerate(cells):
        if dim == 0:
            continue
        m = mask_of(s)
        col = 0
        for v in s:
            col |= 1 << index[m ^ (1 << v)]
        while col:
            low = col.bit_length() - 1
            other = pivot_of.get(low)
            if other is None:
                pivot_of[low] = col
                paired.add(low)
                paired.add(j)
                b = cells[low][0]
                if birth > b:
                    out[dim - 1].append((b, birth))
                break
            col ^= other
    for i, (birth, dim, _) in enumerate(cells):
        if i not in paired and dim <= max_hdim:
            out[dim].append((birth, INF))
    return [PersistenceDiagram(k, pts) for k, pts in enumerate(out)]


def _finite_bottleneck(p: np.ndarray, q: np.ndarray) -> float:
    """Bottleneck between finite point sets, diagonal allowed.

    Binary search over candidate radii with a perfect-matching test on the
    usual augmented bipartite graph (each side padded with diagonal copies
    of the other).
    """
    n, m = len(p), len(q)
    if n == 0 and m == 0:
        return 0.0
    half_p = (p[:, 1] - p[:, 0]) / 2 if n else np.zeros(0)
    half_q = (q[:, 1] - q[:, 0]) / 2 if m else np.zeros(0)
    if n and m:
        cross = np.maximum(np.abs(p[:, None, 0] - q[None, :, 0]), np.abs(p[:, None, 1] - q[None, :, 1]))
    else:
        cross = np.zeros((n, m))
    radii = np.unique(np.concatenate([cross.ravel(), half_p, half_q, [0.0]]))

    size = n + m
    # rows: p_0..p_{n-1}, diag(q_0)..diag(q_{m-1}); cols: q_0..q_{m-1}, diag(p_0)..diag(p_{n-1})
    def feasible(r: float) -> bool:
        adj = np.zeros((size, size), dtype=bool)
        adj[:n, :m] = cross <= r
        adj[np.arange(n), m + np.arange(n)] = half_p <= r
        adj[n + np.arange(m), np.arange(m)] = half_q <= r
        adj[n:, m:] = True
        match = maximum_bipartite_matching(csr_matrix(adj.astype(np.int8)), perm_type="column")
        return bool(np.all(match >= 0))

    lo, hi = 0, len(radii) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(radii[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(radii[lo])


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Bottleneck distance; essential bars are matched only among themselves.

    Different numbers of essential bars give ``inf``.  Sorted order is an
    optimal matching for the essential births (points on a line).
    """
    if d1.dim != d2.dim:
        raise InputError(f"bottleneck between diagrams of different degrees {d1.dim} and {d2.dim}")
    e1, e2 = sorted(d1.essential), sorted(d2.essential)
    if len(e1) != len(e2):
        return INF
    ess = max((abs(a - b) for a, b in zip(e1, e2)), default=0.0)
    p = np.array(d1.finite, dtype=float).reshape(-1, 2)
    q = np.array(d2.finite, dtype=float).reshape(-1, 2)
    return max(ess, _finite_bottleneck(p, q))
