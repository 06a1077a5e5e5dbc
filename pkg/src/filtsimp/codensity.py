"""Vertex quasi-distances and codensities.

``delta(v, w)`` is the largest amount by which swapping ``v`` for ``w`` can
raise the size of a simplex: the max over non-empty ``alpha`` of
``size(alpha + w) - size(alpha + v)``, clamped at zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .complex import DEFAULT_CAP_BRUTE, INF, FilteredComplex, ext_sub, ext_sub_array, mask_of
from .errors import InputError

__all__ = [
    "CodensityMatrix",
    "codensity_matrix",
    "codensity_of",
    "min_codensity",
    "vertex_quasi_distance",
    "vertex_quasi_distance_kclique",
]


def _check_vertex(c: FilteredComplex, v: int) -> None:
    if not (0 <= v < c.n_vertices):
        raise InputError(f"unknown vertex {v} (n_vertices={c.n_vertices})")


def _brute_row(tab: np.ndarray, n: int, v: int) -> np.ndarray:
    masks = np.arange(1, 1 << n, dtype=np.int64)
    base = tab[masks | (1 << v)]
    bits = (np.int64(1) << np.arange(n, dtype=np.int64))[:, None]
    diff = ext_sub_array(tab[masks[None, :] | bits], np.broadcast_to(base, (n, masks.size)).copy())
    row = np.maximum(diff.max(axis=1), 0.0)
    row[v] = 0.0
    return row


def vertex_quasi_distance(
    c: FilteredComplex, v: int, w: int, cap: int = DEFAULT_CAP_BRUTE
) -> float:
    """Brute force over every non-empty vertex subset (``2**n`` terms)."""
    _check_vertex(c, v)
    _check_vertex(c, w)
    if v == w:
        return 0.0
    tab = c.size_table(cap)
    masks = np.arange(1, 1 << c.n_vertices, dtype=np.int64)
    diff = ext_sub_array(tab[masks | (1 << w)], tab[masks | (1 << v)])
    return max(float(diff.max()), 0.0)


def vertex_quasi_distance_kclique(c: FilteredComplex, v: int, w: int, k: int) -> float:
    """Quasi-distance on a ``k``-clique complex: only ``|alpha| <= k`` matters."""
    _check_vertex(c, v)
    _check_vertex(c, w)
    if c.clique_order is None or c.clique_order > k:
        raise InputError(
            f"k-clique fast path with k={k} needs a complex of clique order <= {k}, got {c.clique_order}"
        )
    if v == w:
        return 0.0
    best = 0.0
    bv, bw = 1 << v, 1 << w
    size = c.size_of_mask
    for card in range(1, k + 1):
        for alpha in itertools.combinations(range(c.n_vertices), card):
            m = mask_of(alpha)
            d = ext_sub(size(m | bw), size(m | bv))
            if d > best:
                best = d
                if best == INF:
                    return best
    return best


@dataclass(frozen=True)
class CodensityMatrix:
    """``entries[i, j]`` is the quasi-distance from vertex ``i`` to vertex ``j``."""

    labels: tuple[int, ...]
    entries: np.ndarray
    mode: str

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def delete(self, i: int) -> "CodensityMatrix":
        """Drop row and column ``i``."""
        keep = [j for j in range(self.n) if j != i]
        return CodensityMatrix(
            tuple(self.labels[j] for j in keep),
            self.entries[np.ix_(keep, keep)].copy(),
            self.mode,
        )


def _resolve_mode(c: FilteredComplex, mode) -> tuple[str, Optional[int]]:
    if mode in (None, "auto"):
        if c.clique_order is not None:
            return "kclique", c.clique_order
        return "brute", None
    if mode == "brute":
        return "brute", None
    if isinstance(mode, int):
        return "kclique", mode
    if isinstance(mode, str) and mode.startswith("kclique"):
        k = mode[len("kclique"):].strip("():= ")
        return "kclique", int(k) if k else c.clique_order
    raise InputError(f"unknown codensity mode {mode!r}")


def codensity_matrix(c: FilteredComplex, mode="auto", cap: int = DEFAULT_CAP_BRUTE) -> CodensityMatrix:
    """All pairwise quasi-distances.

    ``mode`` is ``"brute"``, an integer ``k`` (k-clique fast path) or
    ``"auto"``, which takes the fast path whenever the complex declares a
    clique order.
    """
    kind, k = _resolve_mode(c, mode)
    n = c.n_vertices
    if kind == "brute":
        tab = c.size_table(cap)
        q = np.vstack([_brute_row(tab, n, v) for v in range(n)])
        label = "brute"
    else:
        q = np.zeros((n, n))
        for v in range(n):
            for w in range(n):
                if v != w:
                    q[v, w] = vertex_quasi_distance_kclique(c, v, w, k)
        label = f"kclique({k})"
    return CodensityMatrix(tuple(c.labels), q, label)


def codensity_of(m: CodensityMatrix, v: int) -> float:
    """Min over ``w != v`` of ``entries[v, w]``; ``inf`` for a one-vertex matrix."""
    if m.n == 1:
        return INF
    row = np.delete(m.entries[v], v)
    return float(row.min())


def min_codensity(m: CodensityMatrix) -> float:
    if m.n == 1:
        return INF
    return min(codensity_of(m, v) for v in range(m.n))


def codensities(m: CodensityMatrix) -> np.ndarray:
    return np.array([codensity_of(m, v) for v in range(m.n)])


def is_simple(c: FilteredComplex, mode="auto", cap: int = DEFAULT_CAP_BRUTE) -> bool:
    return min_codensity(codensity_matrix(c, mode, cap)) > 0

