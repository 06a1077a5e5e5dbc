"""Greedy vertex removal with an accumulated interleaving-distance certificate, and cores."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .codensity import codensity_matrix, codensity_of
from .complex import DEFAULT_CAP_BRUTE, INF, FilteredComplex, Morphism, restrict
from .errors import FeasibilityError, InputError

__all__ = ["SimplificationLog", "Step", "core", "greedy_simplify", "removal_witness"]


@dataclass(frozen=True)
class Step:
    removed: int  # original label
    surrogate: int  # original label
    cost: float


@dataclass
class SimplificationLog:
    steps: list[Step] = field(default_factory=list)
    recompute: bool = False
    mode: str = "brute"
    labels: tuple[int, ...] = ()  # original labels of the surviving vertices

    @property
    def error_bound(self) -> float:
        return float(sum(s.cost for s in self.steps))

    def to_json(self) -> dict:
        return {
            "steps": [
                {"removed": s.removed, "surrogate": s.surrogate, "cost": _num(s.cost)} for s in self.steps
            ],
            "error_bound": _num(self.error_bound),
            "recompute": self.recompute,
            "mode": self.mode,
            "relabeling": {str(i): lab for i, lab in enumerate(self.labels)},
        }


def _num(x: float):
    return "inf" if x == INF else x


def _min_entry(q: np.ndarray) -> Optional[tuple[int, int]]:
    """Smallest finite off-diagonal entry, ties to the smallest row then column."""
    n = q.shape[0]
    off = q.copy()
    off[np.arange(n), np.arange(n)] = INF
    if not np.isfinite(off).any():
        return None
    flat = int(np.argmin(off))  # row-major: first minimum is lexicographically smallest
    return divmod(flat, n)


def _surrogate(q: np.ndarray, v: int) -> int:
    """Cheapest target for ``v``; ties go to the smallest reverse entry, then the smallest index."""
    keys = [(q[v, w], q[w, v], w) for w in range(q.shape[0]) if w != v]
    return min(keys)[2]


def greedy_simplify(
    c: FilteredComplex,
    n_remove: int,
    recompute: bool = False,
    mode="auto",
    cap: int = DEFAULT_CAP_BRUTE,
) -> tuple[FilteredComplex, SimplificationLog]:
    """Remove ``n_remove`` vertices, each time the row of the cheapest codensity entry.

    Without ``recompute`` the initial matrix is reused with rows and columns
    deleted; entries can only shrink under restriction, so the summed costs
    still bound the interleaving distance to the result.
    """
    if not (1 <= n_remove <= c.n_vertices - 1):
        raise InputError(f"n_remove must be in 1..{c.n_vertices - 1}, got {n_remove}")
    q = codensity_matrix(c, mode, cap)
    log = SimplificationLog(recompute=recompute, mode=q.mode)
    current = c
    for _ in range(n_remove):
        ij = _min_entry(q.entries)
        if ij is None:
            raise FeasibilityError("every off-diagonal codensity entry is +inf; no vertex can be removed")
        i, j = ij
        log.steps.append(Step(q.labels[i], q.labels[j], float(q.entries[i, j])))
        current = restrict(current, [v for v in range(current.n_vertices) if v != i])
        q = codensity_matrix(current, mode, cap) if recompute else q.delete(i)
    log.labels = tuple(current.labels)
    return current, log


def core(
    c: FilteredComplex,
    mode="auto",
    cap: int = DEFAULT_CAP_BRUTE,
    rng: Optional[random.Random] = None,
) -> tuple[FilteredComplex, SimplificationLog]:
    """Strip zero-codensity vertices until the complex is simple.

    The smallest such vertex goes first unless ``rng`` is given, in which
    case a random one does; the result is the same up to isomorphism.
    """
    log = SimplificationLog(recompute=True)
    current = c
    while current.n_vertices > 1:
        q = codensity_matrix(current, mode, cap)
        log.mode = q.mode
        free = [v for v in range(current.n_vertices) if codensity_of(q, v) == 0]
        if not free:
            break
        v = rng.choice(free) if rng is not None else free[0]
        w = _surrogate(q.entries, v)
        log.steps.append(Step(current.labels[v], current.labels[w], 0.0))
        current = restrict(current, [u for u in range(current.n_vertices) if u != v])
    log.labels = tuple(current.labels)
    return current, log


def removal_witness(
    c: FilteredComplex, v: int, mode="auto", cap: int = DEFAULT_CAP_BRUTE
) -> tuple[Morphism, Morphism, float]:
    """The interleaving pair behind removing ``v``: ``f`` sends ``v`` to its cheapest surrogate, ``iota`` includes.

    Returns ``(f, iota, codensity of v)``.
    """
    if c.n_vertices < 2:
        raise InputError("removal needs at least two vertices")
    if not (0 <= v < c.n_vertices):
        raise InputError(f"unknown vertex {v}")
    q = codensity_matrix(c, mode, cap)
    bound = codensity_of(q, v)
    if bound == INF:
        raise FeasibilityError(f"vertex {v} has infinite codensity")
    w = _surrogate(q.entries, v)
    sub = restrict(c, [u for u in range(c.n_vertices) if u != v])
    # position of each kept vertex in the subcomplex
    pos = {u: i for i, u in enumerate(u for u in range(c.n_vertices) if u != v)}
    f = Morphism(c, sub, tuple(pos[w] if u == v else pos[u] for u in range(c.n_vertices)))
    iota = Morphism(sub, c, tuple(u for u in range(c.n_vertices) if u != v))
    return f, iota, bound

