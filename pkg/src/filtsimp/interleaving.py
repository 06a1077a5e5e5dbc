"""Degrees, codegrees and exact distances between small filtered complexes.

Everything here is a brute-force oracle: morphism spaces and correspondences
are enumerated, so each entry point checks a feasibility cap first and
raises :class:`FeasibilityError` rather than return an unverified number.

Morphisms ``X -> Y`` are encoded as integers in base ``|Y|``: digit ``i`` is
the image of vertex ``i``.
"""

from __future__ import annotations

import functools
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .complex import INF, FilteredComplex, Morphism, ext_sub, ext_sub_array
from .errors import FeasibilityError, InputError

__all__ = [
    "Correspondence",
    "DistanceResult",
    "codegree",
    "codegree_inf",
    "degree",
    "dgh_exact",
    "dif_exact",
    "dif_strong",
    "distortion",
]

DEFAULT_CAP_MORPHISMS = 4096
DEFAULT_CAP_PAIRS = 10_000_000
DEFAULT_CAP_GH = 12
DEFAULT_CAP_DISTORTION = 20

_CHUNK_ELEMS = 1 << 22


# -- morphism tables -----------------------------------------------------------


def _all_maps(n_src: int, n_tgt: int) -> np.ndarray:
    codes = np.arange(n_tgt**n_src, dtype=np.int64)
    powers = n_tgt ** np.arange(n_src, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % n_tgt


def _encode(maps: np.ndarray, base: int) -> np.ndarray:
    powers = base ** np.arange(maps.shape[-1], dtype=np.int64)
    return maps @ powers


def _image_table(maps: np.ndarray) -> np.ndarray:
    """``img[k, mask]`` = bitmask of the image of ``mask`` under map ``k``."""
    maps = np.atleast_2d(maps)
    n_src = maps.shape[1]
    img = np.zeros((maps.shape[0], 1 << n_src), dtype=np.int64)
    bits = np.int64(1) << maps
    for mask in range(1, 1 << n_src):
        low = mask & -mask
        i = low.bit_length() - 1
        img[:, mask] = img[:, mask ^ low] | bits[:, i]
    return img


@dataclass
class _MorphismSpace:
    """All vertex maps ``source -> target`` with their image tables."""

    source: FilteredComplex
    target: FilteredComplex
    maps: np.ndarray
    img: np.ndarray
    src_masks: np.ndarray  # source subsets of finite size
    src_sizes: np.ndarray
    tgt_table: np.ndarray

    @classmethod
    def build(cls, source: FilteredComplex, target: FilteredComplex, cap: int) -> "_MorphismSpace":
        count = target.n_vertices**source.n_vertices
        if count > cap:
            raise FeasibilityError(
                f"{target.n_vertices}**{source.n_vertices} = {count} morphisms exceed cap {cap}"
            )
        maps = _all_maps(source.n_vertices, target.n_vertices)
        src = source.size_table()
        masks = np.nonzero(np.isfinite(src))[0]
        masks = masks[masks > 0]
        return cls(source, target, maps, _image_table(maps), masks, src[masks], target.size_table())

    @property
    def base(self) -> int:
        return self.target.n_vertices

    def __len__(self) -> int:
        return self.maps.shape[0]

    def cost(self, union_img: np.ndarray) -> np.ndarray:
        """Codegree-style cost of image tables ``union_img[..., mask]``."""
        sizes = self.tgt_table[union_img[..., self.src_masks]]
        return np.maximum((sizes - self.src_sizes).max(axis=-1), 0.0)

    def degrees(self) -> np.ndarray:
        return self.cost(self.img)

    def codegrees_to(self, code: int) -> np.ndarray:
        return self.cost(self.img | self.img[code][None, :])

    def minimax_from(self, source_code: int, target_code: Optional[int] = None):
        """Bottleneck shortest paths from ``source_code`` with codegree edge weights.

        Only edges between maps differing at a single vertex are relaxed: if
        ``h`` agrees with ``f`` or ``g`` at every vertex then ``h(a) ∪ f(a)``
        and ``h(a) ∪ g(a)`` lie inside ``f(a) ∪ g(a)``, so any edge ``f - g``
        splits into single-vertex steps that are no more expensive.
        """
        n = len(self)
        base = self.base
        n_src = self.maps.shape[1]
        powers = base ** np.arange(n_src, dtype=np.int64)
        values = np.arange(base, dtype=np.int64)
        dist = np.full(n, INF)
        done = np.zeros(n, dtype=bool)
        start = float(self.cost(self.img[source_code][None, :])[0])
        dist[source_code] = start
        heap = [(start, source_code)]
        pops = 0
        while heap:
            d, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            pops += 1
            if u == target_code:
                return d, pops
            digits = self.maps[u]
            steps = (values[None, :] - digits[:, None]) * powers[:, None]
            nbrs = (u + steps[steps != 0]).astype(np.int64)
            nbrs = nbrs[~done[nbrs]]
            if nbrs.size == 0:
                continue
            w = self.cost(self.img[nbrs] | self.img[u][None, :])
            cand = np.maximum(w, d)
            better = cand < dist[nbrs]
            for v, cv in zip(nbrs[better].tolist(), cand[better].tolist()):
                dist[v] = cv
                heapq.heappush(heap, (cv, v))
        if target_code is not None:
            return float(dist[target_code]), pops
        return dist, pops


@functools.lru_cache(maxsize=512)
def _self_space(c: FilteredComplex, cap: int) -> _MorphismSpace:
    return _MorphismSpace.build(c, c, cap)


@functools.lru_cache(maxsize=512)
def _identity_costs(c: FilteredComplex, cap: int, strong: bool) -> np.ndarray:
    """``codeg∞(h, id)`` (or ``codeg(h, id)`` when ``strong``) for every self-map ``h``."""
    space = _self_space(c, cap)
    ident = int(_encode(np.arange(c.n_vertices, dtype=np.int64), c.n_vertices))
    if strong:
        out = space.codegrees_to(ident)
    else:
        out, _ = space.minimax_from(ident)
    out.setflags(write=False)
    return out


def _check_same_ends(f: Morphism, g: Morphism) -> None:
    if f.source != g.source or f.target != g.target:
        raise InputError("codegree needs two morphisms with the same source and target")


def _source_masks(c: FilteredComplex) -> tuple[np.ndarray, np.ndarray]:
    tab = c.size_table()
    masks = np.nonzero(np.isfinite(tab))[0]
    masks = masks[masks > 0]
    return masks, tab[masks]


# -- degree and codegree -------------------------------------------------------


def degree(f: Morphism) -> float:
    """Worst size inflation ``size(f(a)) - size(a)`` over source simplices, clamped at 0.

    Source subsets of infinite size are skipped: against them the difference
    is ``-inf`` or ``0``.
    """
    return codegree(f, f)


def codegree(f: Morphism, g: Morphism) -> float:
    """Worst ``size(f(a) ∪ g(a)) - size(a)`` over source simplices, clamped at 0."""
    _check_same_ends(f, g)
    masks, sizes = _source_masks(f.source)
    img = _image_table(np.array([f.map, g.map], dtype=np.int64))
    union = img[0, masks] | img[1, masks]
    tgt = f.target.size_table()[union]
    return max(float((tgt - sizes).max()), 0.0)


def codegree_inf(f: Morphism, g: Morphism, cap: int = DEFAULT_CAP_MORPHISMS) -> float:
    """Minimax codegree over chains of morphisms from ``f`` to ``g``."""
    _check_same_ends(f, g)
    space = _MorphismSpace.build(f.source, f.target, cap)
    base = f.target.n_vertices
    fc = int(_encode(np.array(f.map, dtype=np.int64), base))
    gc = int(_encode(np.array(g.map, dtype=np.int64), base))
    value, _ = space.minimax_from(fc, gc)
    return float(value)


# -- correspondences -----------------------------------------------------------


@dataclass(frozen=True)
class Correspondence:
    """A relation between two vertex sets, surjective onto both."""

    pairs: tuple[tuple[int, int], ...]

    def __init__(self, pairs: Iterable[tuple[int, int]]):
        object.__setattr__(self, "pairs", tuple(sorted(set((int(x), int(y)) for x, y in pairs))))

    def check(self, a: FilteredComplex, b: FilteredComplex) -> None:
        left = {x for x, _ in self.pairs}
        right = {y for _, y in self.pairs}
        for x, y in self.pairs:
            if not (0 <= x < a.n_vertices) or not (0 <= y < b.n_vertices):
                raise InputError(f"correspondence pair {(x, y)} names an unknown vertex")
        missing_a = set(range(a.n_vertices)) - left
        missing_b = set(range(b.n_vertices)) - right
        if missing_a:
            raise InputError(f"correspondence misses vertex {min(missing_a)} of the first complex")
        if missing_b:
            raise InputError(f"correspondence misses vertex {min(missing_b)} of the second complex")

    @classmethod
    def from_maps(cls, f: Sequence[int], g: Sequence[int]) -> "Correspondence":
        """Smallest relation containing the graph of ``f`` and the transposed graph of ``g``."""
        return cls([(x, y) for x, y in enumerate(f)] + [(x, y) for y, x in enumerate(g)])

    def __len__(self) -> int:
        return len(self.pairs)


def distortion(
    R: Correspondence,
    a: FilteredComplex,
    b: FilteredComplex,
    cap: int = DEFAULT_CAP_DISTORTION,
    fast: bool = True,
) -> float:
    """Max over non-empty ``beta ⊆ R`` of ``|size_a(π1 beta) - size_b(π2 beta)|``.

    With ``fast`` and two 1-clique complexes only ``|beta| <= 2`` is scanned;
    sizes there are maxima over pairs, and ``|max a_i - max b_i| <= max |a_i - b_i|``.
    """
    if not isinstance(R, Correspondence):
        R = Correspondence(R)
    R.check(a, b)
    if fast and a.clique_order == 1 and b.clique_order == 1:
        best = 0.0
        for (x1, y1), (x2, y2) in itertools.combinations_with_replacement(R.pairs, 2):
            d = abs(ext_sub(a.size_of_mask((1 << x1) | (1 << x2)), b.size_of_mask((1 << y1) | (1 << y2))))
            best = max(best, d)
        return best
    r = len(R)
    if r > cap:
        raise FeasibilityError(f"distortion over 2**{r} subsets exceeds cap |R| <= {cap}")
    idx = np.arange(1, 1 << r, dtype=np.int64)
    left = np.zeros_like(idx)
    right = np.zeros_like(idx)
    for i, (x, y) in enumerate(R.pairs):
        on = ((idx >> i) & 1).astype(bool)
        left[on] |= 1 << x
        right[on] |= 1 << y
    diff = np.abs(ext_sub_array(a.size_table()[left], b.size_table()[right]))
    return float(diff.max())


# -- exact distances -----------------------------------------------------------


@dataclass
class DistanceResult:
    value: float
    witness: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)

    def __float__(self) -> float:
        return float(self.value)


class _Found(Exception):
    pass


def dgh_exact(a: FilteredComplex, b: FilteredComplex, cap: int = DEFAULT_CAP_GH) -> DistanceResult:
    """Half the least distortion over all correspondences, by branch and bound.

    Distortion only grows when pairs are added, so the search ranges over
    relations ``graph(f) ∪ {(g(y), y) : y not hit by f}``; every
    correspondence contains one of these.
    """
    total = a.n_vertices + b.n_vertices
    if total > cap:
        raise FeasibilityError(f"dGH enumeration limited to {cap} total vertices, got {total}")
    swapped = a.n_vertices > b.n_vertices
    if swapped:
        a, b = b, a
    nv, nw = a.n_vertices, b.n_vertices
    ta, tb = a.size_table(), b.size_table()

    keys = np.arange(1 << (nv + nw), dtype=np.int64)
    lo = keys & ((1 << nv) - 1)
    hi = keys >> nv
    dis_table = np.abs(ext_sub_array(ta[lo], tb[hi]))
    dis_table = dis_table.tolist()

    def pair_key(x, y):
        return (1 << x) | (1 << (nv + y))

    vert_cost = [[dis_table[pair_key(x, y)] for y in range(nw)] for x in range(nv)]
    choices_x = [sorted(range(nw), key=lambda y: (vert_cost[x][y], y)) for x in range(nv)]
    choices_y = [sorted(range(nv), key=lambda x: (vert_cost[x][y], x)) for y in range(nw)]
    lb_x = [min(row) for row in vert_cost]
    lb_y = [min(vert_cost[x][y] for x in range(nv)) for y in range(nw)]
    # suffix maxima of per-vertex lower bounds
    rest_x = [0.0] * (nv + 1)
    for i in range(nv - 1, -1, -1):
        rest_x[i] = max(rest_x[i + 1], lb_x[i])
    floor = dis_table[(1 << (nv + nw)) - 1]

    best = [INF, None]
    nodes = [0]

    def extend(cur: frozenset, curdis: float, key: int):
        new = {s | key for s in cur}
        new.add(key)
        new -= cur
        d = curdis
        for s in new:
            v = dis_table[s]
            if v > d:
                d = v
        return cur | new, d

    def search_y(uncovered: list, j: int, cur, curdis, R):
        nodes[0] += 1
        if j == len(uncovered):
            if curdis < best[0]:
                best[0], best[1] = curdis, list(R)
                if curdis <= floor:
                    raise _Found
            return
        y = uncovered[j]
        for x in choices_y[y]:
            if vert_cost[x][y] >= best[0]:
                break
            nxt, d = extend(cur, curdis, pair_key(x, y))
            if d < best[0]:
                R.append((x, y))
                search_y(uncovered, j + 1, nxt, d, R)
                R.pop()

    def search_x(i: int, cur, curdis, R, hit: int):
        nodes[0] += 1
        if max(curdis, rest_x[i]) >= best[0]:
            return
        if i == nv:
            uncovered = [y for y in range(nw) if not (hit >> y) & 1]
            if any(lb_y[y] >= best[0] for y in uncovered):
                return
            search_y(uncovered, 0, cur, curdis, R)
            return
        for y in choices_x[i]:
            if vert_cost[i][y] >= best[0]:
                break
            nxt, d = extend(cur, curdis, pair_key(i, y))
            if d < best[0]:
                R.append((i, y))
                search_x(i + 1, nxt, d, R, hit | (1 << y))
                R.pop()

    try:
        search_x(0, frozenset(), 0.0, [], 0)
    except _Found:
        pass
    value, pairs = best
    if swapped:
        pairs = [(y, x) for x, y in pairs]
    return DistanceResult(
        value / 2,
        {"correspondence": sorted(pairs), "distortion": value},
        {"nodes": nodes[0], "lower_bound": floor / 2},
    )


def _interleaving(a, b, strong, cap_morphisms, cap_pairs) -> DistanceResult:
    na, nb = a.n_vertices, b.n_vertices
    n_pairs = nb**na * na**nb
    if n_pairs > cap_pairs:
        raise FeasibilityError(f"{n_pairs} morphism pairs exceed cap {cap_pairs}")
    F = _MorphismSpace.build(a, b, cap_morphisms)
    G = _MorphismSpace.build(b, a, cap_morphisms)
    cost_a = _identity_costs(a, cap_morphisms, strong)
    cost_b = _identity_costs(b, cap_morphisms, strong)
    deg_f = F.degrees()
    deg_g = G.degrees()
    f_order = np.argsort(deg_f, kind="stable")
    g_order = np.argsort(deg_g, kind="stable")
    g_sorted_deg = deg_g[g_order]
    pow_a = na ** np.arange(na, dtype=np.int64)
    pow_b = nb ** np.arange(nb, dtype=np.int64)

    best = INF
    witness = None
    evaluated = 0
    chunk = max(1, _CHUNK_ELEMS // max(1, len(G) * max(na, nb)))
    for start in range(0, len(F), chunk):
        fs = f_order[start : start + chunk]
        fs = fs[deg_f[fs] < best]
        if fs.size == 0:
            break
        n_g = int(np.searchsorted(g_sorted_deg, best, side="left")) if best < INF else len(G)
        if n_g == 0:
            break
        gs = g_order[:n_g]
        fmaps = F.maps[fs]  # (cf, na) vertices of b
        gmaps = G.maps[gs]  # (cg, nb) vertices of a
        gf = gmaps[:, fmaps] @ pow_a  # (cg, cf): g∘f as self-map of a
        fg = fmaps[:, gmaps] @ pow_b  # (cf, cg): f∘g as self-map of b
        vals = np.maximum.reduce(
            [
                np.broadcast_to(deg_f[fs][None, :], gf.shape),
                np.broadcast_to(deg_g[gs][:, None], gf.shape),
                cost_a[gf] / 2,
                cost_b[fg].T / 2,
            ]
        )
        evaluated += vals.size
        j, i = np.unravel_index(int(np.argmin(vals)), vals.shape)
        if vals[j, i] < best:
            best = float(vals[j, i])
            witness = (tuple(int(x) for x in fmaps[i]), tuple(int(x) for x in gmaps[j]))
            if best <= 0:
                break
    return DistanceResult(
        best,
        {"f": list(witness[0]), "g": list(witness[1])} if witness else {},
        {"morphisms_ab": len(F), "morphisms_ba": len(G), "pairs_evaluated": evaluated, "pairs_total": n_pairs},
    )


def dif_exact(
    a: FilteredComplex,
    b: FilteredComplex,
    cap_morphisms: int = DEFAULT_CAP_MORPHISMS,
    cap_pairs: int = DEFAULT_CAP_PAIRS,
) -> DistanceResult:
    """Least ``eps`` such that some ``f: a -> b``, ``g: b -> a`` form an ``eps``-interleaving.

    That is ``deg f, deg g <= eps`` and both round trips are within
    ``codeg∞ <= 2 eps`` of the identity.
    """
    return _interleaving(a, b, False, cap_morphisms, cap_pairs)


def dif_strong(
    a: FilteredComplex,
    b: FilteredComplex,
    cap_morphisms: int = DEFAULT_CAP_MORPHISMS,
    cap_pairs: int = DEFAULT_CAP_PAIRS,
) -> DistanceResult:
    """Like :func:`dif_exact` with plain codegree on the round trips; not a metric."""
    return _interleaving(a, b, True, cap_morphisms, cap_pairs)


def identity_codegree_inf(c: FilteredComplex, cap: int = DEFAULT_CAP_MORPHISMS) -> np.ndarray:
    """``codeg∞(h, id)`` for every self-map ``h`` of ``c``, indexed by map code."""
    return _identity_costs(c, cap, False)
