"""Filtered simplicial complexes encoded by their size function.

A complex on vertices ``0..n-1`` stores a finite birth time for every listed
simplex.  Simplices that are not listed have size ``+inf``, except above
``max_dim`` in a ``k``-clique complex, where the size is the maximum over the
``(k+1)``-element faces.

Internally simplices are bitmasks (bit ``i`` set iff vertex ``i`` belongs to
the simplex); the public surface speaks sorted vertex tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import FeasibilityError, InputError

INF = math.inf

# brute-force enumeration over all vertex subsets
DEFAULT_CAP_BRUTE = 20
DEFAULT_CAP_ISO = 10


def ext_sub(a: float, b: float) -> float:
    """``a - b`` on the extended reals with the convention ``inf - inf = 0``."""
    if a == INF and b == INF:
        return 0.0
    return a - b


def ext_sub_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    both = np.isinf(a) & np.isinf(b)
    with np.errstate(invalid="ignore"):
        out = a - b
    out[both] = 0.0
    return out


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def vertices_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class FilteredComplex:
    """Immutable filtered simplicial complex given by a size function.

    Parameters
    ----------
    n_vertices:
        Number of vertices; ids are ``0..n_vertices-1``.
    births:
        Mapping from simplices (any iterable of vertex ids) to finite birth
        times.  Faces that are omitted inherit the minimum birth over the
        listed cofaces containing them.
    max_dim:
        Largest stored simplex dimension.  Defaults to the largest listed
        dimension; always clipped to ``n_vertices - 1``.
    clique_order:
        If set to ``k``, the complex is declared ``k``-clique: sizes above
        ``max_dim`` are derived from the ``(k+1)``-element faces.
    labels:
        Original vertex names, used to trace vertices through restrictions.
    """

    __slots__ = ("n_vertices", "max_dim", "clique_order", "labels", "_births", "_hash", "_table")

    def __init__(
        self,
        n_vertices: int,
        births: Mapping[Iterable[int], float],
        max_dim: Optional[int] = None,
        clique_order: Optional[int] = None,
        labels: Optional[Sequence[int]] = None,
    ):
        n = int(n_vertices)
        if n < 1:
            raise InputError("a filtered complex needs at least one vertex")
        table: dict[int, float] = {}
        for simplex, birth in births.items():
            verts = tuple(simplex)
            if not verts:
                raise InputError("empty simplex listed")
            if len(set(verts)) != len(verts):
                raise InputError(f"simplex {verts} repeats a vertex")
            for v in verts:
                if not (0 <= int(v) < n) or int(v) != v:
                    raise InputError(f"simplex {verts} uses unknown vertex {v} (n_vertices={n})")
            b = float(birth)
            if not math.isfinite(b):
                raise InputError(f"simplex {tuple(sorted(verts))} has non-finite birth {birth!r}")
            m = mask_of(int(v) for v in verts)
            if m in table and table[m] != b:
                raise InputError(f"simplex {tuple(sorted(verts))} listed twice with different births")
            table[m] = b

        listed_dim = max((popcount(m) - 1 for m in table), default=0)
        if max_dim is None:
            max_dim = listed_dim
        elif max_dim < listed_dim:
            raise InputError(f"max_dim={max_dim} but a simplex of dimension {listed_dim} is listed")
        max_dim = min(int(max_dim), n - 1)

        # omitted faces inherit the minimum birth over listed cofaces
        derived: dict[int, float] = {}
        for m, b in table.items():
            sub = (m - 1) & m
            while sub:
                if sub not in table and b < derived.get(sub, INF):
                    derived[sub] = b
                sub = (sub - 1) & m
        table.update(derived)

        for v in range(n):
            if (1 << v) not in table:
                raise InputError(f"vertex {v} never enters the filtration")

        if clique_order is not None:
            clique_order = int(clique_order)
            if clique_order < 1:
                raise InputError(f"clique_order must be positive, got {clique_order}")
            if clique_order > max_dim and max_dim < n - 1:
                raise InputError(
                    f"clique_order={clique_order} needs simplices up to dimension {clique_order} stored (max_dim={max_dim})"
                )

        if labels is None:
            labels = tuple(range(n))
        else:
            labels = tuple(int(x) for x in labels)
            if len(labels) != n:
                raise InputError(f"{len(labels)} labels for {n} vertices")

        self.n_vertices = n
        self.max_dim = max_dim
        self.clique_order = clique_order
        self.labels = labels
        self._births = table
        self._hash = None
        self._table = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_masks(cls, n_vertices, births: Mapping[int, float], **kwargs) -> "FilteredComplex":
        return cls(n_vertices, {vertices_of(m): b for m, b in births.items()}, **kwargs)

    def replace(self, **kwargs) -> "FilteredComplex":
        """Copy with some constructor arguments replaced."""
        args = dict(
            n_vertices=self.n_vertices,
            births=self.births,
            max_dim=self.max_dim,
            clique_order=self.clique_order,
            labels=self.labels,
        )
        args.update(kwargs)
        return FilteredComplex(**args)

    # -- accessors ------------------------------------------------------------

    @property
    def births(self) -> dict[tuple[int, ...], float]:
        return {vertices_of(m): b for m, b in self._births.items()}

    @property
    def birth_masks(self) -> Mapping[int, float]:
        return self._births

    @property
    def full_mask(self) -> int:
        return (1 << self.n_vertices) - 1

    def __len__(self) -> int:
        return len(self._births)

    def simplices(self, dim: Optional[int] = None) -> list[tuple[float, tuple[int, ...]]]:
        """Listed simplices as ``(birth, vertices)`` in filtration order.

        Ties are broken by dimension, then lexicographically on vertices.
        """
        out = [
            (b, vertices_of(m))
            for m, b in self._births.items()
            if dim is None or popcount(m) == dim + 1
        ]
        out.sort(key=lambda t: (t[0], len(t[1]), t[1]))
        return out

    def size_of(self, simplex: Iterable[int]) -> float:
        verts = tuple(simplex)
        if not verts:
            raise InputError("size of the empty simplex is undefined")
        for v in verts:
            if not (0 <= v < self.n_vertices):
                raise InputError(f"unknown vertex {v} (n_vertices={self.n_vertices})")
        return self.size_of_mask(mask_of(verts))

    def size_of_mask(self, mask: int) -> float:
        b = self._births.get(mask)
        if b is not None:
            return b
        card = popcount(mask)
        k = self.clique_order
        if k is None or card <= self.max_dim + 1:
            return INF
        best = -INF
        for face in itertools.combinations(vertices_of(mask), k + 1):
            s = self._births.get(mask_of(face), INF)
            if s > best:
                best = s
                if best == INF:
                    break
        return best

    def size_table(self, cap: int = DEFAULT_CAP_BRUTE) -> np.ndarray:
        """Sizes of all ``2**n`` vertex subsets, indexed by bitmask (entry 0 unused)."""
        if self.n_vertices > cap:
            raise FeasibilityError(
                f"full size table needs 2**{self.n_vertices} entries; cap is n <= {cap}"
            )
        if self._table is None:
            n = self.n_vertices
            tab = np.full(1 << n, INF)
            if self._births:
                keys = np.fromiter(self._births.keys(), dtype=np.int64, count=len(self._births))
                vals = np.fromiter(self._births.values(), dtype=float, count=len(self._births))
                tab[keys] = vals
            if self.clique_order is not None and self.max_dim + 1 < n:
                masks = np.arange(1 << n, dtype=np.int64)
                pc = np.bitwise_count(masks)
                for p in range(self.max_dim + 2, n + 1):
                    layer = masks[pc == p]
                    acc = np.full(layer.shape, -INF)
                    for i in range(n):
                        bit = 1 << i
                        sel = (layer & bit) != 0
                        np.maximum.at(acc, np.nonzero(sel)[0], tab[layer[sel] ^ bit])
                    tab[layer] = acc
            tab.setflags(write=False)
            self._table = tab
        return self._table

    def finite_masks(self, max_card: Optional[int] = None) -> Iterator[tuple[int, float]]:
        """All vertex subsets of finite size with at most ``max_card`` vertices."""
        if max_card is None:
            max_card = self.n_vertices
        top = min(max_card, self.max_dim + 1)
        for m, b in self._births.items():
            if popcount(m) <= top:
                yield m, b
        if self.clique_order is not None and max_card > self.max_dim + 1:
            for card in range(self.max_dim + 2, min(max_card, self.n_vertices) + 1):
                for verts in itertools.combinations(range(self.n_vertices), card):
                    m = mask_of(verts)
                    s = self.size_of_mask(m)
                    if s < INF:
                        yield m, s

    # -- identity -------------------------------------------------------------

    def _key(self):
        return (
            self.n_vertices,
            frozenset(self._births.items()),
            self.max_dim,
            self.clique_order,
            self.labels,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return (
            f"FilteredComplex(n_vertices={self.n_vertices}, simplices={len(self._births)}, "
            f"max_dim={self.max_dim}, clique_order={self.clique_order})"
        )


@dataclass
class ValidationReport:
    ok: bool
    violations: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    clique_violations: list[tuple[int, ...]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate(c: FilteredComplex) -> ValidationReport:
    """Check monotonicity (and the declared clique property) on listed simplices.

    Every ``(face, coface)`` pair with ``size(face) > size(coface)`` is reported.
    """
    births = c.birth_masks
    violations = []
    for m, b in births.items():
        sub = (m - 1) & m
        while sub:
            s = births.get(sub, INF)
            if s > b:
                violations.append((vertices_of(sub), vertices_of(m)))
            sub = (sub - 1) & m
    violations.sort(key=lambda p: (len(p[1]), p[1], len(p[0]), p[0]))

    clique_bad = []
    k = c.clique_order
    if k is not None:
        for m, b in births.items():
            if popcount(m) > k + 1:
                expect = max(
                    births.get(mask_of(f), INF)
                    for f in itertools.combinations(vertices_of(m), k + 1)
                )
                if expect != b:
                    clique_bad.append(vertices_of(m))
        clique_bad.sort(key=lambda s: (len(s), s))
    return ValidationReport(not violations and not clique_bad, violations, clique_bad)


def size_of(c: FilteredComplex, simplex: Iterable[int]) -> float:
    return c.size_of(simplex)


def restrict(c: FilteredComplex, keep: Iterable[int]) -> FilteredComplex:
    """Full filtered subcomplex on ``keep``; vertices are renumbered in increasing order.

    The original names survive in ``labels``.
    """
    keep = sorted(set(int(v) for v in keep))
    if not keep:
        raise InputError("restriction to an empty vertex set")
    for v in keep:
        if not (0 <= v < c.n_vertices):
            raise InputError(f"cannot keep unknown vertex {v}")
    keep_mask = mask_of(keep)
    pos = {v: i for i, v in enumerate(keep)}
    births = {}
    for m, b in c.birth_masks.items():
        if m & ~keep_mask == 0:
            births[tuple(pos[v] for v in vertices_of(m))] = b
    return FilteredComplex(
        len(keep),
        births,
        max_dim=min(c.max_dim, len(keep) - 1),
        clique_order=c.clique_order,
        labels=[c.labels[v] for v in keep],
    )


def remove_vertex(c: FilteredComplex, v: int) -> FilteredComplex:
    return restrict(c, [u for u in range(c.n_vertices) if u != v])


def is_isomorphic(
    a: FilteredComplex, b: FilteredComplex, cap: int = DEFAULT_CAP_ISO
) -> Optional[tuple[int, ...]]:
    """Size-preserving bijection ``sigma`` (``sigma[i]`` = image of ``a``'s vertex ``i``), or ``None``.

    Compares full size functions, so it is restricted to ``n <= cap`` vertices.
    """
    if a.n_vertices != b.n_vertices:
        return None
    n = a.n_vertices
    if n > cap:
        raise FeasibilityError(f"isomorphism search limited to {cap} vertices, got {n}")
    ta = a.size_table(cap)
    tb = b.size_table(cap)
    if sorted(ta[1:].tolist()) != sorted(tb[1:].tolist()):
        return None

    masks = np.arange(1 << n)

    def signature(tab, v):
        return tuple(sorted(tab[masks[(masks >> v) & 1 == 1]].tolist()))

    sig_a = [signature(ta, v) for v in range(n)]
    sig_b = [signature(tb, v) for v in range(n)]
    if sorted(sig_a) != sorted(sig_b):
        return None
    candidates = [[w for w in range(n) if sig_b[w] == sig_a[v]] for v in range(n)]

    sigma = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        # every subset of {0..i} containing i
        for sub in range(1 << i):
            m = sub | (1 << i)
            img = 0
            for v in vertices_of(m):
                img |= 1 << sigma[v]
            if ta[m] != tb[img]:
                return False
        return True

    def search(i: int) -> bool:
        if i == n:
            return True
        for w in candidates[i]:
            if used[w]:
                continue
            sigma[i] = w
            used[w] = True
            if consistent(i) and search(i + 1):
                return True
            used[w] = False
        sigma[i] = -1
        return False

    return tuple(sigma) if search(0) else None


@dataclass(frozen=True, eq=False)
class Morphism:
    """A vertex map ``source -> target``; ``map[i]`` is the image of vertex ``i``."""

    source: FilteredComplex
    target: FilteredComplex
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(int(x) for x in self.map))
        if len(self.map) != self.source.n_vertices:
            raise InputError(
                f"morphism map has {len(self.map)} entries for {self.source.n_vertices} source vertices"
            )
        for v, w in enumerate(self.map):
            if not (0 <= w < self.target.n_vertices):
                raise InputError(f"morphism sends vertex {v} to unknown target vertex {w}")

    @classmethod
    def identity(cls, c: FilteredComplex) -> "Morphism":
        return cls(c, c, tuple(range(c.n_vertices)))

    def image_mask(self, mask: int) -> int:
        out = 0
        for v in vertices_of(mask):
            out |= 1 << self.map[v]
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return self.map == other.map and self.source == other.source and self.target == other.target

    def __hash__(self) -> int:
        return hash(self.map)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g ∘ f`` (apply ``f`` first)."""
    if f.target is not g.source and f.target != g.source:
        raise InputError("cannot compose: target of f differs from source of g")
    return Morphism(f.source, g.target, tuple(g.map[w] for w in f.map))
