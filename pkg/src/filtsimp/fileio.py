"""Text formats: filtration files, distance CSVs, codensity CSVs and diagrams.

A filtration file holds one simplex per line, ``birth v0 v1 ... vk``; ``#``
starts a comment.  A comment of the form ``#% key=value ...`` carries
``max_dim`` and ``clique_order`` so a round trip preserves them.  Vertex ids
are arbitrary non-negative integers; internally they are renumbered in
sorted order and kept as labels.
"""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path
from typing import Iterable, Union

import numpy as np

from .codensity import CodensityMatrix
from .complex import FilteredComplex
from .errors import InputError
from .persistence import PersistenceDiagram
from .transforms import DistanceMatrix

PathLike = Union[str, Path]


def _fmt(x: float) -> str:
    if x == math.inf:
        return "inf"
    return repr(float(x))


def parse_filtration(text: str, source: str = "<string>") -> FilteredComplex:
    rows = []
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#%"):
            for tok in line[2:].split():
                key, _, val = tok.partition("=")
                if key not in ("max_dim", "clique_order"):
                    raise InputError(f"{source}:{lineno}: unknown metadata key {key!r}")
                try:
                    meta[key] = int(val)
                except ValueError:
                    raise InputError(f"{source}:{lineno}: metadata {key} needs an integer, got {val!r}") from None
            continue
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise InputError(f"{source}:{lineno}: expected 'birth v0 ... vk', got {raw!r}")
        try:
            birth = float(parts[0])
        except ValueError:
            raise InputError(f"{source}:{lineno}: bad birth {parts[0]!r}") from None
        if not math.isfinite(birth):
            raise InputError(f"{source}:{lineno}: birth must be finite, got {parts[0]!r}")
        verts = []
        for tok in parts[1:]:
            if not tok.isdigit():
                raise InputError(f"{source}:{lineno}: bad vertex id {tok!r}")
            verts.append(int(tok))
        if len(set(verts)) != len(verts):
            raise InputError(f"{source}:{lineno}: repeated vertex in {verts}")
        rows.append((lineno, birth, tuple(sorted(verts))))
    if not rows:
        raise InputError(f"{source}: no simplices")
    ids = sorted({v for _, _, s in rows for v in s})
    pos = {v: i for i, v in enumerate(ids)}
    births = {}
    for lineno, birth, s in rows:
        key = tuple(pos[v] for v in s)
        if key in births:
            raise InputError(f"{source}:{lineno}: simplex {list(s)} listed twice")
        births[key] = birth
    try:
        return FilteredComplex(
            len(ids),
            births,
            max_dim=meta.get("max_dim"),
            clique_order=meta.get("clique_order"),
            labels=ids,
        )
    except InputError as e:
        raise InputError(f"{source}: {e}") from None


def format_filtration(c: FilteredComplex) -> str:
    out = io.StringIO()
    meta = [f"max_dim={c.max_dim}"]
    if c.clique_order is not None:
        meta.append(f"clique_order={c.clique_order}")
    out.write("#% " + " ".join(meta) + "\n")
    for birth, s in c.simplices():
        out.write(_fmt(birth) + " " + " ".join(str(c.labels[v]) for v in s) + "\n")
    return out.getvalue()


def load_filtration(path: PathLike) -> FilteredComplex:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    return parse_filtration(text, str(path))


def save_filtration(c: FilteredComplex, path: PathLike) -> None:
    Path(path).write_text(format_filtration(c))


def load_distance_csv(path: PathLike) -> DistanceMatrix:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), 1):
        if not row or all(not x.strip() for x in row) or row[0].lstrip().startswith("#"):
            continue
        try:
            rows.append([float(x) for x in row])
        except ValueError:
            raise InputError(f"{path}:{lineno}: non-numeric entry in {row}") from None
    if any(len(r) != len(rows) for r in rows):
        raise InputError(f"{path}: distance matrix is not square ({len(rows)} rows)")
    try:
        return DistanceMatrix(np.array(rows))
    except InputError as e:
        raise InputError(f"{path}: {e}") from None


def format_codensity(m: CodensityMatrix) -> str:
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow([""] + list(m.labels))
    for lab, row in zip(m.labels, m.entries):
        w.writerow([lab] + [_fmt(x) for x in row])
    return out.getvalue()


def format_diagrams(diagrams: Iterable[PersistenceDiagram]) -> str:
    """One ``dim birth death`` line per bar."""
    lines = []
    for d in diagrams:
        for b, e in d.pairs:
            lines.append(f"{d.dim} {_fmt(b)} {_fmt(e)}")
    return "\n".join(lines) + ("\n" if lines else "")
