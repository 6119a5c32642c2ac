"""Lattice JSON files, DOT emission and JSON median reports."""

from __future__ import annotations

import json
from pathlib import Path

from .errors import MedianlabError, NotALattice
from .lattice import FiniteLattice, validate_lattice
from .medians import (
    InnerMedians,
    MedianLattice,
    TPoset,
)


def lattice_to_json(L: FiniteLattice) -> dict:
    return {"elements": list(L.names), "covers": [list(c) for c in L.cover_pairs_by_name()]}


def lattice_from_json(data) -> FiniteLattice:
    if not isinstance(data, dict) or not isinstance(data.get("elements"), list) or not isinstance(data.get("covers"), list):
        raise NotALattice("lattice file needs 'elements' and 'covers' lists", reason="malformed")
    for name in data["elements"]:
        if not isinstance(name, str) or not name:
            raise NotALattice("element names must be nonempty strings", reason="malformed")
    for cover in data["covers"]:
        if not isinstance(cover, list) or len(cover) != 2:
            raise NotALattice("each cover must be a two-element list", reason="malformed")
    return validate_lattice(data["elements"], data["covers"])


def load_lattice(path: str | Path) -> FiniteLattice:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise MedianlabError(f"cannot read lattice file {path}: {exc}") from exc
    return lattice_from_json(data)


def to_dot(L: FiniteLattice, title: str = "L") -> str:
    """Hasse diagram with the bottom drawn lowest."""
    lines = [f"digraph {json.dumps(title)} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for i, name in enumerate(L.names):
        lines.append(f"  n{i} [label={json.dumps(name)}];")
    for a, b in L.covers:
        lines.append(f"  n{a} -> n{b} [arrowhead=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def tposet_json(tp: TPoset) -> dict:
    names = [tp.triple_name(p) for p in range(len(tp))]
    return {
        "triples": names,
        "order": [[names[p], names[q]] for p, q in tp.covers()],
        "intervals": {names[p]: [tp.lattice.names[u] for u in tp.intervals[p]] for p in range(len(tp))},
    }


def median_lattice_json(ml: MedianLattice) -> dict:
    return {
        "size": ml.lattice.n,
        "names": list(ml.lattice.names),
        "covers": [list(c) for c in ml.lattice.cover_pairs_by_name()],
    }


def inner_json(im: InnerMedians) -> dict:
    return {
        "size": im.lattice.n,
        "member_names": [f.name for f in im.inner],
        "covers": [list(c) for c in im.lattice.cover_pairs_by_name()],
    }


def classification_json(im: InnerMedians) -> list[dict]:
    return [{"name": name, "kind": "inner" if ok else "outer"} for name, ok in im.classification]
