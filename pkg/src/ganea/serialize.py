"""A JSON text format for simplicial sets, maps and reports.

A simplicial set is

    {"basepoint": 0, "kind": "sset", "labels": [["v"], ["e"]], "levels": [[[]], [[[[], 0], [[], 0]]]],
     "name": "S1"}

where levels[n][i] lists the faces d_0 .. d_n of the i-th nondegenerate
n-simplex, each as [degeneracy word, index]; the face lives in level
n - 1 - len(word) and the word lists s_j indices in decreasing order (the
normal form s_{j_1} ... s_{j_k} with j_1 > ... > j_k).  Vertices have empty
face lists.  "basepoint", "labels" and "name" are optional; trailing empty
levels are not part of canonical form.

A map is {"kind": "map", "source": ..., "target": ..., "images": levels of
[word, index]}.  Canonical text is json.dumps on one line with sorted keys,
", " and ": " separators and a trailing newline, so parse followed by dump reproduces
canonical input byte for byte.
"""
from __future__ import annotations

import json
import math

from .sset import Simplex, SimplicialMap, SimplicialSet, degeneracy_word, op_from_word

__all__ = [
    "ParseError",
    "ValidationError",
    "dumps",
    "loads",
    "sset_to_obj",
    "sset_from_obj",
    "map_to_obj",
    "map_from_obj",
    "dump_sset",
    "load_sset",
    "dump_map",
    "load_map",
    "report_text",
]


class ParseError(ValueError):
    """Input is not in the documented format."""


class ValidationError(ValueError):
    """Input parses but violates the simplicial identities or map compatibility."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems[:5]) + (" ..." if len(problems) > 5 else ""))
        self.problems = problems


def _clean(obj):
    """Replace infinities by the string "inf" and tuples by lists, recursively."""
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps(obj, compact: bool = False) -> str:
    """Canonical text: sorted keys, a trailing newline; one line when compact."""
    if compact:
        return json.dumps(_clean(obj), sort_keys=True, separators=(", ", ": "), ensure_ascii=False) + "\n"
    return json.dumps(_clean(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"not valid JSON: {e}") from e


def _enc(s: Simplex) -> list:
    return [list(degeneracy_word(s.op)), s.index]


def _dec(entry, dim: int, where: str) -> Simplex:
    if (not isinstance(entry, list) or len(entry) != 2 or not isinstance(entry[0], list)
            or not isinstance(entry[1], int) or isinstance(entry[1], bool)):
        raise ParseError(f"{where}: expected [degeneracy word, index], got {entry!r}")
    word, index = entry
    if not all(isinstance(j, int) and not isinstance(j, bool) for j in word):
        raise ParseError(f"{where}: degeneracy word must list integers")
    level = dim - len(word)
    if level < 0:
        raise ParseError(f"{where}: degeneracy word longer than the dimension")
    try:
        op = op_from_word(word, level)
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from e
    return Simplex(op, level, index)


def sset_to_obj(X: SimplicialSet) -> dict:
    obj: dict = {"kind": "sset", "levels": [[[_enc(f) for f in fs] for fs in level] for level in X.faces]}
    if X.basepoint is not None:
        obj["basepoint"] = X.basepoint
    if X.labels is not None:
        obj["labels"] = [list(level) for level in X.labels]
    if X.name:
        obj["name"] = X.name
    return obj


def sset_from_obj(obj, validate: bool = True) -> SimplicialSet:
    if not isinstance(obj, dict) or obj.get("kind", "sset") != "sset":
        raise ParseError("expected an object with kind 'sset'")
    unknown = set(obj) - {"kind", "levels", "basepoint", "labels", "name"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    levels = obj.get("levels")
    if not isinstance(levels, list) or not all(isinstance(lv, list) for lv in levels):
        raise ParseError("'levels' must be a list of lists")
    faces = []
    for n, level in enumerate(levels):
        rows = []
        for i, fs in enumerate(level):
            if not isinstance(fs, list):
                raise ParseError(f"simplex ({n},{i}): faces must be a list")
            if n == 0 and fs:
                raise ParseError(f"vertex {i} must have no faces")
            if n > 0 and len(fs) != n + 1:
                raise ParseError(f"simplex ({n},{i}) has {len(fs)} faces, expected {n + 1}")
            rows.append(tuple(_dec(e, n - 1, f"simplex ({n},{i}) face {k}") for k, e in enumerate(fs)))
        faces.append(rows)
    bp = obj.get("basepoint")
    if bp is not None and (not isinstance(bp, int) or isinstance(bp, bool)):
        raise ParseError("basepoint must be an integer")
    labels = obj.get("labels")
    if labels is not None:
        if not isinstance(labels, list) or len(labels) != len(levels) or any(
                not isinstance(lv, list) or len(lv) != len(levels[n]) or not all(isinstance(x, str) for x in lv)
                for n, lv in enumerate(labels)):
            raise ParseError("labels must mirror levels with strings")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise ParseError("name must be a string")
    for n, rows in enumerate(faces):
        for i, fs in enumerate(rows):
            for k, f in enumerate(fs):
                if not (0 <= f.level < len(faces) and 0 <= f.index < len(faces[f.level])):
                    raise ValidationError([f"d{k}({n},{i}) targets missing simplex ({f.level},{f.index})"])
    X = SimplicialSet(faces, basepoint=bp, labels=labels, name=name)
    if validate:
        problems = X.validate()
        if problems:
            raise ValidationError(problems)
    return X


def map_to_obj(f: SimplicialMap) -> dict:
    return {
        "kind": "map",
        "source": sset_to_obj(f.source),
        "target": sset_to_obj(f.target),
        "images": [[_enc(s) for s in level] for level in f.images],
        **({"name": f.name} if f.name else {}),
    }


def map_from_obj(obj, validate: bool = True) -> SimplicialMap:
    if not isinstance(obj, dict) or obj.get("kind") != "map":
        raise ParseError("expected an object with kind 'map'")
    unknown = set(obj) - {"kind", "source", "target", "images", "name"}
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    X = sset_from_obj(obj.get("source"), validate)
    Y = sset_from_obj(obj.get("target"), validate)
    imgs = obj.get("images")
    if not isinstance(imgs, list) or len(imgs) != len(X.counts) or any(
            not isinstance(lv, list) or len(lv) != X.count(n) for n, lv in enumerate(imgs)):
        raise ParseError("'images' must list one image per nondegenerate simplex of the source")
    images = []
    for n, level in enumerate(imgs):
        row = []
        for i, e in enumerate(level):
            s = _dec(e, n, f"image of ({n},{i})")
            if not (s.level < len(Y.counts) and 0 <= s.index < Y.count(s.level)):
                raise ValidationError([f"image of ({n},{i}) is not a simplex of the target"])
            row.append(s)
        images.append(row)
    name = obj.get("name", "")
    f = SimplicialMap(X, Y, images, name=name)
    if validate:
        problems = f.validate()
        if problems:
            raise ValidationError(problems)
    return f


def dump_sset(X: SimplicialSet) -> str:
    return dumps(sset_to_obj(X), compact=True)


def load_sset(text: str, validate: bool = True) -> SimplicialSet:
    return sset_from_obj(loads(text), validate)


def dump_map(f: SimplicialMap) -> str:
    return dumps(map_to_obj(f), compact=True)


def load_map(text: str, validate: bool = True) -> SimplicialMap:
    return map_from_obj(loads(text), validate)


def report_text(obj, indent: int = 0) -> str:
    """Plain-text rendering of a nested report (dict keys in sorted order)."""
    pad = "  " * indent
    lines = []
    obj = _clean(obj)
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(report_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, sort_keys=True)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(report_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, sort_keys=True)}")
    else:
        lines.append(f"{pad}{json.dumps(obj)}")
    return "\n".join(lines)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v) and len(json.dumps(v)) < 80
