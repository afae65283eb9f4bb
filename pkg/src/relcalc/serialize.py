"""JSON file formats, report records and SVG rendering.

Every number is written as an exact ``"p/q"`` string.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import lcm
from pathlib import Path
from typing import Union

from .errors import InputError
from .relation import Cell, Fun, Piece, Rel, graph
from .semilinear import (
    FSet,
    Interval,
    Space,
    fmt_rat,
    from_records,
    parse_rat,
    parse_set,
    space_from_records,
    space_to_records,
    to_records,
)


def _pt(p) -> list:
    return [fmt_rat(p[0]), fmt_rat(p[1])]


def _parse_pt(raw) -> tuple:
    if not isinstance(raw, (list, tuple)) or len(raw) != 2:
        raise InputError(f"expected a coordinate pair, got {raw!r}")
    return parse_rat(raw[0]), parse_rat(raw[1])


def cell_to_record(c) -> dict:
    if len(c) == 1:
        return {"type": "point", "at": _pt(c[0])}
    if len(c) == 2:
        return {"type": "segment", "a": _pt(c[0]), "b": _pt(c[1])}
    return {"type": "polygon", "vertices": [_pt(v) for v in c]}


def cell_from_record(r: dict) -> Cell:
    kind = r.get("type")
    if kind == "point":
        return Cell([_parse_pt(r["at"])])
    if kind == "segment":
        a, b = _parse_pt(r["a"]), _parse_pt(r["b"])
        if a == b:
            raise InputError("segment endpoints must differ")
        return Cell([a, b])
    if kind == "polygon":
        verts = [_parse_pt(v) for v in r["vertices"]]
        cell = Cell(verts)
        if len(cell) != len(verts) or len(verts) < 3:
            raise InputError("polygon vertices must be at least three, strictly convex, no three collinear")
        return cell
    raise InputError(f"unknown cell type {kind!r}")


def interval_to_record(iv: Interval) -> dict:
    return {"lo": fmt_rat(iv.lo), "hi": fmt_rat(iv.hi), "lo_closed": iv.lo_closed, "hi_closed": iv.hi_closed}


def interval_from_record(r: dict) -> Interval:
    return Interval(parse_rat(r["lo"]), parse_rat(r["hi"]), bool(r.get("lo_closed", True)), bool(r.get("hi_closed", True)))


def rel_to_record(f: Rel) -> dict:
    return {
        "src": space_to_records(f.src),
        "dst": space_to_records(f.dst),
        "cells": [cell_to_record(c) for c in f.simplified().cells],
    }


def rel_from_record(r: dict) -> Rel:
    try:
        src, dst = space_from_records(r["src"]), space_from_records(r["dst"])
        return Rel(src, dst, [cell_from_record(c) for c in r["cells"]])
    except KeyError as e:
        raise InputError(f"relation record is missing {e}") from None


def fun_to_record(g: Fun) -> dict:
    return {
        "src": space_to_records(g.src),
        "dst": space_to_records(g.dst),
        "pieces": [
            {"interval": interval_to_record(p.interval), "slope": fmt_rat(p.slope), "intercept": fmt_rat(p.intercept)}
            for p in g.pieces
        ],
        "points": [{"x": fmt_rat(x), "y": fmt_rat(y)} for x, y in g.points],
    }


def fun_from_record(r: dict) -> Fun:
    try:
        src, dst = space_from_records(r["src"]), space_from_records(r["dst"])
        pieces = [
            Piece(interval_from_record(p["interval"]), parse_rat(p["slope"]), parse_rat(p["intercept"]))
            for p in r.get("pieces", [])
        ]
        points = [(parse_rat(p["x"]), parse_rat(p["y"])) for p in r.get("points", [])]
        return Fun(src, dst, pieces, points)
    except KeyError as e:
        raise InputError(f"function record is missing {e}") from None


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None


def load(path) -> Union[Rel, Fun]:
    rec = _read_json(path)
    if not isinstance(rec, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "cells" in rec:
        return rel_from_record(rec)
    if "pieces" in rec or "points" in rec:
        return fun_from_record(rec)
    raise InputError(f"{path}: neither a relation nor a function file")


def load_relation(path) -> Rel:
    """A relation file, or a function file read as the closure of its graph."""
    obj = load(path)
    return graph(obj) if isinstance(obj, Fun) else obj


def load_function(path) -> Fun:
    obj = load(path)
    if not isinstance(obj, Fun):
        raise InputError(f"{path} is a relation file; a function file is required")
    return obj


def dump(obj, path=None) -> str:
    rec = rel_to_record(obj) if isinstance(obj, Rel) else fun_to_record(obj)
    text = json.dumps(rec, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def parse_set_arg(space: Space, text: str) -> FSet:
    """A set given as notation (``"[0,1/4] | {1/2}"``), a JSON record list, or ``@file``."""
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("["):
        try:
            raw = json.loads(stripped)
        except json.JSONDecodeError:
            raw = None
        if isinstance(raw, list) and all(isinstance(r, dict) for r in raw):
            return from_records(space, raw)
    return parse_set(space, stripped)


def fset_record(s: FSet) -> dict:
    return {"set": to_records(s), "text": str(s)}


def witness_record(w):
    if isinstance(w, Interval):
        return interval_to_record(w)
    if isinstance(w, tuple):
        return cell_to_record(w)
    return w


def report_record(rep) -> dict:
    out = rep.as_dict()
    out["witnesses"] = {k: witness_record(v) for k, v in rep.witnesses.items()}
    return out


# SVG

VIEWPORT = 512


def render_svg(f: Rel) -> str:
    """SVG 1.1 drawing of every cell; coordinates are exact integers after scaling."""
    cells = f.simplified().cells
    xlo, xhi, ylo, yhi = f.src.lo, f.src.hi, f.dst.lo, f.dst.hi
    nums = [xlo, xhi, ylo, yhi] + [c for cell in cells for v in cell for c in v]
    den = 1
    for q in nums:
        den = lcm(den, Fraction(q).denominator)
    width = max((xhi - xlo) * den, 1)
    height = max((yhi - ylo) * den, 1)
    unit = max(1, (VIEWPORT + int(max(width, height)) - 1) // int(max(width, height)))
    den *= unit
    W, H = int(max((xhi - xlo) * den, 1)), int(max((yhi - ylo) * den, 1))
    stroke = max(1, max(W, H) // 256)

    def X(x):
        return int((x - xlo) * den)

    def Y(y):
        return int((yhi - y) * den)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{VIEWPORT}" height="{VIEWPORT}" '
        f'viewBox="0 0 {W} {H}" preserveAspectRatio="none">',
        f'<g fill="none" stroke="#bbbbbb" stroke-width="{stroke}">',
    ]
    for a in f.src.components:
        for b in f.dst.components:
            lines.append(
                f'<rect x="{X(a.lo)}" y="{Y(b.hi)}" width="{int((a.hi - a.lo) * den)}" height="{int((b.hi - b.lo) * den)}"/>'
            )
    lines.append("</g>")
    lines.append(f'<g stroke="#1f4e9c" fill="#1f4e9c" stroke-width="{2 * stroke}">')
    for c in cells:
        if len(c) == 1:
            lines.append(f'<circle cx="{X(c[0][0])}" cy="{Y(c[0][1])}" r="{3 * stroke}"/>')
        elif len(c) == 2:
            lines.append(f'<line x1="{X(c[0][0])}" y1="{Y(c[0][1])}" x2="{X(c[1][0])}" y2="{Y(c[1][1])}"/>')
        else:
            pts = " ".join(f"{X(v[0])},{Y(v[1])}" for v in c)
            lines.append(f'<polygon points="{pts}" fill-opacity="0.35"/>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
