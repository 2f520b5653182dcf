"""JSON descriptors, reports and CSV exports.

Descriptor schema::

    {"type": "grid", "n": N, "mass": [[...], ...]}
    {"type": "shuffle", "pieces": [{"src": [a, b], "target": c, "slope": 1 | -1}, ...]}
    {"type": "map", "pieces": [{"src": [a, b], "slope": s, "intercept": c}, ...], "transposed": false}
    {"type": "param", "name": "M" | "W" | "Pi" | "FGM", "theta": t}
    {"type": "convex", "alpha": a, "left": {...}, "right": {...}}
    {"type": "ordinal", "partition": [0, ..., 1], "components": [{...}, ...]}

Numbers are parsed as exact decimals.  Exact rationals are written as exact
decimals when their denominator is a power of two and as ``"p/q"`` strings
otherwise, so dyadic shuffles round-trip bit for bit.
"""
from __future__ import annotations

import csv
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .core import (
    CompleteDependence,
    Convex,
    DescriptorError,
    GridCopula,
    OrdinalSum,
    PARAM_NAMES,
    Parametric,
)
from .maps import IntervalExchange, Piece, PiecewiseAffineMap, as_fraction


# --- exact number formatting -------------------------------------------------

def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    if _is_dyadic(q):
        with localcontext() as ctx:
            ctx.prec = 400
            return format(Decimal(q.numerator) / Decimal(q.denominator), "f")
    return json.dumps(f"{q.numerator}/{q.denominator}")


def _emit(obj: Any) -> str:
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return repr(float(obj))
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k)}: {_emit(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --- descriptor -> plain structure ---------------------------------------------

def to_jsonable(d) -> dict:
    if isinstance(d, GridCopula):
        return {"type": "grid", "n": d.n, "mass": d.mass.tolist()}
    if isinstance(d, IntervalExchange):
        return {
            "type": "shuffle",
            "pieces": [{"src": [a, b], "target": t, "slope": s} for a, b, t, s in d.targets()],
        }
    if isinstance(d, CompleteDependence):
        return {
            "type": "map",
            "pieces": [{"src": [p.lo, p.hi], "slope": p.slope, "intercept": p.intercept} for p in d.map.pieces],
            "transposed": d.transposed,
        }
    if isinstance(d, PiecewiseAffineMap):
        return to_jsonable(CompleteDependence(d))
    if isinstance(d, Parametric):
        out = {"type": "param", "name": d.name}
        if d.name == "FGM":
            out["theta"] = d.theta
        return out
    if isinstance(d, Convex):
        return {"type": "convex", "alpha": d.alpha, "left": to_jsonable(d.left), "right": to_jsonable(d.right)}
    if isinstance(d, OrdinalSum):
        return {
            "type": "ordinal",
            "partition": list(d.partition),
            "components": [to_jsonable(c) for c in d.components],
        }
    raise DescriptorError(f"cannot serialise {type(d).__name__}")


def dumps_descriptor(d) -> str:
    return _emit(to_jsonable(d)) + "\n"


def write_descriptor(d, path: str | Path) -> None:
    Path(path).write_text(dumps_descriptor(d))


# --- plain structure -> descriptor ---------------------------------------------

def _need(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise DescriptorError(f"{path or '$'}: expected an object")
    if key not in obj:
        raise DescriptorError(f"{path}.{key}: missing field")
    return obj[key]


def _num(v, path: str) -> Fraction:
    if isinstance(v, bool):
        raise DescriptorError(f"{path}: expected a number, got a boolean")
    try:
        return as_fraction(v)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DescriptorError(f"{path}: expected a number, got {v!r}") from None


def from_jsonable(obj, path: str = "$"):
    kind = _need(obj, "type", path)
    if kind == "grid":
        n = _need(obj, "n", path)
        mass = _need(obj, "mass", path)
        if not isinstance(n, int) or n < 1:
            raise DescriptorError(f"{path}.n: expected a positive integer")
        if not isinstance(mass, list) or len(mass) != n:
            raise DescriptorError(f"{path}.mass: expected {n} rows")
        for i, row in enumerate(mass):
            if not isinstance(row, list) or len(row) != n:
                raise DescriptorError(f"{path}.mass[{i}]: expected {n} entries (ragged rows)")
        try:
            arr = np.array([[float(v) for v in row] for row in mass], dtype=float)
        except (TypeError, ValueError):
            raise DescriptorError(f"{path}.mass: non-numeric entry") from None
        return GridCopula(arr)
    if kind == "shuffle":
        pieces = _need(obj, "pieces", path)
        if not isinstance(pieces, list) or not pieces:
            raise DescriptorError(f"{path}.pieces: expected a non-empty list")
        rows = []
        for i, p in enumerate(pieces):
            pp = f"{path}.pieces[{i}]"
            src = _need(p, "src", pp)
            if not isinstance(src, list) or len(src) != 2:
                raise DescriptorError(f"{pp}.src: expected [a, b]")
            slope = _need(p, "slope", pp)
            if slope not in (1, -1):
                raise DescriptorError(f"{pp}.slope: must be 1 or -1")
            rows.append((_num(src[0], pp + ".src[0]"), _num(src[1], pp + ".src[1]"),
                         _num(_need(p, "target", pp), pp + ".target"), int(slope)))
        return IntervalExchange.from_targets(rows)
    if kind == "map":
        pieces = _need(obj, "pieces", path)
        if not isinstance(pieces, list) or not pieces:
            raise DescriptorError(f"{path}.pieces: expected a non-empty list")
        out = []
        for i, p in enumerate(pieces):
            pp = f"{path}.pieces[{i}]"
            src = _need(p, "src", pp)
            if not isinstance(src, list) or len(src) != 2:
                raise DescriptorError(f"{pp}.src: expected [a, b]")
            out.append(Piece(_num(src[0], pp + ".src[0]"), _num(src[1], pp + ".src[1]"),
                             _num(_need(p, "slope", pp), pp + ".slope"),
                             _num(_need(p, "intercept", pp), pp + ".intercept")))
        transposed = obj.get("transposed", False)
        if not isinstance(transposed, bool):
            raise DescriptorError(f"{path}.transposed: expected a boolean")
        return CompleteDependence(PiecewiseAffineMap(tuple(out)), transposed)
    if kind == "param":
        name = _need(obj, "name", path)
        if name not in PARAM_NAMES:
            raise DescriptorError(f"{path}.name: unknown family {name!r}; expected one of {', '.join(PARAM_NAMES)}")
        if name == "FGM":
            theta = float(_num(_need(obj, "theta", path), path + ".theta"))
            return Parametric("FGM", theta)
        return Parametric(name)
    if kind == "convex":
        alpha = float(_num(_need(obj, "alpha", path), path + ".alpha"))
        return Convex(alpha, from_jsonable(_need(obj, "left", path), path + ".left"),
                      from_jsonable(_need(obj, "right", path), path + ".right"))
    if kind == "ordinal":
        part = _need(obj, "partition", path)
        comps = _need(obj, "components", path)
        if not isinstance(part, list) or not isinstance(comps, list):
            raise DescriptorError(f"{path}: partition and components must be lists")
        if len(comps) != len(part) - 1:
            raise DescriptorError(f"{path}.components: expected {len(part) - 1} components for {len(part)} cut points")
        return OrdinalSum(
            tuple(_num(v, f"{path}.partition[{i}]") for i, v in enumerate(part)),
            tuple(from_jsonable(c, f"{path}.components[{i}]") for i, c in enumerate(comps)),
        )
    raise DescriptorError(f"{path}.type: unknown descriptor type {kind!r}")


def loads_descriptor(text: str):
    try:
        obj = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"$: invalid JSON ({exc})") from None
    return from_jsonable(obj)


def read_descriptor(path: str | Path):
    return loads_descriptor(Path(path).read_text())


# --- reports -----------------------------------------------------------------

def _plain(obj):
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def write_report(report: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(_plain(report), indent=2, sort_keys=True) + "\n")


def write_trace_csv(rows, path: str | Path, header=("step", "norm_sq")) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, Fraction)) else v for v in row])


def write_polyline_csv(segments, path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x0", "y0", "x1", "y1"])
        for (x0, y0), (x1, y1) in segments:
            w.writerow([repr(float(v)) for v in (x0, y0, x1, y1)])
