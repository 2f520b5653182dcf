"""Named copulas used by the command line, the tests and the experiment scripts."""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .core import M, PI, W, Convex, GridCopula, OrdinalSum, fgm, to_grid, transpose
from .shuffles import doubling_map, half_swap, quarter_cycle, s_alpha, selfsimilar, tent_map
from .star import star


def _fgm_theta(text: str) -> float:
    sign = -1.0 if text.startswith(("-", "m")) else 1.0
    body = text.lstrip("-m")
    if "." in body:
        return sign * float(body)
    if len(body) > 1 and body.startswith("0"):
        return sign * float("0." + body[1:])
    return sign * float(body)


_BUILTINS = {
    "pi": lambda: PI,
    "m": lambda: M,
    "w": lambda: W,
    "halfswap": half_swap,
    "quartercycle": quarter_cycle,
    "doubling": doubling_map,
    "tent": tent_map,
}


def builtin(name: str):
    """Resolve names such as ``Pi``, ``fgm05`` (θ = 0.5), ``fgm-1``,
    ``selfsimilar5``, ``salpha0.25``, ``doubling`` or ``tent``.

    Returns ``None`` for unknown names.
    """
    key = name.strip().lower().replace("_", "")
    if key in _BUILTINS:
        return _BUILTINS[key]()
    m = re.fullmatch(r"fgm([-m]?[0-9.]+)", key)
    if m:
        theta = _fgm_theta(m.group(1))
        if abs(theta) > 1:
            raise ValueError(f"FGM parameter {theta} outside [-1, 1]")
        return fgm(theta)
    m = re.fullmatch(r"selfsimilar(\d+)", key)
    if m:
        return selfsimilar(int(m.group(1)))
    m = re.fullmatch(r"salpha([0-9./]+)", key)
    if m:
        return s_alpha(Fraction(m.group(1)))
    return None


def corpus() -> dict[str, object]:
    """A fixed collection covering every descriptor type."""
    rng = np.random.default_rng(20240611)
    raw = rng.random((8, 8)) + 0.1
    for _ in range(200):
        raw /= raw.sum(axis=1, keepdims=True) * 8
        raw /= raw.sum(axis=0, keepdims=True) * 8
    return {
        "Pi": PI,
        "M": M,
        "W": W,
        "FGM(1)": fgm(1.0),
        "FGM(-0.5)": fgm(-0.5),
        "FGM(0.1)": fgm(0.1),
        "half-swap": half_swap(),
        "quarter-cycle": quarter_cycle(),
        "S_1/4": s_alpha(Fraction(1, 4)),
        "selfsimilar(4)": selfsimilar(4),
        "doubling": doubling_map(),
        "doubling^T": transpose(doubling_map()),
        "tent": tent_map(),
        "convex(0.5, quarter-cycle, Pi)": Convex(0.5, quarter_cycle(), PI),
        "convex(0.3, FGM(1), W)": Convex(0.3, fgm(1.0), W),
        "ordinal(FGM(1), W)": OrdinalSum((0, Fraction(1, 2), 1), (fgm(1.0), W)),
        "grid FGM(0.7) 32": to_grid(fgm(0.7), 32),
        "grid random 8": GridCopula(raw),
        "tent*tent^T": star(tent_map(), transpose(tent_map()), 64).copula,
    }
