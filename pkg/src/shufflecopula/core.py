"""Copula descriptors, validation, pointwise evaluation and gridding."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from .maps import IntervalExchange, PiecewiseAffineMap, as_fraction

DS_TOL = 1e-9
PARAM_NAMES = ("M", "W", "Pi", "FGM")


class DescriptorError(ValueError):
    """Raised when an operation receives a descriptor it cannot handle."""


@dataclass(frozen=True, eq=False)
class GridCopula:
    """Checkerboard copula: ``mass[i, j]`` is μ_C of cell ``[i/n,(i+1)/n) × [j/n,(j+1)/n)``."""

    mass: np.ndarray

    def __post_init__(self):
        m = np.array(self.mass, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "mass", m)

    @property
    def n(self) -> int:
        return self.mass.shape[0]

    def __eq__(self, other):
        return isinstance(other, GridCopula) and self.mass.shape == other.mass.shape and bool(
            np.array_equal(self.mass, other.mass)
        )


@dataclass(frozen=True)
class Parametric:
    """``M``, ``W``, ``Pi`` or FGM(θ)."""

    name: str
    theta: float = 0.0


@dataclass(frozen=True)
class Convex:
    """``alpha * left + (1 - alpha) * right``."""

    alpha: float
    left: "Descriptor"
    right: "Descriptor"


@dataclass(frozen=True)
class OrdinalSum:
    """Components rescaled onto the diagonal squares of ``partition``; M elsewhere."""

    partition: tuple
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(as_fraction(p) for p in self.partition))
        object.__setattr__(self, "components", tuple(self.components))


@dataclass(frozen=True)
class CompleteDependence:
    """Copula of ``(U, h(U))``, or of ``(h(U), U)`` when ``transposed``."""

    map: PiecewiseAffineMap
    transposed: bool = False


Descriptor = Union[GridCopula, IntervalExchange, Parametric, Convex, OrdinalSum, CompleteDependence]

M = Parametric("M")
W = Parametric("W")
PI = Parametric("Pi")


def fgm(theta: float) -> Parametric:
    return Parametric("FGM", float(theta))


def is_pi(d) -> bool:
    return isinstance(d, Parametric) and d.name == "Pi"


def is_m(d) -> bool:
    if isinstance(d, Parametric):
        return d.name == "M"
    if isinstance(d, IntervalExchange):
        return d == IntervalExchange.identity()
    return False


def as_exchange(d) -> IntervalExchange | None:
    """The support map of ``d`` if ``d`` is a shuffle of Min (M and W included)."""
    if isinstance(d, IntervalExchange):
        return d
    if isinstance(d, Parametric) and d.name == "M":
        return IntervalExchange.identity()
    if isinstance(d, Parametric) and d.name == "W":
        return IntervalExchange.reversal()
    if isinstance(d, CompleteDependence):
        ex = IntervalExchange(d.map.pieces)
        if not ex.problems():
            return ex.inverse() if d.transposed else ex
    return None


# --- validation -------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    checks: list = field(default_factory=list)  # (name, passed, detail)
    row_sums: list | None = None
    col_sums: list | None = None

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append((name, bool(passed), detail))
        self.ok = self.ok and bool(passed)

    def failures(self) -> list[str]:
        return [f"{name}: {detail}" if detail else name for name, ok, detail in self.checks if not ok]

    def to_dict(self) -> dict:
        out = {
            "ok": self.ok,
            "checks": [{"name": n, "passed": p, "detail": d} for n, p, d in self.checks],
        }
        if self.row_sums is not None:
            out["row_sums"] = self.row_sums
            out["col_sums"] = self.col_sums
        return out


def _structural(d, report: ValidationReport, path: str):
    if isinstance(d, GridCopula):
        m = d.mass
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            report.add(f"{path}grid shape", False, f"mass must be square, got {m.shape}")
            return
        n = m.shape[0]
        report.add(f"{path}nonnegative mass", bool(np.all(m >= 0)), "negative entries" if np.any(m < 0) else "")
        rows, cols = m.sum(axis=1), m.sum(axis=0)
        worst = max(np.abs(rows - 1 / n).max(), np.abs(cols - 1 / n).max())
        report.add(
            f"{path}doubly stochastic",
            worst <= DS_TOL,
            "" if worst <= DS_TOL else f"not doubly stochastic (max deviation {worst:.3g} from 1/n)",
        )
        if not path:
            report.row_sums, report.col_sums = rows.tolist(), cols.tolist()
    elif isinstance(d, IntervalExchange):
        errs = d.problems()
        report.add(f"{path}bijective measure-preserving exchange", not errs, "; ".join(errs))
    elif isinstance(d, CompleteDependence):
        errs = d.map.problems()
        report.add(f"{path}measure-preserving map", not errs, "; ".join(errs))
    elif isinstance(d, Parametric):
        if d.name not in PARAM_NAMES:
            report.add(f"{path}family", False, f"unknown family {d.name!r}")
        elif d.name == "FGM":
            report.add(f"{path}FGM theta", -1 <= d.theta <= 1, f"theta={d.theta} outside [-1, 1]")
        else:
            report.add(f"{path}family", True)
    elif isinstance(d, Convex):
        report.add(f"{path}alpha", 0 <= d.alpha <= 1, f"alpha={d.alpha} outside [0, 1]")
        _structural(d.left, report, path + "left.")
        _structural(d.right, report, path + "right.")
    elif isinstance(d, OrdinalSum):
        p = d.partition
        good = len(p) >= 2 and p[0] == 0 and p[-1] == 1 and all(a < b for a, b in zip(p, p[1:]))
        report.add(f"{path}partition", good, "" if good else "partition must increase strictly from 0 to 1")
        if len(d.components) != len(p) - 1:
            report.add(f"{path}components", False, f"{len(d.components)} components for {len(p) - 1} blocks")
        for k, c in enumerate(d.components):
            _structural(c, report, f"{path}components[{k}].")
    else:
        report.add(f"{path}type", False, f"unknown descriptor {type(d).__name__}")


def validate(d: Descriptor, probe: int = 9) -> ValidationReport:
    """Check the representation invariants, then the copula axioms on a probe grid."""
    report = ValidationReport(ok=True)
    _structural(d, report, "")
    if not report.ok:
        return report
    t = np.linspace(0.0, 1.0, probe)
    X, Y = np.meshgrid(t, t, indexing="ij")
    C = eval_cdf_array(d, X, Y)
    bd = max(np.abs(C[0, :]).max(), np.abs(C[:, 0]).max(), np.abs(C[-1, :] - t).max(), np.abs(C[:, -1] - t).max())
    report.add("boundary conditions", bd <= 1e-9, f"max deviation {bd:.3g}")
    vol = np.diff(np.diff(C, axis=0), axis=1)
    report.add("2-increasing", vol.min() >= -1e-12, f"min rectangle mass {vol.min():.3g}")
    return report


# --- evaluation -------------------------------------------------------------

def _check_unit(x, y):
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise ValueError(f"({x}, {y}) outside the unit square")


def _grid_cdf(mass: np.ndarray, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    n = mass.shape[0]
    cum = np.zeros((n + 1, n + 1))
    cum[1:, 1:] = mass.cumsum(axis=0).cumsum(axis=1)
    u, v = np.asarray(x) * n, np.asarray(y) * n
    i = np.clip(np.floor(u).astype(int), 0, n - 1)
    j = np.clip(np.floor(v).astype(int), 0, n - 1)
    a, b = u - i, v - j
    return (
        cum[i, j] * (1 - a) * (1 - b)
        + cum[i + 1, j] * a * (1 - b)
        + cum[i, j + 1] * (1 - a) * b
        + cum[i + 1, j + 1] * a * b
    )


def eval_cdf_array(d: Descriptor, x, y) -> np.ndarray:
    """Vectorised C(x, y) in floating point."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if isinstance(d, Parametric):
        if d.name == "M":
            return np.minimum(x, y)
        if d.name == "W":
            return np.maximum(x + y - 1, 0.0)
        if d.name == "Pi":
            return x * y
        if d.name == "FGM":
            return x * y + d.theta * x * y * (1 - x) * (1 - y)
        raise DescriptorError(f"unknown family {d.name!r}")
    if isinstance(d, GridCopula):
        return _grid_cdf(d.mass, x, y)
    if isinstance(d, PiecewiseAffineMap):
        return d.cdf_array(x, y)
    if isinstance(d, CompleteDependence):
        return d.map.cdf_array(y, x) if d.transposed else d.map.cdf_array(x, y)
    if isinstance(d, Convex):
        return d.alpha * eval_cdf_array(d.left, x, y) + (1 - d.alpha) * eval_cdf_array(d.right, x, y)
    if isinstance(d, OrdinalSum):
        out = np.minimum(x, y)
        p = [float(v) for v in d.partition]
        for (a, b), comp in zip(zip(p, p[1:]), d.components):
            w = b - a
            inside = (x >= a) & (x <= b) & (y >= a) & (y <= b)
            if np.any(inside):
                out = np.where(
                    inside,
                    a + w * eval_cdf_array(comp, np.clip((x - a) / w, 0, 1), np.clip((y - a) / w, 0, 1)),
                    out,
                )
        return out
    raise DescriptorError(f"unknown descriptor {type(d).__name__}")


def eval_cdf(d: Descriptor, x, y):
    """C(x, y).  Shuffles and maps are evaluated exactly when given Fractions."""
    _check_unit(x, y)
    if isinstance(d, PiecewiseAffineMap):
        return d.cdf(as_fraction(x), as_fraction(y))
    if isinstance(d, CompleteDependence):
        x, y = as_fraction(x), as_fraction(y)
        return d.map.cdf(y, x) if d.transposed else d.map.cdf(x, y)
    return float(eval_cdf_array(d, x, y))


def _partial1(d, x, y) -> tuple[float, bool]:
    if isinstance(d, Parametric):
        if d.name == "M":
            return (1.0 if y >= x else 0.0), x == y
        if d.name == "W":
            return (1.0 if x + y >= 1 else 0.0), x + y == 1
        if d.name == "Pi":
            return float(y), False
        if d.name == "FGM":
            return y + d.theta * y * (1 - y) * (1 - 2 * x), False
    if isinstance(d, GridCopula):
        # exact derivative of the bilinear checkerboard: linear in y within a cell
        n = d.n
        i = min(int(x * n), n - 1)
        j = min(int(y * n), n - 1)
        beta = y * n - j
        return float(n * (d.mass[i, :j].sum() + beta * d.mass[i, j])), False
    if isinstance(d, PiecewiseAffineMap):
        v, on = d.partial1(as_fraction(x), as_fraction(y))
        return float(v), on
    if isinstance(d, CompleteDependence):
        if d.transposed:
            v, on = d.map.partial2(as_fraction(y), as_fraction(x))
        else:
            v, on = d.map.partial1(as_fraction(x), as_fraction(y))
        return float(v), on
    if isinstance(d, Convex):
        a, fa = _partial1(d.left, x, y)
        b, fb = _partial1(d.right, x, y)
        return d.alpha * a + (1 - d.alpha) * b, fa or fb
    if isinstance(d, OrdinalSum):
        p = [float(v) for v in d.partition]
        for (a, b), comp in zip(zip(p, p[1:]), d.components):
            if a <= x < b or (x == 1 and b == 1):
                if y < a:
                    return 0.0, False
                if y >= b:
                    return 1.0, False
                return _partial1(comp, (x - a) / (b - a), (y - a) / (b - a))
    raise DescriptorError(f"unknown descriptor {type(d).__name__}")


def partial1(d: Descriptor, x, y, *, flag: bool = False):
    """∂₁C(x, y).  With ``flag=True`` also report whether (x, y) lies on a singular support."""
    _check_unit(x, y)
    v, on = _partial1(d, x, y)
    return (v, on) if flag else v


def partial2(d: Descriptor, x, y, *, flag: bool = False):
    """∂₂C(x, y), computed as ∂₁ of the transpose."""
    _check_unit(x, y)
    v, on = _partial1(transpose(d), y, x)
    return (v, on) if flag else v


# --- structural operations -------------------------------------------------

def transpose(d: Descriptor) -> Descriptor:
    """Copula of (Y, X) given the copula of (X, Y)."""
    if isinstance(d, Parametric):
        return d
    if isinstance(d, GridCopula):
        return GridCopula(d.mass.T.copy())
    if isinstance(d, IntervalExchange):
        return d.inverse()
    if isinstance(d, CompleteDependence):
        return CompleteDependence(d.map, not d.transposed)
    if isinstance(d, Convex):
        return Convex(d.alpha, transpose(d.left), transpose(d.right))
    if isinstance(d, OrdinalSum):
        return OrdinalSum(d.partition, tuple(transpose(c) for c in d.components))
    raise DescriptorError(f"unknown descriptor {type(d).__name__}")


def _symmetrize(mass: np.ndarray, sweeps: int = 3) -> np.ndarray:
    # removes float drift without moving mass between cells; rows and columns
    # are rescaled together so the result commutes with transposition
    n = mass.shape[0]
    mass = np.clip(mass, 0.0, None)
    for _ in range(sweeps):
        r = np.sqrt(n * mass.sum(axis=1))
        c = np.sqrt(n * mass.sum(axis=0))
        r = np.where(r > 0, r, 1.0)
        c = np.where(c > 0, c, 1.0)
        mass = mass / (r[:, None] * c[None, :])
    return mass


def to_grid(d: Descriptor, n: int) -> GridCopula:
    """Checkerboard discretisation: the exact μ_C mass of every ``1/n`` cell."""
    if n < 2:
        raise ValueError("grid resolution must be at least 2")
    if isinstance(d, GridCopula):
        if d.n == n:
            return d
        if n % d.n == 0:
            k = n // d.n
            return GridCopula(np.kron(d.mass, np.ones((k, k))) / (k * k))
    if isinstance(d, IntervalExchange):
        return GridCopula(_symmetrize(d.cell_mass(n)))
    if isinstance(d, CompleteDependence):
        m = d.map.cell_mass(n)
        return GridCopula(_symmetrize(m.T if d.transposed else m))
    if isinstance(d, Parametric) and d.name in ("M", "W"):
        return to_grid(as_exchange(d), n)
    if isinstance(d, Parametric) and d.name == "Pi":
        return GridCopula(np.full((n, n), 1.0 / (n * n)))
    if isinstance(d, Convex):
        return GridCopula(d.alpha * to_grid(d.left, n).mass + (1 - d.alpha) * to_grid(d.right, n).mass)
    if isinstance(d, OrdinalSum):
        p = d.partition
        if all((v * n).denominator == 1 for v in p):
            mass = np.zeros((n, n))
            for (a, b), comp in zip(zip(p, p[1:]), d.components):
                i0, i1 = int(a * n), int(b * n)
                k = i1 - i0
                w = float(b - a)
                block = to_grid(comp, k).mass * w if k >= 2 else np.array([[w]])
                mass[i0:i1, i0:i1] = block
            return GridCopula(mass)
    t = np.linspace(0.0, 1.0, n + 1)
    X, Y = np.meshgrid(t, t, indexing="ij")
    C = eval_cdf_array(d, X, Y)
    mass = np.diff(np.diff(C, axis=0), axis=1)
    return GridCopula(_symmetrize(mass))


def support_polyline(s: IntervalExchange) -> list[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
    """Graph of the shuffle's support map as oriented segments."""
    return s.segments()
