"""Sobolev norms, inner products and distances between copulas."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    CompleteDependence,
    Convex,
    GridCopula,
    OrdinalSum,
    Parametric,
    as_exchange,
    is_pi,
    to_grid,
)
from .maps import IntervalExchange, PiecewiseAffineMap, l1_distance

TWO_THIRDS = Fraction(2, 3)
BOUND_TOL = 1e-6
DEFAULT_N = 256


@dataclass
class NormReport:
    norm_sq: float
    scheme: str  # "exact-shuffle" | "exact-map" | "closed-form" | "grid(n)"
    exact: Fraction | None = None

    @property
    def bound_check(self) -> bool:
        return 2 / 3 - BOUND_TOL <= self.norm_sq <= 1 + BOUND_TOL

    def to_dict(self) -> dict:
        out = {"norm_sq": self.norm_sq, "scheme": self.scheme, "bound_check": self.bound_check}
        if self.exact is not None:
            out["exact"] = str(self.exact)
        return out


# --- checkerboard quadrature -------------------------------------------------
#
# Inside cell (i, j) the checkerboard has ∂₁C = n (S + β m) with S the row mass
# left of the cell, m the cell mass and β ∈ [0, 1] the relative height, so
# ∬_cell ∂₁A ∂₁B = S_A S_B + (S_A m_B + m_A S_B) / 2 + m_A m_B / 3 exactly.

def _half_inner(a: np.ndarray, b: np.ndarray) -> float:
    sa = np.cumsum(a, axis=1) - a
    sb = np.cumsum(b, axis=1) - b
    return float(np.sum(sa * sb + 0.5 * (sa * b + a * sb) + a * b / 3.0))


def grid_inner(a: np.ndarray, b: np.ndarray) -> float:
    """⟨A, B⟩ = ∬ ∇A·∇B for two checkerboard copulas on the same grid."""
    if a.shape != b.shape:
        raise ValueError(f"grid resolution mismatch {a.shape} vs {b.shape}; re-grid to a common n")
    return _half_inner(a, b) + _half_inner(a.T, b.T)


def grid_norm_sq(mass: np.ndarray) -> float:
    return grid_inner(mass, mass)


# --- exact rules ---------------------------------------------------------------

def _exact_norm(d) -> tuple[Fraction | float, str] | None:
    ex = as_exchange(d)
    if ex is not None:
        return Fraction(1), "exact-shuffle"
    if is_pi(d):
        return TWO_THIRDS, "closed-form"
    if isinstance(d, Parametric) and d.name == "FGM":
        return TWO_THIRDS + Fraction(d.theta) ** 2 / 45, "closed-form"
    if isinstance(d, CompleteDependence):
        return d.map.sobolev_norm_sq(), "exact-map"
    if isinstance(d, PiecewiseAffineMap):
        return d.sobolev_norm_sq(), "exact-map"
    if isinstance(d, Convex):
        a = Fraction(d.alpha)
        if is_pi(d.right) or is_pi(d.left):
            other, w = (d.left, a) if is_pi(d.right) else (d.right, 1 - a)
            sub = _exact_norm(other)
            if sub is None:
                return None
            return w * w * (sub[0] - TWO_THIRDS) + TWO_THIRDS, sub[1]
        nl, nr, ip = _exact_norm(d.left), _exact_norm(d.right), _exact_inner(d.left, d.right)
        if nl is None or nr is None or ip is None:
            return None
        return a * a * nl[0] + (1 - a) ** 2 * nr[0] + 2 * a * (1 - a) * ip, nl[1]
    if isinstance(d, OrdinalSum):
        total, scheme = Fraction(0), "closed-form"
        p = d.partition
        for (lo, hi), comp in zip(zip(p, p[1:]), d.components):
            sub = _exact_norm(comp)
            if sub is None:
                return None
            w = hi - lo
            total += 2 * w * (1 - hi) + w * w * sub[0]
        return total, scheme
    return None


def _exact_inner(a, b) -> Fraction | None:
    if is_pi(a) or is_pi(b):
        # ⟨C, Π⟩ = ∫∫ y ∂₁C + x ∂₂C = 1/3 + 1/3 for every copula C
        return TWO_THIRDS
    fa, fb = as_exchange(a), as_exchange(b)
    if fa is not None and fb is not None:
        one = Fraction(1)
        # ∫(1 - max(f, g)) = 1 - (∫f + ∫g + ∫|f - g|) / 2, and ∫f = 1/2
        first = one - (one + l1_distance(fa, fb)) / 2
        second = one - (one + l1_distance(fa.inverse(), fb.inverse())) / 2
        return first + second
    if a == b:
        sub = _exact_norm(a)
        return None if sub is None else sub[0]
    return None


# --- public API -------------------------------------------------------------

def sobolev_norm_sq(d, n: int = DEFAULT_N) -> NormReport:
    """‖C‖² = ∬ (∂₁C)² + (∂₂C)²; exact where a closed form exists, else on an ``n``-grid."""
    if isinstance(d, GridCopula):
        return NormReport(grid_norm_sq(d.mass), f"grid({d.n})")
    ex = _exact_norm(d)
    if ex is not None:
        value, scheme = ex
        return NormReport(float(value), scheme, Fraction(value))
    g = to_grid(d, n)
    return NormReport(grid_norm_sq(g.mass), f"grid({n})")


def inner(a, b, n: int = DEFAULT_N) -> float:
    ex = _exact_inner(a, b)
    if ex is not None:
        return float(ex)
    ga = a if isinstance(a, GridCopula) else to_grid(a, b.n if isinstance(b, GridCopula) else n)
    gb = b if isinstance(b, GridCopula) else to_grid(b, ga.n)
    return grid_inner(ga.mass, gb.mass)


def graph_l1_distance(f1: IntervalExchange, f2: IntervalExchange) -> Fraction:
    """Exact ∫₀¹ |f₁ − f₂| for two support maps."""
    return l1_distance(f1, f2)


def shuffle_dist_sq(f1: IntervalExchange, f2: IntervalExchange) -> Fraction:
    """‖C₁ − C₂‖² = ‖f₁ − f₂‖₁ + ‖f₁⁻¹ − f₂⁻¹‖₁ for two shuffles of Min.

    The partial derivatives of a shuffle are indicators of the regions above
    its support graph, so their differences are ±1 exactly between the graphs.
    """
    return l1_distance(f1, f2) + l1_distance(f1.inverse(), f2.inverse())


def sobolev_dist_sq(a, b, n: int = DEFAULT_N) -> float:
    """‖A − B‖².  Exact for two shuffles of Min, grid quadrature otherwise."""
    fa, fb = as_exchange(a), as_exchange(b)
    if fa is not None and fb is not None:
        return float(shuffle_dist_sq(fa, fb))
    if not isinstance(a, GridCopula) and not isinstance(b, GridCopula):
        na, nb, ip = _exact_norm(a), _exact_norm(b), _exact_inner(a, b)
        if na is not None and nb is not None and ip is not None:
            return float(na[0] + nb[0] - 2 * ip)
    if isinstance(a, GridCopula) and isinstance(b, GridCopula) and a.n != b.n:
        raise ValueError(f"grid resolution mismatch {a.n} vs {b.n}; re-grid to a common n")
    m = a.n if isinstance(a, GridCopula) else b.n if isinstance(b, GridCopula) else n
    diff = to_grid(a, m).mass - to_grid(b, m).mass
    return max(grid_norm_sq(diff), 0.0)
