"""The *-product (Markov product) of copulas.

``(A * B)(x, y) = ∫₀¹ ∂₂A(x, t) ∂₁B(t, y) dt``.  For complete-dependence
copulas this is composition of support maps: if ``Y = f(X)`` and ``Z = g(Y)``
then ``C_f * C_g = C_{g∘f}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (
    M,
    PI,
    CompleteDependence,
    Convex,
    Descriptor,
    GridCopula,
    IntervalExchange,
    OrdinalSum,
    Parametric,
    as_exchange,
    is_m,
    is_pi,
    to_grid,
    transpose,
)

DEFAULT_N = 256


def describe(d) -> str:
    """Short human-readable identifier of a descriptor."""
    if isinstance(d, Parametric):
        return d.name if d.name != "FGM" else f"FGM({d.theta:g})"
    if isinstance(d, GridCopula):
        return f"grid[{d.n}]"
    if isinstance(d, IntervalExchange):
        return f"shuffle[{len(d.pieces)} pieces]"
    if isinstance(d, CompleteDependence):
        return f"map[{len(d.map.pieces)} pieces]" + ("ᵀ" if d.transposed else "")
    if isinstance(d, Convex):
        return f"convex({d.alpha:g}, {describe(d.left)}, {describe(d.right)})"
    if isinstance(d, OrdinalSum):
        return f"ordinal[{len(d.components)}]"
    return type(d).__name__


@dataclass
class StarResult:
    copula: Descriptor
    exactness: str  # "exact" or "grid(n)"
    provenance: tuple[str, str] = field(default_factory=tuple)

    @property
    def exact(self) -> bool:
        return self.exactness == "exact"


def grid_star(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``n · (A @ B)``, the exact product of two checkerboard measures."""
    if a.shape != b.shape:
        raise ValueError(
            f"grid resolution mismatch ({a.shape[0]} vs {b.shape[0]}); re-grid both operands to a common n"
        )
    return a.shape[0] * (a @ b)


def _permute_rows(f: IntervalExchange, g: GridCopula) -> GridCopula:
    # (C_f * G)(I × J) = μ_G(f(I) × J)
    return GridCopula(g.mass[f.cell_permutation(g.n)])


def _permute_cols(g: GridCopula, f: IntervalExchange) -> GridCopula:
    # (G * C_f)(I × J) = μ_G(I × f⁻¹(J))
    out = np.empty_like(g.mass)
    out[:, f.cell_permutation(g.n)] = g.mass
    return GridCopula(out)


def _exact(a, b):
    """Closed-form product or ``None`` when no exact rule applies."""
    if is_pi(a) or is_pi(b):
        return PI
    if is_m(a):
        return b
    if is_m(b):
        return a
    fa, fb = as_exchange(a), as_exchange(b)
    if fa is not None and fb is not None:
        return fb.compose(fa)
    if isinstance(a, Convex):
        left, right = _exact(a.left, b), _exact(a.right, b)
        if left is not None and right is not None:
            return Convex(a.alpha, left, right)
        return None
    if isinstance(b, Convex):
        left, right = _exact(a, b.left), _exact(a, b.right)
        if left is not None and right is not None:
            return Convex(b.alpha, left, right)
        return None
    if fa is not None and isinstance(b, CompleteDependence):
        if not b.transposed:
            return CompleteDependence(b.map.compose(fa))
        # C_f * C_hᵀ = (C_h * C_{f⁻¹})ᵀ
        return CompleteDependence(fa.inverse().compose(b.map), True)
    if fb is not None and isinstance(a, CompleteDependence):
        if not a.transposed:
            return CompleteDependence(fb.compose(a.map))
        # C_hᵀ * C_g = (C_{g⁻¹} * C_h)ᵀ
        return CompleteDependence(a.map.compose(fb.inverse()), True)
    if isinstance(a, CompleteDependence) and isinstance(b, CompleteDependence) and a.transposed == b.transposed:
        if not a.transposed:
            return CompleteDependence(b.map.compose(a.map))
        return CompleteDependence(a.map.compose(b.map), True)
    if (isinstance(a, CompleteDependence) and isinstance(b, CompleteDependence)
            and a.transposed and not b.transposed and a.map == b.map):
        # X = h(Y) and Z = h(Y) are comonotone
        return M
    if fa is not None and isinstance(b, GridCopula) and fa.is_aligned(b.n):
        return _permute_rows(fa, b)
    if fb is not None and isinstance(a, GridCopula) and fb.is_aligned(a.n):
        return _permute_cols(a, fb)
    return None


def star(a: Descriptor, b: Descriptor, n: int = DEFAULT_N) -> StarResult:
    """The *-product ``a * b``.

    Exact whenever a closed rule exists (shuffles, complete-dependence maps,
    the identity M, the null element Π, convex mixtures of those, and grids
    permuted by grid-aligned shuffles).  Otherwise both operands are
    discretised to the common grid (``n``, or the resolution of a grid
    operand) and multiplied there.

    Raises
    ------
    ValueError
        If both operands are grids of different resolution.
    """
    prov = (describe(a), describe(b))
    exact = _exact(a, b)
    if exact is not None:
        return StarResult(exact, "exact", prov)
    if isinstance(a, GridCopula) and isinstance(b, GridCopula):
        return StarResult(GridCopula(grid_star(a.mass, b.mass)), f"grid({a.n})", prov)
    m = a.n if isinstance(a, GridCopula) else b.n if isinstance(b, GridCopula) else n
    ga, gb = to_grid(a, m), to_grid(b, m)
    return StarResult(GridCopula(grid_star(ga.mass, gb.mass)), f"grid({m})", prov)


def shuffle_of(d: Descriptor, t: IntervalExchange, side: str = "left", n: int = DEFAULT_N) -> StarResult:
    """Shuffle ``d`` by ``t``: ``C_t * d`` on the left, ``d * C_t`` on the right.

    On the left this is the push-forward of ``μ_d`` under ``(x, y) ↦ (t⁻¹(x), y)``,
    so every vertical stripe of mass is moved to where ``t`` sends it.
    """
    if side == "left":
        return star(t, d, n)
    if side == "right":
        return star(d, t, n)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def star_chain(*operands: Descriptor, n: int = DEFAULT_N) -> StarResult:
    """Left-to-right product ``((d₁ * d₂) * d₃) * …``."""
    if not operands:
        raise ValueError("need at least one operand")
    acc = StarResult(operands[0], "exact", (describe(operands[0]),))
    for d in operands[1:]:
        nxt = star(acc.copula, d, n)
        exactness = acc.exactness if nxt.exact else nxt.exactness
        acc = StarResult(nxt.copula, exactness, acc.provenance + (describe(d),))
    return acc


__all__ = ["StarResult", "star", "shuffle_of", "star_chain", "grid_star", "describe", "transpose"]
