"""Constructive shuffle algorithms.

* ``sorting_shuffle``: the measure-preserving bijection that moves a set
  ``A`` to an initial interval while keeping the order inside ``A`` and
  inside its complement.
* ``diagonalize`` / ``right_diagonalize``: the greedy sequence of shuffles
  ``B_k = S_k * ... * S_1`` that pushes a complete-dependence copula into
  ever finer diagonal blocks, so that ``‖B_k * C‖ → 1``.
* ``approx_by_shuffles``: straight shuffle of Min approximating a unit-norm
  copula on ``bins`` equal range intervals.
* ``selfsimilar``: the dyadic stripe-flipping sequence whose limit has
  jumps on a dense set.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    CompleteDependence,
    Descriptor,
    GridCopula,
    as_exchange,
    to_grid,
    transpose,
)
from .maps import ONE, ZERO, IntervalExchange, IntervalUnion, PiecewiseAffineMap, Piece, as_fraction
from .norms import grid_norm_sq, shuffle_dist_sq, sobolev_dist_sq, sobolev_norm_sq
from .star import star

MAX_LEVEL = 16


# --- sorting shuffle --------------------------------------------------------

def _intersect(a: IntervalUnion, lo, hi) -> IntervalUnion:
    return IntervalUnion((max(x, lo), min(y, hi)) for x, y in a if min(y, hi) > max(x, lo))


def _sorting_pieces(a: IntervalUnion, lo: Fraction, hi: Fraction) -> list[Piece]:
    """Pieces of the sorting map of ``a ⊆ [lo, hi]`` acting inside ``[lo, hi]``."""
    inside = _intersect(a, lo, hi)
    outside = inside.complement(lo, hi)
    pieces = []
    cursor = lo
    for x, y in inside:
        pieces.append(Piece(x, y, ONE, cursor - x))
        cursor += y - x
    for x, y in outside:
        pieces.append(Piece(x, y, ONE, cursor - x))
        cursor += y - x
    return pieces


def sorting_shuffle(a: IntervalUnion | str, lo=ZERO, hi=ONE) -> IntervalExchange:
    """The sorting map ``s_A``.

    On ``A`` it is ``x ↦ m([lo, x] ∩ A)`` and off ``A`` it is
    ``x ↦ m(A) + m([lo, x] \\ A)`` (both shifted by ``lo``), so it pushes
    ``A`` onto an initial segment of ``[lo, hi]`` without reordering.

    Parameters
    ----------
    a : IntervalUnion or str
        The set ``A``; strings use the ``"a1,b1;a2,b2"`` syntax.  Zero-length
        intervals are dropped.
    lo, hi : Fraction
        The block the shuffle acts on; identity outside it.

    Examples
    --------
    >>> sorting_shuffle("0.5,1").targets()
    [(Fraction(0, 1), Fraction(1, 2), Fraction(1, 2), 1), (Fraction(1, 2), Fraction(1, 1), Fraction(0, 1), 1)]
    """
    if isinstance(a, str):
        a = IntervalUnion.parse(a)
    lo, hi = as_fraction(lo), as_fraction(hi)
    pieces = _sorting_pieces(a, lo, hi)
    if lo > 0:
        pieces.append(Piece(ZERO, lo, ONE, ZERO))
    if hi < 1:
        pieces.append(Piece(hi, ONE, ONE, ZERO))
    return IntervalExchange(tuple(pieces))


# --- diagonalization --------------------------------------------------------

@dataclass
class DiagonalizationTrace:
    """Shuffles ``S_1, …, S_depth`` and ``‖B_k * C‖²`` after each step.

    ``initial_norm_sq`` is ``‖C‖²``; ``composed`` is ``B_depth`` and
    ``result`` is ``B_depth * C`` (or ``C * B_depthᵀ`` for the right-hand
    variant).
    """

    steps: list[tuple[IntervalExchange, float]]
    composed: IntervalExchange
    result: Descriptor
    initial_norm_sq: float
    mode: str
    side: str = "left"

    @property
    def norms(self) -> list[float]:
        return [self.initial_norm_sq] + [v for _, v in self.steps]

    @property
    def final_norm_sq(self) -> float:
        return self.norms[-1]

    def rows(self) -> list[tuple[int, float]]:
        return list(enumerate(self.norms))


def _exact_support_map(c) -> PiecewiseAffineMap | None:
    ex = as_exchange(c)
    if ex is not None:
        return ex
    if isinstance(c, CompleteDependence) and not c.transposed and c.map.is_measure_preserving():
        return c.map
    return None


def _exact_step(h: PiecewiseAffineMap, k: int) -> IntervalExchange:
    """Support map of ``S_k`` for the current support map ``h``."""
    size = Fraction(1, 2 ** (k - 1))
    pieces: list[Piece] = []
    for b in range(2 ** (k - 1)):
        lo, hi = b * size, (b + 1) * size
        mid = lo + size / 2
        lower = _intersect(h.preimage(lo, mid), lo, hi)
        pieces.extend(_sorting_pieces(lower, lo, hi))
    # the sorting map s moves the good half to the front; S_k is supported on s⁻¹
    return IntervalExchange(tuple(pieces)).inverse()


def _median_columns(block: np.ndarray) -> np.ndarray:
    rows = block.sum(axis=1, keepdims=True)
    safe = np.where(rows > 0, rows, 1.0)
    cdf = np.cumsum(block, axis=1) / safe
    return np.argmax(cdf >= 0.5 - 1e-12, axis=1)


def _grid_step(mass: np.ndarray, k: int) -> IntervalExchange:
    n = mass.shape[0]
    size = n >> (k - 1)
    perm = np.empty(n, dtype=int)  # s: old row -> new row
    for b in range(0, n, size):
        block = mass[b:b + size, b:b + size]
        med = _median_columns(block)
        centre = (block * np.arange(size)).sum(axis=1) / np.maximum(block.sum(axis=1), 1e-300)
        order = np.lexsort((np.arange(size), centre, med))
        lower = np.sort(order[: size // 2])
        upper = np.sort(order[size // 2:])
        for new, old in enumerate(np.concatenate([lower, upper])):
            perm[b + old] = b + new
    inv = np.empty(n, dtype=int)
    inv[perm] = np.arange(n)
    return IntervalExchange.from_permutation(inv)


def diagonalize(c: Descriptor, depth: int, n: int = 256) -> DiagonalizationTrace:
    """Greedy left diagonalization ``B_k * C``.

    Within every diagonal block ``J`` of the previous stage, the set
    ``A = J ∩ h⁻¹(lower half of J)`` is sorted to the front of ``J`` so
    that after ``k`` steps the support lies in the ``2ᵏ`` diagonal squares.
    Exact (Fraction arithmetic) for shuffles and complete-dependence maps;
    other inputs are processed on an ``n``-grid where a row belongs to
    ``A`` when its conditional median column is among the lower half of
    its block.

    Raises
    ------
    ValueError
        If ``depth`` exceeds ``log2(n)`` in grid mode or is negative.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    h = _exact_support_map(c)
    composed = IntervalExchange.identity()
    steps: list[tuple[IntervalExchange, float]] = []
    if h is not None:
        current: Descriptor = c
        initial = float(sobolev_norm_sq(c).norm_sq)
        for k in range(1, depth + 1):
            s = _exact_step(h, k)
            h = h.compose(s)
            current = star(s, current).copula
            composed = star(s, composed).copula
            steps.append((s, float(sobolev_norm_sq(current).norm_sq)))
        return DiagonalizationTrace(steps, composed, current, initial, "exact")

    g = c if isinstance(c, GridCopula) else to_grid(c, n)
    n = g.n
    if 2 ** depth > n or n % (2 ** depth):
        raise ValueError(f"depth {depth} exhausts a grid of resolution {n}; need 2**depth dividing n")
    current = g
    initial = grid_norm_sq(g.mass)
    for k in range(1, depth + 1):
        s = _grid_step(current.mass, k)
        current = star(s, current).copula
        composed = star(s, composed).copula
        steps.append((s, grid_norm_sq(current.mass)))
    return DiagonalizationTrace(steps, composed, current, initial, f"grid({n})")


def right_diagonalize(c: Descriptor, depth: int, n: int = 256) -> DiagonalizationTrace:
    """Mirror of :func:`diagonalize`: shuffles multiply ``C`` on the right."""
    t = diagonalize(transpose(c), depth, n)
    steps = [(s.inverse(), v) for s, v in t.steps]
    return DiagonalizationTrace(
        steps, t.composed.inverse(), transpose(t.result), t.initial_norm_sq, t.mode, "right"
    )


def block_leakage(mass: np.ndarray, k: int) -> float:
    """Mass outside the ``2ᵏ`` diagonal blocks of a grid copula."""
    n = mass.shape[0]
    size = n >> k
    idx = np.arange(n) // size
    return float(mass[idx[:, None] != idx[None, :]].sum())


# --- approximation by straight shuffles -------------------------------------

@dataclass
class Approximation:
    shuffle: IntervalExchange
    dist_sq: float
    bound: float
    l1: Fraction | float
    bins: int
    source: str  # "exact" or "grid(n)"
    target: IntervalExchange = field(repr=False, default=None)
    lemma_bound: float = 0.0

    def to_dict(self) -> dict:
        return {
            "bins": self.bins,
            "dist_sq": self.dist_sq,
            "bound": self.bound,
            "lemma_bound": self.lemma_bound,
            "l1": float(self.l1),
            "source": self.source,
            "pieces": len(self.shuffle.pieces),
        }


def grid_support_map(g: GridCopula) -> IntervalExchange:
    """Cell permutation carrying the most mass, as a straight shuffle."""
    rows, cols = linear_sum_assignment(g.mass, maximize=True)
    perm = np.empty(g.n, dtype=int)
    perm[rows] = cols
    return IntervalExchange.from_permutation(perm)


def straighten(f: IntervalExchange, bins: int) -> IntervalExchange:
    """Slope-+1 map sending ``f⁻¹(bin k)`` in increasing order onto bin ``k``."""
    pieces = []
    for k in range(bins):
        lo, hi = Fraction(k, bins), Fraction(k + 1, bins)
        cursor = lo
        for a, b in f.preimage(lo, hi):
            pieces.append(Piece(a, b, ONE, cursor - a))
            cursor += b - a
    return IntervalExchange(tuple(pieces))


def approx_by_shuffles(c: Descriptor, bins: int, n: int = 256, eps: float | None = None) -> Approximation:
    """Straight shuffle of Min close to a unit-norm copula.

    Parameters
    ----------
    c : descriptor
        A shuffle of Min, or a grid whose norm² is at least ``1 - eps``.
    bins : int
        Number of equal range intervals.
    eps : float, optional
        Unit-norm tolerance; defaults to ``1e-12`` for exact inputs and
        ``1/n`` for grids (an n-grid of M itself has norm² ``1 - 1/(3n)``).

    Returns
    -------
    Approximation
        ``dist_sq = ‖C - S‖²`` and a certified ``bound``.  For shuffle input
        the bound is ``‖f - f_bins‖₁ + ‖f⁻¹ - f_bins⁻¹‖₁``, which equals the
        distance; for grids the triangle inequality through the extracted
        support map is added.  ``lemma_bound = 2 ‖f - f_bins‖₁`` is kept for
        comparison only; it is not a valid bound when the inverse maps are
        further apart than the maps themselves.

    Raises
    ------
    ValueError
        If the input is not certified unit-norm.
    """
    if bins < 1:
        raise ValueError("bins must be positive")
    f = as_exchange(c)
    if f is not None:
        s = straighten(f, bins)
        l1 = _l1(f, s)
        exact = shuffle_dist_sq(f, s)
        return Approximation(s, float(exact), float(exact), l1, bins, "exact", f, float(2 * l1))
    g = c if isinstance(c, GridCopula) else None
    if g is None:
        rep = sobolev_norm_sq(c, n)
        tol = 1e-12 if eps is None else eps
        raise ValueError(
            f"input is not a shuffle of Min (norm² {rep.norm_sq:.12g}); only unit-norm copulas "
            f"(tolerance {tol}) can be approximated"
        )
    tol = 1.0 / g.n if eps is None else eps
    nsq = grid_norm_sq(g.mass)
    if nsq < 1 - tol:
        raise ValueError(f"grid norm² {nsq:.12g} < 1 - {tol:g}: not a unit-norm copula")
    f = grid_support_map(g)
    s = straighten(f, bins)
    l1 = _l1(f, s)
    # ‖G − S‖ ≤ ‖G − C_f‖ + ‖C_f − S‖
    bound = (np.sqrt(sobolev_dist_sq(g, f)) + np.sqrt(float(shuffle_dist_sq(f, s)))) ** 2
    return Approximation(s, sobolev_dist_sq(g, s), float(bound), l1, bins, f"grid({g.n})", f, float(2 * l1))


def _l1(f, g) -> Fraction:
    from .maps import l1_distance

    return l1_distance(f, g)


# --- self-similar example ---------------------------------------------------

def selfsimilar(level: int, shift: int = 0) -> IntervalExchange:
    """Support map of the stripe-flipping shuffle ``S_level``.

    ``S_0`` is M.  Stage ``j`` reflects the current support horizontally in
    every stripe of ``F_{j-shift}``, where ``F_0 = [1/2, 1]`` and
    ``F_m = F_{m-1}/2 ∪ (F_{m-1}/2 + 1/2)``, i.e. the right halves of the
    dyadic intervals of length ``2^-m``.

    With ``shift=0`` consecutive stages differ by ``‖S_j - S_{j-1}‖² = 2^-(j+2)``;
    ``shift=1`` starts by flipping ``[1/2, 1]`` itself.

    Raises
    ------
    ValueError
        For levels outside ``0..16``.
    """
    if not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be in 0..{MAX_LEVEL}, got {level}")
    if shift not in (0, 1):
        raise ValueError("shift must be 0 or 1")
    cells = 2 ** (level + 1)
    image = np.arange(cells)
    slope = np.ones(cells, dtype=int)
    for j in range(1, level + 1):
        m = j - shift
        width = cells >> (m + 1)  # stripe width in cells
        for start in range(width, cells, 2 * width):
            sl = slice(start, start + width)
            image[sl] = image[sl][::-1].copy()
            slope[sl] = -slope[sl][::-1]
    return IntervalExchange.from_permutation(image, slope)


def selfsimilar_left_limit(level: int, x: Fraction, shift: int = 0) -> Fraction:
    return selfsimilar(level, shift).left_limit(as_fraction(x))


def alternating_partial_sum(terms: int) -> Fraction:
    """``Σ_{j=1}^{terms} (-1)^{j+1} 2^{-j}``, which tends to ``1/3``."""
    return sum((Fraction((-1) ** (j + 1), 2 ** j) for j in range(1, terms + 1)), ZERO)


# --- named shuffles -------------------------------------------------------------

def half_swap() -> IntervalExchange:
    return IntervalExchange.from_permutation([1, 0])


def quarter_cycle() -> IntervalExchange:
    """``x ↦ x + 1/4 mod 1``."""
    return IntervalExchange.from_permutation([1, 2, 3, 0])


def s_alpha(alpha) -> IntervalExchange:
    """Straight shuffle ``x ↦ x + 1 - α`` on ``[0, α)``, ``x ↦ x - α`` on ``[α, 1]``."""
    a = as_fraction(alpha)
    if not 0 <= a <= 1:
        raise ValueError("alpha must lie in [0, 1]")
    return IntervalExchange.from_targets([(ZERO, a, ONE - a, 1), (a, ONE, ZERO, 1)])


def doubling_map() -> CompleteDependence:
    """Complete-dependence copula of ``(U, 2U mod 1)``."""
    h = PiecewiseAffineMap.from_affine([(0, Fraction(1, 2), 2, 0), (Fraction(1, 2), 1, 2, -1)])
    return CompleteDependence(h)


def tent_map() -> CompleteDependence:
    """Complete-dependence copula of ``(U, 1 - |2U - 1|)``."""
    h = PiecewiseAffineMap.from_affine([(0, Fraction(1, 2), 2, 0), (Fraction(1, 2), 1, -2, 2)])
    return CompleteDependence(h)


def random_shuffle(rng: np.random.Generator, max_cells: int = 8) -> IntervalExchange:
    """Random interval exchange on a dyadic grid with random flips."""
    cells = int(rng.integers(1, max_cells + 1))
    perm = rng.permutation(cells)
    slopes = rng.choice([-1, 1], size=cells)
    return IntervalExchange.from_permutation(perm, slopes)


def random_exchange(rng: np.random.Generator, pieces: int = 5) -> IntervalExchange:
    """Random interval exchange with irregular dyadic breakpoints."""
    cuts = sorted({Fraction(int(v), 64) for v in rng.integers(1, 64, size=pieces - 1)})
    edges = [ZERO, *cuts, ONE]
    lengths = [b - a for a, b in zip(edges, edges[1:])]
    order = rng.permutation(len(lengths))
    starts = {}
    cursor = ZERO
    for i in order:
        starts[int(i)] = cursor
        cursor += lengths[int(i)]
    rows = [
        (edges[i], edges[i + 1], starts[i], int(rng.choice([-1, 1]))) for i in range(len(lengths))
    ]
    return IntervalExchange.from_targets(rows)
