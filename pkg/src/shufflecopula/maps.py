"""Exact piecewise-affine maps of the unit interval.

Breakpoints, slopes and intercepts are stored as :class:`fractions.Fraction`,
so dyadic constructions (self-similar shuffles, sorting shuffles on dyadic
blocks) compose without rounding.  A map ``h`` stands for the copula of
``(U, h(U))`` with ``U`` uniform, i.e. the copula supported on the graph of
``h``.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def as_fraction(x) -> Fraction:
    """Convert ints, floats, decimals and numeric strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    if isinstance(x, (Decimal, str)):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class Piece(NamedTuple):
    """Affine branch ``t -> slope * t + intercept`` on ``[lo, hi)``."""

    lo: Fraction
    hi: Fraction
    slope: Fraction
    intercept: Fraction

    def __call__(self, t):
        return self.slope * t + self.intercept

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def image(self) -> tuple[Fraction, Fraction]:
        a, b = self(self.lo), self(self.hi)
        return (a, b) if a <= b else (b, a)

    def preimage_of(self, y):
        return (y - self.intercept) / self.slope


class IntervalUnion:
    """Finite union of disjoint closed intervals inside ``[0, 1]``.

    Zero-length intervals are dropped and touching intervals are merged,
    so two unions compare equal iff they cover the same set up to
    endpoints.
    """

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Sequence] = ()):
        cleaned = sorted(
            (as_fraction(a), as_fraction(b)) for a, b in intervals if as_fraction(b) > as_fraction(a)
        )
        merged: list[tuple[Fraction, Fraction]] = []
        for a, b in cleaned:
            if a < 0 or b > 1:
                raise ValueError(f"interval [{a}, {b}] not inside [0, 1]")
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
            else:
                merged.append((a, b))
        self.intervals: tuple[tuple[Fraction, Fraction], ...] = tuple(merged)

    @classmethod
    def parse(cls, text: str) -> "IntervalUnion":
        """Parse ``"a1,b1;a2,b2"``."""
        parts = [p for p in text.replace(" ", "").split(";") if p]
        pairs = []
        for p in parts:
            a, b = p.split(",")
            pairs.append((as_fraction(a), as_fraction(b)))
        return cls(pairs)

    def measure(self) -> Fraction:
        return sum((b - a for a, b in self.intervals), ZERO)

    def measure_below(self, x) -> Fraction:
        """m([0, x] ∩ A)."""
        total = ZERO
        for a, b in self.intervals:
            if a >= x:
                break
            total += min(b, x) - a
        return total

    def complement(self, lo=ZERO, hi=ONE) -> "IntervalUnion":
        out, cur = [], as_fraction(lo)
        for a, b in self.intervals:
            if b <= lo or a >= hi:
                continue
            if a > cur:
                out.append((cur, a))
            cur = max(cur, b)
        if cur < hi:
            out.append((cur, as_fraction(hi)))
        return IntervalUnion(out)

    def __contains__(self, x) -> bool:
        i = bisect.bisect_right(self.intervals, (x, ONE + 1)) - 1
        return i >= 0 and self.intervals[i][0] <= x <= self.intervals[i][1]

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __eq__(self, other):
        return isinstance(other, IntervalUnion) and self.intervals == other.intervals

    def __hash__(self):
        return hash(self.intervals)

    def __repr__(self):
        body = " ∪ ".join(f"[{a}, {b}]" for a, b in self.intervals) or "∅"
        return f"IntervalUnion({body})"


def _merge_pieces(pieces: list[Piece]) -> list[Piece]:
    out: list[Piece] = []
    for p in pieces:
        if p.hi <= p.lo:
            continue
        if out:
            q = out[-1]
            if q.hi == p.lo and q.slope == p.slope and q.intercept == p.intercept:
                out[-1] = Piece(q.lo, p.hi, q.slope, q.intercept)
                continue
        out.append(p)
    return out


@dataclass(frozen=True, eq=True)
class PiecewiseAffineMap:
    """Possibly non-injective piecewise-affine self-map of ``[0, 1]``.

    The copula attached to the map is that of ``(U, h(U))``; it is a
    complete-dependence copula whenever the map is measure preserving.
    """

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        pieces = sorted(
            Piece(*(as_fraction(v) for v in p)) for p in self.pieces
        )
        object.__setattr__(self, "pieces", tuple(_merge_pieces(pieces)))
        object.__setattr__(self, "_los", [p.lo for p in self.pieces])

    @classmethod
    def from_affine(cls, pieces: Iterable[Sequence]) -> "PiecewiseAffineMap":
        """Build from ``(lo, hi, slope, intercept)`` rows."""
        return cls(tuple(Piece(*(as_fraction(v) for v in p)) for p in pieces))

    @classmethod
    def identity(cls):
        return cls((Piece(ZERO, ONE, ONE, ZERO),))

    # --- evaluation -----------------------------------------------------
    @property
    def breakpoints(self) -> list[Fraction]:
        pts = [p.lo for p in self.pieces]
        if self.pieces:
            pts.append(self.pieces[-1].hi)
        return pts

    def _index(self, t) -> int:
        i = bisect.bisect_right(self._los, t) - 1
        return min(max(i, 0), len(self.pieces) - 1)

    def __call__(self, t):
        return self.pieces[self._index(t)](t)

    def left_limit(self, t):
        i = bisect.bisect_left(self._los, t) - 1
        i = min(max(i, 0), len(self.pieces) - 1)
        return self.pieces[i](t)

    def integral(self) -> Fraction:
        return sum(((p(p.lo) + p(p.hi)) / 2 * p.length for p in self.pieces), ZERO)

    def segments(self) -> list[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]]:
        """Graph of the map as oriented segments ``((x0, y0), (x1, y1))``."""
        return [((p.lo, p(p.lo)), (p.hi, p(p.hi))) for p in self.pieces]

    # --- algebra --------------------------------------------------------
    def compose(self, inner: "PiecewiseAffineMap") -> "PiecewiseAffineMap":
        """Return ``self ∘ inner``."""
        outer_los = self._los
        out: list[Piece] = []
        for q in inner.pieces:
            ymin, ymax = q.image
            i = max(bisect.bisect_right(outer_los, ymin) - 1, 0)
            while i < len(self.pieces) and self.pieces[i].lo < ymax:
                p = self.pieces[i]
                ya, yb = max(p.lo, ymin), min(p.hi, ymax)
                if yb > ya:
                    ta, tb = sorted((q.preimage_of(ya), q.preimage_of(yb)))
                    out.append(Piece(ta, tb, p.slope * q.slope, p.slope * q.intercept + p.intercept))
                i += 1
            if ymin == ymax:  # constant branch
                p = self.pieces[self._index(ymin)]
                out.append(Piece(q.lo, q.hi, ZERO, p(ymin)))
        cls = IntervalExchange if isinstance(self, IntervalExchange) and isinstance(inner, IntervalExchange) else PiecewiseAffineMap
        return cls(tuple(out))

    def preimage(self, lo, hi) -> IntervalUnion:
        """``{t : lo <= h(t) <= hi}`` up to finitely many points."""
        out = []
        for p in self.pieces:
            ymin, ymax = p.image
            a, b = max(ymin, lo), min(ymax, hi)
            if b > a:
                out.append(tuple(sorted((p.preimage_of(a), p.preimage_of(b)))))
        return IntervalUnion(out)

    def restricted_density(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """Push-forward density of Lebesgue measure on elementary y-intervals.

        Returns ``(y0, y1, density)`` rows; a measure-preserving map has
        density one everywhere.
        """
        change: dict[Fraction, Fraction] = {ZERO: ZERO, ONE: ZERO}
        for p in self.pieces:
            if p.slope == 0:
                continue
            a, b = p.image
            w = 1 / abs(p.slope)
            change[a] = change.get(a, ZERO) + w
            change[b] = change.get(b, ZERO) - w
        ys = sorted(change)
        rows = []
        d = ZERO
        for y0, y1 in zip(ys, ys[1:]):
            d += change[y0]
            if 0 <= y0 and y1 <= 1:
                rows.append((y0, y1, d))
        return rows

    def problems(self) -> list[str]:
        """Structural defects; an empty list means a valid measure-preserving map."""
        errs = []
        if not self.pieces:
            return ["no pieces"]
        if self.pieces[0].lo != 0 or self.pieces[-1].hi != 1:
            errs.append("pieces do not cover [0, 1]")
        for p, q in zip(self.pieces, self.pieces[1:]):
            if q.lo < p.hi:
                errs.append(f"overlapping pieces at {q.lo}")
            elif q.lo > p.hi:
                errs.append(f"gap between {p.hi} and {q.lo}")
        for p in self.pieces:
            if p.slope == 0:
                errs.append(f"zero slope on [{p.lo}, {p.hi})")
            a, b = p.image
            if a < 0 or b > 1:
                errs.append(f"image of [{p.lo}, {p.hi}) leaves [0, 1]")
        if not errs:
            bad = [(y0, y1, d) for y0, y1, d in self.restricted_density() if d != 1]
            if bad:
                y0, y1, d = bad[0]
                errs.append(f"not measure-preserving: density {d} on [{y0}, {y1}]")
        return errs

    def is_measure_preserving(self) -> bool:
        return not self.problems()

    # --- copula quantities ----------------------------------------------
    def cdf(self, x, y):
        """C(x, y) = m{t <= x : h(t) <= y}; exact for Fraction arguments."""
        total = 0
        for p in self.pieces:
            if p.lo >= x:
                break
            right = min(x, p.hi)
            if p.slope > 0:
                lo, hi = p.lo, min(right, p.preimage_of(y))
            else:
                lo, hi = max(p.lo, p.preimage_of(y)), right
            if hi > lo:
                total += hi - lo
        return total

    def cdf_array(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        total = np.zeros(np.broadcast(x, y).shape)
        for p in self.pieces:
            lo, hi, a, b = float(p.lo), float(p.hi), float(p.slope), float(p.intercept)
            right = np.minimum(x, hi)
            t = (y - b) / a
            if a > 0:
                seg = np.minimum(right, t) - lo
            else:
                seg = right - np.maximum(lo, t)
            total += np.clip(seg, 0.0, None)
        return total

    def partial1(self, x, y) -> tuple[int, bool]:
        """(∂₁C(x, y), on_support); right limit in y on the graph."""
        fx = self(x)
        return (1 if y >= fx else 0), y == fx

    def partial2(self, x, y) -> tuple[Fraction, bool]:
        """(∂₂C(x, y), on_support); right limits in x and y on null sets."""
        total, on = ZERO, False
        for p in self.pieces:
            a, b = p.image
            if p.slope == 0 or not (a <= y < b or (y == 1 and b == 1)):
                continue
            t = p.preimage_of(y)
            if t == x:
                on = True
            if t <= x:
                total += 1 / abs(p.slope)
        return total, on

    def sobolev_norm_sq(self) -> Fraction:
        """Exact Sobolev norm² of the copula of ``(U, h(U))``.

        ∂₁C is the indicator of ``y > h(x)``, giving ``1 - ∫h``.  For ∂₂C,
        on every elementary y-interval the preimages are affine in ``y`` and
        their order follows the piece order, so ``∫(∂₂C)² dx`` is affine in
        ``y`` and the midpoint rule integrates it exactly.
        """
        first = ONE - self.integral()
        events = []
        for k, p in enumerate(self.pieces):
            a, b = p.image
            if b > a:
                events.append((a, 1, k))
                events.append((b, 0, k))
        events.sort()
        active: list[int] = []
        second = ZERO
        ys = sorted({e[0] for e in events} | {ZERO, ONE})
        ei = 0
        for y0, y1 in zip(ys, ys[1:]):
            while ei < len(events) and events[ei][0] <= y0:
                _, kind, k = events[ei]
                if kind == 1:
                    bisect.insort(active, k)
                else:
                    active.remove(k)
                ei += 1
            ym = (y0 + y1) / 2
            cum, val = ZERO, ZERO
            prev_t = None
            for k in active:
                p = self.pieces[k]
                t = p.preimage_of(ym)
                if prev_t is not None:
                    val += cum * cum * (t - prev_t)
                cum += 1 / abs(p.slope)
                prev_t = t
            if prev_t is not None:
                val += cum * cum * (ONE - prev_t)
            second += (y1 - y0) * val
        return first + second

    def cell_mass(self, n: int) -> np.ndarray:
        """Mass of the copula of ``(U, h(U))`` on the ``n × n`` grid cells."""
        mass = np.zeros((n, n))
        for p in self.pieces:
            lo, hi = float(p.lo), float(p.hi)
            a, b = float(p.slope), float(p.intercept)
            ts = [lo, hi]
            i0, i1 = int(np.floor(lo * n)) + 1, int(np.ceil(hi * n))
            ts.extend(k / n for k in range(i0, i1))
            ya, yb = sorted((a * lo + b, a * hi + b))
            if a != 0:
                j0, j1 = int(np.floor(ya * n)) + 1, int(np.ceil(yb * n))
                ts.extend((k / n - b) / a for k in range(j0, j1))
            t = np.unique(np.clip(ts, lo, hi))
            mid = 0.5 * (t[1:] + t[:-1])
            w = np.diff(t)
            keep = w > 0
            mid, w = mid[keep], w[keep]
            rows = np.minimum((mid * n).astype(int), n - 1)
            cols = np.minimum(np.clip((a * mid + b) * n, 0, None).astype(int), n - 1)
            np.add.at(mass, (rows, cols), w)
        return mass


class IntervalExchange(PiecewiseAffineMap):
    """Measure-preserving bijection with slopes ±1: the support map of a shuffle of Min."""

    @classmethod
    def from_targets(cls, pieces: Iterable[Sequence]) -> "IntervalExchange":
        """Build from ``(lo, hi, target_start, slope)`` rows.

        ``target_start`` is the lower end of the image interval, so a
        slope ``-1`` piece maps ``lo`` to ``target_start + (hi - lo)``.
        """
        rows = []
        for lo, hi, target, slope in pieces:
            lo, hi, target = as_fraction(lo), as_fraction(hi), as_fraction(target)
            s = as_fraction(slope)
            if s > 0:
                rows.append(Piece(lo, hi, s, target - s * lo))
            else:
                rows.append(Piece(lo, hi, s, target + hi))
        return cls(tuple(rows))

    @classmethod
    def identity(cls):
        return cls((Piece(ZERO, ONE, ONE, ZERO),))

    @classmethod
    def reversal(cls):
        return cls((Piece(ZERO, ONE, -ONE, ONE),))

    @classmethod
    def from_permutation(cls, perm: Sequence[int], slopes: Sequence[int] | None = None) -> "IntervalExchange":
        """Cell ``i`` of an ``n``-grid goes to cell ``perm[i]``."""
        n = len(perm)
        slopes = slopes if slopes is not None else [1] * n
        return cls.from_targets(
            (Fraction(i, n), Fraction(i + 1, n), Fraction(int(perm[i]), n), slopes[i]) for i in range(n)
        )

    def targets(self) -> list[tuple[Fraction, Fraction, Fraction, int]]:
        """Rows ``(lo, hi, target_start, slope)``."""
        return [(p.lo, p.hi, p.image[0], int(p.slope)) for p in self.pieces]

    def inverse(self) -> "IntervalExchange":
        # y = s t + c  =>  t = s y - s c  (s = ±1)
        rows = []
        for p in self.pieces:
            a, b = p.image
            rows.append(Piece(a, b, p.slope, -p.slope * p.intercept))
        return IntervalExchange(tuple(rows))

    def problems(self) -> list[str]:
        errs = super().problems()
        for p in self.pieces:
            if abs(p.slope) != 1:
                errs.append(f"slope {p.slope} on [{p.lo}, {p.hi}) is not ±1")
        if not errs:
            images = sorted(p.image for p in self.pieces)
            cur = ZERO
            for a, b in images:
                if a != cur:
                    errs.append(f"images do not tile [0, 1] near {cur}")
                    break
                cur = b
        return errs

    def is_aligned(self, n: int) -> bool:
        """True if every breakpoint and image endpoint sits on the ``1/n`` grid."""
        for p in self.pieces:
            for v in (p.lo, p.hi, *p.image):
                if (v * n).denominator != 1:
                    return False
        return True

    def cell_permutation(self, n: int) -> np.ndarray:
        """For an ``n``-aligned exchange, ``perm[i]`` is the cell that cell ``i`` lands in."""
        perm = np.empty(n, dtype=int)
        for i in range(n):
            t = Fraction(2 * i + 1, 2 * n)
            perm[i] = int(self(t) * n)
        return perm

    def sobolev_norm_sq(self) -> Fraction:
        return ONE


def l1_distance(f: PiecewiseAffineMap, g: PiecewiseAffineMap) -> Fraction:
    """Exact ∫₀¹ |f - g|."""
    cuts = sorted(set(f.breakpoints) | set(g.breakpoints))
    total = ZERO
    for a, b in zip(cuts, cuts[1:]):
        m = (a + b) / 2
        pf, pg = f.pieces[f._index(m)], g.pieces[g._index(m)]
        ds, di = pf.slope - pg.slope, pf.intercept - pg.intercept
        da, db = ds * a + di, ds * b + di
        if da * db >= 0:
            total += abs(da + db) / 2 * (b - a)
        else:
            root = -di / ds
            total += abs(da) / 2 * (root - a) + abs(db) / 2 * (b - root)
    return total
