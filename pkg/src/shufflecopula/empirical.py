"""From sample pairs to a checkerboard copula."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .core import DS_TOL, GridCopula

_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class SamplePairs:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("x and y must be 1-d arrays of equal length")
        if len(x) == 0:
            raise ValueError("empty sample")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_rows(cls, rows) -> "SamplePairs":
        arr = np.asarray(list(rows), dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1])

    def __len__(self):
        return len(self.x)


@dataclass(frozen=True)
class PseudoObservations:
    u: np.ndarray
    v: np.ndarray
    ties: bool


def pseudo_observations(s: SamplePairs) -> PseudoObservations:
    """Ranks scaled by ``n + 1``; ties are broken by input order and flagged."""
    n = len(s)
    if n < 2:
        raise ValueError("need at least two sample pairs")
    ties = len(np.unique(s.x)) < n or len(np.unique(s.y)) < n
    u = rankdata(s.x, method="ordinal") / (n + 1)
    v = rankdata(s.y, method="ordinal") / (n + 1)
    return PseudoObservations(u, v, ties)


@dataclass
class CheckerboardFit:
    copula: GridCopula
    sweeps: int
    ties: bool
    max_deviation: float


def sinkhorn(mass: np.ndarray, tol: float = DS_TOL, max_sweeps: int = 1000) -> tuple[np.ndarray, int]:
    """Alternate row and column scaling until every margin is ``1/n`` within ``tol``.

    Raises
    ------
    ValueError
        If a row or column is empty or the iteration fails to converge.
    """
    n = mass.shape[0]
    if (mass.sum(axis=1) == 0).any() or (mass.sum(axis=0) == 0).any():
        raise ValueError(
            f"empty row or column in the {n}x{n} histogram; normalisation cannot converge, lower the number of bins"
        )
    m = mass / mass.sum()
    target = 1.0 / n
    for sweep in range(1, max_sweeps + 1):
        m = m * (target / m.sum(axis=1, keepdims=True))
        m = m * (target / m.sum(axis=0, keepdims=True))
        dev = max(np.abs(m.sum(axis=1) - target).max(), np.abs(m.sum(axis=0) - target).max())
        if dev <= tol:
            return m, sweep
    raise ValueError(f"row/column scaling did not converge in {max_sweeps} sweeps; lower the number of bins")


def checkerboard(s: SamplePairs, n: int) -> CheckerboardFit:
    """Doubly stochastic ``n × n`` histogram of the pseudo-observations."""
    if n < 2:
        raise ValueError("need at least 2 bins")
    po = pseudo_observations(s)
    counts, _, _ = np.histogram2d(po.u, po.v, bins=n, range=[[0, 1], [0, 1]])
    mass, sweeps = sinkhorn(counts)
    dev = max(np.abs(mass.sum(axis=1) - 1 / n).max(), np.abs(mass.sum(axis=0) - 1 / n).max())
    return CheckerboardFit(GridCopula(mass), sweeps, po.ties, float(dev))


def read_samples(path: str | Path) -> SamplePairs:
    """Two numeric columns, comma or whitespace separated, optional header.

    Every malformed row is reported with its line number; nothing is
    skipped silently.
    """
    rows, errors = [], []
    first = True
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        try:
            if len(fields) != 2:
                raise ValueError(f"expected 2 columns, found {len(fields)}")
            x, y = float(fields[0]), float(fields[1])
            if not (np.isfinite(x) and np.isfinite(y)):
                raise ValueError("non-finite value")
            rows.append((x, y))
        except ValueError as exc:
            if first and len(fields) == 2:
                first = False
                continue  # header
            errors.append(f"line {lineno}: {exc}: {raw!r}")
        first = False
    if errors:
        raise ValueError("malformed sample rows:\n" + "\n".join(errors))
    if not rows:
        raise ValueError(f"no samples in {path}")
    return SamplePairs.from_rows(rows)
