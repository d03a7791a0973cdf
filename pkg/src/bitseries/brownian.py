"""Brownian paths on [0,1] built from a bit string via the Fourier-Wiener series.

W(t) = X_0 t + sqrt(2) * sum_{n>=1} (X_n sin(2 pi n t) + Y_n (1 - cos(2 pi n t))) / (2 pi n)

with X_n, Y_n the even/odd interleave of a normal sequence.  Angles use the
same fractional reduction as the trigonometric module, which makes the
endpoint identities W(0) = 0 and W(1) = X_0 hold exactly at any truncation.

The dyadic frequency blocks E(k) <= n < E(k+1), E(k) = 2^(2^k), come with
sup-norm thresholds 6 * 2^-(2^(k-2)) (the 1/(2 pi) factor is dropped inside
the block polynomials; it is reinstated in the truncation tail bound, whose
constant is 12/pi).

Slope coding: a path is summarised by the sign pattern of its increments on
the grid i/n; the decoded object vanishes at 0 and moves by +-1/sqrt(n) per
step, i.e. it is piecewise linear with slopes +-sqrt(n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fourier import block_edge, BlockIndex, reduced_angles, DEFAULT_TERM_CAP
from .gaussian import NormalSequence

__all__ = [
    "FourierWienerSeries",
    "PathSample",
    "PiecewiseLinearPath",
    "fw_partial",
    "fw_values",
    "fw_path",
    "pq_block_sup",
    "block_exceedance_threshold",
    "tail_bound",
    "encode_slopes",
    "decode_slopes",
    "oscillation_distance",
]

_SQRT2 = math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FourierWienerSeries:
    """A truncated Fourier-Wiener series: normal coefficients + cut frequency."""

    normals: NormalSequence
    truncation: int

    def __post_init__(self):
        if self.truncation < 0:
            raise ValueError("truncation must be nonnegative")

    def coefficient_arrays(self, n_hi: int | None = None):
        """(x0, X[1..N], Y[1..N]) for N = n_hi or the series truncation."""
        N = self.truncation if n_hi is None else n_hi
        vals = self.normals.values(2 * N + 2)
        return float(vals[0]), vals[2::2], vals[3::2]


@dataclass(frozen=True)
class PathSample:
    """A function sampled on an increasing grid in [0,1], with provenance."""

    grid: np.ndarray
    values: np.ndarray
    truncation: Optional[int] = None
    tail_bound_reported: Optional[float] = None
    origin: str = ""

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=np.float64)
        v = np.asarray(self.values, dtype=np.float64)
        if g.shape != v.shape or g.ndim != 1:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if g.size and (np.any(np.diff(g) <= 0.0)):
            raise ValueError("grid must be strictly increasing")
        if v.size and not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def at(self, t) -> np.ndarray:
        """Linear interpolation between samples (documented convention)."""
        return np.interp(np.asarray(t, dtype=np.float64), self.grid, self.values)


@dataclass(frozen=True)
class PiecewiseLinearPath:
    """Slope-sign code: n segments of slope +-sqrt(n), vanishing at 0."""

    signs: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=np.int8)
        if s.ndim != 1 or s.size == 0:
            raise ValueError("sign code must be a nonempty 1-d sequence")
        if not np.all(np.abs(s) == 1):
            raise ValueError("signs must take values in {-1,+1}")
        object.__setattr__(self, "signs", s)

    @property
    def segments(self) -> int:
        return self.signs.size

    def node_values(self) -> np.ndarray:
        """Values at i/n for i = 0..n: cumulative signs / sqrt(n)."""
        n = self.segments
        return np.concatenate([[0.0], np.cumsum(self.signs.astype(np.float64))]) / math.sqrt(n)

    def at(self, t) -> np.ndarray:
        n = self.segments
        nodes = np.arange(n + 1, dtype=np.float64) / n
        return np.interp(np.asarray(t, dtype=np.float64), nodes, self.node_values())


def fw_values(fw: FourierWienerSeries, t, chunk: int = 2048) -> np.ndarray:
    """Truncated series values at an array of times in [0,1]."""
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if tt.size and (tt.min() < 0.0 or tt.max() > 1.0):
        raise ValueError("evaluation times must lie in [0,1]")
    x0, xs, ys = fw.coefficient_arrays()
    N = fw.truncation
    out = x0 * tt
    if N >= 1:
        n_idx = np.arange(1, N + 1, dtype=np.int64)
        cx = _SQRT2 * xs / (_TWO_PI * n_idx)
        cy = _SQRT2 * ys / (_TWO_PI * n_idx)
        for lo in range(0, tt.size, chunk):
            ang = reduced_angles(tt[lo : lo + chunk], n_idx)
            out[lo : lo + chunk] += np.sin(ang) @ cx + (1.0 - np.cos(ang)) @ cy
    return out


def fw_partial(fw: FourierWienerSeries, t: float) -> float:
    """Series value at one time; exactly 0 at t=0 and exactly X_0 at t=1."""
    return float(fw_values(fw, float(t))[0])


def fw_path(fw: FourierWienerSeries, grid) -> PathSample:
    """Sample the series on a sorted grid.

    The theoretical truncation bound is attached only when the truncation
    sits exactly at a block boundary E(j) - 1 (feasible for j <= 4); at
    other truncations accuracy is certified statistically, not analytically.
    """
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 1:
        raise ValueError("grid must be one-dimensional")
    if g.size > 1 and np.any(np.diff(g) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    vals = fw_values(fw, g)
    reported = None
    for j in range(2, 7):
        if fw.truncation == block_edge(j) - 1:
            reported = tail_bound(j)
            break
    return PathSample(
        grid=g,
        values=vals,
        truncation=fw.truncation,
        tail_bound_reported=reported,
        origin=f"{fw.normals.source.origin}|fw(N={fw.truncation},p={fw.normals.precision})",
    )


def pq_block_sup(
    fw: FourierWienerSeries, k, grid_m: int, term_cap: int = DEFAULT_TERM_CAP
) -> tuple[float, float]:
    """Grid maxima of the two block-k polynomials.

    P_k(t) = sum (X_n / n) sin(2 pi n t),  Q_k(t) = sum (Y_n / n)(1 - cos(2 pi n t)),
    both over E(k) <= n < E(k+1) and both without the 1/(2 pi) factor.
    Maxima are over the grid i/grid_m, i = 0..grid_m.
    """
    b = k if isinstance(k, BlockIndex) else BlockIndex(int(k))
    if b.stop > term_cap:
        raise ValueError(
            f"block {b.k} needs {b.stop} coefficient terms, beyond the cap "
            f"{term_cap}; raise term_cap explicitly to proceed"
        )
    if grid_m < 1:
        raise ValueError("grid size must be at least 1")
    _x0, xs, ys = fw.coefficient_arrays(n_hi=b.stop - 1)
    n_idx = np.arange(b.start, b.stop, dtype=np.int64)
    cx = xs[b.start - 1 : b.stop - 1] / n_idx
    cy = ys[b.start - 1 : b.stop - 1] / n_idx
    t = np.arange(grid_m + 1, dtype=np.float64) / grid_m
    sup_p = 0.0
    sup_q = 0.0
    chunk = 2048
    for lo in range(0, t.size, chunk):
        ang = reduced_angles(t[lo : lo + chunk], n_idx)
        sup_p = max(sup_p, float(np.max(np.abs(np.sin(ang) @ cx))))
        sup_q = max(sup_q, float(np.max(np.abs((1.0 - np.cos(ang)) @ cy))))
    return sup_p, sup_q


def block_exceedance_threshold(k: int, kind: str = "P") -> float:
    """The sup-norm level 6 * 2^-(2^(k-2)) that block k exceeds only rarely.

    Identical for the sine ("P") and versine ("Q") blocks.  For k < 2 the
    exponent 2^(k-2) is fractional; the formula value is returned as is.
    """
    if kind not in ("P", "Q"):
        raise ValueError("kind must be 'P' or 'Q'")
    if k < 0:
        raise ValueError("block index must be nonnegative")
    return 6.0 * 2.0 ** -(2.0 ** (k - 2))


def tail_bound(j: int) -> float:
    """Sup-norm bound (12/pi) * 2^-(2^(j-2)) on the series tail beyond E(j) - 1."""
    if j < 2:
        raise ValueError("tail bound defined for j >= 2")
    return (12.0 / math.pi) * 2.0 ** -float(2 ** (j - 2))


def encode_slopes(path: PathSample, n: int) -> PiecewiseLinearPath:
    """Sign pattern of the path increments on the grid i/n.

    The path must contain every node i/n among its samples.  A zero
    increment encodes as +1 (deterministic tie break).
    """
    if n < 1:
        raise ValueError("segment count must be at least 1")
    if path.grid.size == 0:
        raise ValueError("path sample is empty")
    nodes = np.arange(n + 1, dtype=np.float64) / n
    pos = np.minimum(np.searchsorted(path.grid, nodes), path.grid.size - 1)
    left = np.maximum(pos - 1, 0)
    near = np.where(
        np.abs(path.grid[left] - nodes) < np.abs(path.grid[pos] - nodes), left, pos
    )
    bad = np.abs(path.grid[near] - nodes) > 1e-12
    if np.any(bad):
        raise ValueError(
            f"path sample is missing node(s) {nodes[bad][:4].tolist()} of the i/{n} grid"
        )
    node_vals = path.values[near]
    incr = np.diff(node_vals)
    signs = np.where(incr >= 0.0, 1, -1).astype(np.int8)
    return PiecewiseLinearPath(signs=signs)


def decode_slopes(code: PiecewiseLinearPath) -> PathSample:
    """The coded staircase as a sample on its natural grid i/n."""
    n = code.segments
    return PathSample(
        grid=np.arange(n + 1, dtype=np.float64) / n,
        values=code.node_values(),
        truncation=None,
        tail_bound_reported=None,
        origin=f"code:n={n}",
    )


def oscillation_distance(path: PathSample, n: int, grid_m: int | None = None) -> float:
    """Grid estimate of the sup distance between the path and its slope coding.

    The path is linearly interpolated between its own samples, both to read
    the nodes i/n and at the comparison points i/grid_m, i = 0..grid_m
    (default grid_m = 16 n).
    """
    if n < 1:
        raise ValueError("segment count must be at least 1")
    if path.grid.size < n + 1:
        raise ValueError(
            f"path too sparse: {path.grid.size} samples for {n + 1} nodes"
        )
    if grid_m is None:
        grid_m = 16 * n
    if grid_m < 1:
        raise ValueError("comparison grid size must be at least 1")
    nodes = np.arange(n + 1, dtype=np.float64) / n
    node_path = PathSample(
        grid=nodes,
        values=path.at(nodes),
        truncation=path.truncation,
        tail_bound_reported=None,
        origin=path.origin,
    )
    code = encode_slopes(node_path, n)
    t = np.arange(grid_m + 1, dtype=np.float64) / grid_m
    return float(np.max(np.abs(path.at(t) - code.at(t))))
