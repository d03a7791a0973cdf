"""Random trigonometric series  sum_n eps_n x_n cos(2 pi n t + phi_n).

Series are indexed from n = 0 and sign eps_n is bit n of the sign source.
Angles are evaluated as 2*pi*frac(n*t) + phi_n; the fractional reduction
keeps dyadic sample points exact (in particular t = 0 and t = 1) and is
harmless elsewhere because the series is 1-periodic in t.

Frequencies are cut into doubly exponential blocks with edges
E(k) = 2^(2^k): block k covers E(k) <= n < E(k+1).  Sup norms of block
polynomials are estimated from below on equispaced grids; no Chebyshev
machinery, by design, since grid refinement is itself under test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bitsource import BitSource
from .rademacher import CoefficientSequence

__all__ = [
    "TrigSeriesConfig",
    "BlockIndex",
    "block_edge",
    "dyadic_interval_bounds",
    "reduced_angles",
    "series_partial_sum",
    "pointwise_sequence",
    "fejer_sum",
    "fejer_weights",
    "fejer_l1_riemann",
    "band_rms",
    "block_polynomial_sup",
    "block_bound",
]

_TWO_PI = 2.0 * math.pi

# Evaluating block k needs E(k+1) coefficients; keep that within reach of a
# desk machine unless the caller raises the cap explicitly.
DEFAULT_TERM_CAP = 1 << 16


@dataclass(frozen=True)
class TrigSeriesConfig:
    """Amplitudes x_n, phases phi_n (radians), and the sign source."""

    amps: CoefficientSequence
    phases: CoefficientSequence
    eps: BitSource

    def epsilons(self, stop: int) -> np.ndarray:
        """Signs eps_0 .. eps_{stop-1} (bit n of the source)."""
        return self.eps.bits_at(np.arange(stop, dtype=np.int64))


def block_edge(k: int) -> int:
    """E(k) = 2^(2^k): E(0) = 2 and E(k+1) = E(k)^2."""
    if k < 0:
        raise ValueError("block index must be nonnegative")
    return 1 << (1 << k)


@dataclass(frozen=True)
class BlockIndex:
    """Frequency block k: indices n with E(k) <= n < E(k+1)."""

    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("block index must be nonnegative")

    @property
    def start(self) -> int:
        return block_edge(self.k)

    @property
    def stop(self) -> int:
        return block_edge(self.k + 1)


def _block(k) -> BlockIndex:
    return k if isinstance(k, BlockIndex) else BlockIndex(int(k))


def dyadic_interval_bounds(j: int, pos: int) -> tuple[float, float]:
    """[pos * 2^-j, (pos+1) * 2^-j]; (0, 0) is the whole unit interval."""
    if j < 0 or not 0 <= pos < (1 << j):
        raise ValueError(f"malformed dyadic interval (j={j}, pos={pos})")
    return pos * 2.0 ** -j, (pos + 1) * 2.0 ** -j


def reduced_angles(t, n_idx: np.ndarray) -> np.ndarray:
    """2*pi*frac(n*t) as an outer product; exact zeros at integer n*t."""
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    u = np.mod(np.multiply.outer(tt, n_idx.astype(np.float64)), 1.0)
    return _TWO_PI * u


def _signed_coeffs(cfg: TrigSeriesConfig, stop: int, weights=None) -> np.ndarray:
    c = cfg.amps.terms(0, stop) * cfg.epsilons(stop)
    if weights is not None:
        c = c * weights
    return c


def _cos_eval(cfg: TrigSeriesConfig, t, n_lo: int, n_hi: int, coeffs: np.ndarray,
              chunk: int = 4096) -> np.ndarray:
    """sum_n coeffs_n cos(2 pi n t + phi_n) for n in [n_lo, n_hi), vectorised over t."""
    tt = np.atleast_1d(np.asarray(t, dtype=np.float64))
    n_idx = np.arange(n_lo, n_hi, dtype=np.int64)
    phases = cfg.phases.terms(n_lo, n_hi)
    out = np.empty(tt.size, dtype=np.float64)
    for lo in range(0, tt.size, chunk):
        rows = tt[lo : lo + chunk]
        ang = reduced_angles(rows, n_idx) + phases[None, :]
        out[lo : lo + chunk] = np.cos(ang) @ coeffs
    return out


def series_partial_sum(cfg: TrigSeriesConfig, t: float, N: int) -> float:
    """sum_{n=0}^{N} eps_n x_n cos(2 pi n t + phi_n)."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    coeffs = _signed_coeffs(cfg, N + 1)
    terms = coeffs * np.cos(
        reduced_angles(float(t), np.arange(N + 1, dtype=np.int64))[0]
        + cfg.phases.terms(0, N + 1)
    )
    return float(np.cumsum(terms)[-1])


def pointwise_sequence(cfg: TrigSeriesConfig, t: float) -> CoefficientSequence:
    """The coefficient sequence n -> x_n cos(2 pi n t + phi_n) at fixed t.

    Its absolute values are dominated by |x_n|, so the amplitude tail
    function transfers unchanged.
    """
    t = float(t)

    def term(n: int) -> float:
        ang = _TWO_PI * math.fmod(n * t, 1.0) + cfg.phases.term(n)
        return cfg.amps.term(n) * math.cos(ang)

    def term_array(idx: np.ndarray) -> np.ndarray:
        ph = np.asarray([cfg.phases.term(int(n)) for n in idx], dtype=np.float64)
        a = _TWO_PI * np.mod(idx.astype(np.float64) * t, 1.0) + ph
        x = np.asarray([cfg.amps.term(int(n)) for n in idx], dtype=np.float64)
        return x * np.cos(a)

    return CoefficientSequence(
        term=term,
        tail_index=cfg.amps.tail_index,
        descriptor=f"{cfg.amps.descriptor}@t={t:g}",
        term_array=term_array,
    )


def fejer_weights(N: int) -> np.ndarray:
    """Cesaro weights (1 - n/N) for n = 0..N; the n = N weight is zero."""
    if N < 1:
        raise ValueError("Fejer order N must be at least 1")
    return 1.0 - np.arange(N + 1, dtype=np.float64) / float(N)


def fejer_sum(cfg: TrigSeriesConfig, t: float, N: int) -> float:
    """Cesaro-weighted partial sum sum_{n=0}^{N} (1 - n/N) eps_n x_n cos(...)."""
    coeffs = _signed_coeffs(cfg, N + 1, weights=fejer_weights(N))
    val = _cos_eval(cfg, float(t), 0, N + 1, coeffs)
    return float(val[0])


def fejer_l1_riemann(
    cfg: TrigSeriesConfig,
    N: int,
    M: int,
    interval: tuple[int, int] | None = None,
) -> float:
    """Left-endpoint Riemann mean of |fejer_sum| over a dyadic interval.

    Samples the M points (pos + i/M) * 2^-j, i = 0..M-1; interval defaults
    to the whole of [0,1].
    """
    if M < 1:
        raise ValueError("M must be at least 1")
    j, pos = interval if interval is not None else (0, 0)
    lo, _hi = dyadic_interval_bounds(j, pos)
    t = lo + (np.arange(M, dtype=np.float64) / M) * 2.0 ** -j
    coeffs = _signed_coeffs(cfg, N + 1, weights=fejer_weights(N))
    vals = _cos_eval(cfg, t, 0, N + 1, coeffs)
    return float(np.cumsum(np.abs(vals))[-1] / M)


def band_rms(cfg: TrigSeriesConfig, j: int) -> float:
    """Root of the summed squared amplitudes over the octave 2^j <= n < 2^(j+1)."""
    if j < 0:
        raise ValueError("octave index must be nonnegative")
    x = cfg.amps.terms(1 << j, 1 << (j + 1))
    return float(math.sqrt(np.sum(x * x)))


def _check_block_cap(b: BlockIndex, term_cap: int) -> None:
    if b.stop > term_cap:
        raise ValueError(
            f"block {b.k} needs {b.stop} coefficient terms, beyond the cap "
            f"{term_cap}; raise term_cap explicitly to proceed"
        )


def block_polynomial_sup(
    cfg: TrigSeriesConfig, k, grid_m: int, term_cap: int = DEFAULT_TERM_CAP
) -> float:
    """Grid lower bound for the sup norm of the block-k polynomial.

    The polynomial is sum over E(k) <= n < E(k+1) of eps_n x_n cos(...);
    the maximum of |.| is taken over the grid i/grid_m, i = 0..grid_m.
    """
    b = _block(k)
    _check_block_cap(b, term_cap)
    if grid_m < 1:
        raise ValueError("grid size must be at least 1")
    eps = cfg.eps.bits_at(np.arange(b.start, b.stop, dtype=np.int64))
    coeffs = cfg.amps.terms(b.start, b.stop) * eps
    t = np.arange(grid_m + 1, dtype=np.float64) / grid_m
    vals = _cos_eval(cfg, t, b.start, b.stop, coeffs)
    return float(np.max(np.abs(vals)))


def block_bound(cfg: TrigSeriesConfig, k, term_cap: int = DEFAULT_TERM_CAP) -> float:
    """The deviation threshold 6 * sqrt(log E(k+1) * sum of x_n^2 over block k).

    Logarithms are natural.  Exceeding this is the rare event whose
    probability is at most 8 pi / E(k+1)^2.
    """
    b = _block(k)
    _check_block_cap(b, term_cap)
    x = cfg.amps.terms(b.start, b.stop)
    return 6.0 * math.sqrt(math.log(b.stop) * float(np.sum(x * x)))
