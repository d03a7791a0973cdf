"""Inverse standard normal CDF and normal sequences driven by bit strings.

A single bit string alpha is turned into an i.i.d.-like sequence of standard
normal values: track k of alpha (see `bitsource.subsequence`) supplies p bits,
those bits are read as a dyadic midpoint in (0,1), and the inverse CDF maps
that to a normal value.  Distinct tracks use disjoint bits of alpha, so the
resulting values are exactly independent once alpha's bits are.

The production inverse CDF is a rational initial estimate (Acklam's
approximation) polished by Halley/Newton steps against an erfc-based CDF.
The test suite holds an independent quadrature + bisection oracle; the
quadrature route is never used here.
"""

from __future__ import annotations

import threading

import numpy as np
from scipy.special import erfc

from .bitsource import (
    BitSource,
    SeededBitSource,
    pairing_matrix,
    precompute_bit_positions,
    seeded_bit_block,
)

__all__ = [
    "normal_cdf",
    "normal_pdf",
    "inverse_gaussian_cdf",
    "unit_reals_from_bits",
    "normal_matrix",
    "NormalSequence",
    "normal_sequence",
    "xy_split",
]

_SQRT2 = np.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)

# Acklam's rational approximation of the inverse normal CDF (relative CDF
# error below 1.2e-9 before refinement).
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def normal_cdf(z):
    """Standard normal CDF via the complementary error function."""
    return 0.5 * erfc(-np.asarray(z, dtype=np.float64) / _SQRT2)


def normal_pdf(z):
    z = np.asarray(z, dtype=np.float64)
    return _INV_SQRT_2PI * np.exp(-0.5 * z * z)


def _acklam(q: np.ndarray) -> np.ndarray:
    z = np.empty_like(q)
    lo = q < _P_LOW
    hi = q > 1.0 - _P_LOW
    mid = ~(lo | hi)
    if np.any(mid):
        u = q[mid] - 0.5
        r = u * u
        num = ((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]
        den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
        z[mid] = u * num / den
    for mask, sign in ((lo, 1.0), (hi, -1.0)):
        if np.any(mask):
            p = q[mask] if sign > 0 else 1.0 - q[mask]
            u = np.sqrt(-2.0 * np.log(p))
            num = ((((_C[0] * u + _C[1]) * u + _C[2]) * u + _C[3]) * u + _C[4]) * u + _C[5]
            den = (((_D[0] * u + _D[1]) * u + _D[2]) * u + _D[3]) * u + 1.0
            z[mask] = sign * num / den
    return z


def inverse_gaussian_cdf(q, tol: float = 1e-12):
    """z with |CDF(z) - q| <= tol * pdf(z), monotone in q on (0,1).

    Scalar in, float out; array in, array out.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    arr = np.asarray(q, dtype=np.float64)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if arr.size and (np.min(arr) <= 0.0 or np.max(arr) >= 1.0):
        raise ValueError("quantile must lie strictly inside (0,1)")
    z = _acklam(arr)
    for _ in range(4):
        resid = normal_cdf(z) - arr
        dens = normal_pdf(z)
        if np.all(np.abs(resid) <= tol * dens):
            break
        # Halley step; falls back to plain Newton where the correction is tiny
        with np.errstate(divide="ignore", invalid="ignore"):
            u = resid / dens
        u = np.where(np.isfinite(u), u, 0.0)
        z = z - u / (1.0 + 0.5 * z * u)
    return float(z[0]) if scalar else z


def unit_reals_from_bits(bits) -> np.ndarray:
    """Row-wise dyadic midpoints of a (m, p) matrix over {-1,+1}.

    Matches `bitsource.bits_to_unit_real` row by row (p <= 53 exactly).
    """
    b = np.asarray(bits)
    if b.ndim != 2 or b.shape[1] == 0:
        raise ValueError("expected a nonempty (m, p) bit matrix")
    p = b.shape[1]
    weights = 2.0 ** -np.arange(1, p + 1, dtype=np.float64)  # 2^-1 ... 2^-p
    q = (b > 0).astype(np.float64) @ weights + 2.0 ** -(p + 1)
    return np.minimum(q, np.nextafter(1.0, 0.0))


def _dyadic_weights(precision: int) -> np.ndarray:
    return 2.0 ** -np.arange(1, precision + 1, dtype=np.float64)


def normal_matrix(
    seeds, variate_lo: int, variate_hi: int, precision: int = 53
) -> np.ndarray:
    """Normal values xi_k, k in [variate_lo, variate_hi), for many seeded streams.

    Row s reproduces NormalSequence(SeededBitSource(seeds[s]), precision)
    bit for bit; this is the batch fast path for Monte Carlo drivers (the
    seed-independent index arithmetic is paid once for all rows).
    """
    seeds = np.atleast_1d(np.asarray(seeds, dtype=np.int64))
    ks = np.arange(variate_lo, variate_hi, dtype=np.int64)
    base, shift = precompute_bit_positions(pairing_matrix(ks, precision).ravel())
    weights = _dyadic_weights(precision)
    half_ulp = 2.0 ** -(precision + 1)
    top = np.nextafter(1.0, 0.0)
    q = np.empty((seeds.size, ks.size), dtype=np.float64)
    for i, s in enumerate(seeds):
        bits = seeded_bit_block(int(s), base, shift).reshape(-1, precision)
        row = bits @ weights + half_ulp
        q[i] = np.minimum(row, top)
    return inverse_gaussian_cdf(q)


class NormalSequence:
    """Cached normal values xi_0, xi_1, ... derived from one bit source.

    xi_k depends only on the p bits of track k, so the values are
    reproducible from (source, precision) alone.  The cache may be read
    concurrently; extension is serialised.
    """

    def __init__(self, source: BitSource, precision: int = 53):
        if precision < 1:
            raise ValueError("precision must be at least 1")
        self.source = source
        self.precision = int(precision)
        self._values = np.empty(0, dtype=np.float64)
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return self._values.size

    def _extend_to(self, n: int) -> None:
        if n <= self._values.size:
            return
        with self._lock:
            have = self._values.size
            if n <= have:
                return
            if isinstance(self.source, SeededBitSource):
                fresh = normal_matrix(
                    [self.source.seed], have, n, precision=self.precision
                )[0]
            else:
                ks = np.arange(have, n, dtype=np.int64)
                idx = pairing_matrix(ks, self.precision)
                bits = self.source.bits_at(idx.ravel()).reshape(idx.shape)
                fresh = inverse_gaussian_cdf(unit_reals_from_bits(bits))
            self._values = np.concatenate([self._values, fresh])

    def value(self, k: int) -> float:
        if k < 0:
            raise IndexError("variate index must be nonnegative")
        self._extend_to(k + 1)
        return float(self._values[k])

    def values(self, n: int) -> np.ndarray:
        self._extend_to(n)
        return self._values[:n].copy()

    def xy(self, n: int) -> tuple[float, float]:
        return xy_split(self, n)


def normal_sequence(source: BitSource, count: int, precision: int = 53) -> NormalSequence:
    """NormalSequence with the first `count` values materialised."""
    ns = NormalSequence(source, precision=precision)
    ns._extend_to(count)
    return ns


def xy_split(ns: NormalSequence, n: int) -> tuple[float, float]:
    """The even/odd interleave: (X_n, Y_n) = (xi_{2n}, xi_{2n+1})."""
    if n < 0:
        raise IndexError("index must be nonnegative")
    return ns.value(2 * n), ns.value(2 * n + 1)
