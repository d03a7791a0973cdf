"""Random signed series sum eps_n * u_n with bit-string signs.

Series are indexed from n = 1; the sign eps_n is bit n-1 of the sign
source.  Partial sums accumulate in ascending index order with plain
(uncompensated) addition so that repeated runs are bit identical;
compensated summation is available behind a flag.

A coefficient sequence may carry a certified tail function `tail_index`
mapping m to an index n(m) with  sum_{l > n(m)} u_l^2 < 1/m  (strictly).
That is the handle every convergence-rate computation uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bitsource import BitSource

__all__ = [
    "CoefficientSequence",
    "RademacherSeries",
    "geometric",
    "power",
    "harmonic_root",
    "constant",
    "from_values",
    "from_callable",
    "partial_sum",
    "sup_partial_deviation",
    "tail_cutoff",
    "contract",
    "divergence_threshold",
    "divergence_blocks",
    "BlockSearchCapError",
]


class BlockSearchCapError(RuntimeError):
    """Raised when the block search scans its term cap without closing a block."""


@dataclass(frozen=True)
class CoefficientSequence:
    """A deterministic real sequence u_n, evaluable at any index n >= 0.

    term_array, when present, must agree with term elementwise; it exists so
    batch drivers avoid per-index Python calls.
    """

    term: Callable[[int], float]
    tail_index: Optional[Callable[[int], int]] = None
    descriptor: str = ""
    term_array: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def terms(self, start: int, stop: int) -> np.ndarray:
        """Values u_start .. u_{stop-1} as a float array."""
        if stop < start:
            raise ValueError("empty or negative index range")
        idx = np.arange(start, stop, dtype=np.int64)
        if self.term_array is not None:
            return np.asarray(self.term_array(idx), dtype=np.float64)
        return np.asarray([self.term(int(n)) for n in idx], dtype=np.float64)


@dataclass(frozen=True)
class RademacherSeries:
    """Coefficients plus the {-1,+1} source supplying the signs."""

    coeffs: CoefficientSequence
    eps: BitSource

    def epsilons(self, start: int, stop: int) -> np.ndarray:
        """Signs eps_start .. eps_{stop-1} (series convention: eps_n = bit n-1)."""
        if start < 1:
            raise ValueError("series indices start at 1")
        idx = np.arange(start - 1, stop - 1, dtype=np.int64)
        return self.eps.bits_at(idx)


def geometric(r: float) -> CoefficientSequence:
    """u_n = r^n for n >= 0."""
    r = float(r)
    tail = None
    if r == 0.0:
        tail = lambda m: 0
    elif abs(r) < 1.0:
        r2 = r * r

        def tail(m: int) -> int:
            if m < 1:
                raise ValueError("tail accuracy parameter must be >= 1")
            bound = r2 / (1.0 - r2)  # squared tail beyond index 0
            n = 0
            while bound >= 1.0 / m:
                bound *= r2
                n += 1
            return n

    return CoefficientSequence(
        term=lambda n: r ** n,
        tail_index=tail,
        descriptor=f"geometric(r={r:g})",
        term_array=lambda idx: np.float_power(r, idx),
    )


def power(p: float) -> CoefficientSequence:
    """u_0 = 0 and u_n = n^-p for n >= 1; square-summable tail for p > 1/2.

    The certified squared tail beyond n is the integral bound
    n^(1-2p) / (2p - 1), valid (strictly) for n >= 1.
    """
    p = float(p)
    tail = None
    if p > 0.5:
        q = 2.0 * p - 1.0

        def tail(m: int) -> int:
            if m < 1:
                raise ValueError("tail accuracy parameter must be >= 1")
            # smallest n >= 1 with n^(1-2p)/(2p-1) <= 1/m
            n = max(1, math.ceil((m / q) ** (1.0 / q)))
            while n ** (-q) / q > 1.0 / m:
                n += 1
            while n > 1 and (n - 1) ** (-q) / q <= 1.0 / m:
                n -= 1
            return n

    def term_array(idx: np.ndarray) -> np.ndarray:
        out = np.zeros(idx.shape, dtype=np.float64)
        pos = idx >= 1
        out[pos] = np.float_power(idx[pos].astype(np.float64), -p)
        return out

    return CoefficientSequence(
        term=lambda n: 0.0 if n == 0 else float(n) ** -p,
        tail_index=tail,
        descriptor=f"power(p={p:g})",
        term_array=term_array,
    )


def harmonic_root() -> CoefficientSequence:
    """u_n = 1/sqrt(n): the canonical not-square-summable sequence."""
    c = power(0.5)
    return CoefficientSequence(
        term=c.term, tail_index=None, descriptor="harmonic-root", term_array=c.term_array
    )


def constant(c: float) -> CoefficientSequence:
    """u_n = c for every n >= 0."""
    c = float(c)
    tail = (lambda m: 0) if c == 0.0 else None
    return CoefficientSequence(
        term=lambda n: c,
        tail_index=tail,
        descriptor=f"constant({c:g})",
        term_array=lambda idx: np.full(idx.shape, c, dtype=np.float64),
    )


def from_values(values: Sequence[float], descriptor: str = "values") -> CoefficientSequence:
    """Finite coefficient list, zero beyond the end; tail function computed."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("values must be one-dimensional")
    sq = arr * arr
    # suffix[n] = sum of squares strictly beyond index n
    suffix = np.concatenate([np.cumsum(sq[::-1])[::-1], [0.0]])

    def tail(m: int) -> int:
        if m < 1:
            raise ValueError("tail accuracy parameter must be >= 1")
        for n in range(arr.size + 1):
            if suffix[min(n + 1, arr.size)] < 1.0 / m:
                return n
        return arr.size

    def term_array(idx: np.ndarray) -> np.ndarray:
        out = np.zeros(idx.shape, dtype=np.float64)
        inside = idx < arr.size
        out[inside] = arr[idx[inside]]
        return out

    return CoefficientSequence(
        term=lambda n: float(arr[n]) if n < arr.size else 0.0,
        tail_index=tail,
        descriptor=descriptor,
        term_array=term_array,
    )


def from_callable(
    fn: Callable[[int], float],
    descriptor: str = "callable",
    tail_index: Optional[Callable[[int], int]] = None,
    fn_array: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> CoefficientSequence:
    return CoefficientSequence(
        term=fn, tail_index=tail_index, descriptor=descriptor, term_array=fn_array
    )


def partial_sum(s: RademacherSeries, N: int, compensated: bool = False) -> float:
    """sum_{n=1}^{N} eps_n u_n, accumulated in ascending index order."""
    if N < 1:
        raise ValueError("N must be at least 1")
    prods = s.coeffs.terms(1, N + 1) * s.epsilons(1, N + 1)
    if compensated:
        return math.fsum(prods.tolist())
    return float(np.cumsum(prods)[-1])


def sup_partial_deviation(s: RademacherSeries, start: int, horizon: int) -> float:
    """max over 1 <= j <= horizon of |sum_{l=start}^{start+j} eps_l u_l|."""
    if start < 1:
        raise ValueError("start index must be at least 1")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    prods = s.coeffs.terms(start, start + horizon + 1) * s.epsilons(
        start, start + horizon + 1
    )
    running = np.cumsum(prods)
    return float(np.max(np.abs(running[1:])))


def tail_cutoff(c: CoefficientSequence, k: int, multiplier: float) -> int:
    """An index n certified to satisfy k^2 * sum_{l>n} u_l^2 < multiplier."""
    if c.tail_index is None:
        raise ValueError(f"coefficient sequence {c.descriptor!r} has no tail function")
    if k < 1:
        raise ValueError("k must be at least 1")
    if multiplier <= 0.0:
        raise ValueError("multiplier must be positive")
    m_star = math.floor(k * k / multiplier) + 1
    return c.tail_index(m_star)


def contract(
    c: CoefficientSequence, lam: Callable[[int], float], sup_abs: float
) -> CoefficientSequence:
    """Termwise product lam_n * u_n for a bounded multiplier sequence.

    sup_abs must dominate |lam_n|; the tail function is rescaled by
    sup_abs^2, so square computability survives the contraction.
    """
    if sup_abs is None or not math.isfinite(sup_abs) or sup_abs < 0.0:
        raise ValueError("a finite nonnegative sup for |lam_n| is required")
    if sup_abs == 0.0:
        new_tail: Optional[Callable[[int], int]] = lambda m: 0
    elif c.tail_index is not None:
        s2 = sup_abs * sup_abs
        base_tail = c.tail_index
        new_tail = lambda m: base_tail(max(1, math.ceil(s2 * m)))
    else:
        new_tail = None
    return CoefficientSequence(
        term=lambda n: lam(n) * c.term(n),
        tail_index=new_tail,
        descriptor=f"contract({c.descriptor})",
        term_array=None,
    )


def divergence_threshold(lam: float = 0.5) -> float:
    """Smallest block energy making the small-deviation lower bound exceed 1/6.

    The lower bound (1/3)(1 - g^2)^2 with g^2 = lam^2 / energy exceeds 1/6
    exactly when energy > lam^2 / (1 - 2^-1/2).
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    return lam * lam / (1.0 - 2.0 ** -0.5)


def divergence_blocks(
    c: CoefficientSequence,
    lam: float = 0.5,
    count: int = 3,
    scan_cap: int = 10 ** 8,
) -> list[int]:
    """Greedy minimal boundaries m_1 < m_2 < ... for the block construction.

    Block k is the index range (m_{k-1}, m_k] (with m_0 = 0) and each block
    satisfies sum of u_n^2 over the block > divergence_threshold(lam); each
    boundary is the smallest index achieving that.  Requires coefficients
    whose squares sum to infinity; the scan cap (per block) turns a
    square-summable input into an error instead of a hang.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    threshold = divergence_threshold(lam)
    boundaries: list[int] = []
    n = 1  # next index to consume
    acc = 0.0
    scanned_in_block = 0
    chunk = 1 << 16
    while len(boundaries) < count:
        if scanned_in_block > scan_cap:
            raise BlockSearchCapError(
                f"scanned {scanned_in_block} terms without closing block "
                f"{len(boundaries) + 1}; squared coefficients may be summable"
            )
        sq = c.terms(n, n + chunk) ** 2
        running = acc + np.cumsum(sq)
        over = np.nonzero(running > threshold)[0]
        if over.size == 0:
            acc = float(running[-1])
            scanned_in_block += chunk
            n += chunk
            continue
        pos = int(over[0])
        boundaries.append(n + pos)
        n = n + pos + 1
        acc = 0.0
        scanned_in_block = 0
    return boundaries
