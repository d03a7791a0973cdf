"""Monte Carlo and analytic checks of the inequalities behind the series.

Each check draws `trials` independent sign streams (seed_i = seed_base + i),
measures an empirical frequency or moment, and compares it against the
theoretical bound with a 3-sigma binomial/CLT allowance computed from the
trial count -- never hand-tuned per test.  Deterministic identities are
checked without slack.  Every report is reproducible bit for bit from its
parameter block.

Trend checks (growing L1 Fejer means, shrinking coding distances) assert
monotonicity of medians at a fixed desk scale; they are proxies for
unboundedness/convergence statements that have no finite certificate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import polygamma

from . import brownian as bw
from . import fourier as fr
from . import rademacher as rd
from .bitsource import seeded_bits_matrix
from .gaussian import normal_matrix

__all__ = [
    "TrialReport",
    "kolmogorov_inequality_test",
    "paley_zygmund_test",
    "paley_zygmund_exact",
    "supnorm_deviation_test",
    "brownian_moment_test",
    "variance_identity_check",
    "truncated_variance",
    "divergence_test",
    "fejer_growth_test",
    "oscillation_trend_test",
    "SUITES",
    "run_suite",
    "reports_to_json",
    "format_report_table",
]

_SQRT2 = math.sqrt(2.0)
_TWO_PI = 2.0 * math.pi


@dataclass
class TrialReport:
    """Outcome of one verification run; serialisable and reproducible."""

    name: str
    trials: int
    statistic: float
    theoretical_bound: float
    slack: float
    verdict: str
    seeds: str
    parameters: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "trials": self.trials,
            "statistic": self.statistic,
            "theoretical_bound": self.theoretical_bound,
            "slack": self.slack,
            "verdict": self.verdict,
            "seeds": self.seeds,
            "parameters": self.parameters,
            "details": self.details,
        }


def _seed_tag(seed_base: int, trials: int) -> str:
    return f"seed_i = {seed_base} + i for i < {trials}"


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _sign_matrix(seed_base: int, trials_lo: int, trials_hi: int, first_bit: int, n_bits: int) -> np.ndarray:
    """{-1,+1} matrix: row i is bits [first_bit, first_bit+n_bits) of seed_base + trials_lo + i."""
    seeds = np.arange(seed_base + trials_lo, seed_base + trials_hi, dtype=np.int64)
    idx = np.arange(first_bit, first_bit + n_bits, dtype=np.int64)
    return seeded_bits_matrix(seeds, idx)


def kolmogorov_inequality_test(
    u: rd.CoefficientSequence,
    r: float,
    N: int,
    trials: int = 10_000,
    seed_base: int = 0,
) -> TrialReport:
    """Frequency of max_{n<=N} |sum_{l<=n} eps_l u_l| > r against (sum u^2)/r^2."""
    if r <= 0.0:
        raise ValueError("deviation level r must be positive")
    terms = u.terms(1, N + 1)
    bound = float(np.sum(terms * terms)) / (r * r)
    hits = 0
    batch = max(1, (1 << 23) // max(N, 1))
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        eps = _sign_matrix(seed_base, lo, hi, 0, N).astype(np.float64)
        running = np.cumsum(eps * terms[None, :], axis=1)
        hits += int(np.count_nonzero(np.max(np.abs(running), axis=1) > r))
    freq = hits / trials
    slack = 3.0 * math.sqrt(bound / trials)
    return TrialReport(
        name="kolmogorov-inequality",
        trials=trials,
        statistic=freq,
        theoretical_bound=bound,
        slack=slack,
        verdict=_verdict(freq <= bound + slack),
        seeds=_seed_tag(seed_base, trials),
        parameters={"coeffs": u.descriptor, "r": r, "N": N, "seed_base": seed_base},
        details={"exceedances": hits},
    )


def paley_zygmund_exact(u: rd.CoefficientSequence, lam: float, m: int) -> float:
    """Exact P(|eps_1 u_1 + ... + eps_m u_m| > lam * l2norm) by enumerating all 2^m sign patterns."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0,1)")
    if not 1 <= m <= 24:
        raise ValueError("exhaustive enumeration supports 1 <= m <= 24")
    terms = u.terms(1, m + 1)
    threshold = lam * math.sqrt(float(np.sum(terms * terms)))
    patterns = np.arange(1 << m, dtype=np.int64)
    hits = 0
    batch = 1 << 16
    for lo in range(0, patterns.size, batch):
        block = patterns[lo : lo + batch]
        signs = (((block[:, None] >> np.arange(m)) & 1) * 2 - 1).astype(np.float64)
        sums = signs @ terms
        hits += int(np.count_nonzero(np.abs(sums) > threshold))
    return hits / float(1 << m)


def paley_zygmund_test(
    u: rd.CoefficientSequence,
    lam: float,
    m: int,
    trials: int = 100_000,
    seed_base: int = 0,
) -> TrialReport:
    """Frequency of |sum eps u| > lam*l2norm against the lower bound (1/3)(1-lam^2)^2."""
    if not 0.0 < lam < 1.0:
        raise ValueError("lam must lie in (0,1)")
    if m < 1:
        raise ValueError("m must be at least 1")
    terms = u.terms(1, m + 1)
    threshold = lam * math.sqrt(float(np.sum(terms * terms)))
    hits = 0
    batch = max(1, (1 << 23) // max(m, 1))
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        eps = _sign_matrix(seed_base, lo, hi, 0, m).astype(np.float64)
        sums = eps @ terms
        hits += int(np.count_nonzero(np.abs(sums) > threshold))
    freq = hits / trials
    bound = (1.0 / 3.0) * (1.0 - lam * lam) ** 2
    slack = 3.0 * math.sqrt(0.25 / trials)
    return TrialReport(
        name="paley-zygmund",
        trials=trials,
        statistic=freq,
        theoretical_bound=bound,
        slack=slack,
        verdict=_verdict(freq >= bound - slack),
        seeds=_seed_tag(seed_base, trials),
        parameters={"coeffs": u.descriptor, "lam": lam, "m": m, "seed_base": seed_base},
        details={"threshold": threshold, "exceedances": hits},
    )


def supnorm_deviation_test(
    k: int,
    grid_m: Optional[int] = None,
    trials: int = 10_000,
    seed_base: int = 0,
    *,
    target: str = "fourier",
    amps: Optional[rd.CoefficientSequence] = None,
    phases: Optional[rd.CoefficientSequence] = None,
    precision: int = 53,
    term_cap: int = fr.DEFAULT_TERM_CAP,
) -> TrialReport:
    """Frequency of a block polynomial's grid sup exceeding its deviation threshold.

    target="fourier": random-sign series with the given amplitudes; the
    threshold is `fourier.block_bound` and the rare-event bound 8*pi/E(k+1)^2.
    target="brownian": the sine/versine blocks with normal coefficients 1/n;
    both polynomials are tested against thresholds with log E(k+1) and
    log(2 E(k+1)) respectively (the versine rewrite doubles the degree), with
    the same rare-event bound for each.
    """
    b = fr.BlockIndex(int(k))
    if b.stop > term_cap:
        raise ValueError(f"block {b.k} needs {b.stop} terms, beyond cap {term_cap}")
    if grid_m is None:
        grid_m = 8 * b.stop
    n_idx = np.arange(b.start, b.stop, dtype=np.int64)
    t = np.arange(grid_m + 1, dtype=np.float64) / grid_m
    prob_bound = 8.0 * math.pi / float(b.stop) ** 2
    slack = 3.0 * math.sqrt(max(prob_bound, 1.0 / trials) / trials)
    seeds_tag = _seed_tag(seed_base, trials)

    if target == "fourier":
        if amps is None:
            raise ValueError("fourier target requires an amplitude sequence")
        ph = phases if phases is not None else rd.constant(0.0)
        x_block = amps.terms(b.start, b.stop)
        phase_block = ph.terms(b.start, b.stop)
        threshold = 6.0 * math.sqrt(math.log(b.stop) * float(np.sum(x_block * x_block)))
        hits = 0
        row_chunk = 2048
        cos_rows = [
            np.cos(fr.reduced_angles(t[lo : lo + row_chunk], n_idx) + phase_block[None, :])
            for lo in range(0, t.size, row_chunk)
        ]
        batch = max(1, (1 << 22) // max(b.stop - b.start, 1))
        for lo in range(0, trials, batch):
            hi = min(trials, lo + batch)
            eps = _sign_matrix(seed_base, lo, hi, b.start, b.stop - b.start)
            coeffs = (eps.astype(np.float64) * x_block[None, :]).T
            sup = np.zeros(hi - lo)
            for rows in cos_rows:
                sup = np.maximum(sup, np.max(np.abs(rows @ coeffs), axis=0))
            hits += int(np.count_nonzero(sup > threshold))
        freq = hits / trials
        return TrialReport(
            name="supnorm-deviation",
            trials=trials,
            statistic=freq,
            theoretical_bound=prob_bound,
            slack=slack,
            verdict=_verdict(freq <= prob_bound + slack),
            seeds=seeds_tag,
            parameters={
                "target": target,
                "k": b.k,
                "grid_m": grid_m,
                "amps": amps.descriptor,
                "seed_base": seed_base,
            },
            details={"threshold": threshold, "exceedances": hits},
        )

    if target != "brownian":
        raise ValueError("target must be 'fourier' or 'brownian'")
    inv_sq = float(np.sum(1.0 / n_idx.astype(np.float64) ** 2))
    thr_p = 6.0 * math.sqrt(math.log(b.stop) * inv_sq)
    thr_q = 6.0 * math.sqrt(math.log(2 * b.stop) * inv_sq)
    sin_rows, vers_rows = [], []
    row_chunk = 2048
    for lo in range(0, t.size, row_chunk):
        ang = fr.reduced_angles(t[lo : lo + row_chunk], n_idx)
        sin_rows.append(np.sin(ang))
        vers_rows.append(1.0 - np.cos(ang))
    hits_p = 0
    hits_q = 0
    batch = max(1, (1 << 21) // max((b.stop - b.start) * precision, 1))
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        seeds = np.arange(seed_base + lo, seed_base + hi, dtype=np.int64)
        xi = normal_matrix(seeds, 2 * b.start, 2 * b.stop, precision)
        xs = xi[:, 0::2] / n_idx.astype(np.float64)[None, :]
        ys = xi[:, 1::2] / n_idx.astype(np.float64)[None, :]
        sup_p = np.zeros(hi - lo)
        sup_q = np.zeros(hi - lo)
        for rows_s, rows_v in zip(sin_rows, vers_rows):
            sup_p = np.maximum(sup_p, np.max(np.abs(rows_s @ xs.T), axis=0))
            sup_q = np.maximum(sup_q, np.max(np.abs(rows_v @ ys.T), axis=0))
        hits_p += int(np.count_nonzero(sup_p > thr_p))
        hits_q += int(np.count_nonzero(sup_q > thr_q))
    freq_p = hits_p / trials
    freq_q = hits_q / trials
    ok = freq_p <= prob_bound + slack and freq_q <= prob_bound + slack
    return TrialReport(
        name="supnorm-deviation",
        trials=trials,
        statistic=max(freq_p, freq_q),
        theoretical_bound=prob_bound,
        slack=slack,
        verdict=_verdict(ok),
        seeds=seeds_tag,
        parameters={
            "target": target,
            "k": b.k,
            "grid_m": grid_m,
            "precision": precision,
            "seed_base": seed_base,
        },
        details={
            "sine_threshold": thr_p,
            "versine_threshold": thr_q,
            "sine_frequency": freq_p,
            "versine_frequency": freq_q,
        },
    )


def truncated_variance(t: float, N: int) -> float:
    """Exact second moment of the truncated series at time t.

    V_N(t) = t^2 + (2/pi^2) * sum_{n<=N} sin^2(pi n t) / n^2, which increases
    to t as N grows.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0,1]")
    if N < 0:
        raise ValueError("N must be nonnegative")
    if N == 0:
        return t * t
    n = np.arange(1, N + 1, dtype=np.float64)
    s = np.sin(np.pi * np.mod(n * t, 1.0))
    return float(t * t + (2.0 / math.pi ** 2) * np.sum((s * s) / (n * n)))


def variance_identity_check(t: float, N: int) -> TrialReport:
    """Deterministic: |V_N(t) - t| is within the analytic remainder of the tail."""
    v = truncated_variance(t, N)
    tail = float(polygamma(1, N + 1))  # sum_{n>N} n^-2
    bound = (2.0 / math.pi ** 2) * tail + 1e-12
    gap = abs(v - t)
    return TrialReport(
        name="variance-identity",
        trials=0,
        statistic=gap,
        theoretical_bound=bound,
        slack=0.0,
        verdict=_verdict(gap <= bound),
        seeds="deterministic",
        parameters={"t": t, "N": N},
        details={"V_N": v, "tail": tail},
    )


def brownian_moment_test(
    times: Sequence[float],
    N: int,
    trials: int = 10_000,
    seed_base: int = 0,
    precision: int = 53,
) -> TrialReport:
    """Empirical variances/covariances of the series against t and min(s,t).

    Also checks each empirical variance against the exact truncated moment
    V_N(t) at the tighter CLT tolerance 5*V_N(t)/sqrt(trials), and the exact
    endpoint identity: the value at t=1 equals the linear coefficient.
    """
    ts = [float(x) for x in times]
    if any(not 0.0 <= x <= 1.0 for x in ts):
        raise ValueError("times must lie in [0,1]")
    n_idx = np.arange(1, N + 1, dtype=np.float64)
    sin_vecs = []
    vers_vecs = []
    for x in ts:
        ang = _TWO_PI * np.mod(n_idx * x, 1.0)
        sin_vecs.append(_SQRT2 * np.sin(ang) / (_TWO_PI * n_idx))
        vers_vecs.append(_SQRT2 * (1.0 - np.cos(ang)) / (_TWO_PI * n_idx))
    W = np.empty((trials, len(ts)), dtype=np.float64)
    endpoint_exact = True
    batch = max(1, (1 << 24) // max((2 * N + 2) * precision, 1))
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        seeds = np.arange(seed_base + lo, seed_base + hi, dtype=np.int64)
        xi = normal_matrix(seeds, 0, 2 * N + 2, precision)
        x0 = xi[:, 0]
        xs = xi[:, 2::2]
        ys = xi[:, 3::2]
        for col, x in enumerate(ts):
            W[lo:hi, col] = x0 * x + xs @ sin_vecs[col] + ys @ vers_vecs[col]
            if x == 1.0:
                endpoint_exact &= bool(np.all(W[lo:hi, col] == x0))
    tol = max(0.02, 5.0 / math.sqrt(trials))
    variances = {}
    variance_ok = True
    truncated_ok = True
    for col, x in enumerate(ts):
        v_emp = float(np.var(W[:, col]))
        v_exact = truncated_variance(x, N)
        variances[f"{x:g}"] = {"empirical": v_emp, "truncated": v_exact}
        variance_ok &= abs(v_emp - x) <= tol
        truncated_ok &= abs(v_emp - v_exact) <= 5.0 * max(v_exact, 1e-12) / math.sqrt(trials)
    covariances = {}
    cov_ok = True
    for a in range(len(ts)):
        for b_i in range(a + 1, len(ts)):
            c_emp = float(np.mean(W[:, a] * W[:, b_i]) - np.mean(W[:, a]) * np.mean(W[:, b_i]))
            target = min(ts[a], ts[b_i])
            covariances[f"({ts[a]:g},{ts[b_i]:g})"] = c_emp
            cov_ok &= abs(c_emp - target) <= tol
    ok = variance_ok and truncated_ok and cov_ok and endpoint_exact
    worst = max(
        abs(variances[f"{x:g}"]["empirical"] - x) for x in ts
    ) if ts else 0.0
    return TrialReport(
        name="brownian-moments",
        trials=trials,
        statistic=worst,
        theoretical_bound=tol,
        slack=0.0,
        verdict=_verdict(ok),
        seeds=_seed_tag(seed_base, trials),
        parameters={
            "times": ts,
            "N": N,
            "precision": precision,
            "seed_base": seed_base,
        },
        details={
            "variances": variances,
            "covariances": covariances,
            "endpoint_identity_exact": endpoint_exact,
            "variance_vs_time_ok": variance_ok,
            "variance_vs_truncated_ok": truncated_ok,
            "covariance_ok": cov_ok,
        },
    )


def divergence_test(
    u: rd.CoefficientSequence,
    lam: float = 0.5,
    blocks: int = 3,
    trials: int = 10_000,
    seed_base: int = 0,
) -> TrialReport:
    """Per-block frequencies of |block sign sum| > lam against the 1/6 floor.

    Blocks come from the greedy boundary search; independence across blocks
    additionally forces the at-least-one-exceedance fraction up to
    1 - (5/6)^B at the same slack.
    """
    boundaries = rd.divergence_blocks(u, lam=lam, count=blocks)
    edges = [0] + boundaries
    m_last = boundaries[-1]
    terms = u.terms(1, m_last + 1)
    starts = np.asarray(edges[:-1], dtype=np.int64)  # offsets into terms
    block_hits = np.zeros(blocks, dtype=np.int64)
    any_hits = 0
    batch = max(1, (1 << 23) // max(m_last, 1))
    for lo in range(0, trials, batch):
        hi = min(trials, lo + batch)
        eps = _sign_matrix(seed_base, lo, hi, 0, m_last).astype(np.float64)
        prods = eps * terms[None, :]
        sums = np.add.reduceat(prods, starts, axis=1)
        exceed = np.abs(sums) > lam
        block_hits += np.count_nonzero(exceed, axis=0)
        any_hits += int(np.count_nonzero(np.any(exceed, axis=1)))
    freqs = block_hits / trials
    slack = 3.0 * math.sqrt(0.25 / trials)
    floor = 1.0 / 6.0
    any_floor = 1.0 - (5.0 / 6.0) ** blocks
    any_freq = any_hits / trials
    ok = bool(np.all(freqs >= floor - slack)) and any_freq >= any_floor - slack
    energies = [float(np.sum(terms[a:b] ** 2)) for a, b in zip(edges[:-1], edges[1:])]
    return TrialReport(
        name="divergence-blocks",
        trials=trials,
        statistic=float(np.min(freqs)),
        theoretical_bound=floor,
        slack=slack,
        verdict=_verdict(ok),
        seeds=_seed_tag(seed_base, trials),
        parameters={
            "coeffs": u.descriptor,
            "lam": lam,
            "blocks": blocks,
            "seed_base": seed_base,
        },
        details={
            "boundaries": boundaries,
            "block_energies": energies,
            "block_frequencies": freqs.tolist(),
            "any_exceedance_frequency": any_freq,
            "any_exceedance_floor": any_floor,
        },
    )


def _fejer_l1_batch(
    amps: rd.CoefficientSequence,
    phases: rd.CoefficientSequence,
    N: int,
    M: int,
    interval: tuple[int, int],
    trials: int,
    seed_base: int,
) -> np.ndarray:
    """Per-trial left-endpoint Riemann means of |sigma_N| over a dyadic interval."""
    j, pos = interval
    lo_t, _ = fr.dyadic_interval_bounds(j, pos)
    t = lo_t + (np.arange(M, dtype=np.float64) / M) * 2.0 ** -j
    weights = fr.fejer_weights(N)
    x = amps.terms(0, N + 1)
    ph = phases.terms(0, N + 1)
    n_idx = np.arange(N + 1, dtype=np.int64)
    eps = _sign_matrix(seed_base, 0, trials, 0, N + 1)
    coeffs = (eps.astype(np.float64) * (weights * x)[None, :]).T  # (N+1, trials)
    totals = np.zeros(trials, dtype=np.float64)
    row_chunk = max(1, (1 << 22) // max(N + 1, 1))
    for lo in range(0, t.size, row_chunk):
        ang = fr.reduced_angles(t[lo : lo + row_chunk], n_idx) + ph[None, :]
        totals += np.sum(np.abs(np.cos(ang) @ coeffs), axis=0)
    return totals / M


def fejer_growth_test(
    amps: rd.CoefficientSequence,
    Ns: Sequence[int],
    M: int,
    trials: int = 100,
    seed_base: int = 0,
    phases: Optional[rd.CoefficientSequence] = None,
    interval: tuple[int, int] = (3, 2),
    mode: str = "divergent",
) -> TrialReport:
    """Median L1 Riemann means of the Cesaro sums across truncation levels.

    mode="divergent": medians must increase strictly along Ns, on the whole
    interval and on the requested dyadic subinterval.
    mode="bounded": the control direction; medians on both intervals must
    stay within twice their first-level value.
    """
    if mode not in ("divergent", "bounded"):
        raise ValueError("mode must be 'divergent' or 'bounded'")
    ph = phases if phases is not None else rd.constant(0.0)
    Ns = [int(n) for n in Ns]
    med_full = []
    med_sub = []
    for N in Ns:
        full = _fejer_l1_batch(amps, ph, N, M, (0, 0), trials, seed_base)
        sub = _fejer_l1_batch(amps, ph, N, M, interval, trials, seed_base)
        med_full.append(float(np.median(full)))
        med_sub.append(float(np.median(sub)))
    if mode == "divergent":
        ok = all(b > a for a, b in zip(med_full, med_full[1:])) and all(
            b > a for a, b in zip(med_sub, med_sub[1:])
        )
        bound = 0.0
    else:
        cap_full = 2.0 * med_full[0]
        cap_sub = 2.0 * med_sub[0]
        ok = all(v <= cap_full for v in med_full) and all(v <= cap_sub for v in med_sub)
        bound = cap_full
    return TrialReport(
        name=f"fejer-l1-{mode}",
        trials=trials,
        statistic=med_full[-1],
        theoretical_bound=bound,
        slack=0.0,
        verdict=_verdict(ok),
        seeds=_seed_tag(seed_base, trials),
        parameters={
            "amps": amps.descriptor,
            "Ns": Ns,
            "M": M,
            "interval": list(interval),
            "mode": mode,
            "seed_base": seed_base,
        },
        details={"medians_full": med_full, "medians_subinterval": med_sub},
    )


def _path_matrix(
    seeds: np.ndarray, N: int, grid: np.ndarray, precision: int
) -> np.ndarray:
    """Truncated series values, one column per seed, over a shared grid."""
    n_idx = np.arange(1, N + 1, dtype=np.int64)
    scale = _SQRT2 / (_TWO_PI * n_idx.astype(np.float64))
    W = np.empty((grid.size, len(seeds)), dtype=np.float64)
    cx = np.empty((N, len(seeds)), dtype=np.float64)
    cy = np.empty((N, len(seeds)), dtype=np.float64)
    x0 = np.empty(len(seeds), dtype=np.float64)
    batch = max(1, (1 << 24) // max((2 * N + 2) * precision, 1))
    for lo in range(0, len(seeds), batch):
        part = seeds[lo : lo + batch]
        xi = normal_matrix(part, 0, 2 * N + 2, precision)
        x0[lo : lo + batch] = xi[:, 0]
        cx[:, lo : lo + batch] = (xi[:, 2::2] * scale[None, :]).T
        cy[:, lo : lo + batch] = (xi[:, 3::2] * scale[None, :]).T
    W[:] = grid[:, None] * x0[None, :]
    row_chunk = max(1, (1 << 22) // max(N, 1))
    for lo in range(0, grid.size, row_chunk):
        ang = fr.reduced_angles(grid[lo : lo + row_chunk], n_idx)
        W[lo : lo + row_chunk] += np.sin(ang) @ cx + (1.0 - np.cos(ang)) @ cy
    return W


def oscillation_trend_test(
    ns: Sequence[int] = (16, 64, 256),
    N: int = 4096,
    trials: int = 100,
    seed_base: int = 0,
    precision: int = 53,
    sample_grid: int = 4096,
) -> TrialReport:
    """Median sup distance between sampled paths and their slope codings.

    The medians must decrease strictly along ns.  Distances are evaluated on
    the common sample grid so the comparison is uniform across ns.
    """
    ns = [int(n) for n in ns]
    if any(sample_grid % n for n in ns):
        raise ValueError("sample_grid must be a multiple of every n")
    grid = np.arange(sample_grid + 1, dtype=np.float64) / sample_grid
    seeds = np.arange(seed_base, seed_base + trials, dtype=np.int64)
    W = _path_matrix(seeds, N, grid, precision)
    dists = np.empty((trials, len(ns)), dtype=np.float64)
    for i in range(trials):
        path = bw.PathSample(
            grid=grid, values=W[:, i], truncation=N, origin=f"seed:{seed_base + i}"
        )
        for col, n in enumerate(ns):
            dists[i, col] = bw.oscillation_distance(path, n, grid_m=sample_grid)
    med = np.median(dists, axis=0)
    ok = bool(np.all(np.diff(med) < 0.0))
    return TrialReport(
        name="oscillation-distance-trend",
        trials=trials,
        statistic=float(med[-1]),
        theoretical_bound=0.0,
        slack=0.0,
        verdict=_verdict(ok),
        seeds=_seed_tag(seed_base, trials),
        parameters={
            "ns": ns,
            "N": N,
            "precision": precision,
            "sample_grid": sample_grid,
            "seed_base": seed_base,
        },
        details={"medians": med.tolist()},
    )


def _suite_kolmogorov(trials, seed_base):
    return [
        kolmogorov_inequality_test(
            rd.power(1.0), r=3.0, N=1000, trials=trials or 10_000, seed_base=seed_base
        )
    ]


def _suite_paley_zygmund(trials, seed_base):
    t_main = trials or 100_000
    main = paley_zygmund_test(rd.constant(1.0), lam=0.5, m=100, trials=t_main, seed_base=seed_base)
    exact = paley_zygmund_exact(rd.constant(1.0), lam=0.5, m=10)
    mc = paley_zygmund_test(rd.constant(1.0), lam=0.5, m=10, trials=t_main, seed_base=seed_base)
    sigma = math.sqrt(exact * (1.0 - exact) / mc.trials)
    gap = abs(mc.statistic - exact)
    cross = TrialReport(
        name="paley-zygmund-enumeration",
        trials=mc.trials,
        statistic=gap,
        theoretical_bound=exact,
        slack=3.0 * sigma,
        verdict=_verdict(gap <= 3.0 * sigma),
        seeds=mc.seeds,
        parameters={"coeffs": "constant(1)", "lam": 0.5, "m": 10, "seed_base": seed_base},
        details={"exact_probability": exact, "monte_carlo_frequency": mc.statistic},
    )
    return [main, cross]


def _suite_divergence(trials, seed_base):
    return [
        divergence_test(
            rd.harmonic_root(), lam=0.5, blocks=3, trials=trials or 10_000, seed_base=seed_base
        )
    ]


def _suite_supnorm(trials, seed_base):
    return [
        supnorm_deviation_test(
            k=1,
            trials=trials or 10_000,
            seed_base=seed_base,
            target="fourier",
            amps=rd.power(1.0),
        )
    ]


def _suite_brownian(trials, seed_base):
    reports = [
        brownian_moment_test(
            times=(0.5, 1.0), N=4096, trials=trials or 10_000, seed_base=seed_base
        )
    ]
    for t in (0.25, 0.5, 0.75):
        reports.append(variance_identity_check(t, 4096))
    return reports


def _suite_fejer(trials, seed_base):
    t = trials or 100
    Ns = (16, 64, 256, 1024, 4096)
    return [
        fejer_growth_test(
            rd.harmonic_root(), Ns, M=16384, trials=t, seed_base=seed_base, mode="divergent"
        ),
        fejer_growth_test(
            rd.power(1.0), Ns, M=16384, trials=t, seed_base=seed_base, mode="bounded"
        ),
    ]


SUITES = {
    "kolmogorov": _suite_kolmogorov,
    "paley-zygmund": _suite_paley_zygmund,
    "divergence": _suite_divergence,
    "supnorm": _suite_supnorm,
    "brownian": _suite_brownian,
    "fejer": _suite_fejer,
}


def run_suite(name: str, trials: Optional[int] = None, seed_base: int = 0) -> list[TrialReport]:
    """Run one named suite, or all of them; trials=None keeps per-suite defaults."""
    if name == "all":
        out: list[TrialReport] = []
        for key in SUITES:
            out.extend(SUITES[key](trials, seed_base))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](trials, seed_base)


def reports_to_json(reports: Sequence[TrialReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def format_report_table(reports: Sequence[TrialReport]) -> str:
    """Fixed-width human-readable summary, one row per report."""
    lines = [
        f"{'name':32} {'trials':>8} {'statistic':>12} {'bound':>12} {'slack':>10} verdict",
        "-" * 84,
    ]
    for r in reports:
        lines.append(
            f"{r.name:32} {r.trials:>8} {r.statistic:>12.6g} "
            f"{r.theoretical_bound:>12.6g} {r.slack:>10.4g} {r.verdict}"
        )
    return "\n".join(lines)
