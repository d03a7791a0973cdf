"""Bit-string-parametrised random series and their verification workbench.

Modules
-------
bitsource   {-1,+1} strings, seeded/file/pattern sources, the pairing bijection
gaussian    inverse normal CDF and bit-derived normal sequences
rademacher  random signed series over coefficient sequences
fourier     random trigonometric series, Cesaro sums, dyadic blocks
brownian    Fourier-Wiener paths, block bounds, slope coding
verify      Monte Carlo / analytic checks with reproducible reports
cli         the `bitseries` command line front end
"""

from .bitsource import (
    BitString,
    BitSource,
    SeededBitSource,
    PatternBitSource,
    SourceExhaustedError,
    bits_from_seed,
    bits_from_file,
    pairing,
    pairing_inverse,
    subsequence,
    bits_to_unit_real,
)
from .gaussian import (
    inverse_gaussian_cdf,
    NormalSequence,
    normal_sequence,
    xy_split,
)
from .rademacher import (
    CoefficientSequence,
    RademacherSeries,
    partial_sum,
    sup_partial_deviation,
    tail_cutoff,
    contract,
    divergence_threshold,
    divergence_blocks,
)
from .fourier import (
    TrigSeriesConfig,
    BlockIndex,
    block_edge,
    series_partial_sum,
    pointwise_sequence,
    fejer_sum,
    fejer_l1_riemann,
    band_rms,
    block_polynomial_sup,
    block_bound,
)
from .brownian import (
    FourierWienerSeries,
    PathSample,
    PiecewiseLinearPath,
    fw_partial,
    fw_path,
    pq_block_sup,
    block_exceedance_threshold,
    tail_bound,
    encode_slopes,
    decode_slopes,
    oscillation_distance,
)
from .verify import TrialReport, run_suite

__version__ = "0.1.0"
