"""Deterministic sources of {-1,+1} bit strings.

Every random object in this package is parametrised by a bit string over
the alphabet {-1,+1}.  Sources are immutable and random-access: asking for
bit i always returns the same value, so extending a prefix never changes
previously returned bits.

Seeded sources use the SplitMix64 construction (Steele, Lea & Flood 2014):
output word w of stream `seed` is mix64(seed + (w+1)*GAMMA), where mix64 is
the SplitMix64 finaliser.  The construction is seedable, platform
independent, passes standard statistical batteries, and gives O(1) access
to any bit index, which the interleaved subsequence extraction relies on.
Bit i of the stream is bit (63 - i mod 64) of word i // 64 (MSB first,
matching the raw file format).
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

__all__ = [
    "BitString",
    "BitSource",
    "SeededBitSource",
    "PatternBitSource",
    "SourceExhaustedError",
    "bits_from_seed",
    "bits_from_file",
    "load_bit_file",
    "pairing",
    "pairing_inverse",
    "pairing_array",
    "subsequence",
    "bits_to_unit_real",
]

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX_2 = np.uint64(0x94D049BB133111EB)

# Pairing arguments are capped so that the Cantor index fits comfortably in
# int64 for vectorised paths: (k+j) < 2^31 implies pairing(k,j) < 2^62.
_PAIRING_CAP = 1 << 31


class SourceExhaustedError(ValueError):
    """A finite bit source was asked for an index beyond its last bit."""

    def __init__(self, needed: int, available: int):
        self.needed = needed
        self.available = available
        super().__init__(
            f"bit index {needed} requested but only {available} bits available"
        )


def _mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finaliser on a uint64 array (wrapping arithmetic)."""
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= _MIX_1
    x ^= x >> np.uint64(27)
    x *= _MIX_2
    x ^= x >> np.uint64(31)
    return x


def seeded_words(seed: int, word_indices: np.ndarray) -> np.ndarray:
    """Output words of the SplitMix64 stream `seed` at the given positions."""
    w = np.asarray(word_indices, dtype=np.uint64)
    s = np.uint64(seed % (1 << 64))
    return _mix64(s + (w + np.uint64(1)) * _GAMMA)


def seeded_bits(seed: int, indices: np.ndarray) -> np.ndarray:
    """Bits (as int8 in {-1,+1}) of the seeded stream at the given indices."""
    idx = np.asarray(indices, dtype=np.uint64)
    words = seeded_words(seed, idx >> np.uint64(6))
    shift = np.uint64(63) - (idx & np.uint64(63))
    raw = ((words >> shift) & np.uint64(1)).astype(np.int8)
    return (raw * np.int8(2)) - np.int8(1)


def seeded_bits_matrix(seeds: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """int8 matrix of shape (len(seeds), len(indices)) of {-1,+1} bits.

    Row s equals ``seeded_bits(seeds[s], indices)`` bit for bit; Monte Carlo
    drivers use this to evaluate many independent streams in one pass.
    """
    idx = np.asarray(indices, dtype=np.uint64)
    s = np.asarray([int(x) % (1 << 64) for x in np.atleast_1d(seeds)], dtype=np.uint64)
    base = (idx >> np.uint64(6)) + np.uint64(1)
    words = _mix64(s[:, None] + base[None, :] * _GAMMA)
    shift = np.uint64(63) - (idx & np.uint64(63))
    raw = ((words >> shift[None, :]) & np.uint64(1)).astype(np.int8)
    return (raw * np.int8(2)) - np.int8(1)


def precompute_bit_positions(indices: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Seed-independent word offsets and shifts for `seeded_bit_block`.

    Splitting this out lets a driver that reads the same bit positions from
    many streams pay the index arithmetic once.
    """
    idx = np.asarray(indices, dtype=np.uint64)
    base = ((idx >> np.uint64(6)) + np.uint64(1)) * _GAMMA
    shift = np.uint64(63) - (idx & np.uint64(63))
    return base, shift


def seeded_bit_block(seed: int, base: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Bits of one seeded stream as float64 0/1, at precomputed positions.

    Equals ``(seeded_bits(seed, indices) > 0)`` for the indices behind
    (base, shift), in float form ready for dyadic packing.
    """
    x = np.uint64(int(seed) % (1 << 64)) + base
    x ^= x >> np.uint64(30)
    x *= _MIX_1
    x ^= x >> np.uint64(27)
    x *= _MIX_2
    x ^= x >> np.uint64(31)
    return ((x >> shift) & np.uint64(1)).astype(np.float64)


class BitString:
    """A finite, immutable sequence over {-1,+1} with a provenance tag.

    Also usable directly as a (finite) BitSource.
    """

    def __init__(self, bits, origin: str = "explicit"):
        arr = np.asarray(bits, dtype=np.int8)
        if arr.ndim != 1:
            raise ValueError("bits must be one-dimensional")
        if arr.size and not np.all(np.abs(arr) == 1):
            raise ValueError("bits must take values in {-1,+1}")
        arr.setflags(write=False)
        self._bits = arr
        self.origin = origin

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def available(self) -> int:
        return self._bits.size

    def __len__(self) -> int:
        return self._bits.size

    def __iter__(self):
        return iter(int(b) for b in self._bits)

    def __getitem__(self, i):
        return int(self._bits[i])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitString):
            return NotImplemented
        return self._bits.shape == other._bits.shape and bool(
            np.all(self._bits == other._bits)
        )

    def __hash__(self):
        return hash((self.origin, self._bits.tobytes()))

    def __repr__(self) -> str:
        head = ",".join(f"{b:+d}" for b in self._bits[:8])
        tail = ",..." if len(self) > 8 else ""
        return f"BitString([{head}{tail}], len={len(self)}, origin={self.origin!r})"

    # finite-source interface
    def bit(self, i: int) -> int:
        if i < 0:
            raise IndexError("bit index must be nonnegative")
        if i >= self._bits.size:
            raise SourceExhaustedError(i, self._bits.size)
        return int(self._bits[i])

    def bits_at(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0):
            raise IndexError("bit index must be nonnegative")
        if idx.size and idx.max() >= self._bits.size:
            raise SourceExhaustedError(int(idx.max()), self._bits.size)
        return self._bits[idx]

    def prefix(self, n: int) -> "BitString":
        if n > self._bits.size:
            raise SourceExhaustedError(n - 1, self._bits.size)
        return BitString(self._bits[:n], origin=self.origin)


class BitSource:
    """Unbounded random-access source interface; see concrete classes."""

    origin: str = "abstract"
    available: int | None = None

    def bit(self, i: int) -> int:
        raise NotImplementedError

    def bits_at(self, indices) -> np.ndarray:
        raise NotImplementedError

    def prefix(self, n: int) -> BitString:
        return BitString(self.bits_at(np.arange(n, dtype=np.int64)), origin=self.origin)


class SeededBitSource(BitSource):
    """Unbounded deterministic stream derived from a 64-bit seed."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.origin = f"seed:{self.seed}"

    def bit(self, i: int) -> int:
        if i < 0:
            raise IndexError("bit index must be nonnegative")
        return int(seeded_bits(self.seed, np.asarray([i]))[0])

    def bits_at(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and idx.min() < 0:
            raise IndexError("bit index must be nonnegative")
        return seeded_bits(self.seed, idx)


class PatternBitSource(BitSource):
    """Cyclic repetition of a fixed {-1,+1} pattern (constant, alternating, ...)."""

    def __init__(self, pattern, repeat: bool = True):
        arr = np.asarray(pattern, dtype=np.int8)
        if arr.size == 0:
            raise ValueError("pattern must be nonempty")
        if not np.all(np.abs(arr) == 1):
            raise ValueError("pattern values must be in {-1,+1}")
        self._pattern = arr
        self._repeat = repeat
        tag = ",".join(f"{b:+d}" for b in arr[:16])
        self.origin = f"pattern:{tag}{'...' if arr.size > 16 else ''}"
        self.available = None if repeat else arr.size

    def bit(self, i: int) -> int:
        if i < 0:
            raise IndexError("bit index must be nonnegative")
        if not self._repeat and i >= self._pattern.size:
            raise SourceExhaustedError(i, self._pattern.size)
        return int(self._pattern[i % self._pattern.size])

    def bits_at(self, indices) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        if idx.size and idx.min() < 0:
            raise IndexError("bit index must be nonnegative")
        if not self._repeat and idx.size and idx.max() >= self._pattern.size:
            raise SourceExhaustedError(int(idx.max()), self._pattern.size)
        return self._pattern[idx % self._pattern.size]


def bits_from_seed(seed: int, n: int) -> BitString:
    """First n bits of the seeded stream; same seed, same bits."""
    if n < 0:
        raise ValueError("bit count must be nonnegative")
    return SeededBitSource(seed).prefix(n)


def _decode_raw(data: bytes) -> np.ndarray:
    byte_arr = np.frombuffer(data, dtype=np.uint8)
    bits01 = np.unpackbits(byte_arr)  # MSB first
    return (bits01.astype(np.int8) * np.int8(2)) - np.int8(1)


def _decode_ascii(data: bytes) -> np.ndarray:
    text = data.decode("ascii")
    out = []
    for ch in text:
        if ch in "01":
            out.append(1 if ch == "1" else -1)
        elif not ch.isspace():
            raise ValueError(f"invalid character {ch!r} in ascii bit file")
    return np.asarray(out, dtype=np.int8)


def load_bit_file(path, mode: str = "raw") -> BitString:
    """Decode a whole bit file.

    raw mode: bytes consumed MSB first, bit 1 -> +1, bit 0 -> -1.
    ascii mode: characters '0'/'1', whitespace ignored.
    """
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"bit file not found: {p}")
    data = p.read_bytes()
    if mode == "raw":
        bits = _decode_raw(data)
    elif mode == "ascii":
        bits = _decode_ascii(data)
    else:
        raise ValueError(f"unknown bit file mode: {mode!r}")
    return BitString(bits, origin=f"file:{p}")


def bits_from_file(path, n: int, mode: str = "raw") -> BitString:
    """First n bits of a bit file; raises SourceExhaustedError if too short."""
    if n < 0:
        raise ValueError("bit count must be nonnegative")
    full = load_bit_file(path, mode=mode)
    if len(full) < n:
        raise SourceExhaustedError(n - 1, len(full))
    return full.prefix(n)


def pairing(k: int, j: int) -> int:
    """Cantor pairing (k+j)(k+j+1)/2 + j, a bijection of pairs onto indices."""
    if k < 0 or j < 0:
        raise ValueError("pairing arguments must be nonnegative")
    if k + j >= _PAIRING_CAP:
        raise OverflowError("pairing arguments out of supported range (k+j < 2^31)")
    s = k + j
    return s * (s + 1) // 2 + j


def pairing_inverse(v: int) -> tuple[int, int]:
    """Inverse of `pairing`: the unique (k, j) with pairing(k, j) == v."""
    if v < 0:
        raise ValueError("pairing index must be nonnegative")
    s = (math.isqrt(8 * v + 1) - 1) // 2
    j = v - s * (s + 1) // 2
    return s - j, j


def pairing_array(k: int, j: np.ndarray) -> np.ndarray:
    """Vectorised pairing(k, j) over an int64 array of j values."""
    jj = np.asarray(j, dtype=np.int64)
    if jj.size and jj.min() < 0:
        raise ValueError("pairing arguments must be nonnegative")
    if k < 0:
        raise ValueError("pairing arguments must be nonnegative")
    if jj.size and k + int(jj.max()) >= _PAIRING_CAP:
        raise OverflowError("pairing arguments out of supported range (k+j < 2^31)")
    s = jj + np.int64(k)
    return s * (s + 1) // 2 + jj


def pairing_matrix(ks: np.ndarray, p: int) -> np.ndarray:
    """int64 matrix with entry (i, j) = pairing(ks[i], j) for j < p."""
    kk = np.asarray(ks, dtype=np.int64)
    if kk.size and kk.min() < 0:
        raise ValueError("pairing arguments must be nonnegative")
    if kk.size and int(kk.max()) + p - 1 >= _PAIRING_CAP:
        raise OverflowError("pairing arguments out of supported range (k+j < 2^31)")
    jj = np.arange(p, dtype=np.int64)
    s = kk[:, None] + jj[None, :]
    return s * (s + 1) // 2 + jj[None, :]


def subsequence(alpha, k: int, p: int) -> BitString:
    """Bits of alpha along the k-th interleaved track: bit j is alpha[pairing(k, j)].

    The index sets of distinct tracks are disjoint, so the extracted strings
    are functions of disjoint parts of alpha.
    """
    if p < 0:
        raise ValueError("precision must be nonnegative")
    idx = pairing_array(k, np.arange(p, dtype=np.int64))
    bits = alpha.bits_at(idx)
    return BitString(bits, origin=f"{alpha.origin}|track(k={k},p={p})")


def bits_to_unit_real(b) -> float:
    """Map p bits to the dyadic midpoint (v + 1/2) * 2^-p in the open (0,1).

    v is the MSB-first integer with digit 1 for +1 and 0 for -1.  The
    midpoint convention keeps the result at least 2^-(p+1) away from both
    endpoints, and within 2^-(p+1) of any infinite binary expansion
    extending the given bits.
    """
    bits = b.bits if isinstance(b, BitString) else np.asarray(b, dtype=np.int8)
    p = int(bits.size)
    if p == 0:
        raise ValueError("bits_to_unit_real requires at least one bit")
    v = 0
    for bit in bits:
        v = (v << 1) | (1 if bit > 0 else 0)
    q = float(2 * v + 1) * 2.0 ** -(p + 1)
    # float rounding can hit 1.0 when p exceeds the mantissa width; stay open
    if q >= 1.0:
        q = math.nextafter(1.0, 0.0)
    elif q <= 0.0:
        q = math.nextafter(0.0, 1.0)
    return q
