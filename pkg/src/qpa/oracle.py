"""Exact GF(2) references for the hash and the cyclic convolution.

The hash family is the block matrix [I | T]: an r x r identity beside
an r x (n-r) diagonal-constant block with ``T[i][j] = V[r-1-i+j]``, V
the n-1 seed bits.  Output bit i is

    y[i] = x[i] XOR parity( T[i][:] AND x[r:] )

Everything here is plain bit arithmetic over packed bytes; the FFT
pipeline is checked against these functions bit for bit, and they in
turn are checked against a per-bit triple loop in the tests.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .core import BitVector, ToeplitzSeed
from .errors import ParameterError

__all__ = [
    "ToeplitzView",
    "toeplitz_entry",
    "hash_direct",
    "hash_single_bit",
    "cyclic_convolve_naive",
]

# parity of each possible byte value
_PARITY = np.array([bin(v).count("1") & 1 for v in range(256)], dtype=np.uint8)

# cap on the rows x packed-columns product materialized at once (~32 MB)
_CHUNK_BYTES = 1 << 25


def _check_geometry(n, r):
    if not 0 < r < n:
        raise ParameterError("output length r=%r must satisfy 0 < r < n=%d" % (r, n))


def toeplitz_entry(seed, r, i, j):
    """Entry (i, j) of the compressing block: bit r-1-i+j of the seed."""
    if not isinstance(seed, ToeplitzSeed):
        raise ParameterError("seed must be a ToeplitzSeed")
    n = seed.n
    _check_geometry(n, r)
    if not 0 <= i < r:
        raise ParameterError("row %r out of range [0, %d)" % (i, r))
    if not 0 <= j < n - r:
        raise ParameterError("column %r out of range [0, %d)" % (j, n - r))
    return seed.bits.bit(r - 1 - i + j)


class ToeplitzView:
    """Lazy view of the r x (n-r) block defined by a seed.

    Never materializes the matrix; rows are length-(n-r) windows into
    the seed bits, sliding down one position per row.
    """

    def __init__(self, seed, r):
        if not isinstance(seed, ToeplitzSeed):
            raise ParameterError("seed must be a ToeplitzSeed")
        _check_geometry(seed.n, r)
        self.seed = seed
        self.r = r

    @property
    def shape(self):
        return (self.r, self.seed.n - self.r)

    def entry(self, i, j):
        return toeplitz_entry(self.seed, self.r, i, j)

    def row(self, i):
        """Row i as a uint8 array: seed bits r-1-i .. n-2-i."""
        if not 0 <= i < self.r:
            raise ParameterError("row %r out of range [0, %d)" % (i, self.r))
        start = self.r - 1 - i
        return self.seed.bits.bit_range(start, start + self.shape[1])


def _shifted_seed_bytes(seed_bits, pad_bytes):
    """The seed bitstream packed at all 8 bit offsets.

    Copy s drops the first s bits before packing, so the window of bits
    [o, o+L) starts exactly at byte o >> 3 of copy o & 7.
    """
    copies = []
    for s in range(8):
        packed = np.packbits(seed_bits[s:], bitorder="little")
        copies.append(np.pad(packed, (0, pad_bytes)))
    return copies


def hash_direct(x, seed, r):
    """Hash an n-bit input down to r bits, materializing no matrix.

    Rows are processed in groups that share a bit offset into the seed
    stream, so each group is a byte-aligned windowed AND + parity over
    packed words.  Time O(n*r / 8), peak extra memory about
    ``_CHUNK_BYTES``.

    Parameters
    ----------
    x : BitVector of length n
    seed : ToeplitzSeed with seed.n == n
    r : int, 0 < r < n

    Returns
    -------
    BitVector of length r
    """
    if not isinstance(x, BitVector):
        raise ParameterError("input must be a BitVector")
    if not isinstance(seed, ToeplitzSeed):
        raise ParameterError("seed must be a ToeplitzSeed")
    n = x.length
    if seed.n != n:
        raise ParameterError("seed serves n=%d, input has %d bits" % (seed.n, n))
    _check_geometry(n, r)

    xbits = x.to_bits()
    head = xbits[:r]
    tail_packed = np.packbits(xbits[r:], bitorder="little")
    width = tail_packed.size
    seed_bits = seed.bits.to_bits()
    copies = _shifted_seed_bytes(seed_bits, pad_bytes=width + 1)

    block_parity = np.empty(r, dtype=np.uint8)
    rows_per_chunk = max(1, _CHUNK_BYTES // width)
    for s in range(8):
        # windows starting at bit offsets o = s, s+8, ... below r
        starts = np.arange(s, r, 8)
        if not starts.size:
            continue
        rows = r - 1 - starts
        windows = sliding_window_view(copies[s], width)
        byte_starts = starts >> 3
        for lo in range(0, starts.size, rows_per_chunk):
            sel = slice(lo, lo + rows_per_chunk)
            masked = windows[byte_starts[sel]] & tail_packed
            folded = np.bitwise_xor.reduce(masked, axis=1)
            block_parity[rows[sel]] = _PARITY[folded]
    return BitVector.from_bits(head ^ block_parity)


def hash_single_bit(x, seed, r, i, chunk_bits=1 << 16):
    """Output bit i alone, streaming the row in fixed-size chunks.

    Runs in O(n) time with O(chunk_bits) extra memory, so a handful of
    rows of a 2**20-bit session can be spot-checked without paying for
    the full hash.  Matches ``hash_direct(x, seed, r).bit(i)``.
    """
    if not isinstance(x, BitVector):
        raise ParameterError("input must be a BitVector")
    if not isinstance(seed, ToeplitzSeed):
        raise ParameterError("seed must be a ToeplitzSeed")
    n = x.length
    if seed.n != n:
        raise ParameterError("seed serves n=%d, input has %d bits" % (seed.n, n))
    _check_geometry(n, r)
    if not 0 <= i < r:
        raise ParameterError("row %r out of range [0, %d)" % (i, r))

    start = r - 1 - i
    parity = 0
    for lo in range(0, n - r, chunk_bits):
        span = min(chunk_bits, n - r - lo)
        row_bits = seed.bits.bit_range(start + lo, start + lo + span)
        tail_bits = x.bit_range(r + lo, r + lo + span)
        parity ^= int(np.bitwise_xor.reduce(row_bits & tail_bits))
    return parity ^ x.bit(i)


def cyclic_convolve_naive(a, b):
    """Exact cyclic convolution c[i] = sum_j a[i-j mod m] * b[j].

    Quadratic-time integer reference used to pin down the FFT path; no
    floating point anywhere.

    Parameters
    ----------
    a, b : array-like of integers, equal length m >= 1.

    Returns
    -------
    ndarray of int64, length m.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 1 or a.shape != b.shape:
        raise ParameterError(
            "operands must be equal-length 1-D vectors, got %r and %r"
            % (a.shape, b.shape)
        )
    if a.size == 0:
        raise ParameterError("operands must not be empty")
    if a.dtype.kind not in "iub" or b.dtype.kind not in "iub":
        raise ParameterError("operands must be integer vectors")
    m = a.size
    idx = (np.arange(m)[:, None] - np.arange(m)[None, :]) % m
    return a.astype(np.int64)[idx] @ b.astype(np.int64)
