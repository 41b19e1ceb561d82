"""End-to-end key distillation: embed, transform, multiply, round, XOR.

The r x (n-r) diagonal-constant block product is carried by one cyclic
convolution of two length-n 0/1 vectors:

* ``v_circ``  — seed bits reversed into slots 1..n-1, slot 0 zero.
* ``x_masked`` — the input with its first r bits zeroed.

For output rows below r the convolution reads only genuine seed bits
(the zero padding slot pairs up with masked-off positions), so the
parity of ``conv[i]`` is the block row i, and the final key is
``x[:r] XOR parity(conv[:r])``.

Two execution modes produce identical keys:

mode "A"
    natural-order schedule (`fft2d_natural` forward and inverse, six
    physical transposes per convolution).

mode "B"
    order-insensitive schedule (`fft2d_permuted`, two physical
    transposes).  Operands are loaded through the digit-transpose index
    map and results read back through it, which costs two index gathers
    instead of four matrix transposes.

Both modes pack the two real operands into one complex transform and
split the spectra afterwards, so each convolution is one forward and
one inverse transform.  Values are rounded to integers at the end; the
largest distance from an integer (the residual) is checked against
``RESIDUAL_LIMIT`` on every run and reported in `FinalKey`.
"""

import dataclasses
import time
from contextlib import contextmanager

import numpy as np

from .core import BitVector, ToeplitzSeed
from .errors import ParameterError, PrecisionError
from .fft import (
    digit_transpose_indices,
    fft2d_natural,
    fft2d_permuted,
    is_supported_length,
    matrix_side,
    pointwise_multiply,
    real_pack,
    real_unpack_spectra,
)
from .transpose import transpose_blocked

__all__ = [
    "RESIDUAL_LIMIT",
    "MODES",
    "RunStats",
    "ConvolutionOperands",
    "FinalKey",
    "build_operands",
    "run_mode_b_schedule",
    "privacy_amplify",
    "precision_profile",
]

RESIDUAL_LIMIT = 0.25
MODES = ("A", "B")


@dataclasses.dataclass
class RunStats:
    """Per-run instrumentation: physical transposes and stage seconds."""

    transposes: int = 0
    timings: dict = dataclasses.field(default_factory=dict)

    def total_seconds(self):
        return sum(self.timings.values())


@contextmanager
def _stage(stats, name):
    if stats is None:
        yield
        return
    t0 = time.perf_counter()
    try:
        yield
    finally:
        stats.timings[name] = stats.timings.get(name, 0.0) + (time.perf_counter() - t0)


@dataclasses.dataclass
class ConvolutionOperands:
    """Real convolution inputs derived from one (input, seed, r) triple."""

    v_circ: np.ndarray
    x_masked: np.ndarray
    r: int

    @property
    def n(self):
        return self.v_circ.shape[0]


@dataclasses.dataclass
class FinalKey:
    """Distilled key bits plus how they were computed."""

    bits: BitVector
    mode: str
    residual: float


def build_operands(x, seed, r):
    """Embed an (input, seed, r) triple as two real length-n vectors.

    ``v_circ[0] = 0`` and ``v_circ[p] = V[n-1-p]`` for p >= 1;
    ``x_masked[j] = x[j]`` for j >= r, else 0.  Cyclic convolution of
    the pair then reproduces every block row below r exactly (the
    padding slot only ever multiplies masked-off entries there).
    """
    if not isinstance(x, BitVector):
        raise ParameterError("input must be a BitVector")
    if not isinstance(seed, ToeplitzSeed):
        raise ParameterError("seed must be a ToeplitzSeed")
    n = x.length
    if seed.n != n:
        raise ParameterError("seed serves n=%d, input has %d bits" % (seed.n, n))
    if not 0 < r < n:
        raise ParameterError("output length r=%r must satisfy 0 < r < n=%d" % (r, n))
    v_circ = np.zeros(n, dtype=np.float64)
    v_circ[1:] = seed.bits.to_bits()[::-1]
    x_masked = x.to_bits().astype(np.float64)
    x_masked[:r] = 0.0
    return ConvolutionOperands(v_circ=v_circ, x_masked=x_masked, r=r)


def _gate_residual(residual, n):
    if not residual < RESIDUAL_LIMIT:
        raise PrecisionError(
            "convolution residual %.6g at n=%d exceeds the rounding limit %.2f"
            % (residual, n, RESIDUAL_LIMIT)
        )


def _convolve_natural(operands, stats=None, tile=None):
    """Mode A convolution: natural-order transforms end to end."""
    n = operands.n
    with _stage(stats, "pack"):
        z = real_pack(operands.x_masked, operands.v_circ)
    with _stage(stats, "forward"):
        z_hat = fft2d_natural(z, "forward", stats=stats, tile=tile)
    with _stage(stats, "unpack"):
        x_hat, v_hat = real_unpack_spectra(z_hat)
    with _stage(stats, "multiply"):
        s_hat = pointwise_multiply(x_hat, v_hat)
    with _stage(stats, "inverse"):
        conv = fft2d_natural(s_hat, "inverse", stats=stats, tile=tile)
        conv *= 1.0 / n
    return conv


def run_mode_b_schedule(operands, raw=False, stats=None, tile=None):
    """Mode B convolution: both transforms in digit-transposed order.

    Operands enter through the digit-transpose index map, the spectra
    are split with the partner map that mirrors frequencies inside the
    permuted layout, and the result is gathered back to natural order.
    The returned vector equals the mode A convolution to within
    floating-point noise; ``raw=True`` skips the final gather and hands
    back the physical (digit-transposed) buffer instead.
    """
    n = operands.n
    if not is_supported_length(n):
        raise ParameterError("n=%r is not a supported transform length" % (n,))
    with _stage(stats, "pack"):
        z = _digit_reorder(real_pack(operands.x_masked, operands.v_circ))
    with _stage(stats, "forward"):
        z_hat = fft2d_permuted(z, "forward", stats=stats, tile=tile)
    with _stage(stats, "unpack"):
        x_hat, v_hat = real_unpack_spectra(z_hat, partner=_permuted_partner(n))
    with _stage(stats, "multiply"):
        s_hat = pointwise_multiply(x_hat, v_hat)
    with _stage(stats, "inverse"):
        conv = fft2d_permuted(s_hat, "inverse", stats=stats, tile=tile)
        conv *= 1.0 / n
    if raw:
        return conv
    with _stage(stats, "readback"):
        return _digit_reorder(conv)


def _digit_reorder(vec):
    """Apply the digit-transpose index map to a length-n buffer.

    Same result as gathering by `digit_transpose_indices`; runs as a
    tiled k x k copy because the map is exactly a matrix transpose.
    This is the load/store address translation around the permuted
    schedule, not one of the transform's counted transposes.
    """
    k = matrix_side(vec.shape[0])
    return transpose_blocked(vec.reshape(k, k)).reshape(-1)


_partner_cache = {}


def _permuted_partner(n):
    """Partner map for spectra stored in digit-transposed order.

    Slot m holds frequency f = D[m]; its mirror n-f sits at slot
    D[(n - D[m]) mod n] because D is an involution.
    """
    got = _partner_cache.get(n)
    if got is None:
        d = digit_transpose_indices(n)
        got = d[(n - d) % n]
        got.flags.writeable = False
        _partner_cache[n] = got
    return got


def privacy_amplify(x, seed, r, mode="A", t=None, s_min=1, stats=None, tile=None):
    """Distill an r-bit final key from an n-bit input.

    Parameters
    ----------
    x : BitVector
        Raw key of a supported transform length n.
    seed : ToeplitzSeed
        Seed serving the same n.
    r : int
        Final key length, 0 < r < n.
    mode : {"A", "B"}
        Transform schedule; identical output either way.
    t : int, optional
        Bits assumed leaked.  When given, the security margin
        n - t - r is checked against ``s_min`` before any transform
        work happens.
    s_min : int
        Smallest acceptable security margin (used only with ``t``).
    stats : RunStats, optional
        Collects transpose counts and per-stage timings.
    tile : int, optional
        Tile side for the physical transposes.

    Returns
    -------
    FinalKey
        ``bits`` of length r, the mode, and the rounding residual.

    Raises
    ------
    ParameterError
        Bad sizes, or a security margin below ``s_min``.
    PrecisionError
        Rounding residual at or above ``RESIDUAL_LIMIT``.
    """
    if not isinstance(x, BitVector):
        raise ParameterError("input must be a BitVector")
    n = x.length
    if not is_supported_length(n):
        raise ParameterError("n=%r is not a supported transform length" % (n,))
    if mode not in MODES:
        raise ParameterError("mode must be 'A' or 'B', got %r" % (mode,))
    if not isinstance(r, int) or not 0 < r < n:
        raise ParameterError("output length r=%r must satisfy 0 < r < n=%d" % (r, n))
    if t is not None:
        if not isinstance(t, int) or t < 0:
            raise ParameterError("leaked bits t=%r must be a non-negative int" % (t,))
        margin = n - t - r
        if margin < s_min:
            raise ParameterError(
                "security margin n-t-r = %d is below the minimum %d" % (margin, s_min)
            )

    with _stage(stats, "build"):
        operands = build_operands(x, seed, r)

    if mode == "A":
        conv = _convolve_natural(operands, stats=stats, tile=tile)
        permuted_layout = False
    else:
        conv = run_mode_b_schedule(operands, raw=True, stats=stats, tile=tile)
        permuted_layout = True

    with _stage(stats, "finalize"):
        re = conv.real
        rounded = np.rint(re)
        residual = float(max(np.abs(re - rounded).max(), np.abs(conv.imag).max()))
        _gate_residual(residual, n)
        # under the gate nothing sits within 0.25 of a half-integer, so
        # round-half-up and round-to-nearest coincide with `rounded`
        parity = (rounded.astype(np.int64) & 1).astype(np.uint8)
        if permuted_layout:
            # store-side address translation back to natural order
            parity = _digit_reorder(parity)
        bits = x.bit_range(0, r) ^ parity[:r]
    return FinalKey(bits=BitVector.from_bits(bits), mode=mode, residual=residual)


def precision_profile(lengths, random_instances=3, mode="A", rng=None):
    """Residual survey across transform lengths.

    For each n the all-ones input and seed (every convolution term
    contributes) run first, then ``random_instances`` random triples.

    Returns
    -------
    list of dict
        One row per n with the all-ones, worst random, and overall
        worst residual.
    """
    if rng is None:
        rng = np.random.default_rng(2024)
    rows = []
    for n in lengths:
        if not is_supported_length(n):
            raise ParameterError("n=%r is not a supported transform length" % (n,))
        ones_x = BitVector.from_bits(np.ones(n, dtype=np.uint8))
        ones_seed = ToeplitzSeed(BitVector.from_bits(np.ones(n - 1, dtype=np.uint8)))
        worst_ones = privacy_amplify(ones_x, ones_seed, n // 2, mode=mode).residual
        worst_random = 0.0
        for _ in range(random_instances):
            x = BitVector.from_bits(rng.integers(0, 2, n, dtype=np.uint8))
            seed = ToeplitzSeed(BitVector.from_bits(rng.integers(0, 2, n - 1, dtype=np.uint8)))
            r = int(rng.integers(1, n))
            got = privacy_amplify(x, seed, r, mode=mode).residual
            worst_random = max(worst_random, got)
        rows.append(
            {
                "n": n,
                "allones_residual": worst_ones,
                "random_residual": worst_random,
                "max_residual": max(worst_ones, worst_random),
            }
        )
    return rows
