"""Radix-2 FFT core and the two k x k long-transform schedules.

A transform of n = k*k points (k a power of two, 8 <= k <= 1024) runs as
two passes of length-k row transforms over a k x k matrix with a
rotation-factor multiply in between.  Two schedules are provided:

natural
    transpose, row FFTs, rotation factors, transpose, row FFTs,
    transpose — three physical transposes per pass, output in standard
    DFT order.

permuted
    row FFTs, rotation factors, transpose, row FFTs — one physical
    transpose per pass.  The result is the digit-transposed spectrum:
    ``fft2d_permuted(x) == D(fft2d_natural(D(x)))`` where ``D`` gathers
    by `digit_transpose_indices`.  Pointwise products are order
    agnostic, so a convolution can stay in this layout end to end and
    skip four of the six transposes.

Real-valued packing (`real_pack` / `real_unpack_spectra`) recovers the
spectra of two real sequences from one complex transform of their
pointwise pack x + i*v, halving the transform count of a real-input
convolution.

The forward kernel is exp(-2*pi*i/n); the inverse uses conjugated
factors and applies no 1/n scale (callers divide once at the end).
"""

import functools
import math

import numpy as np

from .errors import ParameterError
from .transpose import TransposeStats, transpose_blocked

__all__ = [
    "SMALL_SIZES",
    "supported_lengths",
    "is_supported_length",
    "matrix_side",
    "twiddle_factors",
    "rotation_grid",
    "fft_small",
    "fft2d_natural",
    "fft2d_permuted",
    "digit_transpose_indices",
    "digit_transpose",
    "real_pack",
    "real_unpack_spectra",
    "pointwise_multiply",
    "count_transposes",
]

SMALL_SIZES = tuple(1 << p for p in range(3, 13))  # 8 .. 4096
_SIDES = tuple(1 << p for p in range(3, 11))  # 8 .. 1024
_LONG_LENGTHS = tuple(k * k for k in _SIDES)


def supported_lengths():
    """Long-transform lengths n = k*k, k a power of two in [8, 1024]."""
    return _LONG_LENGTHS


def is_supported_length(n):
    return n in _LONG_LENGTHS


def matrix_side(n):
    """Side k of the k x k layout for a supported length n."""
    if not is_supported_length(n):
        raise ParameterError(
            "unsupported transform length %r (expected k*k, k a power of "
            "two in [8, 1024])" % (n,)
        )
    return math.isqrt(n)


def _direction_is_inverse(direction):
    if direction == "forward":
        return False
    if direction == "inverse":
        return True
    raise ParameterError("direction must be 'forward' or 'inverse', got %r" % (direction,))


@functools.lru_cache(maxsize=None)
def twiddle_factors(m, inverse=False):
    """Rotation table w**p for p in [0, m): w = exp(-+ 2*pi*i / m).

    Cached and read-only.  Entries sit on the unit circle; the table is
    periodic, so exponents reduce mod m (w**m == w**0 == 1).
    """
    sign = 2j if inverse else -2j
    w = np.exp(sign * np.pi * np.arange(m) / m)
    w.flags.writeable = False
    return w


@functools.lru_cache(maxsize=None)
def rotation_grid(n, inverse=False):
    """k x k grid of inter-pass rotation factors w_n**(i*j), cached."""
    k = matrix_side(n)
    e = np.outer(np.arange(k, dtype=np.int64), np.arange(k, dtype=np.int64)) % n
    sign = 2j if inverse else -2j
    g = np.exp((sign * np.pi / n) * e)
    g.flags.writeable = False
    return g


@functools.lru_cache(maxsize=None)
def _bit_reversal(m):
    a = np.arange(m, dtype=np.intp)
    rev = np.zeros(m, dtype=np.intp)
    for _ in range(m.bit_length() - 1):
        rev = (rev << 1) | (a & 1)
        a >>= 1
    rev.flags.writeable = False
    return rev


def fft_small(buf, direction="forward"):
    """Radix-2 transform along the last axis.

    Parameters
    ----------
    buf : array-like, last axis of length m in `SMALL_SIZES`.
        Leading axes are treated as a batch; a k x k matrix transforms
        every row in one call.
    direction : {"forward", "inverse"}
        forward computes Y[o] = sum_m x[m] * w**(o*m) with
        w = exp(-2*pi*i/m); inverse conjugates the factors and does not
        divide by m.

    Returns
    -------
    ndarray of complex128, same shape as the input (never aliased).
    """
    inverse = _direction_is_inverse(direction)
    a = np.asarray(buf, dtype=np.complex128)
    m = a.shape[-1] if a.ndim else 0
    if m not in SMALL_SIZES:
        raise ParameterError(
            "transform length %r not supported (power of two in [8, 4096])" % (m,)
        )
    # the bit-reversal gather is also the working copy (never aliases buf)
    a = np.take(a, _bit_reversal(m), axis=-1)
    w = twiddle_factors(m, inverse)[: m // 2]
    half = 1
    while half < m:
        step = half << 1
        tw = w[:: m // step][:half]
        s = a.reshape(a.shape[:-1] + (m // step, step))
        t = s[..., half:] * tw
        s[..., half:] = s[..., :half] - t
        s[..., :half] += t
        half = step
    return a


def _as_matrix(x):
    x = np.asarray(x)
    if x.ndim != 1:
        raise ParameterError("expected a 1-D buffer, got shape %r" % (x.shape,))
    k = matrix_side(x.shape[0])
    if x.dtype == np.complex128:
        # safe as a view: every schedule copies (transpose or bit-reversal
        # gather) before its first in-place write
        return x.reshape(k, k)
    return x.astype(np.complex128).reshape(k, k)


def fft2d_natural(x, direction="forward", stats=None, tile=None):
    """Long transform with natural-order input and output.

    transpose, row FFTs, rotation factors, transpose, row FFTs,
    transpose.  Equal to the plain DFT of ``x`` (inverse: conjugate
    factors, unscaled).  Physical transposes go through
    `transpose_blocked` and are counted in ``stats`` when given.
    """
    a = _as_matrix(x)
    n = a.size
    inverse = _direction_is_inverse(direction)
    a = transpose_blocked(a, tile=tile, stats=stats)
    a = fft_small(a, direction)
    a *= rotation_grid(n, inverse)
    a = transpose_blocked(a, tile=tile, stats=stats)
    a = fft_small(a, direction)
    a = transpose_blocked(a, tile=tile, stats=stats)
    return a.reshape(n)


def fft2d_permuted(x, direction="forward", stats=None, tile=None):
    """Long transform that keeps input and output digit-transposed.

    row FFTs, rotation factors, transpose, row FFTs — the outer
    transposes of the natural schedule are dropped, so
    ``fft2d_permuted(x) == D(fft2d_natural(D(x)))`` with ``D`` the
    `digit_transpose_indices` gather.
    """
    a = _as_matrix(x)
    n = a.size
    inverse = _direction_is_inverse(direction)
    a = fft_small(a, direction)
    a *= rotation_grid(n, inverse)
    a = transpose_blocked(a, tile=tile, stats=stats)
    a = fft_small(a, direction)
    return a.reshape(n)


@functools.lru_cache(maxsize=None)
def digit_transpose_indices(n):
    """Index map D with D[i*k + j] = j*k + i, cached and read-only.

    Gathering by D reads a k x k row-major matrix column by column; D is
    an involution (compose it with itself to get the identity).
    """
    k = matrix_side(n)
    d = np.arange(n, dtype=np.intp).reshape(k, k).T.reshape(-1).copy()
    d.flags.writeable = False
    return d


def digit_transpose(v):
    """Apply the digit-transpose gather to a 1-D buffer."""
    v = np.asarray(v)
    if v.ndim != 1:
        raise ParameterError("expected a 1-D buffer, got shape %r" % (v.shape,))
    return v[digit_transpose_indices(v.shape[0])]


def real_pack(x, v):
    """Pack two equal-length real sequences as x + i*v (complex128)."""
    x = np.asarray(x, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if x.shape != v.shape or x.ndim != 1:
        raise ParameterError(
            "operands must be equal-length 1-D vectors, got %r and %r"
            % (x.shape, v.shape)
        )
    packed = np.empty(x.shape, dtype=np.complex128)
    packed.real = x
    packed.imag = v
    return packed


def real_unpack_spectra(z_hat, partner=None):
    """Split the transform of a packed pair into the two real spectra.

    For Z = FFT(x + i*v) with real x, v:

        X(f) = (Z(f) + conj(Z(n-f))) / 2
        V(f) = (Z(f) - conj(Z(n-f))) / (2i)

    indices mod n.  ``partner`` overrides the f -> n-f pairing for
    buffers whose entries are stored in a permuted order: pass the
    index map p with p[m] = position of the partner of the frequency
    stored at m (for digit-transposed buffers, ``D[(n - D) % n]``).
    The zero-frequency slot is self-paired, so X and V are exactly real
    there.

    Returns
    -------
    (X, V) : pair of complex128 ndarrays.
    """
    z_hat = np.asarray(z_hat, dtype=np.complex128)
    if z_hat.ndim != 1:
        raise ParameterError("expected a 1-D spectrum, got shape %r" % (z_hat.shape,))
    n = z_hat.shape[0]
    if partner is None:
        partner = (n - np.arange(n)) % n
    else:
        partner = np.asarray(partner)
        if partner.shape != (n,):
            raise ParameterError("partner map must have shape (%d,)" % n)
    mirrored = np.take(z_hat, partner)
    np.conjugate(mirrored, out=mirrored)
    x_hat = z_hat + mirrored
    x_hat *= 0.5
    v_hat = z_hat - mirrored
    v_hat *= -0.5j
    return x_hat, v_hat


def pointwise_multiply(a_hat, b_hat):
    """Entrywise spectrum product (the convolution step in any order)."""
    a_hat = np.asarray(a_hat)
    b_hat = np.asarray(b_hat)
    if a_hat.shape != b_hat.shape:
        raise ParameterError(
            "spectra must share a shape, got %r and %r" % (a_hat.shape, b_hat.shape)
        )
    return a_hat * b_hat


def count_transposes(variant, n=64):
    """Physical transposes in one forward + inverse pass of a schedule.

    variant "natural" yields 6, "permuted" yields 2, independent of n.
    """
    fns = {"natural": fft2d_natural, "permuted": fft2d_permuted}
    if variant not in fns:
        raise ParameterError("variant must be 'natural' or 'permuted', got %r" % (variant,))
    fn = fns[variant]
    stats = TransposeStats()
    spectrum = fn(np.zeros(n), "forward", stats=stats)
    fn(spectrum, "inverse", stats=stats)
    return stats.transposes
