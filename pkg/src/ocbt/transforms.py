"""Unitary DFT/IDFT and the sub-block repetition/fold operators.

Both transform directions carry the 1/sqrt(size) factor, so round trips
are exact inverses and power is preserved.  The forward kernel is
exp(-j*2*pi*u*p/size).  Sizes are restricted to powers of two.
"""

from __future__ import annotations

import numpy as np

from ocbt.core import DimensionError, is_power_of_two


def _check_size(x: np.ndarray, size: int | None) -> int:
    n = x.shape[-1]
    if size is not None and size != n:
        raise DimensionError(f"buffer length {n} does not match size {size}")
    if not is_power_of_two(n):
        raise DimensionError(f"transform size must be a power of two, got {n}")
    return n


def dft(x: np.ndarray, size: int | None = None) -> np.ndarray:
    """Unitary forward DFT along the last axis."""
    _check_size(np.asarray(x), size)
    return np.fft.fft(x, axis=-1, norm="ortho")


def idft(X: np.ndarray, size: int | None = None) -> np.ndarray:
    """Unitary inverse DFT along the last axis; exact inverse of dft."""
    _check_size(np.asarray(X), size)
    return np.fft.ifft(X, axis=-1, norm="ortho")


def repeat_subblock(sub: np.ndarray, K: int) -> np.ndarray:
    """Concatenate K copies of an M-sample sub-block (length K*M output)."""
    sub = np.asarray(sub)
    if sub.ndim != 1:
        raise DimensionError("repeat_subblock expects a 1-D buffer")
    if K < 1:
        raise DimensionError(f"K must be >= 1, got {K}")
    return np.tile(sub, K)


def fold_subblocks(block: np.ndarray, K: int) -> np.ndarray:
    """Sum the K sub-blocks of a K*M-sample buffer into one M-sample buffer."""
    block = np.asarray(block)
    if block.ndim != 1:
        raise DimensionError("fold_subblocks expects a 1-D buffer")
    if K < 1 or block.size % K != 0:
        raise DimensionError(f"buffer length {block.size} is not a multiple of K={K}")
    return block.reshape(K, block.size // K).sum(axis=0)
