"""Walsh code generation and sub-block-domain spreading/de-spreading.

A code set is a K x K matrix of +/-1 entries (Sylvester-ordered Hadamard
rows); row n and row l have inner product K when n == l and 0 otherwise.
Code rows are numbered 1..K to match the symbol numbering of the block
structure.  Spreading never materializes the K*M x K*M diagonal code
operator: it applies one sign per M-sample sub-block.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import hadamard

from ocbt.core import DimensionError, is_power_of_two


def walsh_matrix(K: int) -> np.ndarray:
    """Return the K x K Sylvester Hadamard matrix (integer +/-1 entries)."""
    if not is_power_of_two(K):
        raise DimensionError(f"Walsh code length must be a power of two, got {K}")
    return hadamard(K, dtype=np.int64)


def _check_row(codes: np.ndarray, row: int, upper: int) -> None:
    if not 1 <= row <= upper:
        raise IndexError(f"code row {row} outside [1, {upper}]")
    if codes.shape[0] != codes.shape[1]:
        raise DimensionError("code set must be square")


def spread(symbol: np.ndarray, codes: np.ndarray, row: int) -> np.ndarray:
    """Multiply the k-th sub-block of ``symbol`` by entry k of code row ``row``.

    ``symbol`` must have length K*M with K = codes.shape[0].  Applying
    the same row twice restores the input (entries are +/-1).
    """
    symbol = np.asarray(symbol)
    K = codes.shape[0]
    _check_row(codes, row, K)
    if symbol.ndim != 1 or symbol.size % K != 0:
        raise DimensionError(f"symbol length {symbol.size} is not K*M for K={K}")
    M = symbol.size // K
    out = symbol.reshape(K, M) * codes[row - 1][:, None]
    return out.reshape(K * M)


def despread(block: np.ndarray, codes: np.ndarray, row: int,
             n_symbols: int) -> np.ndarray:
    """Recover one symbol's M samples from a K*M block.

    Output sample p is sqrt(n_symbols)/K times the code-weighted sum of
    the K sub-blocks at offset p, undoing the 1/sqrt(n_symbols) block
    normalization and the K-fold repetition.
    """
    block = np.asarray(block)
    K = codes.shape[0]
    _check_row(codes, row, n_symbols)
    if n_symbols > K:
        raise DimensionError(f"n_symbols={n_symbols} exceeds code length K={K}")
    if block.ndim != 1 or block.size % K != 0:
        raise DimensionError(f"block length {block.size} is not K*M for K={K}")
    M = block.size // K
    folded = codes[row - 1].astype(block.dtype) @ block.reshape(K, M)
    return (np.sqrt(n_symbols) / K) * folded
