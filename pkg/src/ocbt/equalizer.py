"""Single-tap frequency-domain equalization.

OCBT equalizes one whole K*M block through the unitary K*M-point
transform pair; the OFDM baselines reuse the same per-bin gains at M
bins per symbol.  No inter-block cancellation is attempted: whatever
the per-bin multiply leaves of the previous block's spill (and of the
current block's missing circular wrap, when there is no prefix) is
exactly the residual the de-spreading stage sees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ocbt.core import DimensionError
from ocbt.transforms import dft, idft

ZF = "zf"
MMSE = "mmse"

_SINGULAR_FLOOR = 1e-12


class SingularChannel(ArithmeticError):
    """Zero-forcing requested on a channel with a (near-)zero frequency bin."""


@dataclass(frozen=True)
class EqualizerSpec:
    """Equalizer choice; noise_variance is the per-sample noise power used
    by MMSE (signal power is taken as 1)."""

    kind: str = MMSE
    noise_variance: float = 0.0

    def __post_init__(self):
        if self.kind not in (ZF, MMSE):
            raise DimensionError(f"equalizer kind must be 'zf' or 'mmse', got {self.kind!r}")
        if self.noise_variance < 0:
            raise DimensionError(f"noise_variance must be >= 0, got {self.noise_variance}")


def freq_response(taps: np.ndarray, nbins: int) -> np.ndarray:
    """Unnormalized DFT of the zero-padded taps: H_b = sum_p h_p e^{-j2*pi*b*p/nbins}."""
    taps = np.asarray(taps)
    if taps.ndim != 1 or taps.size < 1:
        raise DimensionError("taps must be a nonempty 1-D array")
    if taps.size > nbins:
        raise DimensionError(f"tap count {taps.size} exceeds bin count {nbins}")
    return np.fft.fft(taps, nbins)


def equalizer_gains(response: np.ndarray, spec: EqualizerSpec) -> np.ndarray:
    """Per-bin gains: 1/H for ZF, conj(H)/(|H|^2 + P_N) for MMSE (unit P_s)."""
    response = np.asarray(response)
    if spec.kind == ZF:
        if np.min(np.abs(response)) < _SINGULAR_FLOOR:
            raise SingularChannel("channel frequency response has a bin below 1e-12")
        return 1.0 / response
    return np.conj(response) / (np.abs(response) ** 2 + spec.noise_variance)


def equalize_block(block: np.ndarray, taps: np.ndarray,
                   spec: EqualizerSpec) -> np.ndarray:
    """Per-bin equalization of one block through the unitary transform pair."""
    block = np.asarray(block)
    if block.ndim != 1:
        raise DimensionError("block must be a 1-D buffer")
    gains = equalizer_gains(freq_response(taps, block.size), spec)
    return idft(gains * dft(block))
