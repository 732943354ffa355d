"""Transmit windows: the OCBT flat-top edge taper and the W-OFDM roll-off.

The OCBT per-symbol window is flat over M - L samples with raised-cosine
tapers of L/2 samples on each edge.  The taper samples the truncated RC
pulse h(t) = sinc(t/T0) * cos(pi*beta*t/T0) / (1 - (2*beta*t/T0)^2) at
L/2 points per symbol period over the rising span [-T0, 0); the falling
edge mirrors the rising one.  Tiling repeats the window once per
sub-block so it commutes with the code structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ocbt.core import DimensionError


def raised_cosine_pulse(t: np.ndarray, beta: float) -> np.ndarray:
    """RC pulse h(t) with time in symbol periods; h(0) = 1.

    The removable singularity at t = +/- 1/(2*beta) is filled with its
    limit (pi/4) * sinc(1/(2*beta)).
    """
    t = np.asarray(t, dtype=float)
    den = 1.0 - (2.0 * beta * t) ** 2
    singular = np.isclose(den, 0.0)
    safe_den = np.where(singular, 1.0, den)
    out = np.sinc(t) * np.cos(np.pi * beta * t) / safe_den
    if beta > 0 and np.any(singular):
        out = np.where(singular, (np.pi / 4.0) * np.sinc(1.0 / (2.0 * beta)), out)
    return out


@dataclass(frozen=True)
class WindowProfile:
    """Per-symbol window, its K-fold tiling, and its mean value."""

    per_symbol: np.ndarray
    tiled: np.ndarray
    mean: float


@dataclass(frozen=True)
class WofdmWindow:
    """Complementary overlap-add edge weights: rise[q] + fall[q] = 1."""

    rise: np.ndarray
    fall: np.ndarray


def build_ocbt_window(M: int, L: int, beta: float) -> WindowProfile:
    """Flat-top window of length M with L/2-sample RC tapers on each edge.

    L = 0 yields the all-ones (rectangular) window.  The returned profile
    is tiled for K = 1; use tile_window for larger spreading factors.
    """
    if L % 2 != 0 or not 0 <= L <= M:
        raise DimensionError(f"L must be even with 0 <= L <= M, got L={L}, M={M}")
    if L == 0:
        per_symbol = np.ones(M)
    else:
        q = np.arange(L // 2)
        rise = raised_cosine_pulse(-1.0 + q * (2.0 / L), beta)
        per_symbol = np.concatenate([rise, np.ones(M - L), rise[::-1]])
    return WindowProfile(per_symbol=per_symbol, tiled=per_symbol,
                         mean=float(per_symbol.mean()))


def tile_window(profile: WindowProfile, K: int) -> WindowProfile:
    """Repeat the per-symbol window K times (length K*M tiling)."""
    if K < 1:
        raise DimensionError(f"K must be >= 1, got {K}")
    return WindowProfile(per_symbol=profile.per_symbol,
                         tiled=np.tile(profile.per_symbol, K),
                         mean=profile.mean)


def window_mean(profile: WindowProfile) -> float:
    """Average of the per-symbol window, the desired-signal amplitude gain."""
    return float(profile.per_symbol.mean())


def build_wofdm_window(w_len: int) -> WofdmWindow:
    """Raised-cosine overlap-add tapers of length w_len (empty if 0)."""
    if w_len < 0:
        raise DimensionError(f"w_len must be >= 0, got {w_len}")
    q = np.arange(w_len)
    rise = 0.5 * (1.0 - np.cos(np.pi * (q + 0.5) / w_len)) if w_len else np.zeros(0)
    return WofdmWindow(rise=rise, fall=rise[::-1].copy())
