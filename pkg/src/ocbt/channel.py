"""Channel impairments: FIR multipath, AWGN, and ITU-R Vehicular-A fading.

A channel realization is a 1-D complex array of tap gains at integer
sample delays.  Fading realizations are normalized to unit total power
per draw so the configured SNR is channel-independent; fading is held
constant over one block and redrawn independently per block.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ocbt.core import ConfigError, DimensionError


def fir_convolve(signal: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Full linear convolution; output length len(signal) + G - 1."""
    return np.convolve(np.asarray(signal), np.asarray(taps))


def to_toeplitz(taps: np.ndarray, block_len: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense block decomposition of streaming convolution (teaching path).

    Returns (current, previous) with ``current`` lower-triangular
    Toeplitz (first column = zero-padded taps) and ``previous`` the
    upper-corner matrix, so that for consecutive blocks
    rx_i = current @ s_i + previous @ s_{i-1}.  Intended for small sizes
    only; the fast paths use fir_convolve.
    """
    taps = np.asarray(taps)
    G = taps.size
    if G < 1 or G > block_len:
        raise DimensionError(f"need 1 <= G <= block_len, got G={G}, block_len={block_len}")
    padded = np.zeros(2 * block_len, dtype=complex)
    padded[:G] = taps
    i = np.arange(block_len)
    delay = i[:, None] - i[None, :]
    current = np.where(delay >= 0, padded[delay], 0.0)
    prev_delay = delay + block_len       # always in [1, 2*block_len - 1]
    previous = np.where(prev_delay < G, padded[prev_delay], 0.0)
    return current, previous


def add_awgn(signal: np.ndarray, variance: float,
             rng: np.random.Generator) -> np.ndarray:
    """Add circular complex Gaussian noise of the given per-sample variance."""
    signal = np.asarray(signal)
    if variance < 0:
        raise DimensionError(f"noise variance must be >= 0, got {variance}")
    if variance == 0:
        return signal.copy()
    scale = np.sqrt(variance / 2.0)
    noise = scale * (rng.standard_normal(signal.shape)
                     + 1j * rng.standard_normal(signal.shape))
    return signal + noise


@dataclass(frozen=True)
class FadingProfile:
    """Tapped-delay-line power profile (delays in ns, mean powers in dB)."""

    delays_ns: tuple
    powers_db: tuple
    sample_rate: float

    def __post_init__(self):
        d = np.asarray(self.delays_ns, dtype=float)
        if d.size == 0 or d[0] != 0 or np.any(np.diff(d) < 0):
            raise DimensionError("delays must be nondecreasing and start at 0")
        if len(self.powers_db) != d.size:
            raise DimensionError("delays_ns and powers_db lengths differ")
        if not self.sample_rate > 0:
            raise DimensionError("sample_rate must be positive")


# ITU-R M.1225 Vehicular-A test environment, channel A
_VEHA_DELAYS_NS = (0.0, 310.0, 710.0, 1090.0, 1730.0, 2510.0)
_VEHA_POWERS_DB = (0.0, -1.0, -9.0, -10.0, -15.0, -20.0)


def vehicular_a_profile(sample_rate: float = 30.72e6) -> FadingProfile:
    return FadingProfile(_VEHA_DELAYS_NS, _VEHA_POWERS_DB, sample_rate)


def load_fading_profile(path) -> FadingProfile:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    allowed = {"delays_ns", "powers_db", "sample_rate"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown FadingProfile field(s): {sorted(unknown)}")
    missing = allowed - set(data)
    if missing:
        raise ConfigError(f"missing FadingProfile field(s): {sorted(missing)}")
    return FadingProfile(tuple(data["delays_ns"]), tuple(data["powers_db"]),
                         float(data["sample_rate"]))


def path_sample_indices(profile: FadingProfile) -> np.ndarray:
    """Nearest integer sample delay for each path."""
    d = np.asarray(profile.delays_ns, dtype=float) * 1e-9
    return np.rint(d * profile.sample_rate).astype(int)


def draw_path_gains(profile: FadingProfile, rng: np.random.Generator) -> np.ndarray:
    """Independent circular Gaussian gain per path, variance from powers_db."""
    p = 10.0 ** (np.asarray(profile.powers_db, dtype=float) / 10.0)
    scale = np.sqrt(p / 2.0)
    n = p.size
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def veha_realization(profile: FadingProfile, rng: np.random.Generator) -> np.ndarray:
    """One unit-power tapped-delay-line realization of the fading profile.

    Paths that round to the same sample index add coherently; the tap
    vector is scaled so its total power is exactly 1.
    """
    idx = path_sample_indices(profile)
    gains = draw_path_gains(profile, rng)
    taps = np.zeros(int(idx.max()) + 1, dtype=complex)
    np.add.at(taps, idx, gains)
    power = np.vdot(taps, taps).real
    return taps / np.sqrt(power)
