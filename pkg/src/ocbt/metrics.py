"""Quantitative evaluations: BER, PSD, time efficiency, complexity counts,
and the per-subcarrier interference/SINR decomposition.

The decomposition works by controlled re-synthesis on the linear chain:
desired gain and inter-carrier leakage come from probing one grid entry
at a time (exact, no sampling error), while previous-block spill and
noise are averaged over random draws.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.signal import welch as _scipy_welch

from ocbt.channel import add_awgn, fir_convolve, veha_realization, vehicular_a_profile
from ocbt.codes import despread
from ocbt.core import DimensionError, SystemParams, derive_stream
from ocbt.equalizer import EqualizerSpec, equalize_block, equalizer_gains, freq_response
from ocbt.modems import (CP_OFDM, OCBT, W_OFDM, ModulationScheme, bits_to_grid,
                         block_len, cpofdm_demodulate, grid_to_bits, make_scheme,
                         modulate, ocbt_demodulate, wofdm_demodulate)

SYSTEMS = (OCBT, CP_OFDM, "FBMC", W_OFDM)


class UnknownSystem(ValueError):
    """System name outside the supported set."""


def canonical_system(name: str) -> str:
    up = name.upper()
    if up == "OFDM":        # the plain-OFDM row of the complexity table
        return CP_OFDM
    if up in SYSTEMS:
        return up
    raise UnknownSystem(f"unknown system {name!r}")


def ber(tx_bits: np.ndarray, rx_bits: np.ndarray) -> float:
    """Fraction of mismatched positions between two equal-length bit streams."""
    tx = np.asarray(tx_bits)
    rx = np.asarray(rx_bits)
    if tx.shape != rx.shape:
        raise DimensionError(f"bit stream lengths differ: {tx.shape} vs {rx.shape}")
    return float(np.count_nonzero(tx != rx) / tx.size)


# ---------------------------------------------------------------------------
# power spectral density

@dataclass(frozen=True)
class PsdEstimate:
    """Welch estimate over normalized frequency (cycles/sample).

    power_db is peak-normalized to 0 dB; power_linear keeps the raw
    density so that sum(power_linear) * bin_width equals the mean signal
    power.
    """

    freqs: np.ndarray
    power_db: np.ndarray
    power_linear: np.ndarray
    bin_width: float


def psd_welch(signal: np.ndarray, segment: int, overlap: int) -> PsdEstimate:
    """Hann-windowed averaged periodogram of a complex baseband signal."""
    signal = np.asarray(signal)
    if segment > signal.size:
        raise DimensionError(f"segment {segment} exceeds signal length {signal.size}")
    if not 0 <= overlap < segment:
        raise DimensionError(f"overlap must satisfy 0 <= overlap < segment, got {overlap}")
    freqs, pxx = _scipy_welch(signal, fs=1.0, window="hann", nperseg=segment,
                              noverlap=overlap, detrend=False,
                              return_onesided=False, scaling="density")
    freqs = np.fft.fftshift(freqs)
    pxx = np.fft.fftshift(pxx)
    floor = pxx.max() * 1e-30
    power_db = 10.0 * np.log10(np.maximum(pxx, floor) / pxx.max())
    return PsdEstimate(freqs=freqs, power_db=power_db, power_linear=pxx,
                       bin_width=1.0 / segment)


def active_subcarrier_bins(M: int, n_active: int) -> np.ndarray:
    """Bins of a centered band of n_active subcarriers (DC included)."""
    if not 0 < n_active <= M:
        raise DimensionError(f"n_active must be in (0, M], got {n_active}")
    signed = np.arange(-(n_active // 2), n_active - n_active // 2)
    return np.mod(signed, M)


def generate_stream(scheme: ModulationScheme, n_blocks: int, n_active: int,
                    rng: np.random.Generator) -> np.ndarray:
    """Back-to-back transmitted blocks with a centered active band loaded
    with random QPSK data (unused subcarriers left empty)."""
    p = scheme.params
    bins = active_subcarrier_bins(p.M, n_active)
    chunks = []
    for _ in range(n_blocks):
        grid = np.zeros((p.M, p.N), dtype=complex)
        data = rng.integers(0, 4, size=(bins.size, p.N))
        grid[bins, :] = np.exp(1j * (np.pi / 4 + np.pi / 2 * data))
        chunks.append(modulate(grid, scheme))
    return np.concatenate(chunks)


# ---------------------------------------------------------------------------
# time efficiency and complexity

@dataclass(frozen=True)
class EfficiencyReport:
    """Information/total sample ratio r_T = L_I / (L_I + L_T), exact."""

    system: str
    N: int
    L_I: int
    L_T: int
    r_T: Fraction


def time_efficiency(system: str, M: int, N: int, K: int = 0, cp_len: int = 0,
                    cpw_len: int = 0, cs_len: int = 0, w_len: int = 0) -> EfficiencyReport:
    """Tail overhead per burst of N symbols, in exact rational arithmetic.

    OCBT transmits no tail; CP-OFDM pays cp_len per symbol; FBMC pays a
    fixed M/2 + (K-1)*M transition regardless of N; W-OFDM pays
    (cpw_len + cs_len - w_len) per symbol plus one trailing w_len.
    """
    name = canonical_system(system)
    if M < 2 or N < 1:
        raise DimensionError(f"need M >= 2 and N >= 1, got M={M}, N={N}")
    L_I = M * N
    if name == OCBT:
        L_T = 0
    elif name == CP_OFDM:
        L_T = cp_len * N
    elif name == "FBMC":
        if K < 1:
            raise DimensionError("FBMC efficiency needs the overlap factor K")
        L_T = M // 2 + (K - 1) * M
    else:
        L_T = (cpw_len + cs_len - w_len) * N + w_len
    return EfficiencyReport(system=name, N=N, L_I=L_I, L_T=L_T,
                            r_T=Fraction(L_I, L_I + L_T))


@dataclass(frozen=True)
class ComplexityReport:
    """Complex multiplications needed to generate one symbol."""

    system: str
    cm_per_symbol: int


def complexity_cm(system: str, M: int, K: int = 0, cp_len: int = 0,
                  cpw_len: int = 0, cs_len: int = 0) -> ComplexityReport:
    """Per-symbol complex-multiplication counts of the four systems.

    All share the (M/2)*log2(M) transform cost; FBMC adds (K+1)*M for
    the polyphase filtering, W-OFDM adds M + cpw_len + cs_len for the
    windowing of the extended symbol, and the flat-top block window
    costs OCBT just M extra (one windowing pass per symbol).
    """
    name = canonical_system(system)
    if M < 2 or M & (M - 1):
        raise DimensionError(f"M must be a power of two >= 2, got {M}")
    fft_cost = (M // 2) * (M.bit_length() - 1)
    if name == CP_OFDM:
        extra = 0
    elif name == "FBMC":
        if K < 1:
            raise DimensionError("FBMC complexity needs the overlap factor K")
        extra = (K + 1) * M
    elif name == W_OFDM:
        extra = M + cpw_len + cs_len
    else:
        extra = M
    return ComplexityReport(system="OFDM" if system.upper() == "OFDM" else name,
                            cm_per_symbol=fft_cost + extra)


# ---------------------------------------------------------------------------
# interference decomposition

@dataclass(frozen=True)
class InterferenceBreakdown:
    """Per-subcarrier average powers at the de-spread output of one symbol."""

    desired_power: float
    ici_power: float
    ibi_power: float
    noise_power: float
    sinr_db: float
    desired_gain: np.ndarray   # per-subcarrier complex amplitude gain


def _receive(block: np.ndarray, scheme: ModulationScheme, taps, eq_spec,
             symbol_index: int) -> np.ndarray:
    if taps is not None:
        block = equalize_block(block, taps, eq_spec)
    return ocbt_demodulate(block, scheme, symbol_index)


def _response_matrix(scheme: ModulationScheme, taps, eq_spec,
                     symbol_index: int) -> np.ndarray:
    """Exact linear response of the recovered symbol to every grid entry,
    as an (M, M*N) matrix: column (n-1)*M + m is the response to a unit
    symbol on subcarrier m of multicarrier symbol n."""
    p = scheme.params
    M, N, K = p.M, p.N, p.K
    KM = K * M
    time = np.fft.ifft(np.eye(M), axis=0, norm="ortho")
    windowed = time * scheme.window.per_symbol[:, None]
    if taps is not None:
        taps = np.asarray(taps)
        nfft = 1 << (KM + taps.size - 1).bit_length()
        h_f = np.fft.fft(taps, nfft)
        gains = equalizer_gains(freq_response(taps, KM), eq_spec)
    row = scheme.codes[:N, :].astype(float)
    out = np.empty((M, M * N), dtype=complex)
    chunk = min(M, 256)            # probe columns per batch, caps memory
    for n in range(N):
        tx = np.kron(row[n][:, None], windowed) / np.sqrt(N)   # (KM, M probes)
        for lo in range(0, M, chunk):
            cols = tx[:, lo:lo + chunk]
            if taps is not None:
                spec = np.fft.fft(cols, n=nfft, axis=0)
                rx = np.fft.ifft(spec * h_f[:, None], axis=0)[:KM, :]
                rx = np.fft.ifft(gains[:, None]
                                 * np.fft.fft(rx, axis=0, norm="ortho"),
                                 axis=0, norm="ortho")
            else:
                rx = cols
            folded = np.einsum("k,kmp->mp", row[symbol_index - 1],
                               rx.reshape(K, M, -1)) * (np.sqrt(N) / K)
            out[:, n * M + lo:n * M + lo + folded.shape[1]] = np.fft.fft(
                folded, axis=0, norm="ortho")
    return out


def interference_decomposition(scheme: ModulationScheme, taps=None,
                               eq_spec: EqualizerSpec | None = None,
                               noise_variance: float = 0.0,
                               rng: np.random.Generator | None = None,
                               symbol_index: int = 1,
                               noise_draws: int = 128,
                               ibi_draws: int = 64) -> InterferenceBreakdown:
    """Decompose the de-spread output of symbol ``symbol_index``.

    Desired gain and leakage between grid entries are evaluated exactly
    by single-entry probing; previous-block spill and noise powers are
    Monte Carlo averages over ``rng`` draws.  ``taps=None`` means an
    ideal channel (no equalizer in the path).
    """
    if scheme.kind != OCBT:
        raise UnknownSystem("interference decomposition is defined for the OCBT chain")
    p = scheme.params
    M = p.M
    resp = _response_matrix(scheme, taps, eq_spec, symbol_index)
    gain = resp[np.arange(M), (symbol_index - 1) * M + np.arange(M)]
    desired_power = float(np.mean(np.abs(gain) ** 2))
    total_leak = np.sum(np.abs(resp) ** 2, axis=1) - np.abs(gain) ** 2
    ici_power = float(np.mean(total_leak))

    ibi_power = 0.0
    if taps is not None and ibi_draws > 0:
        if rng is None:
            raise DimensionError("ibi averaging needs an rng")
        KM = p.K * p.M
        acc = 0.0
        for _ in range(ibi_draws):
            data = rng.integers(0, 4, size=(p.M, p.N))
            prev = modulate(np.exp(1j * (np.pi / 4 + np.pi / 2 * data)), scheme)
            tail = fir_convolve(prev, taps)[KM:]
            leak = np.zeros(KM, dtype=complex)
            leak[:tail.size] = tail
            est = _receive(leak, scheme, taps, eq_spec, symbol_index)
            acc += float(np.mean(np.abs(est) ** 2))
        ibi_power = acc / ibi_draws

    noise_power = 0.0
    if noise_variance > 0 and noise_draws > 0:
        if rng is None:
            raise DimensionError("noise averaging needs an rng")
        KM = p.K * p.M
        acc = 0.0
        for _ in range(noise_draws):
            eta = add_awgn(np.zeros(KM, dtype=complex), 1.0, rng)
            est = _receive(eta, scheme, taps, eq_spec, symbol_index)
            acc += float(np.mean(np.abs(est) ** 2))
        noise_power = noise_variance * acc / noise_draws

    denom = ici_power + ibi_power + noise_power
    sinr_db = math.inf if denom == 0 else 10.0 * math.log10(desired_power / denom)
    return InterferenceBreakdown(desired_power=desired_power, ici_power=ici_power,
                                 ibi_power=ibi_power, noise_power=noise_power,
                                 sinr_db=sinr_db, desired_gain=gain)


def ibi_bound_check(scheme: ModulationScheme, leak: np.ndarray,
                    l: int) -> tuple[float, float]:
    """Power of the de-spread previous-block spill versus N/K^2 of its
    total power.

    The bound is exact (equality) whenever the spill occupies a single
    sub-block, which is the physical situation for delay spreads below
    one symbol period, and it holds on average across code rows; an
    arbitrary spread-out vector can exceed it by at most a factor K.
    """
    p = scheme.params
    leak = np.asarray(leak)
    if leak.shape != (p.K * p.M,):
        raise DimensionError(f"leak length {leak.size} != K*M = {p.K * p.M}")
    d = despread(leak, scheme.codes, l, p.N)
    measured = float(np.vdot(d, d).real)
    bound = float(p.N / p.K ** 2 * np.vdot(leak, leak).real)
    return measured, bound


# ---------------------------------------------------------------------------
# BER experiment

@dataclass(frozen=True)
class BerConfig:
    """One BER-versus-SNR sweep.

    snr_grid_db is Eb/N0 in dB: with unit-power constellations the
    per-sample noise variance is 1 / (mod_order * 10^(snr/10)).  Trials
    run in fixed-size batches so results are byte-identical for any
    worker count; each trial streams ``blocks_per_trial`` blocks with
    one fresh channel realization per block and carries the convolution
    tail across block boundaries (one warm-up block is not counted).
    """

    params: SystemParams
    systems: tuple
    snr_grid_db: tuple
    channel: str = "veha"            # "awgn" | "veha" | "fir"
    fir_taps: tuple | None = None
    eq_kind: str = "mmse"
    target_errors: int = 200
    max_bits: int = 10_000_000
    blocks_per_trial: int = 16
    batch_trials: int = 8
    workers: int = 1
    seed: int | None = None

    def resolved_seed(self) -> int:
        return self.params.seed if self.seed is None else self.seed


@dataclass(frozen=True)
class BerPoint:
    system: str
    snr_db: float
    bits: int
    errors: int
    ber: float


def _noise_variance(snr_db: float, mod_order: int) -> float:
    return 1.0 / (mod_order * 10.0 ** (snr_db / 10.0))


def _draw_taps(cfg: BerConfig, rng: np.random.Generator, profile) -> np.ndarray:
    if cfg.channel == "awgn":
        return np.ones(1, dtype=complex)
    if cfg.channel == "fir":
        return np.asarray(cfg.fir_taps, dtype=complex)
    return veha_realization(profile, rng)


def _receive_block(rx: np.ndarray, scheme: ModulationScheme, taps: np.ndarray,
                   eq_spec: EqualizerSpec) -> np.ndarray:
    p = scheme.params
    if scheme.kind == OCBT:
        eq = equalize_block(rx, taps, eq_spec)
        est = np.empty((p.M, p.N), dtype=complex)
        for l in range(1, p.N + 1):
            est[:, l - 1] = ocbt_demodulate(eq, scheme, l)
        return est
    gains = equalizer_gains(freq_response(taps, p.M), eq_spec)
    if scheme.kind == CP_OFDM:
        step = p.M + p.cp_len
        est = np.empty((p.M, p.N), dtype=complex)
        for n in range(p.N):
            est[:, n] = cpofdm_demodulate(rx[n * step:(n + 1) * step], scheme, gains)
        return est
    return wofdm_demodulate(rx, scheme, gains)


def _ber_trial(cfg: BerConfig, system: str, snr_db: float, trial: int) -> tuple[int, int]:
    """Simulate one trial stream; returns (bit errors, bits counted)."""
    p = cfg.params
    rng = derive_stream(cfg.resolved_seed(), f"ber/{system}/{snr_db:.6g}/trial{trial}")
    noise_var = _noise_variance(snr_db, p.mod_order)
    scheme = make_scheme(system, p)
    eq_spec = EqualizerSpec(cfg.eq_kind, noise_var)
    profile = vehicular_a_profile(p.sample_rate) if cfg.channel == "veha" else None
    n_samples = block_len(scheme)
    bits_per_block = p.M * p.N * p.mod_order
    errors = 0
    counted = 0
    carry = np.zeros(0, dtype=complex)
    for block in range(cfg.blocks_per_trial + 1):
        taps = _draw_taps(cfg, rng, profile)
        tx_bits = rng.integers(0, 2, size=bits_per_block)
        s = modulate(bits_to_grid(tx_bits, p), scheme)
        y_full = fir_convolve(s, taps)
        rx = y_full[:n_samples]
        if carry.size:
            rx = rx.copy()
            rx[:carry.size] += carry
        carry = y_full[n_samples:]
        if block == 0:
            continue    # warm-up: only its spill matters
        rx = add_awgn(rx, noise_var, rng)
        est = _receive_block(rx, scheme, taps, eq_spec)
        rx_bits = grid_to_bits(est, p.mod_order)
        errors += int(np.count_nonzero(rx_bits != tx_bits))
        counted += bits_per_block
    return errors, counted


def _run_point(cfg: BerConfig, system: str, snr_db: float,
               executor: ProcessPoolExecutor | None) -> BerPoint:
    p = cfg.params
    bits_per_trial = cfg.blocks_per_trial * p.M * p.N * p.mod_order
    max_trials = max(1, math.ceil(cfg.max_bits / bits_per_trial))
    errors = 0
    bits = 0
    trial = 0
    while trial < max_trials and (errors < cfg.target_errors and bits < cfg.max_bits):
        batch = range(trial, min(trial + cfg.batch_trials, max_trials))
        if executor is None:
            results = [_ber_trial(cfg, system, snr_db, t) for t in batch]
        else:
            results = list(executor.map(_ber_trial, [cfg] * len(batch),
                                        [system] * len(batch),
                                        [snr_db] * len(batch), batch))
        for e, b in results:     # fixed order keeps any worker count identical
            errors += e
            bits += b
        trial = batch.stop
    return BerPoint(system=system, snr_db=float(snr_db), bits=bits,
                    errors=errors, ber=errors / bits if bits else 0.0)


def run_ber_experiment(cfg: BerConfig) -> list[BerPoint]:
    """BER over the SNR grid for every configured system.

    Each point accumulates whole trial batches until it has seen
    target_errors bit errors or max_bits bits; identical configs and
    seeds reproduce identical tables for any worker count.
    """
    if cfg.channel not in ("awgn", "veha", "fir"):
        raise UnknownSystem(f"unknown channel kind {cfg.channel!r}")
    if cfg.channel == "fir" and not cfg.fir_taps:
        raise DimensionError("channel 'fir' needs fir_taps")
    systems = [canonical_system(s) for s in cfg.systems]
    rows = []
    executor = None
    try:
        if cfg.workers > 1:
            executor = ProcessPoolExecutor(max_workers=cfg.workers)
        for system in systems:
            for snr_db in cfg.snr_grid_db:
                rows.append(_run_point(cfg, system, float(snr_db), executor))
    finally:
        if executor is not None:
            executor.shutdown()
    return rows
