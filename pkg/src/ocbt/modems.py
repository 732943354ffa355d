"""QAM mapping and the OCBT / CP-OFDM / W-OFDM transmit-receive chains.

Bit streams are 1-D arrays of 0/1; a symbol grid is an (M, N) complex
array filled column by column (column n = multicarrier symbol n).  All
constellations are Gray-mapped squares normalized to unit average power;
QPSK maps bit pair 00 to (+1+1j)/sqrt(2), with the first bit steering
the real axis and 0 meaning the positive side.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ocbt.codes import despread, spread, walsh_matrix
from ocbt.core import DimensionError, SystemParams
from ocbt.transforms import dft, idft
from ocbt.windows import (WindowProfile, WofdmWindow, build_ocbt_window,
                          build_wofdm_window, tile_window)

OCBT = "OCBT"
CP_OFDM = "CP-OFDM"
W_OFDM = "W-OFDM"


class FramingError(ValueError):
    """Bit or symbol payload does not fill whole symbols/blocks."""


@lru_cache(maxsize=None)
def _axis_levels(bits_per_axis: int) -> np.ndarray:
    """Amplitude level for each Gray-coded axis label (index = bit label)."""
    n = 2 ** bits_per_axis
    levels = np.empty(n)
    for i in range(n):
        levels[i ^ (i >> 1)] = n - 1 - 2 * i
    return levels


@lru_cache(maxsize=None)
def _qam_scale(mod_order: int) -> float:
    n = 2 ** (mod_order // 2)
    return float(np.sqrt(2.0 * (n * n - 1) / 3.0))


def _check_mod_order(mod_order: int) -> None:
    if mod_order < 2 or mod_order % 2 != 0:
        raise DimensionError(f"mod_order must be a positive even bit count, got {mod_order}")


def qam_map(bits: np.ndarray, mod_order: int) -> np.ndarray:
    """Map a 0/1 stream onto unit-power Gray QAM symbols.

    The first mod_order/2 bits of each group select the real axis, the
    rest the imaginary axis.
    """
    _check_mod_order(mod_order)
    bits = np.asarray(bits)
    if bits.size % mod_order != 0:
        raise FramingError(f"bit count {bits.size} not divisible by mod_order {mod_order}")
    half = mod_order // 2
    groups = bits.reshape(-1, mod_order)
    weights = 1 << np.arange(half - 1, -1, -1)
    levels = _axis_levels(half)
    i_lab = groups[:, :half] @ weights
    q_lab = groups[:, half:] @ weights
    return (levels[i_lab] + 1j * levels[q_lab]) / _qam_scale(mod_order)


def qam_demap(symbols: np.ndarray, mod_order: int) -> np.ndarray:
    """Hard-decision nearest-neighbor demapping (Gray inverse)."""
    _check_mod_order(mod_order)
    half = mod_order // 2
    n = 2 ** half
    pts = np.asarray(symbols).ravel() * _qam_scale(mod_order)
    bits = np.empty((pts.size, mod_order), dtype=np.uint8)
    # nearest level per axis: round onto the odd-integer lattice and clip
    labels = _labels_for_levels(half)
    for offset, axis in ((0, pts.real), (half, pts.imag)):
        idx = np.clip(np.round((axis + (n - 1)) / 2.0).astype(int), 0, n - 1)
        lab = labels[idx]
        for b in range(half):
            bits[:, offset + b] = (lab >> (half - 1 - b)) & 1
    return bits.reshape(-1)


@lru_cache(maxsize=None)
def _labels_for_levels(bits_per_axis: int) -> np.ndarray:
    """Gray label for each level index, levels ordered ascending."""
    n = 2 ** bits_per_axis
    labels = np.empty(n, dtype=np.int64)
    levels = _axis_levels(bits_per_axis)
    order = np.argsort(levels)
    for pos, lab in enumerate(order):
        labels[pos] = lab
    return labels


def frame_grid(symbols: np.ndarray, M: int, N: int) -> np.ndarray:
    """Reshape M*N serial symbols into an (M, N) grid, column per symbol."""
    symbols = np.asarray(symbols)
    if symbols.size != M * N:
        raise FramingError(f"expected {M * N} symbols for an {M}x{N} grid, got {symbols.size}")
    return symbols.reshape(M, N, order="F")


def bits_to_grid(bits: np.ndarray, params: SystemParams) -> np.ndarray:
    return frame_grid(qam_map(bits, params.mod_order), params.M, params.N)


def grid_to_bits(grid: np.ndarray, mod_order: int) -> np.ndarray:
    return qam_demap(np.asarray(grid).reshape(-1, order="F"), mod_order)


@dataclass(frozen=True)
class ModulationScheme:
    """One transmit/receive chain configuration.

    ``codes``/``code_rows`` are present only for OCBT and ``window`` is
    the tiled OCBT profile or the W-OFDM roll-off pair.
    """

    kind: str
    params: SystemParams
    codes: np.ndarray | None = None
    window: WindowProfile | WofdmWindow | None = None
    code_rows: tuple | None = None

    def __post_init__(self):
        if self.kind == OCBT:
            if self.codes is None or not isinstance(self.window, WindowProfile):
                raise DimensionError("OCBT scheme needs codes and a WindowProfile")
            if self.code_rows is None or len(self.code_rows) != self.params.N:
                raise DimensionError("OCBT scheme needs one code row per symbol")
        elif self.kind == CP_OFDM:
            if self.codes is not None or self.window is not None:
                raise DimensionError("CP-OFDM scheme carries no codes or window")
        elif self.kind == W_OFDM:
            if not isinstance(self.window, WofdmWindow) or self.codes is not None:
                raise DimensionError("W-OFDM scheme needs a WofdmWindow and no codes")
        else:
            raise DimensionError(f"unknown modulation kind {self.kind!r}")


def make_scheme(kind: str, params: SystemParams,
                code_rows: tuple | None = None,
                rectangular_window: bool = False) -> ModulationScheme:
    """Build a scheme for one of the three systems.

    ``code_rows`` selects which Walsh rows carry the N symbols (defaults
    to rows 1..N); any subset works since all rows are orthogonal.
    ``rectangular_window`` forces the all-ones OCBT window.
    """
    kind = kind.upper()
    if kind == OCBT:
        rows = tuple(code_rows) if code_rows is not None else tuple(range(1, params.N + 1))
        if len(set(rows)) != params.N or not all(1 <= r <= params.K for r in rows):
            raise DimensionError(f"code_rows must be {params.N} distinct rows in [1, K]")
        full = walsh_matrix(params.K)
        # reorder so the selected rows sit at positions 1..N; a row
        # permutation keeps the set orthogonal
        rest = [r for r in range(1, params.K + 1) if r not in rows]
        codes = full[[r - 1 for r in (*rows, *rest)], :]
        L = 0 if rectangular_window else params.L
        window = tile_window(build_ocbt_window(params.M, L, params.beta), params.K)
        return ModulationScheme(OCBT, params, codes=codes, window=window,
                                code_rows=tuple(range(1, params.N + 1)))
    if kind == CP_OFDM:
        return ModulationScheme(CP_OFDM, params)
    if kind == W_OFDM:
        return ModulationScheme(W_OFDM, params, window=build_wofdm_window(params.w_len))
    raise DimensionError(f"unknown modulation kind {kind!r}")


def _check_grid(grid: np.ndarray, params: SystemParams) -> np.ndarray:
    grid = np.asarray(grid)
    if grid.shape != (params.M, params.N):
        raise DimensionError(
            f"grid shape {grid.shape} does not match (M, N) = ({params.M}, {params.N})")
    return grid


def ocbt_modulate(grid: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    """Produce one K*M-sample block from an (M, N) grid.

    Each symbol is IDFT-transformed and windowed once, then its K
    repeated copies are added or subtracted per the symbol's code row;
    the block carries the 1/sqrt(N) power normalization and no tail.
    """
    p = scheme.params
    grid = _check_grid(grid, p)
    time = np.fft.ifft(grid, axis=0, norm="ortho")
    windowed = time * scheme.window.per_symbol[:, None]
    signs = scheme.codes[:p.N, :]                      # (N, K)
    block = np.einsum("nk,mn->km", signs, windowed)    # (K, M)
    return block.reshape(p.K * p.M) / np.sqrt(p.N)


def ocbt_demodulate(eq_block: np.ndarray, scheme: ModulationScheme, l: int) -> np.ndarray:
    """Recover symbol l (1-based) from an equalized K*M block."""
    p = scheme.params
    eq_block = np.asarray(eq_block)
    if eq_block.shape != (p.K * p.M,):
        raise DimensionError(f"block length {eq_block.size} != K*M = {p.K * p.M}")
    return dft(despread(eq_block, scheme.codes, l, p.N))


def cpofdm_modulate(grid: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    """Concatenate N IDFT symbols, each prefixed with its last cp_len samples."""
    p = scheme.params
    grid = _check_grid(grid, p)
    time = np.fft.ifft(grid, axis=0, norm="ortho")
    ext = np.concatenate([time[p.M - p.cp_len:, :], time], axis=0)
    return ext.T.reshape(p.N * (p.M + p.cp_len))


def cpofdm_demodulate(rx_symbol: np.ndarray, scheme: ModulationScheme,
                      per_bin_eq: np.ndarray) -> np.ndarray:
    """Drop the CP, DFT, and apply the per-bin equalizer to one symbol."""
    p = scheme.params
    rx_symbol = np.asarray(rx_symbol)
    if rx_symbol.shape != (p.M + p.cp_len,):
        raise DimensionError(f"symbol length {rx_symbol.size} != M + cp_len")
    return np.asarray(per_bin_eq) * dft(rx_symbol[p.cp_len:])


def wofdm_block_len(params: SystemParams) -> int:
    ext = params.M + params.cpw_len + params.cs_len
    return params.N * (ext - params.w_len) + params.w_len


def wofdm_modulate(grid: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    """Extended-CP/CS symbols with tapered edges, overlap-added over w_len.

    Each symbol is cyclically extended by cpw_len in front and cs_len
    behind, the first and last w_len samples are shaped by the rise and
    fall tapers, and consecutive symbols cross-fade over w_len samples.
    """
    p = scheme.params
    grid = _check_grid(grid, p)
    w = p.w_len
    time = np.fft.ifft(grid, axis=0, norm="ortho")
    ext = np.concatenate([time[p.M - p.cpw_len:, :], time, time[:p.cs_len, :]], axis=0)
    if w:
        ext[:w, :] *= scheme.window.rise[:, None]
        ext[-w:, :] *= scheme.window.fall[:, None]
    ext_len = ext.shape[0]
    out = np.zeros(wofdm_block_len(p), dtype=complex)
    stride = ext_len - w
    for n in range(p.N):
        out[n * stride:n * stride + ext_len] += ext[:, n]
    return out


def wofdm_demodulate(rx: np.ndarray, scheme: ModulationScheme,
                     per_bin_eq: np.ndarray) -> np.ndarray:
    """Equalized grid from a W-OFDM block; each symbol's flat M-sample core
    sits cpw_len samples past the symbol start."""
    p = scheme.params
    rx = np.asarray(rx)
    if rx.shape != (wofdm_block_len(p),):
        raise DimensionError(f"block length {rx.size} != {wofdm_block_len(p)}")
    stride = p.M + p.cpw_len + p.cs_len - p.w_len
    grid = np.empty((p.M, p.N), dtype=complex)
    eq = np.asarray(per_bin_eq)
    for n in range(p.N):
        core = rx[n * stride + p.cpw_len:n * stride + p.cpw_len + p.M]
        grid[:, n] = eq * dft(core)
    return grid


def modulate(grid: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    """Dispatch to the scheme's transmit chain."""
    if scheme.kind == OCBT:
        return ocbt_modulate(grid, scheme)
    if scheme.kind == CP_OFDM:
        return cpofdm_modulate(grid, scheme)
    return wofdm_modulate(grid, scheme)


def block_len(scheme: ModulationScheme) -> int:
    """Samples per transmitted block for the scheme."""
    p = scheme.params
    if scheme.kind == OCBT:
        return p.K * p.M
    if scheme.kind == CP_OFDM:
        return p.N * (p.M + p.cp_len)
    return wofdm_block_len(p)
