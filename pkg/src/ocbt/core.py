"""Configuration, validation, and deterministic random streams.

Conventions used throughout the package:

* the sample period is 1, so every length is a sample count and the
  symbol period is ``M`` samples; ``sample_rate`` only matters when
  mapping physical channel delays onto sample indices,
* a sample buffer is a 1-D ``complex128`` ndarray,
* a symbol grid is an ``(M, N)`` ``complex128`` ndarray whose column n
  holds the data vector of multicarrier symbol n.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass

import numpy as np


class DimensionError(ValueError):
    """A size or parameter constraint was violated."""


class ConfigError(ValueError):
    """A config file is malformed or names an unknown field."""


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SystemParams:
    """Scalar configuration shared by every module.

    W-OFDM guard lengths default to the derivation used for all reported
    comparisons: cpw_len = 3*cp_len/2, cs_len = cpw_len/2 and
    w_len = cpw_len/3.
    """

    M: int = 1024            # subcarriers, samples per sub-block
    K: int = 4               # spreading/overlap factor, Walsh code length
    N: int = 4               # multicarrier symbols per block, N <= K
    cp_len: int = 256        # CP-OFDM cyclic prefix
    cpw_len: int = 384       # W-OFDM extended prefix
    cs_len: int = 192        # W-OFDM cyclic suffix
    w_len: int = 128         # W-OFDM roll-off overlap
    L: int = 324             # OCBT window transition budget (total, even)
    beta: float = 0.1        # raised-cosine roll-off factor
    mod_order: int = 2       # bits per QAM symbol (2 = QPSK)
    sample_rate: float = 30.72e6
    seed: int = 1

    @classmethod
    def with_derived_guards(cls, M: int = 1024, K: int = 4, N: int = 4,
                            L: int = 324, beta: float = 0.1,
                            mod_order: int = 2,
                            sample_rate: float = 30.72e6,
                            seed: int = 1) -> "SystemParams":
        """Build params with cp_len = M/4 and W-OFDM guards derived from it."""
        cp = M // 4
        cpw = 3 * cp // 2
        return validate_params(cls(
            M=M, K=K, N=N, cp_len=cp, cpw_len=cpw, cs_len=cpw // 2,
            w_len=cpw // 3, L=L, beta=beta, mod_order=mod_order,
            sample_rate=sample_rate, seed=seed))


_FIELDS = {f.name for f in dataclasses.fields(SystemParams)}
_INT_FIELDS = {"M", "K", "N", "cp_len", "cpw_len", "cs_len", "w_len", "L",
               "mod_order", "seed"}


def validate_params(raw: SystemParams) -> SystemParams:
    """Return ``raw`` unchanged if every invariant holds.

    Raises DimensionError naming the violated constraint otherwise.
    """
    p = raw
    for name in _INT_FIELDS:
        v = getattr(p, name)
        if not isinstance(v, (int, np.integer)) or isinstance(v, bool):
            raise DimensionError(f"{name} must be an integer, got {v!r}")
    if p.M < 2 or not is_power_of_two(p.M):
        raise DimensionError(f"M must be a power of two >= 2, got {p.M}")
    if not is_power_of_two(p.K):
        raise DimensionError(f"K must be a power of two >= 1, got {p.K}")
    if not 1 <= p.N <= p.K:
        raise DimensionError(f"N must satisfy 1 <= N <= K, got N={p.N}, K={p.K}")
    if p.L % 2 != 0 or not 0 <= p.L <= p.M:
        raise DimensionError(f"L must be even with 0 <= L <= M, got L={p.L}")
    if not 0.0 <= p.beta <= 1.0:
        raise DimensionError(f"beta must be in [0, 1], got {p.beta}")
    if p.cp_len < 0 or p.cp_len > p.M:
        raise DimensionError(f"cp_len must be in [0, M], got {p.cp_len}")
    if p.cpw_len < 0 or p.cs_len < 0 or p.w_len < 0:
        raise DimensionError("cpw_len, cs_len and w_len must be nonnegative")
    if p.cpw_len > p.M or p.cs_len > p.M:
        raise DimensionError("cpw_len and cs_len must not exceed M")
    if p.w_len > p.cpw_len or p.w_len > p.cs_len + p.M:
        raise DimensionError(f"w_len={p.w_len} exceeds the available roll-off room")
    if p.mod_order < 2 or p.mod_order % 2 != 0:
        raise DimensionError(f"mod_order must be a positive even bit count, got {p.mod_order}")
    if not p.sample_rate > 0:
        raise DimensionError(f"sample_rate must be positive, got {p.sample_rate}")
    return p


def params_to_dict(params: SystemParams) -> dict:
    return dataclasses.asdict(params)


def params_from_dict(data: dict) -> SystemParams:
    """Build and validate SystemParams from a mapping; unknown keys rejected."""
    unknown = set(data) - _FIELDS
    if unknown:
        raise ConfigError(f"unknown SystemParams field(s): {sorted(unknown)}")
    try:
        params = SystemParams(**data)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    return validate_params(params)


def load_params(path) -> SystemParams:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("params file must hold a JSON object")
    return params_from_dict(data)


def save_params(params: SystemParams, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(params_to_dict(params), fh, indent=2, sort_keys=True)
        fh.write("\n")


def derive_stream(seed: int, label: str) -> np.random.Generator:
    """Deterministic random stream keyed by (seed, label).

    Identical (seed, label) pairs yield identical generators; distinct
    labels or seeds give statistically independent streams.  Streams are
    single-owner: hand one to each Monte Carlo trial, never share.
    """
    digest = hashlib.blake2s(label.encode("utf-8"), digest_size=8).digest()
    key = int.from_bytes(digest, "little")
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1), spawn_key=(key,))
    return np.random.Generator(np.random.PCG64(ss))
