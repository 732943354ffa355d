"""Baseband simulation of orthogonal code-based block transmission (OCBT).

OCBT packs N QAM multicarrier symbols into one K*M-sample block: each
M-point IDFT output is repeated K times, sign-spread with a Walsh code
row, summed, and edge-windowed.  The block needs no cyclic prefix; the
receiver equalizes the whole block in the frequency domain, de-spreads
with the matching code row, and applies the M-point DFT.

The package also carries CP-OFDM and windowed-OFDM reference chains plus
an evaluation suite (BER, PSD, time efficiency, complexity counts, and
an interference/SINR decomposition) driven by the ``ocbt`` CLI.
"""

from ocbt.core import SystemParams, validate_params, derive_stream

__all__ = ["SystemParams", "validate_params", "derive_stream"]
__version__ = "0.1.0"
