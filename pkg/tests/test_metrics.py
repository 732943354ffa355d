"""Evaluation suite: error counting, PSD, efficiency, complexity, SINR parts."""

from fractions import Fraction

import numpy as np
import pytest

from ocbt.channel import fir_convolve
from ocbt.core import DimensionError, SystemParams, derive_stream, validate_params
from ocbt.equalizer import EqualizerSpec
from ocbt.metrics import (BerConfig, UnknownSystem, ber, complexity_cm,
                          generate_stream, ibi_bound_check,
                          interference_decomposition, psd_welch,
                          run_ber_experiment, time_efficiency)
from ocbt.modems import make_scheme, modulate, ocbt_demodulate


def _params(M=64, K=4, N=4, L=20, **kw):
    return validate_params(SystemParams.with_derived_guards(M=M, K=K, N=N, L=L, **kw))


class TestBer:
    def test_identical_streams(self):
        bits = np.ones(100, dtype=np.uint8)
        assert ber(bits, bits) == 0.0

    def test_complemented_streams(self):
        bits = np.zeros(100, dtype=np.uint8)
        assert ber(bits, 1 - bits) == 1.0

    def test_single_flip(self):
        tx = np.zeros(1000, dtype=np.uint8)
        rx = tx.copy()
        rx[137] = 1
        assert ber(tx, rx) == pytest.approx(0.001)

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            ber(np.zeros(4), np.zeros(5))


class TestPsdWelch:
    def test_tone_peaks_at_its_bin(self):
        seg = 128
        f0 = 12 / seg
        n = np.arange(40 * seg)
        est = psd_welch(np.exp(2j * np.pi * f0 * n), seg, seg // 2)
        assert est.freqs[np.argmax(est.power_linear)] == pytest.approx(f0)
        assert est.power_db.max() == 0.0

    def test_white_noise_is_flat(self):
        rng = derive_stream(3, "psd-noise")
        seg = 128
        x = (rng.standard_normal(200 * seg) + 1j * rng.standard_normal(200 * seg))
        est = psd_welch(x, seg, seg // 2)
        spread = est.power_db.max() - est.power_db.min()
        assert spread < 3.0          # +/-1.5 dB around the mean level

    def test_parseval_consistency(self):
        rng = derive_stream(4, "psd-parseval")
        x = rng.standard_normal(65536) + 1j * rng.standard_normal(65536)
        x *= np.sqrt(0.5)
        est = psd_welch(x, 512, 256)
        total = est.power_linear.sum() * est.bin_width
        assert total == pytest.approx(np.mean(np.abs(x) ** 2), rel=0.01)

    def test_segment_too_long_rejected(self):
        with pytest.raises(DimensionError):
            psd_welch(np.zeros(64, dtype=complex), 128, 64)


class TestTimeEfficiency:
    def test_block_transmission_has_unit_efficiency(self):
        for n in (1, 7, 64):
            rep = time_efficiency("OCBT", 1024, n)
            assert rep.r_T == Fraction(1) and rep.L_T == 0

    def test_cp_ofdm_reference(self):
        rep = time_efficiency("CP-OFDM", 1024, 5, cp_len=256)
        assert rep.r_T == Fraction(4, 5)
        assert time_efficiency("OCBT", 1024, 5).r_T / rep.r_T == Fraction(5, 4)

    def test_fbmc_single_symbol(self):
        rep = time_efficiency("FBMC", 1024, 1, K=4)
        assert rep.L_T == 3584
        assert rep.r_T == Fraction(1024, 4608)
        assert Fraction(1) / rep.r_T == Fraction(9, 2)    # 4.5x advantage

    def test_wofdm_single_symbol(self):
        rep = time_efficiency("W-OFDM", 1024, 1, cpw_len=384, cs_len=192, w_len=128)
        assert rep.L_T == 576
        assert rep.r_T == Fraction(1024, 1600) == Fraction(16, 25)
        assert float(rep.r_T) == 0.64

    def test_fbmc_efficiency_increases_with_symbols(self):
        vals = [time_efficiency("FBMC", 1024, n, K=4).r_T for n in range(1, 30)]
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_unknown_system(self):
        with pytest.raises(UnknownSystem):
            time_efficiency("GFDM", 1024, 1)


class TestComplexity:
    def test_reference_counts(self):
        assert complexity_cm("OFDM", 1024).cm_per_symbol == 5120
        assert complexity_cm("FBMC", 1024, K=4).cm_per_symbol == 10240
        assert complexity_cm("W-OFDM", 1024, cpw_len=384, cs_len=192).cm_per_symbol == 6720
        assert complexity_cm("OCBT", 1024).cm_per_symbol == 6144

    def test_unknown_system(self):
        with pytest.raises(UnknownSystem):
            complexity_cm("UFMC", 1024)


class TestInterferenceDecomposition:
    def test_rectangular_window_ideal_channel(self):
        p = _params(M=32, L=0)
        scheme = make_scheme("OCBT", p)
        rng = derive_stream(5, "decomp")
        br = interference_decomposition(scheme, None, None, noise_variance=0.1,
                                        rng=rng, noise_draws=400)
        assert br.desired_power == pytest.approx(1.0, abs=1e-12)
        assert br.ici_power == pytest.approx(0.0, abs=1e-12)
        assert br.ibi_power == 0.0
        # with N == K the per-subcarrier noise power equals the input variance
        assert br.noise_power == pytest.approx(0.1, rel=0.05)
        assert br.sinr_db == pytest.approx(10.0, abs=0.3)

    def test_windowed_desired_gain_is_window_mean(self):
        p = _params(M=64, L=20)
        scheme = make_scheme("OCBT", p)
        br = interference_decomposition(scheme, None, None, 0.0, None, noise_draws=0)
        np.testing.assert_allclose(br.desired_gain,
                                   np.full(p.M, scheme.window.mean), atol=1e-10)

    def test_windowed_leakage_matches_dense_window_spectrum(self):
        """Per-subcarrier leakage power equals the window's off-diagonal
        spectral coefficients (dense formula at M = 64)."""
        p = _params(M=64, L=20)
        scheme = make_scheme("OCBT", p)
        br = interference_decomposition(scheme, None, None, 0.0, None, noise_draws=0)
        f = scheme.window.per_symbol
        M = p.M
        omega = np.exp(-2j * np.pi / M)
        idx = np.arange(M)
        coeffs = np.array([(f / M) @ omega ** (d * idx) for d in range(M)])
        want = np.sum(np.abs(coeffs) ** 2) - coeffs[0] ** 2   # all offsets but 0
        assert br.ici_power == pytest.approx(float(want.real), abs=1e-9)

    def test_multipath_adds_block_spill(self):
        p = _params(M=32, L=8)
        scheme = make_scheme("OCBT", p)
        taps = np.array([0.9, 0.3 + 0.2j, -0.1j]) / np.sqrt(0.95)
        rng = derive_stream(6, "decomp-ch")
        br = interference_decomposition(scheme, taps, EqualizerSpec("mmse", 1e-3),
                                        noise_variance=1e-3, rng=rng,
                                        noise_draws=64, ibi_draws=32)
        assert br.ibi_power > 0.0
        assert br.noise_power > 0.0
        assert np.isfinite(br.sinr_db)


class TestIbiBound:
    def test_no_spreading_reaches_bound_exactly(self):
        p = validate_params(SystemParams(M=16, K=1, N=1, cp_len=4, cpw_len=6,
                                         cs_len=3, w_len=2, L=0))
        scheme = make_scheme("OCBT", p)
        leak = np.arange(16, dtype=complex) + 1j
        measured, bound = ibi_bound_check(scheme, leak, 1)
        assert measured == pytest.approx(bound, rel=1e-12)

    def test_alternating_row_cancels_constant_spill(self):
        p = _params(M=8, K=4, N=2, L=0)
        scheme = make_scheme("OCBT", p, code_rows=(1, 2))   # row 2 alternates signs
        leak = np.tile(np.arange(8, dtype=complex) - 4j, 4)
        measured, bound = ibi_bound_check(scheme, leak, 2)
        assert measured == pytest.approx(0.0, abs=1e-20)
        assert bound > 0

    def test_subblock_confined_spill_meets_bound_with_equality(self):
        """Physical previous-block spill (delay spread below one symbol)
        lands in the first sub-block and meets the bound exactly."""
        rng = np.random.default_rng(7)
        for K in (1, 2, 4, 8):
            for N in range(1, K + 1):
                p = validate_params(SystemParams.with_derived_guards(M=16, K=K, N=N, L=0))
                scheme = make_scheme("OCBT", p)
                prev = rng.standard_normal(K * 16) + 1j * rng.standard_normal(K * 16)
                taps = rng.standard_normal(5) + 1j * rng.standard_normal(5)
                tail = fir_convolve(prev, taps)[K * 16:]
                leak = np.zeros(K * 16, dtype=complex)
                leak[:tail.size] = tail
                for l in range(1, N + 1):
                    measured, bound = ibi_bound_check(scheme, leak, l)
                    assert measured <= bound + 1e-12
                    assert measured == pytest.approx(bound, rel=1e-9)

    def test_arbitrary_vectors_bounded_by_code_length_ceiling(self):
        """Unstructured spill can exceed the single-sub-block figure, but
        never by more than the factor-K Cauchy-Schwarz ceiling."""
        rng = np.random.default_rng(8)
        p = _params(M=16, K=4, N=4, L=0)
        scheme = make_scheme("OCBT", p)
        worst = 0.0
        for _ in range(500):
            leak = rng.standard_normal(64) + 1j * rng.standard_normal(64)
            for l in range(1, 5):
                measured, bound = ibi_bound_check(scheme, leak, l)
                assert measured <= p.K * bound + 1e-9
                worst = max(worst, measured / bound)
        assert worst > 1.0           # the per-row figure is not a hard ceiling
        # a constant spill on the all-ones row attains the ceiling exactly
        leak = np.tile(np.ones(16, dtype=complex), 4)
        measured, bound = ibi_bound_check(scheme, leak, 1)
        assert measured == pytest.approx(p.K * bound, rel=1e-12)


class TestGenerateStream:
    def test_stream_length_and_band(self):
        p = _params(M=64, L=20)
        scheme = make_scheme("OCBT", p)
        rng = derive_stream(9, "stream")
        stream = generate_stream(scheme, 4, 32, rng)
        assert stream.size == 4 * p.K * p.M
        spec = np.fft.fftshift(np.abs(np.fft.fft(stream)) ** 2)
        freqs = np.fft.fftshift(np.fft.fftfreq(stream.size))
        inband = spec[np.abs(freqs) < 0.2].mean()
        outband = spec[np.abs(freqs) > 0.45].mean()
        assert inband > 100 * outband


class TestBerExperiment:
    def test_ideal_ocbt_chain_is_error_free(self):
        p = _params(M=64, L=0)
        cfg = BerConfig(params=p, systems=("OCBT",), snr_grid_db=(200.0,),
                        channel="awgn", eq_kind="zf", target_errors=1,
                        max_bits=20_000, blocks_per_trial=2, batch_trials=1)
        (point,) = run_ber_experiment(cfg)
        assert point.errors == 0 and point.bits > 0

    def test_awgn_qpsk_tracks_closed_form(self):
        from scipy.special import erfc
        p = _params(M=256, L=0)
        cfg = BerConfig(params=p, systems=("CP-OFDM",), snr_grid_db=(6.0,),
                        channel="awgn", eq_kind="zf", target_errors=800,
                        max_bits=2_000_000, blocks_per_trial=8, batch_trials=4)
        (point,) = run_ber_experiment(cfg)
        theory = 0.5 * erfc(np.sqrt(10 ** 0.6))
        assert point.ber == pytest.approx(theory, rel=0.15)

    def test_fir_channel_requires_taps(self):
        p = _params(M=64, L=0)
        cfg = BerConfig(params=p, systems=("OCBT",), snr_grid_db=(10.0,),
                        channel="fir")
        with pytest.raises(DimensionError):
            run_ber_experiment(cfg)

    def test_unknown_channel_rejected(self):
        p = _params(M=64, L=0)
        cfg = BerConfig(params=p, systems=("OCBT",), snr_grid_db=(10.0,),
                        channel="rayleigh-jakes")
        with pytest.raises(UnknownSystem):
            run_ber_experiment(cfg)

    def test_deterministic_given_seed(self):
        # scaled-down numerology: at 3.84 MHz the fading delay spread fits the CP
        p = _params(M=64, L=20, sample_rate=3.84e6)
        cfg = BerConfig(params=p, systems=("OCBT", "CP-OFDM"), snr_grid_db=(8.0,),
                        channel="veha", eq_kind="mmse", target_errors=50,
                        max_bits=100_000, blocks_per_trial=2, batch_trials=2)
        a = run_ber_experiment(cfg)
        b = run_ber_experiment(cfg)
        assert a == b
