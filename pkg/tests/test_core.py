"""Parameter validation, config round-trips, and random stream derivation."""

import json

import numpy as np
import pytest

from ocbt.core import (ConfigError, DimensionError, SystemParams, derive_stream,
                       load_params, params_from_dict, params_to_dict,
                       save_params, validate_params)


class TestValidateParams:
    def test_reference_configuration_passes(self):
        p = SystemParams.with_derived_guards(M=1024, K=4, N=4, L=324, beta=0.1)
        assert validate_params(p) is p
        assert (p.cp_len, p.cpw_len, p.cs_len, p.w_len) == (256, 384, 192, 128)

    def test_small_psd_configuration_passes(self):
        p = SystemParams.with_derived_guards(M=64, K=4, N=4, L=20, beta=0.1)
        assert validate_params(p) is p
        assert p.cp_len == 16

    def test_more_symbols_than_code_rows_rejected(self):
        with pytest.raises(DimensionError, match="N"):
            SystemParams.with_derived_guards(M=4, K=2, N=3, L=0)

    @pytest.mark.parametrize("field,value,match", [
        ("M", 48, "M"),
        ("M", 1, "M"),
        ("K", 3, "K"),
        ("L", 3, "L"),
        ("L", 2048, "L"),
        ("beta", 1.5, "beta"),
        ("cp_len", -1, "cp_len"),
        ("mod_order", 3, "mod_order"),
        ("sample_rate", 0.0, "sample_rate"),
    ])
    def test_invalid_field_names_constraint(self, field, value, match):
        base = params_to_dict(SystemParams.with_derived_guards())
        base[field] = value
        with pytest.raises(DimensionError, match=match):
            validate_params(SystemParams(**base))

    def test_overlap_larger_than_prefix_rejected(self):
        base = params_to_dict(SystemParams.with_derived_guards())
        base["w_len"] = base["cpw_len"] + 1
        with pytest.raises(DimensionError, match="w_len"):
            validate_params(SystemParams(**base))


class TestConfigRoundTrip:
    def test_json_round_trip_is_lossless(self, tmp_path):
        p = SystemParams.with_derived_guards(M=64, K=2, N=2, L=8, beta=0.25, seed=99)
        path = tmp_path / "params.json"
        save_params(p, path)
        assert load_params(path) == p

    def test_unknown_keys_rejected(self):
        data = params_to_dict(SystemParams.with_derived_guards())
        data["bogus_field"] = 1
        with pytest.raises(ConfigError, match="bogus_field"):
            params_from_dict(data)

    def test_partial_dict_uses_defaults(self):
        p = params_from_dict({"M": 64, "K": 4, "N": 4, "L": 20, "cp_len": 16,
                              "cpw_len": 24, "cs_len": 12, "w_len": 8})
        assert p.mod_order == 2

    def test_invalid_dimensions_from_file_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        data = params_to_dict(SystemParams.with_derived_guards())
        data["N"] = 9
        path.write_text(json.dumps(data))
        with pytest.raises(DimensionError):
            load_params(path)


class TestDeriveStream:
    def test_same_seed_and_label_repeat(self):
        a = derive_stream(7, "trial-0").standard_normal(64)
        b = derive_stream(7, "trial-0").standard_normal(64)
        np.testing.assert_array_equal(a, b)

    def test_distinct_labels_differ(self):
        a = derive_stream(7, "trial-0").standard_normal(64)
        b = derive_stream(7, "trial-1").standard_normal(64)
        assert not np.allclose(a, b)

    def test_distinct_seeds_differ(self):
        a = derive_stream(7, "x").standard_normal(64)
        b = derive_stream(8, "x").standard_normal(64)
        assert not np.allclose(a, b)

    def test_streams_look_independent(self):
        # correlation between labeled streams should be at noise level
        a = derive_stream(3, "a").standard_normal(100_000)
        b = derive_stream(3, "b").standard_normal(100_000)
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.01
