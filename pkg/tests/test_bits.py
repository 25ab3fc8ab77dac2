import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgsa.bits import (
    DecodingSpec,
    bits_to_integer,
    decode_real,
    decode_vector,
    hamming_distance,
    run_rng,
)


def bits(s: str) -> np.ndarray:
    return np.array([int(c) for c in s], dtype=np.uint8)


class TestHamming:
    def test_identity(self):
        assert hamming_distance(bits("10110"), bits("10110")) == 0

    def test_complement(self):
        assert hamming_distance(bits("00000"), bits("11111")) == 5

    def test_hand_count(self):
        # positions 0 and 2 differ (by-hand count)
        assert hamming_distance(bits("1011"), bits("0010")) == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            hamming_distance(bits("101"), bits("10"))

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=64).flatmap(
        lambda a: st.tuples(st.just(a), st.lists(st.integers(0, 1),
                                                 min_size=len(a), max_size=len(a)))))
    @settings(max_examples=100, deadline=None)
    def test_symmetry_and_identity(self, pair):
        a, b = np.array(pair[0], dtype=np.uint8), np.array(pair[1], dtype=np.uint8)
        assert hamming_distance(a, a) == 0
        assert hamming_distance(a, b) == hamming_distance(b, a)
        assert (hamming_distance(a, b) == 0) == bool(np.array_equal(a, b))


class TestBitsToInteger:
    def test_all_zero(self):
        assert bits_to_integer(np.zeros(15, dtype=np.uint8)) == 0

    def test_all_one(self):
        assert bits_to_integer(np.ones(15, dtype=np.uint8)) == 32767

    def test_unit_weight(self):
        segment = np.zeros(15, dtype=np.uint8)
        segment[0] = 1
        assert bits_to_integer(segment) == 1

    def test_lsb_first(self):
        assert bits_to_integer(bits("011")) == 6


class TestDecodeReal:
    SPEC = DecodingSpec(lower=-100.0, upper=100.0, n_vars=1, bits_per_var=15)

    def test_lower_bound(self):
        assert decode_real(np.zeros(15, dtype=np.uint8), self.SPEC) == -100.0

    def test_upper_is_strict(self):
        # 2^15 - 1 steps of 200/2^15
        value = decode_real(np.ones(15, dtype=np.uint8), self.SPEC)
        assert value == pytest.approx(99.993896484375, abs=0)
        assert value < 100.0

    def test_midpoint(self):
        segment = np.zeros(15, dtype=np.uint8)
        segment[14] = 1  # integer 2^14 = 16384
        assert decode_real(segment, self.SPEC) == 0.0

    def test_l4_brute_force_enumeration(self):
        spec = DecodingSpec(lower=-7.0, upper=9.0, n_vars=1, bits_per_var=4)
        for value in range(16):
            segment = np.array([(value >> i) & 1 for i in range(4)], dtype=np.uint8)
            expected = -7.0 + value * (9.0 - (-7.0)) / 16.0
            assert decode_real(segment, spec) == expected

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            decode_real(np.zeros(14, dtype=np.uint8), self.SPEC)

    @given(st.lists(st.integers(0, 1), min_size=15, max_size=15))
    @settings(max_examples=100, deadline=None)
    def test_bounds_property(self, raw):
        segment = np.array(raw, dtype=np.uint8)
        value = decode_real(segment, self.SPEC)
        assert -100.0 <= value < 100.0

    def test_monotone_in_integer_value(self):
        spec = DecodingSpec(lower=-5.0, upper=5.0, n_vars=1, bits_per_var=6)
        values = []
        for value in range(64):
            segment = np.array([(value >> i) & 1 for i in range(6)], dtype=np.uint8)
            values.append(decode_real(segment, spec))
        assert all(a < b for a, b in zip(values, values[1:]))


class TestDecodeVector:
    def test_zero_pair(self):
        spec = DecodingSpec(lower=-5.0, upper=5.0, n_vars=2, bits_per_var=15)
        out = decode_vector(np.zeros(30, dtype=np.uint8), spec)
        assert np.array_equal(out, [-5.0, -5.0])

    def test_composition_of_segments(self):
        spec = DecodingSpec(lower=-100.0, upper=100.0, n_vars=2, bits_per_var=15)
        seg_spec = DecodingSpec(lower=-100.0, upper=100.0, n_vars=1, bits_per_var=15)
        rng = np.random.default_rng(5)
        a = rng.integers(0, 2, 15).astype(np.uint8)
        b = rng.integers(0, 2, 15).astype(np.uint8)
        out = decode_vector(np.concatenate([a, b]), spec)
        assert out[0] == decode_real(a, seg_spec)
        assert out[1] == decode_real(b, seg_spec)

    def test_single_variable_reduces_to_decode_real(self):
        spec = DecodingSpec(lower=0.0, upper=1.0, n_vars=1, bits_per_var=8)
        segment = np.array([1, 0, 1, 0, 0, 1, 1, 0], dtype=np.uint8)
        assert decode_vector(segment, spec)[0] == decode_real(segment, spec)

    def test_batch_shape(self):
        spec = DecodingSpec(lower=-1.0, upper=1.0, n_vars=3, bits_per_var=5)
        rng = np.random.default_rng(0)
        batch = rng.integers(0, 2, (7, 15)).astype(np.uint8)
        out = decode_vector(batch, spec)
        assert out.shape == (7, 3)
        assert np.array_equal(out[2], decode_vector(batch[2], spec))

    def test_length_mismatch(self):
        spec = DecodingSpec(lower=0.0, upper=1.0, n_vars=2, bits_per_var=15)
        with pytest.raises(ValueError):
            decode_vector(np.zeros(29, dtype=np.uint8), spec)


class TestDecodingSpecValidation:
    def test_bad_bounds(self):
        with pytest.raises(ValueError):
            DecodingSpec(lower=1.0, upper=1.0, n_vars=1)

    def test_bad_counts(self):
        with pytest.raises(ValueError):
            DecodingSpec(lower=0.0, upper=1.0, n_vars=0)
        with pytest.raises(ValueError):
            DecodingSpec(lower=0.0, upper=1.0, n_vars=1, bits_per_var=0)


class TestRngStreams:
    def test_same_seed_same_stream(self):
        a = run_rng(123, 4).random(100)
        b = run_rng(123, 4).random(100)
        assert np.array_equal(a, b)

    def test_run_index_changes_stream(self):
        a = run_rng(123, 0).random(100)
        b = run_rng(123, 1).random(100)
        assert not np.array_equal(a, b)

    def test_adding_runs_keeps_earlier_streams(self):
        first = [run_rng(9, i).random(8) for i in range(3)]
        again = [run_rng(9, i).random(8) for i in range(5)]
        for a, b in zip(first, again):
            assert np.array_equal(a, b)
