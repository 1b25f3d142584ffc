"""RiskValue, FeatureSet, and seeding primitives."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from descentlab.risk import DIVERGENT, RiskValue, finite_risk
from descentlab.seeding import substream
from descentlab.subsets import FeatureSet, random_subset


class TestRiskValue:
    def test_divergent_singleton(self):
        assert DIVERGENT.is_divergent
        assert DIVERGENT.value is None

    def test_finite(self):
        rv = finite_risk(0.25)
        assert not rv.is_divergent
        assert rv.value == 0.25

    def test_tiny_negative_clamped(self):
        assert finite_risk(-1e-12).value == 0.0

    def test_rejects_genuinely_negative(self):
        with pytest.raises(ValueError):
            finite_risk(-0.5)

    def test_rejects_float_infinity(self):
        with pytest.raises(ValueError):
            finite_risk(float("inf"))
        with pytest.raises(ValueError):
            finite_risk(float("nan"))

    @given(st.floats(min_value=0, max_value=1e12))
    def test_finite_roundtrip(self, x):
        assert finite_risk(x).value == x


class TestFeatureSet:
    def test_first(self):
        fs = FeatureSet.first(3)
        assert fs.indices == (1, 2, 3)
        assert fs.p == 3
        assert list(fs.zero_based) == [0, 1, 2]

    def test_empty(self):
        fs = FeatureSet.first(0)
        assert fs.p == 0
        assert fs.complement(4).indices == (1, 2, 3, 4)

    def test_of_sorts(self):
        assert FeatureSet.of([5, 2, 9]).indices == (2, 5, 9)

    def test_rejects_duplicates_and_nonpositive(self):
        with pytest.raises(ValueError):
            FeatureSet((1, 1, 2))
        with pytest.raises(ValueError):
            FeatureSet((0, 1))
        with pytest.raises(ValueError):
            FeatureSet((3, 2))

    def test_complement(self):
        fs = FeatureSet((2, 4))
        assert fs.complement(5).indices == (1, 3, 5)

    def test_validate_within(self):
        with pytest.raises(ValueError):
            FeatureSet((8,)).validate_within(5)

    def test_random_subset_distribution(self):
        rng = np.random.default_rng(0)
        counts = np.zeros(6)
        draws = 4000
        for _ in range(draws):
            fs = random_subset(rng, 6, 2)
            assert fs.p == 2
            counts[fs.zero_based] += 1
        # each index appears with probability p/D = 1/3
        freq = counts / draws
        assert np.all(np.abs(freq - 1 / 3) < 0.03)

    def test_random_subset_nesting(self):
        # identical generator state: subsets are permutation prefixes, so
        # smaller p gives a subset of the larger draw
        small = random_subset(np.random.default_rng(42), 20, 5)
        large = random_subset(np.random.default_rng(42), 20, 12)
        assert set(small.indices) <= set(large.indices)


class TestSubstream:
    def test_deterministic(self):
        a = substream(7, 0, 3).standard_normal(5)
        b = substream(7, 0, 3).standard_normal(5)
        assert np.array_equal(a, b)

    def test_distinct_keys_distinct_streams(self):
        a = substream(7, 0, 3).standard_normal(5)
        b = substream(7, 0, 4).standard_normal(5)
        c = substream(8, 0, 3).standard_normal(5)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_rejects_bad_keys(self):
        with pytest.raises(ValueError):
            substream(1, -2)
