import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epakit import (EllipseParams, EpaModel, consecutive_pairs,
                    correlation_objective, ellipse_locus, epa_transform,
                    pair_transform)
from epakit._rng import substream

from conftest import make_dataset

nonneg = st.floats(0, 1e6)
weight = st.floats(0, 1)


class TestPairTransform:
    def test_a_one_returns_x1(self):
        assert pair_transform(5.0, 7.0, a=1.0, alpha=0.0) == 5.0

    def test_halfway(self):
        assert pair_transform(3.0, 4.0, a=0.5, alpha=0.0) == pytest.approx(
            math.sqrt(12.5))

    def test_zero_inputs(self):
        assert pair_transform(0.0, 0.0, a=0.3, alpha=0.0) == 0.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            pair_transform(-1.0, 2.0, a=0.5, alpha=0.0)

    @given(nonneg, nonneg, weight)
    def test_weighted_quadratic_mean_bounds(self, x1, x2, a):
        y = pair_transform(x1, x2, a, 0.0)
        slack = 1e-9 * max(1.0, x1, x2)
        assert min(x1, x2) - slack <= y <= max(x1, x2) + slack

    @given(nonneg, nonneg)
    def test_boundary_collapse(self, x1, x2):
        # squaring then square-rooting underflows below ~1e-154
        approx = lambda v: pytest.approx(v, rel=1e-7, abs=1e-150)
        assert pair_transform(x1, x2, 1.0, 0.0) == approx(x1)
        assert pair_transform(x1, x2, 0.0, 0.0) == approx(x2)

    @given(nonneg, nonneg, nonneg, weight)
    def test_monotone_in_x1(self, x1, dx, x2, a):
        lo = pair_transform(x1, x2, a, 0.0)
        hi = pair_transform(x1 + dx, x2, a, 0.0)
        assert hi >= lo - 1e-9 * max(1.0, lo)


class TestTransform:
    def test_a_one_passthrough(self):
        ds = make_dataset([[3.0, 9.0], [4.0, 16.0]], [0, 1])
        model = EpaModel(pairs=[(0, 1)], a=[1.0], alpha=0.0)
        out = epa_transform(ds, model, seed=0)
        assert np.array_equal(out.features[:, 0], ds.features[:, 0])

    def test_odd_p_passthrough(self):
        ds = make_dataset([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]], [0, 1])
        pairs, passthrough = consecutive_pairs(3)
        model = EpaModel(pairs=pairs, a=[0.5], alpha=0.0, passthrough=passthrough)
        out = epa_transform(ds, model, seed=0)
        assert out.p == 2
        assert np.array_equal(out.features[:, 1], ds.features[:, 2])
        assert out.feature_names == ("y1", "y2")

    def test_16_features_to_8(self):
        rng = np.random.default_rng(0)
        ds = make_dataset(rng.uniform(0, 1, (40, 16)), rng.integers(0, 3, 40))
        pairs, _ = consecutive_pairs(16)
        model = EpaModel(pairs=pairs, a=np.full(8, 0.042), alpha=0.001)
        out = epa_transform(ds, model, seed=1)
        assert out.p == 8 and out.n == 40
        assert np.array_equal(out.labels, ds.labels)

    def test_negative_column_rejected(self):
        ds = make_dataset([[-1.0, 2.0], [1.0, 2.0]], [0, 1])
        model = EpaModel(pairs=[(0, 1)], a=[0.5], alpha=0.0)
        with pytest.raises(ValueError, match="shift_nonnegative"):
            epa_transform(ds, model, seed=0)

    def test_pair_out_of_range(self):
        ds = make_dataset([[1.0, 2.0], [3.0, 4.0]], [0, 1])
        model = EpaModel(pairs=[(0, 5)], a=[0.5], alpha=0.0)
        with pytest.raises(ValueError, match="out of range"):
            epa_transform(ds, model, seed=0)

    def test_deterministic_given_seed(self):
        rng = np.random.default_rng(2)
        ds = make_dataset(rng.uniform(0, 1, (30, 4)), rng.integers(0, 2, 30))
        pairs, _ = consecutive_pairs(4)
        model = EpaModel(pairs=pairs, a=[0.3, 0.7], alpha=0.01)
        a = epa_transform(ds, model, seed=5)
        b = epa_transform(ds, model, seed=5)
        assert np.array_equal(a.features, b.features)

    @given(st.integers(1, 9))
    @settings(max_examples=20, deadline=None)
    def test_output_dimension(self, p):
        rng = np.random.default_rng(p)
        ds = make_dataset(rng.uniform(0, 1, (20, p)),
                          [0] * 10 + [1] * 10)
        pairs, passthrough = consecutive_pairs(p)
        model = EpaModel(pairs=pairs, a=np.full(len(pairs), 0.4), alpha=0.0,
                         passthrough=passthrough)
        out = epa_transform(ds, model, seed=0)
        assert out.p == math.ceil(p / 2)
        assert out.n == ds.n


class TestEllipseLocus:
    def test_noiseless_round_trip(self):
        params = EllipseParams(y_value=1.0, a=0.22, b=0.78, alpha=0.0,
                               n_points=500)
        pts = ellipse_locus(params, seed=0)
        assert len(pts) == 500
        for x1, x2 in pts:
            assert abs(pair_transform(x1, x2, 0.22, 0.0) - 1.0) < 1e-9

    def test_x2_extreme_at_x1_zero(self):
        # as x1 -> 0, x2 -> y / sqrt(b)
        pts = ellipse_locus(EllipseParams(1.0, 0.22, 0.78, 0.0, 2000), seed=1)
        assert pts[:, 1].max() <= 1 / math.sqrt(0.78) + 1e-9
        assert pts[:, 1].max() > 1 / math.sqrt(0.78) - 0.01

    def test_symmetric_point_on_locus(self):
        assert pair_transform(1.0, 1.0, 0.5, 0.0) == pytest.approx(1.0)

    def test_overlapping_series(self):
        # noisy triples produce interfering clouds: x2 ranges intersect
        triples = [(0.22, 0.78, 0.05), (0.32, 0.68, 0.10), (0.1, 0.9, 0.15)]
        ranges = []
        for i, (a, b, alpha) in enumerate(triples):
            pts = ellipse_locus(EllipseParams(1.0, a, b, alpha, 400), seed=i)
            ranges.append((pts[:, 1].min(), pts[:, 1].max()))
        lo = max(r[0] for r in ranges)
        hi = min(r[1] for r in ranges)
        assert lo < hi

    def test_b_zero_rejected(self):
        with pytest.raises(ValueError):
            EllipseParams(1.0, 1.0, 0.0, 0.0)


class TestCorrelationObjective:
    def test_a_one_lower_bound(self):
        rng = np.random.default_rng(0)
        x1, x2 = rng.uniform(0, 1, 500), rng.uniform(0, 1, 500)
        assert correlation_objective(x1, x2, a=1.0, alpha=0.0, seed=0) >= 1.0

    def test_a_zero_independent_columns(self):
        rng = np.random.default_rng(1)
        x1, x2 = rng.uniform(0, 1, 5000), rng.uniform(0, 1, 5000)
        obj = correlation_objective(x1, x2, a=0.0, alpha=0.0, seed=0)
        # y == x2: second term is exactly 1, first near 0
        assert obj == pytest.approx(1.0, abs=0.05)

    def test_swap_symmetry(self):
        rng = np.random.default_rng(2)
        x1, x2 = rng.uniform(0, 2, 300), rng.uniform(0, 2, 300)
        lhs = correlation_objective(x1, x2, a=0.3, alpha=0.0, seed=0)
        rhs = correlation_objective(x2, x1, a=0.7, alpha=0.0, seed=0)
        assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_constant_column_rejected(self):
        with pytest.raises(ValueError):
            correlation_objective(np.ones(10), np.arange(10.0), 0.5, 0.0, 0)
