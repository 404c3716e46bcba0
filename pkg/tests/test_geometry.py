import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from funcspace.errors import (
    DegenerateSpace,
    EmptySet,
    SamePoint,
    ValidationError,
    ZeroFunction,
)
from funcspace.geometry import (
    EuclideanPointSet,
    MetricSpace,
    SampledFunction,
    constant_function,
    dil,
    distance_function,
    lip_dual_pair_norm,
    lip_dual_pair_norm_lp,
    lip_norm,
    lip_point_norm,
    lip_point_norm_lp,
    set_distance,
    submult_ratio,
)
from helpers import interval5_space, random_dyadic_space


def line3_space():
    xs = np.array([0.0, 0.5, 1.0])
    return MetricSpace(np.abs(xs[:, None] - xs[None, :]))


class TestMetricSpaceValidation:
    def test_triangle_violation_rejected(self):
        d = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
        with pytest.raises(ValidationError, match="triangle"):
            MetricSpace(d)

    def test_asymmetric_rejected(self):
        d = np.array([[0.0, 1.0], [2.0, 0.0]])
        with pytest.raises(ValidationError, match="symmetric"):
            MetricSpace(d)

    def test_nonzero_diagonal_rejected(self):
        d = np.array([[0.5, 1.0], [1.0, 0.0]])
        with pytest.raises(ValidationError, match="diagonal"):
            MetricSpace(d)

    def test_negative_distance_rejected(self):
        d = np.array([[0.0, -1.0], [-1.0, 0.0]])
        with pytest.raises(ValidationError):
            MetricSpace(d)

    def test_base_out_of_range(self):
        with pytest.raises(ValidationError, match="base"):
            MetricSpace(np.array([[0.0, 1.0], [1.0, 0.0]]), base=2)

    def test_from_euclidean_accepts_collinear_points(self):
        ps = EuclideanPointSet(np.array([[0.1], [0.3], [0.7], [0.9]], dtype=complex))
        space = MetricSpace.from_euclidean(ps)
        assert space.dist[0, 3] == pytest.approx(0.8)

    def test_json_roundtrip(self):
        space = interval5_space(base=2)
        again = MetricSpace.from_json(space.to_json())
        assert np.array_equal(space.dist, again.dist)
        assert again.base == 2
        assert again.labels == space.labels


class TestSetDistance:
    def test_distance_to_itself(self):
        space = line3_space()
        assert set_distance(space, 1, {1}) == 0.0

    def test_line_minimum(self):
        space = line3_space()
        assert set_distance(space, 0, {1, 2}) == 0.5

    def test_member_of_full_set(self):
        space = line3_space()
        assert set_distance(space, 2, {0, 1, 2}) == 0.0

    def test_empty_set(self):
        with pytest.raises(EmptySet):
            set_distance(line3_space(), 0, set())


class TestDil:
    def test_constant_has_zero_dil(self):
        space = interval5_space()
        assert dil(constant_function(space, 3 + 4j)) == 0.0

    def test_distance_function_dil_is_one(self):
        # d(0,1) = d(0,1/2) + d(1/2,1) on the line, so the bound is attained
        space = line3_space()
        f = distance_function(space, 0)
        assert dil(f) == 1.0

    def test_distance_function_dil_at_most_one(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            space = random_dyadic_space(rng, 5)
            assert dil(distance_function(space, int(rng.integers(5)))) <= 1.0

    def test_two_point_quotient(self):
        space = MetricSpace(np.array([[0.0, 2.0], [2.0, 0.0]]))
        assert dil(SampledFunction(space, [0.0, 6.0])) == 3.0

    def test_single_point_space_rejected(self):
        space = MetricSpace(np.zeros((1, 1)))
        with pytest.raises(DegenerateSpace):
            dil(constant_function(space))

    @given(
        vals=st.lists(
            st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
            min_size=5,
            max_size=5,
        ),
        other=st.lists(
            st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
            min_size=5,
            max_size=5,
        ),
        c=st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
    )
    @settings(max_examples=50, deadline=None)
    def test_dil_is_a_seminorm(self, vals, other, c):
        space = interval5_space()
        f = SampledFunction(space, vals)
        g = SampledFunction(space, other)
        assert dil(f + g) <= dil(f) + dil(g) + 1e-12 * (1 + dil(f) + dil(g))
        assert dil(c * f) == pytest.approx(abs(c) * dil(f), rel=1e-12, abs=1e-12)


class TestLipNorm:
    def test_constant_one(self):
        assert lip_norm(constant_function(interval5_space())) == 1.0

    def test_distance_to_base(self):
        space = interval5_space()
        f = distance_function(space, space.base)
        assert lip_norm(f) <= 1.0

    def test_homogeneity(self):
        rng = np.random.default_rng(11)
        space = random_dyadic_space(rng, 5)
        f = SampledFunction(space, rng.normal(size=5) + 1j * rng.normal(size=5))
        c = 2 + 1j
        assert lip_norm(c * f) == pytest.approx(abs(c) * lip_norm(f), rel=1e-12)


class TestDualNorms:
    def test_two_point_pair_norm(self):
        space = MetricSpace(np.array([[0.0, 3.0], [3.0, 0.0]]))
        value, witness = lip_dual_pair_norm(space, 0, 1)
        assert value == 3.0
        assert lip_norm(witness) <= 1.0

    def test_witness_algebra(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            space = random_dyadic_space(rng, 6)
            x, y = rng.choice(6, size=2, replace=False)
            value, witness = lip_dual_pair_norm(space, int(x), int(y))
            assert witness.values[y] == -space.dist[space.base, y]
            assert abs(witness.values[x] - witness.values[y]) == value
            assert lip_norm(witness) <= 1.0

    def test_same_point_rejected(self):
        with pytest.raises(SamePoint):
            lip_dual_pair_norm(interval5_space(), 2, 2)

    def test_pair_norm_matches_lp_oracle(self):
        rng = np.random.default_rng(17)
        for _ in range(8):
            space = random_dyadic_space(rng, int(rng.integers(3, 7)))
            n = len(space)
            x, y = rng.choice(n, size=2, replace=False)
            value, _ = lip_dual_pair_norm(space, int(x), int(y))
            assert value == pytest.approx(lip_dual_pair_norm_lp(space, int(x), int(y)), abs=1e-9)

    def test_point_norm_base(self):
        space = interval5_space()
        assert lip_point_norm(space, space.base) == 1.0

    def test_point_norm_far_point(self):
        d = np.array([[0.0, 5.0], [5.0, 0.0]])
        assert lip_point_norm(MetricSpace(d), 1) == 5.0

    def test_point_norm_close_point_is_one(self):
        # constants are extremal inside the unit ball around the base
        d = np.array([[0.0, 0.3], [0.3, 0.0]])
        space = MetricSpace(d)
        assert lip_point_norm(space, 1) == 1.0
        assert lip_point_norm_lp(space, 1) == pytest.approx(1.0, abs=1e-9)

    def test_point_norm_matches_lp_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(8):
            space = random_dyadic_space(rng, int(rng.integers(2, 7)))
            x = int(rng.integers(len(space)))
            assert lip_point_norm(space, x) == pytest.approx(lip_point_norm_lp(space, x), abs=1e-9)

    def test_upper_and_lower_bounds_pinch(self):
        rng = np.random.default_rng(29)
        space = random_dyadic_space(rng, 6)
        value, witness = lip_dual_pair_norm(space, 1, 4)
        # witness gives the lower bound; the Lipschitz estimate gives the upper
        assert abs(witness.values[1] - witness.values[4]) >= value - 1e-15
        f = SampledFunction(space, rng.normal(size=6) + 1j * rng.normal(size=6))
        assert abs(f.values[1] - f.values[4]) <= lip_norm(f) * space.dist[1, 4] + 1e-12


class TestSubmultRatio:
    def test_constants(self):
        space = interval5_space()
        ones = constant_function(space)
        ratio, bound = submult_ratio(space, [ones])
        assert ratio == 1.0
        assert ratio <= bound

    def test_bound_on_unit_diameter_space(self):
        space = interval5_space()
        assert submult_ratio(space, [constant_function(space)])[1] == 3.0

    def test_random_pairs_stay_below_bound(self):
        rng = np.random.default_rng(41)
        xs = np.sort(rng.choice(np.arange(9), size=6, replace=False)) / 8.0
        space = MetricSpace(np.abs(xs[:, None] - xs[None, :]))  # diameter <= 1
        fs = [
            SampledFunction(space, rng.normal(size=6) + 1j * rng.normal(size=6))
            for _ in range(15)
        ]
        ratio, bound = submult_ratio(space, fs)  # 15 functions -> 120 pairs
        assert bound == 3.0
        assert ratio <= bound

    def test_zero_function_rejected(self):
        space = interval5_space()
        with pytest.raises(ZeroFunction):
            submult_ratio(space, [constant_function(space, 0.0)])

    def test_bound_holds_on_random_spaces(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            space = random_dyadic_space(rng, 5)
            fs = [
                SampledFunction(space, rng.normal(size=5) + 1j * rng.normal(size=5))
                for _ in range(6)
            ]
            ratio, bound = submult_ratio(space, fs)
            assert ratio <= bound


class TestSampledFunctionJson:
    def test_roundtrip(self):
        space = interval5_space()
        f = SampledFunction(space, [1 + 2j, 0, -1, 3j, 0.5])
        again = SampledFunction.from_json(f.to_json(), space)
        assert np.array_equal(f.values, again.values)

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            SampledFunction(interval5_space(), [1.0, 2.0])


class TestEuclideanPointSetJson:
    def test_roundtrip_with_labels(self):
        ps = EuclideanPointSet([[0.1 + 0.2j, -0.3j], [0.5, 0.0]], labels=["a", "b"])
        again = EuclideanPointSet.from_json(ps.to_json())
        assert np.array_equal(ps.points, again.points)
        assert again.labels == ("a", "b")
        assert again.dim == 2

    def test_dim_one_shorthand(self):
        ps = EuclideanPointSet.from_json({"dim": 1, "points": [[0.0, 0.0], [0.5, 0.0]]})
        assert ps.points.shape == (2, 1)

    def test_declared_dim_enforced(self):
        with pytest.raises(ValidationError):
            EuclideanPointSet.from_json({"dim": 3, "points": [[0.0, 0.0], [0.5, 0.0]]})

    def test_distinctness_flag(self):
        with pytest.raises(ValidationError):
            EuclideanPointSet([[0.3], [0.3]], require_distinct=True)
