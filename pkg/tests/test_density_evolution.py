import pytest

from csa_floor.density_evolution import (
    DegreeOneUnsupported,
    de_fixed_point,
    threshold,
)
from csa_floor.distributions import ChannelModel, induce, validate

PURE2 = validate([0, 0, 1.0])
PURE3 = validate([0, 0, 0, 1.0])


class TestFixedPoint:
    def test_pure_degree2_below_threshold(self):
        res = de_fixed_point(PURE2, 0.4)
        assert res.converged
        assert res.unresolved_fraction < 1e-8

    def test_pure_degree2_above_threshold(self):
        res = de_fixed_point(PURE2, 0.6)
        assert res.unresolved_fraction > 0.01
        assert 0.0 <= res.fixed_point_q <= 1.0

    def test_vanishing_load_resolves_everything(self, ref_dist):
        dist = validate([0, 0, 0.5, 0.3, 0, 0, 0, 0, 0.2])
        res = de_fixed_point(dist, 1e-3)
        assert res.unresolved_fraction < 1e-8

    def test_rejects_degree1_mass(self):
        with pytest.raises(DegreeOneUnsupported):
            de_fixed_point(validate([0, 0.3, 0.7]), 0.5)

    def test_rejects_degree0_mass(self):
        with pytest.raises(DegreeOneUnsupported):
            de_fixed_point(validate([0.1, 0, 0.9]), 0.5)

    def test_rejects_any_erasure_induced_distribution(self, ref_dist):
        induced = induce(ref_dist, ChannelModel(0.03))
        with pytest.raises(DegreeOneUnsupported):
            de_fixed_point(induced, 0.5)

    def test_unresolved_fraction_monotone_in_load(self):
        grid = [0.1 * k for k in range(1, 11)]
        values = [de_fixed_point(PURE3, g).unresolved_fraction for g in grid]
        for a, b in zip(values, values[1:]):
            assert b >= a - 1e-9

    def test_q_sequence_monotone_non_increasing(self):
        for g in (0.3, 0.5, 0.7, 0.9):
            trace: list[float] = []
            de_fixed_point(PURE3, g, trace=trace)
            assert all(a >= b - 1e-15 for a, b in zip(trace, trace[1:])), g

    def test_invalid_arguments(self):
        with pytest.raises(ValueError):
            de_fixed_point(PURE2, 0.0)
        with pytest.raises(ValueError):
            de_fixed_point(PURE2, 0.5, tol=0.0)


class TestThreshold:
    def test_pure_degree2_is_half(self):
        assert threshold(PURE2) == pytest.approx(0.5, abs=0.005)

    def test_pure_degree3(self):
        assert 0.80 < threshold(PURE3) < 0.84

    def test_reference_mixture_beats_pure_degree3(self, ref_dist):
        # the 0.25/0.6/0.15 mixture is known to have a higher threshold
        assert threshold(ref_dist) > threshold(PURE3)

    def test_bounded_by_one(self):
        for dist in (PURE2, PURE3, validate([0, 0, 0, 0, 0, 0, 0, 0, 1.0])):
            assert 0.0 <= threshold(dist) <= 1.0

    def test_rejects_degree1_mass(self):
        with pytest.raises(DegreeOneUnsupported):
            threshold(validate([0, 1.0]))

    def test_agrees_with_full_fixed_point_classification(self):
        g_star = threshold(PURE3)
        below = de_fixed_point(PURE3, g_star - 0.01)
        above = de_fixed_point(PURE3, g_star + 0.01)
        assert below.unresolved_fraction < 1e-8
        assert above.unresolved_fraction > 1e-4
