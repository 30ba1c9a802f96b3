import json

import numpy as np
import pytest

from filmspec import Grid, inverse_transform, sobolev_norm, wiener_seminorm
from filmspec.verify import (
    CheckReport,
    check_delta_series,
    check_gradient_lemma,
    check_interpolation,
    check_linf_embedding,
    check_norm_ordering,
    check_positivity,
    check_rhs_equivalence,
    delta_series_sums,
    gradient_lemma_constants,
    gradient_norms,
    random_field,
)


class TestRandomField:
    def test_hits_target_a0(self, grid64):
        f = random_field(grid64, 0.37, seed=1)
        assert wiener_seminorm(f, 0) == pytest.approx(0.37, rel=1e-13)

    def test_zero_mean_and_real(self, grid64):
        f = random_field(grid64, 0.2, seed=2)
        assert f.mean == 0.0
        inverse_transform(f)    # raises if Hermitian symmetry were broken

    def test_deterministic(self, grid64):
        a = random_field(grid64, 0.2, seed=3)
        b = random_field(grid64, 0.2, seed=3)
        assert np.array_equal(a.coeffs, b.coeffs)

    def test_2d(self, grid2d):
        f = random_field(grid2d, 0.2, seed=4)
        assert wiener_seminorm(f, 0) == pytest.approx(0.2, rel=1e-13)
        inverse_transform(f)


class TestCheckReport:
    def test_witness_consistency_enforced(self):
        with pytest.raises(ValueError):
            CheckReport("x", 1, -1.0, witness="")
        with pytest.raises(ValueError):
            CheckReport("x", 1, 1.0, witness="boom")

    def test_json_round_trip(self):
        report = CheckReport("x", 3, 0.25, header="hello")
        doc = json.loads(report.as_json())
        assert doc["name"] == "x" and doc["trials"] == 3
        assert doc["worst_margin"] == 0.25


class TestInterpolation:
    def test_single_mode_equality(self, grid64):
        from filmspec import field_from_modes
        f = field_from_modes(grid64, [((1,), 0.4, 0.0)])
        lhs = wiener_seminorm(f, 2)
        rhs = wiener_seminorm(f, 0) ** 0.5 * wiener_seminorm(f, 4) ** 0.5
        assert abs(rhs - lhs) / rhs < 1e-12

    def test_p_equals_zero_is_identity(self, grid64):
        f = random_field(grid64, 0.3, seed=5)
        rhs = wiener_seminorm(f, 0) ** 1.0 * wiener_seminorm(f, 4) ** 0.0
        assert rhs == wiener_seminorm(f, 0)

    def test_property_run(self):
        report = check_interpolation(trials=200, seed=42)
        assert report.ok
        assert report.witness == ""

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            check_interpolation(trials=0, seed=0)


class TestGradientLemma:
    def test_constants_carry_dimension(self):
        c1d = gradient_lemma_constants(1)
        c2d = gradient_lemma_constants(2)
        assert c1d[0] == pytest.approx(np.sqrt(2 * np.pi))
        assert c2d[0] == pytest.approx(2 * np.pi)
        assert c1d[1] == c2d[1] == 3.0

    def test_single_cosine_exact_values(self, grid64):
        # w = cos(x): |grad w|_L2^2 = pi, |w|_A0 = 1, |w|_H2 = 2 sqrt(pi)
        from filmspec import field_from_modes
        w = field_from_modes(grid64, [((1,), 1.0, 0.0)])
        gl2, gl4 = gradient_norms(w)
        assert gl2 ** 2 == pytest.approx(np.pi, rel=1e-12)
        assert gl4 ** 2 == pytest.approx(np.sqrt(3 * np.pi / 4), rel=1e-10)
        h2 = sobolev_norm(w, 2)
        assert h2 == pytest.approx(2 * np.sqrt(np.pi), rel=1e-13)
        assert gl2 ** 2 <= np.sqrt(2 * np.pi) * 1.0 * h2
        assert gl4 ** 2 <= 3.0 * 1.0 * h2

    def test_property_run_1d(self):
        report = check_gradient_lemma(trials=200, seed=42)
        assert report.ok
        assert "derived constants" in report.header

    def test_property_run_2d(self):
        report = check_gradient_lemma(trials=25, seed=42, grid=Grid(2, 32))
        assert report.ok

    def test_injected_bad_constants_fail_with_witness(self):
        report = check_gradient_lemma(trials=20, seed=42,
                                      constants=(1e-3, 1e-3, 1e-3))
        assert not report.ok
        assert report.worst_margin < 0
        witness = json.loads(report.witness)
        assert "seed" in witness


class TestOrderingAndEmbedding:
    def test_norm_ordering(self):
        assert check_norm_ordering(trials=100, seed=42).ok

    def test_linf_embedding(self):
        assert check_linf_embedding(trials=100, seed=42).ok


class TestRhsEquivalence:
    def test_small_run_passes(self):
        report = check_rhs_equivalence(trials=5, seed=42, n_trunc=60, s_max=0.2)
        assert report.ok

    def test_rejects_bad_smax(self):
        with pytest.raises(ValueError):
            check_rhs_equivalence(trials=1, seed=0, s_max=1.0)


class TestDeltaSeries:
    def test_zero_s_gives_zero_sums(self):
        sum1, sum2 = delta_series_sums(0.0, 0.5, 1.0)
        assert sum1 == 0.0 and sum2 == 0.0

    def test_matches_closed_forms_at_spec_points(self):
        from filmspec import delta1, delta2
        sum1, sum2 = delta_series_sums(0.01, 0.5, 1.0)
        assert sum1 == pytest.approx(delta1(0.01, 0.5, 1.0), rel=1e-10)
        assert sum2 == pytest.approx(delta2(0.01, 0.5, 1.0), rel=1e-10)
        _, sum2b = delta_series_sums(0.1, 0.5, 1.0)
        assert sum2b == pytest.approx(delta2(0.1, 0.5, 1.0), rel=1e-10)

    def test_small_grid(self):
        samples = [(s, c1, c2)
                   for s in (0.0, 0.1, 0.3)
                   for c1 in (0.1, 1.0)
                   for c2 in (0.5, 2.0)]
        report = check_delta_series(samples)
        assert report.ok
        assert report.trials == len(samples)


class TestPositivity:
    def test_interior_minimum_near_boundary_params(self):
        report = check_positivity(2.0, 1.01)
        assert report.ok
        assert "0.00990099" in report.header

    def test_equality_case_flagged(self):
        report = check_positivity(2.0, 1.0)
        assert report.ok
        assert "boundary equality" in report.header

    def test_wide_minimum(self):
        report = check_positivity(0.5, 1.0)
        assert report.ok
        assert "v = 3" in report.header

    def test_rejects_bad_window(self):
        with pytest.raises(ValueError):
            check_positivity(0.5, 1.0, v_max=0.0)


class TestDeterminism:
    @pytest.mark.parametrize("check", [check_interpolation, check_gradient_lemma,
                                       check_norm_ordering, check_linf_embedding])
    def test_reports_identical_for_same_seed(self, check):
        a = check(trials=20, seed=123)
        b = check(trials=20, seed=123)
        assert a == b
