import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from filmspec import (
    G_closed,
    G_deriv,
    G_truncated,
    Grid,
    GuardError,
    ModelParams,
    SpectralField,
    field_from_modes,
    linear_symbol,
    rhs_convolution_oracle,
    rhs_pseudospectral,
    rhs_series,
    wiener_seminorm,
    zero_field,
)
from filmspec.model import check_resolution, series_coefficients
from filmspec.verify import random_field

P = ModelParams(c1=0.5, c2=1.0, n_trunc=60)


class TestModelParams:
    @pytest.mark.parametrize("c1,c2,n", [(0.0, 1.0, 0), (1.0, -1.0, 0), (1.0, 1.0, -1)])
    def test_validation(self, c1, c2, n):
        with pytest.raises(ValueError):
            ModelParams(c1, c2, n)


class TestPotential:
    def test_closed_at_zero(self):
        assert G_closed(0.0, P) == pytest.approx(P.c2 - P.c1, rel=1e-15)

    def test_first_derivative_at_zero(self):
        assert G_deriv(0.0, 1, P) == pytest.approx(P.c1 - 2 * P.c2, rel=1e-15)

    def test_deriv0_equals_closed(self):
        v = np.linspace(-0.4, 0.6, 7)
        assert np.allclose(G_deriv(v, 0, P), G_closed(v, P), rtol=1e-15)

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_derivatives_match_finite_differences(self, p):
        h = 1e-4
        for v in np.linspace(0.0, 0.5, 11):
            if p == 1:
                fd = (G_closed(v + h, P) - G_closed(v - h, P)) / (2 * h)
            else:
                fd = (G_deriv(v + h, p - 1, P) - G_deriv(v - h, p - 1, P)) / (2 * h)
            assert G_deriv(v, p, P) == pytest.approx(fd, rel=1e-6)

    def test_rejects_pole(self):
        with pytest.raises(ValueError, match="pole"):
            G_closed(-1.0, P)
        with pytest.raises(ValueError):
            G_deriv(-1.5, 1, P)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            G_deriv(0.0, 4, P)


class TestTruncatedPotential:
    def test_order_zero_is_constant(self):
        p0 = ModelParams(0.5, 1.0, 0)
        for v in (-0.5, 0.0, 0.3, 2.0):
            assert G_truncated(v, p0) == pytest.approx(P.c2 - P.c1, rel=1e-15)

    def test_value_at_zero_any_order(self):
        for n in (0, 1, 5, 40):
            assert G_truncated(0.0, ModelParams(0.5, 1.0, n)) == P.c2 - P.c1

    @settings(max_examples=40, deadline=None)
    @given(v=st.floats(-0.5, 0.5), n=st.integers(0, 80))
    def test_geometric_tail_bound(self, v, n):
        params = ModelParams(0.5, 1.0, n)
        tail = (params.c1 + params.c2 * (n + 2)) * abs(v) ** (n + 1) / (1 - abs(v)) ** 2
        assert abs(G_truncated(v, params) - G_closed(v, params)) <= tail + 1e-14


class TestLinearSymbol:
    def test_zero_mode(self):
        assert linear_symbol((0,), P) == 0.0

    def test_unit_mode(self):
        assert linear_symbol((1,), P) == pytest.approx(-6.5, rel=1e-15)

    def test_k_squared_four(self):
        assert linear_symbol((2,), P) == pytest.approx(-44.0, rel=1e-15)
        assert linear_symbol((1, 1), ModelParams(0.5, 1.0)) == pytest.approx(-1.5 * 4 - 5 * 2)


class TestSeriesCoefficients:
    def test_proof_r0(self):
        a = series_coefficients(0, P)
        assert a[0] == pytest.approx(-P.c1 + P.c2)
        assert a[3] == pytest.approx(-2 * P.c1 + 6 * P.c2)

    def test_intro_variant_differs(self):
        proof = series_coefficients(1, P, "proof")
        intro = series_coefficients(1, P, "intro")
        assert proof[0] == intro[0]
        assert proof[1] != intro[1]
        with pytest.raises(ValueError):
            series_coefficients(0, P, "nonsense")


class TestRhsEvaluators:
    def test_zero_field_all_evaluators(self, grid64):
        z = zero_field(grid64)
        assert wiener_seminorm(rhs_pseudospectral(z, P).total, 0) == 0.0
        assert wiener_seminorm(rhs_series(z, P).total, 0) == 0.0
        assert wiener_seminorm(rhs_convolution_oracle(z, P, kmax=2), 0) == 0.0

    @pytest.mark.parametrize("evaluator", [rhs_pseudospectral, rhs_series])
    def test_linearization_single_mode(self, grid64, evaluator):
        eps = 1e-8
        f = field_from_modes(grid64, [((1,), eps, 0.0)])
        total = evaluator(f, P).total
        expected = linear_symbol((1,), P) * eps / 2
        assert total.coefficient(1).real == pytest.approx(expected, rel=1e-7)
        assert abs(total.coefficient(1).imag) < 1e-20

    def test_linearization_rate_is_first_order_in_amplitude(self, grid64):
        # |RHS(eps v)/eps - L(1) v| must shrink linearly with eps
        residuals = []
        for eps in (1e-3, 1e-4, 1e-5):
            f = field_from_modes(grid64, [((1,), eps, 0.0)])
            total = rhs_pseudospectral(f, P).total
            linear = linear_symbol((1,), P) * f
            residuals.append(wiener_seminorm(total - linear, 0) / eps)
        assert residuals[0] / residuals[1] == pytest.approx(10.0, rel=0.15)
        assert residuals[1] / residuals[2] == pytest.approx(10.0, rel=0.15)

    def test_series_n0_structure(self, grid64):
        # at truncation order zero the quartic/quadratic families start at
        # r = 1 and vanish; what is left of the nonlinearity is quadratic
        eps = 1e-5
        f = field_from_modes(grid64, [((1,), eps, 0.0)])
        rhs = rhs_series(f, ModelParams(0.5, 1.0, 0))
        linear = rhs.linear_biharmonic + rhs.linear_laplacian
        assert wiener_seminorm(linear - (linear_symbol((1,), P) * f), 0) < 1e-18
        nl = wiener_seminorm(rhs.nonlinear, 0)
        assert nl < 50 * eps ** 2
        assert nl > 0

    def test_breakdown_sums_to_total(self, grid64):
        f = random_field(grid64, 0.2, seed=3)
        for rhs in (rhs_pseudospectral(f, P), rhs_series(f, P)):
            recon = rhs.linear_biharmonic + rhs.linear_laplacian + rhs.nonlinear
            assert wiener_seminorm(recon - rhs.total, 0) < 1e-12

    def test_cross_evaluator_agreement_random(self, grid64):
        for seed in range(5):
            f = random_field(grid64, 0.2, seed=seed)
            ps = rhs_pseudospectral(f, P)
            sr = rhs_series(f, P)
            tol = 1e-8 * (1 + wiener_seminorm(f, 4))
            assert wiener_seminorm(ps.total - sr.total, 0) < tol

    def test_cross_evaluator_agreement_2d(self):
        # compact support keeps every product alias-free on the padded lattice
        f = random_field(Grid(2, 32), 0.15, seed=4, k_cut=4)
        ps = rhs_pseudospectral(f, P)
        sr = rhs_series(f, P)
        assert wiener_seminorm(ps.total - sr.total, 0) < 1e-8 * (1 + wiener_seminorm(f, 4))

    def test_zero_mean_structural(self, grid64):
        f = random_field(grid64, 0.2, seed=5)
        for total in (rhs_pseudospectral(f, P).total, rhs_series(f, P).total,
                      rhs_convolution_oracle(field_from_modes(grid64, [((1,), 0.1, 0.2)]),
                                             ModelParams(0.5, 1.0, 6), kmax=1)):
            assert abs(total.mean) <= 1e-12
            assert total.coeffs.flat[0] == 0


class TestConvolutionOracle:
    def test_single_mode_pair_exact(self, grid64):
        params = ModelParams(0.5, 1.0, 6)
        f = field_from_modes(grid64, [((1,), 0.1, 0.7)])
        sr = rhs_series(f, params)
        oracle = rhs_convolution_oracle(f, params, kmax=1)
        assert wiener_seminorm(sr.total - oracle, 0) < 1e-13

    def test_two_mode_field(self, grid64):
        params = ModelParams(0.5, 1.0, 6)
        f = field_from_modes(grid64, [((1,), 0.06, 0.3), ((2,), 0.04, 1.1)])
        sr = rhs_series(f, params)
        oracle = rhs_convolution_oracle(f, params, kmax=2)
        assert wiener_seminorm(sr.total - oracle, 0) < 1e-10

    def test_two_mode_field_2d(self, grid2d):
        params = ModelParams(0.5, 1.0, 6)
        f = field_from_modes(grid2d, [((1, 0), 0.05, 0.2), ((1, 1), 0.03, 0.7)])
        sr = rhs_series(f, params)
        oracle = rhs_convolution_oracle(f, params, kmax=1)
        assert wiener_seminorm(sr.total - oracle, 0) < 1e-10

    def test_rejects_large_kmax(self, grid64):
        f = field_from_modes(grid64, [((1,), 0.1, 0.0)])
        with pytest.raises(ValueError, match="kmax"):
            rhs_convolution_oracle(f, P, kmax=5)

    def test_rejects_support_beyond_kmax(self, grid64):
        f = field_from_modes(grid64, [((3,), 0.1, 0.0)])
        with pytest.raises(ValueError, match="support"):
            rhs_convolution_oracle(f, P, kmax=2)

    def test_intro_variant_differs_from_proof(self, grid64):
        params = ModelParams(0.5, 1.0, 6)
        f = field_from_modes(grid64, [((1,), 0.1, 0.0)])
        proof = rhs_convolution_oracle(f, params, kmax=1, variant="proof")
        intro = rhs_convolution_oracle(f, params, kmax=1, variant="intro")
        assert wiener_seminorm(proof - intro, 0) > 1e-6

    def test_intro_variant_consistent_across_evaluators(self, grid64):
        # both evaluators honour the alternative prefactors; linear parts agree
        params = ModelParams(0.5, 1.0, 6)
        f = field_from_modes(grid64, [((1,), 0.08, 0.4), ((2,), 0.05, 1.2)])
        sr = rhs_series(f, params, variant="intro")
        oracle = rhs_convolution_oracle(f, params, kmax=2, variant="intro")
        assert wiener_seminorm(sr.total - oracle, 0) < 1e-10
        proof = rhs_series(f, params, variant="proof")
        assert wiener_seminorm(sr.linear_biharmonic - proof.linear_biharmonic, 0) == 0.0
        assert wiener_seminorm(sr.nonlinear - proof.nonlinear, 0) > 1e-6


class TestGuards:
    def test_pole_guard(self, grid64):
        f = field_from_modes(grid64, [((1,), 1.1, 0.0)])
        with pytest.raises(GuardError, match="pole"):
            rhs_pseudospectral(f, P)

    def test_series_guard_large_a0(self, grid64):
        f = field_from_modes(grid64, [((1,), 0.7, 0.0), ((2,), 0.7, 0.0)])
        with pytest.raises(GuardError, match="A0"):
            rhs_series(f, P)

    def test_resolution_guard(self, grid64):
        c = np.zeros(64, dtype=complex)
        c[1] = c[-1] = 0.05
        c[30] = c[-30] = 0.01     # energetic content in the top third of the band
        f = SpectralField(grid64, c)
        with pytest.raises(GuardError, match="resolution"):
            check_resolution(f)
        with pytest.raises(GuardError, match="resolution"):
            rhs_pseudospectral(f, P)

    def test_resolution_of_smooth_field_passes(self, grid64):
        f = random_field(grid64, 0.3, seed=0)
        assert check_resolution(f) < 1e-8


class TestPositivityOfOnePlusG:
    def test_interior_minimum_value_and_location(self):
        # min(1 + G) = 1 - c1^2/(4 c2) attained at v = 2 c2/c1 - 1
        for c1, c2 in ((0.5, 1.0), (2.0, 1.01)):
            params = ModelParams(c1, c2)
            v_star = 2 * c2 / c1 - 1
            vs = np.linspace(max(0.0, v_star - 0.5), v_star + 0.5, 20001)
            scanned = 1 + G_closed(vs, params)
            assert np.min(scanned) == pytest.approx(1 - c1 ** 2 / (4 * c2), abs=1e-8)
            assert vs[np.argmin(scanned)] == pytest.approx(v_star, abs=1e-4)

    def test_min_bound_when_2c2_ge_c1(self, grid64):
        f = random_field(grid64, 0.3, seed=1)
        from filmspec import inverse_transform
        samples = inverse_transform(f)
        samples = samples[samples >= 0]
        floor = 1 - P.c1 ** 2 / (4 * P.c2)
        assert np.min(1 + G_closed(samples, P)) >= floor - 1e-12
