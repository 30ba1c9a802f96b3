import math

import numpy as np
import pytest

from filmspec import (
    PhysicalParams,
    check_conditions,
    decay_envelope,
    delta1,
    delta2,
    dispersion,
    khenner_threshold,
    max_growth,
    nondimensionalize,
    series_closed_forms,
    smallness_margins,
)

TABLE = PhysicalParams(d=0.5e-7, V=1e-22, g0=2.5e3, M_mob=4e-3,
                       c1_phys=0.025, c2_phys=2.5, u0_mass=1e-7)

# frozen against a 40-digit evaluation of the closed forms
DELTA1_001 = 0.1032233987730180140973102730251815
DELTA2_001 = 0.5603314679854254487715644815391669
D1_001 = 1.3967766012269819859026897269748185
D2_001 = 4.4396685320145745512284355184608331
DELTA2_01 = 8.0383579738860945994004978915815679


class TestNondimensionalize:
    def test_degenerate_zero_mass(self):
        p = PhysicalParams(d=1e-7, V=1e-22, g0=2.5e3, M_mob=4e-3,
                           c1_phys=0.1, c2_phys=0.2, u0_mass=0.0)
        nd = nondimensionalize(p)
        assert nd.c1 == pytest.approx(0.1 / 2.5e3, rel=1e-15)
        assert nd.c2 == pytest.approx(0.2 / 2.5e3, rel=1e-15)

    def test_time_scale_from_table_values(self):
        # d^4/(V*M*g0) computed independently from the raw powers
        nd = nondimensionalize(TABLE)
        expected = (0.5e-7) ** 4 / (1e-22 * 4e-3 * 2.5e3)
        assert expected == pytest.approx(6.25e-9, rel=1e-12)
        assert nd.t_scale == pytest.approx(expected, rel=1e-14)
        assert nd.x_scale == 0.5e-7

    def test_equal_wetting_energies_halve(self):
        p = PhysicalParams(d=1e-7, V=1e-22, g0=2.5e3, M_mob=4e-3,
                           c1_phys=0.5, c2_phys=0.5, u0_mass=1e-7)
        nd = nondimensionalize(p)
        assert nd.c2 == pytest.approx(nd.c1 / 2, rel=1e-14)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PhysicalParams(d=0.0, V=1e-22, g0=2.5e3, M_mob=4e-3,
                           c1_phys=0.1, c2_phys=0.1, u0_mass=0.0)


class TestConditions:
    def test_existence_pass(self):
        assert check_conditions(0.5, 1.0, "existence").ok

    def test_regularity_pass(self):
        report = check_conditions(2.0, 1.01, "regularity")
        assert report.ok
        assert report.margins["c1_sq_over_4"] == pytest.approx(0.01, abs=1e-12)

    def test_regularity_fail(self):
        assert not check_conditions(2.0, 0.9, "regularity").ok

    def test_regularity_implies_existence(self):
        rng = np.random.default_rng(0)
        for _ in range(200):
            c1 = rng.uniform(0.05, 3.0)
            c2 = rng.uniform(0.05, 3.0)
            if check_conditions(c1, c2, "regularity").ok:
                assert check_conditions(c1, c2, "existence").ok

    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError):
            check_conditions(1.0, 1.0, "something")


class TestDeltas:
    def test_zero_at_s0(self):
        assert delta1(0.0, 0.5, 1.0) == 0.0
        assert delta2(0.0, 0.5, 1.0) == 0.0

    def test_frozen_values(self):
        assert delta1(0.01, 0.5, 1.0) == pytest.approx(DELTA1_001, rel=1e-14)
        assert delta2(0.01, 0.5, 1.0) == pytest.approx(DELTA2_001, rel=1e-14)
        assert delta2(0.1, 0.5, 1.0) == pytest.approx(DELTA2_01, rel=1e-14)

    def test_against_high_precision_oracle(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 40
        for s, c1, c2 in ((0.01, 0.5, 1.0), (0.1, 0.5, 1.0), (0.25, 1.3, 0.7)):
            ss, cc1, cc2 = map(mp.mpf, map(str, (s, c1, c2)))
            u = 1 - ss
            ref1 = ss * (cc1 / u + (cc2 * (2 - ss) + 3 * cc1) / u ** 2
                         + 2 * (3 * cc2 + cc1 * ss) / u ** 3 + 6 * cc2 * ss / u ** 4)
            ref2 = ss * (2 * cc1 * (3 - 3 * ss + ss * ss) / u ** 3
                         + 6 * (cc2 * (4 - 6 * ss + 4 * ss * ss - ss ** 3) + cc1) / u ** 4
                         + 24 * cc2 / u ** 5)
            assert delta1(s, c1, c2) == pytest.approx(float(ref1), rel=1e-13)
            assert delta2(s, c1, c2) == pytest.approx(float(ref2), rel=1e-13)

    def test_monotone_increasing_in_s(self):
        s = np.linspace(0.0, 0.95, 500)
        for c1, c2 in ((0.5, 1.0), (2.0, 1.01), (0.1, 0.1)):
            assert np.all(np.diff(delta1(s, c1, c2)) > 0)
            assert np.all(np.diff(delta2(s, c1, c2)) > 0)

    def test_rejects_out_of_range(self):
        for bad in (-0.1, 1.0, 1.5):
            with pytest.raises(ValueError):
                delta1(bad, 0.5, 1.0)
            with pytest.raises(ValueError):
                delta2(bad, 0.5, 1.0)


class TestSmallness:
    def test_s0_zero_exact(self):
        b = smallness_margins(0.0, 0.5, 1.0)
        assert b.D1 == 1.5 and b.D2 == 5.0
        assert b.delta1 == 0.0 and b.delta2 == 0.0
        assert b.cond_smallness

    def test_compliant_case(self):
        b = smallness_margins(0.01, 0.5, 1.0)
        assert b.D1 == pytest.approx(D1_001, rel=1e-14)
        assert b.D2 == pytest.approx(D2_001, rel=1e-14)
        assert b.cond_smallness and b.cond_existence and b.cond_regularity

    def test_failing_case(self):
        b = smallness_margins(0.1, 0.5, 1.0)
        assert b.D2 == pytest.approx(-3.0383579738860946, rel=1e-13)
        assert b.D2 < 0 and not b.cond_smallness

    def test_smallness_implies_positive_margins(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            b = smallness_margins(rng.uniform(0, 0.3), rng.uniform(0.1, 2), rng.uniform(0.1, 2))
            assert b.cond_smallness == (b.D1 > 0 and b.D2 > 0)


class TestDecayEnvelope:
    def test_at_time_zero(self):
        assert decay_envelope(0.0, 0.01, 1.4, 4.4) == 0.01

    def test_zero_rate(self):
        assert decay_envelope(3.7, 0.01, 0.5, -0.5) == 0.01

    def test_frozen_exponential(self):
        # 0.01 * exp(-5.836), verified against a 40-digit evaluation
        assert decay_envelope(1.0, 0.01, 5.836, 0.0) == pytest.approx(
            2.9205012981155478e-05, rel=1e-13)

    def test_vectorized(self):
        t = np.linspace(0, 2, 5)
        env = decay_envelope(t, 0.01, 1.0, 2.0)
        assert np.allclose(env, 0.01 * np.exp(-3.0 * t), rtol=1e-15)


class TestDispersion:
    def test_stable_parameters(self):
        _, lam = max_growth(0.5, 1.0, kmax=8)
        assert lam < 0

    def test_unstable_parameters(self):
        k, lam = max_growth(3.0, 0.5, kmax=8)
        assert dispersion((1,), 3.0, 0.5) == pytest.approx(4.5, rel=1e-14)
        assert lam > 0

    def test_lattice_stable_despite_continuum_band(self):
        # lambda(k) = -0.3 k^4 + 0.2 k^2 is positive on 0 < |k| < sqrt(2/3)
        # but negative at every nonzero integer mode
        assert dispersion((1,), 1.0, 0.3) == pytest.approx(-0.1, rel=1e-12)
        for k in range(1, 9):
            assert dispersion((k,), 1.0, 0.3) < 0
        _, lam = max_growth(1.0, 0.3, kmax=8)
        assert lam == pytest.approx(-0.1, rel=1e-12)

    def test_max_growth_2d(self):
        k, lam = max_growth(3.0, 0.5, kmax=4, dim=2)
        assert len(k) == 2
        assert lam >= dispersion((1, 1), 3.0, 0.5)

    def test_sign_under_existence_condition(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            c1 = rng.uniform(0.05, 2.0)
            c2 = rng.uniform(0.05, 2.0)
            if check_conditions(c1, c2, "existence").ok:
                _, lam = max_growth(c1, c2, kmax=8)
                assert lam < 0


class TestKhennerThreshold:
    def test_equal_energies(self):
        p = PhysicalParams(d=2e-7, V=1e-22, g0=2.5e3, M_mob=4e-3,
                           c1_phys=1.0, c2_phys=1.0, u0_mass=0.0)
        assert khenner_threshold(p) == pytest.approx(2 * 2e-7, rel=1e-14)

    def test_negative_threshold_reported(self):
        p = PhysicalParams(d=1e-7, V=1e-22, g0=2.5e3, M_mob=4e-3,
                           c1_phys=1.0, c2_phys=0.1, u0_mass=0.0)
        assert khenner_threshold(p) < 0

    def test_table_extremes(self):
        assert khenner_threshold(TABLE) == pytest.approx(1.495e-5, rel=1e-12)


class TestSeriesClosedForms:
    def test_geometric_limit(self):
        check = series_closed_forms(0.5, 1, 200)
        assert check.geometric_closed == pytest.approx(2.0, rel=1e-15)
        assert check.geometric_partial == pytest.approx(2.0, rel=1e-12)

    def test_product_sum_m1(self):
        check = series_closed_forms(0.5, 1, 200)
        assert check.product_from0_closed == pytest.approx(4.0, rel=1e-15)
        assert check.product_from0_partial == pytest.approx(4.0, rel=1e-12)

    def test_product_sum_m3_converges_by_400_terms(self):
        check = series_closed_forms(0.9, 3, 400)
        assert check.product_from0_closed == pytest.approx(60000.0, rel=1e-12)
        rel = abs(check.product_from0_partial - check.product_from0_closed) / 60000.0
        assert rel < 1e-6

    def test_geometric_truncation_error_is_exact_tail(self):
        for w in (0.2, 0.5, 0.8):
            n = 10
            check = series_closed_forms(w, 1, n)
            tail = w ** (n + 1) / (1 - w)
            err = abs(check.geometric_partial - check.geometric_closed)
            assert err <= tail + 1e-14 * check.geometric_closed

    def test_product_truncation_error_bounded_by_next_term(self):
        # consecutive terms grow by w*(r+m+1)/(r+1), so the geometric tail
        # comparison uses that ratio at the first omitted index
        for w in (0.2, 0.5, 0.8):
            for m in (1, 2, 3, 4):
                n = 20     # large enough that the term ratio stays below one
                check = series_closed_forms(w, m, n)
                first_omitted = w ** (n + 1) * math.prod(range(n + 2, n + 2 + m))
                rho = w * (n + m + 2) / (n + 2)
                bound = first_omitted / (1 - rho) + 1e-13 * check.product_from0_closed
                assert abs(check.product_from0_partial - check.product_from0_closed) <= bound
                assert abs(check.product_from1_partial - check.product_from1_closed) <= bound

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            series_closed_forms(1.0, 1, 10)
        with pytest.raises(ValueError):
            series_closed_forms(0.5, 5, 10)
