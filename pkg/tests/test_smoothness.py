import math

import pytest

from eggmetrics import (
    ConfigurationError,
    DomainParams,
    derivative_jump,
    holder_exponent,
    regularity_scan,
)


class TestCalibration:
    def test_abs_power_three_halves(self):
        rep = holder_exponent(lambda t: abs(t) ** 1.5, order=1)
        assert rep.verdict == "holder"
        assert rep.exponent == pytest.approx(0.5, abs=0.05)
        assert rep.r_squared > 0.99

    def test_quadratic_is_smooth_through_order_three(self):
        f = lambda t: t * t
        for order in (1, 2, 3):
            rep = holder_exponent(f, order=order)
            assert rep.verdict == "smooth"
            assert not rep.jump_detected

    def test_abs_power_five_halves(self):
        # |t|^(2m) with m = 1.25: two continuous derivatives, 0.5-Hoelder second
        rep = holder_exponent(lambda t: abs(t) ** 2.5, order=2)
        assert rep.verdict == "holder"
        assert rep.exponent == pytest.approx(0.5, abs=0.05)
        # and no defect at order one
        rep1 = holder_exponent(lambda t: abs(t) ** 2.5, order=1)
        assert rep1.verdict == "smooth"

    @pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
    def test_exponent_recovery(self, alpha):
        rep = holder_exponent(lambda t: abs(t) ** (1 + alpha), order=1)
        assert rep.verdict == "holder"
        assert rep.exponent == pytest.approx(alpha, abs=0.05)

    def test_signed_power_visible_to_odd_stencil(self):
        # sign(t)|t|^2.3: odd singular part, picked up by the q = 3 stencil
        f = lambda t: math.copysign(abs(t) ** 2.3, t)
        rep = holder_exponent(f, order=2)
        assert rep.verdict == "holder"
        assert rep.exponent == pytest.approx(0.3, abs=0.05)

    def test_second_derivative_jump_detection(self):
        f = lambda t: t * t if t < 0 else 2.0 * t * t
        jump, noise = derivative_jump(f, 2)
        assert jump == pytest.approx(2.0, abs=1e-6)
        assert abs(jump) > 10 * noise
        # the order-1 report carries the next-derivative (second) jump
        rep = holder_exponent(f, order=1)
        assert rep.jump_detected
        assert rep.verdict == "jump"

    def test_no_false_jump_on_analytic_function(self):
        f = lambda t: math.sin(1.3 * t) + t ** 3
        for order in (1, 2, 3):
            rep = holder_exponent(f, order=order)
            assert not rep.jump_detected

    def test_inconclusive_on_log_periodic_wobble(self):
        def f(t):
            if t == 0:
                return 0.0
            return abs(t) ** 1.5 * (1.0 + 0.8 * math.sin(3.0 * math.log(abs(t))))

        rep = holder_exponent(f, order=1)
        assert rep.verdict in ("inconclusive", "holder")
        if rep.verdict == "holder":
            assert rep.r_squared >= 0.9


class TestSeamScans:
    def test_small_m_across_z(self):
        d = DomainParams(m=0.75, n=2)
        reps = regularity_scan(d, "Z", component="h22", seed=3, orders=(1,), n_paths=2)
        for rep in reps:
            assert rep.verdict == "holder"
            assert rep.exponent == pytest.approx(0.5, abs=0.1)

    def test_middle_stratum_is_c1_not_c2(self):
        d = DomainParams(m=2.0, n=2)
        reps = regularity_scan(d, "M0", component="h11", seed=3, orders=(0, 1),
                               n_paths=2)
        for rep in reps:
            if rep.order == 0:
                # first derivative continuous across the stratum
                assert not rep.jump_detected
            else:
                # second-derivative jump well above the pooled noise
                assert rep.jump_detected
                assert abs(rep.jump) > 10 * rep.jump_noise

    def test_integer_m_analytic_across_z(self):
        d = DomainParams(m=2.0, n=2)
        for comp in ("K2", "h22"):
            reps = regularity_scan(d, "Z", component=comp, seed=3,
                                   orders=(0, 1, 2), n_paths=1)
            for rep in reps:
                assert rep.verdict == "smooth", (comp, rep)
                assert not rep.jump_detected

    def test_fractional_m_kobayashi_defect_across_z(self):
        d = DomainParams(m=1.25, n=2)
        reps = regularity_scan(d, "Z", component="K2", seed=3, orders=(2,), n_paths=2)
        for rep in reps:
            assert rep.verdict == "holder"
            assert rep.exponent == pytest.approx(0.5, abs=0.15)

    def test_wu_tensor_is_smooth_across_z_for_large_m(self):
        # the inner-region closed form depends on z1 only through |z1|^2:
        # Wu components carry no fractional defect at Z (the Kobayashi metric does)
        d = DomainParams(m=1.25, n=2)
        reps = regularity_scan(d, "Z", component="h22", seed=3, orders=(1, 2),
                               n_paths=1)
        for rep in reps:
            assert rep.verdict == "smooth"

    def test_default_component_selection(self):
        d = DomainParams(m=1.25, n=2)
        reps = regularity_scan(d, "Z", seed=1, orders=(2,), n_paths=1)
        assert reps[0].path.startswith("Z:K2")
        d75 = DomainParams(m=0.75, n=2)
        reps = regularity_scan(d75, "Z", seed=1, orders=(1,), n_paths=1)
        assert reps[0].path.startswith("Z:h22")

    def test_junction_reports(self):
        d = DomainParams(m=2.0, n=2)
        reps = regularity_scan(d, "JUNCTION")
        orders = {(r.order, r.verdict) for r in reps}
        assert (2, "smooth") in orders
        assert (3, "jump") in orders

    def test_m0_scan_requires_large_m(self):
        with pytest.raises(ConfigurationError):
            regularity_scan(DomainParams(m=0.75, n=2), "M0", component="h11")

    def test_unknown_seam_rejected(self):
        with pytest.raises(ConfigurationError):
            regularity_scan(DomainParams(m=2.0, n=2), "W", component="h11")


def test_half_m_wu_metric_continuous_with_first_derivative_break_at_z():
    # at m = 1/2 the tensor carries an |z1| term: continuous, but the
    # first derivative jumps across Z (no C^1 claim at this exponent)
    d = DomainParams(m=0.5, n=2)
    reps = regularity_scan(d, "Z", component="h22", seed=2, orders=(0,), n_paths=1)
    rep = reps[0]
    assert rep.jump_detected  # jump statistic of the first derivative
    assert rep.verdict == "jump"
