"""Quadrature and boundary-matching oracle: calibration and controls."""

import math
import random

import pytest

from punctured_plane import spectrum
from punctured_plane.extensions import (
    PhysicalConfig,
    Theta0Params,
    ThetaGeneralParams,
    TimeReversalHalfParams,
)
from punctured_plane.oracle import (
    MatchingProblem,
    QuadratureConfig,
    QuadratureError,
    RootBracketError,
    integrate_interval,
    integrate_radial,
    matching_energy,
    square_integrability_probe,
    verify_domain_membership,
)
from punctured_plane.specfun import bessel_k, k_orthogonality_integral

CONFIG = PhysicalConfig()


class TestQuadrature:
    def test_exponential(self):
        result = integrate_radial(lambda r: math.exp(-r))
        assert result.value.real == pytest.approx(1.0, abs=1e-12)

    def test_zero_order_square(self):
        result = integrate_radial(lambda r: r * abs(bessel_k(0.0, r)) ** 2)
        assert result.value.real == pytest.approx(0.5, abs=1e-10)

    def test_half_order_square(self):
        result = integrate_radial(lambda r: r * abs(bessel_k(0.5, r)) ** 2)
        assert result.value.real == pytest.approx(math.pi / 4.0, abs=1e-10)

    def test_complex_integrand(self):
        result = integrate_radial(lambda r: complex(math.exp(-r), math.exp(-2 * r)))
        assert result.value == pytest.approx(complex(1.0, 0.5), abs=1e-11)

    def test_decay_scale_handles_wide_profiles(self):
        c = 0.05
        config = QuadratureConfig(decay_scale=1.0 / c)
        result = integrate_radial(lambda r: math.exp(-c * r), config)
        assert result.value.real == pytest.approx(1.0 / c, rel=1e-10)

    def test_budget_exhaustion_raises(self):
        with pytest.raises(QuadratureError):
            integrate_radial(
                lambda r: math.sin(50.0 * r) / (1.0 + r * r) + 1.0 / math.sqrt(r),
                QuadratureConfig(max_subdivisions=30),
            )

    def test_error_estimates_conservative(self):
        # estimate >= actual error in at least 95% of random closed-form cases
        rng = random.Random(11)
        hits = 0
        trials = 100
        for _ in range(trials):
            mu = rng.uniform(0.02, 0.9)
            a = complex(rng.uniform(0.4, 2.0), rng.uniform(-0.7, 0.7))
            b = complex(rng.uniform(0.4, 2.0), rng.uniform(-0.7, 0.7))
            truth = k_orthogonality_integral(mu, a, b)
            result = integrate_radial(
                lambda r, mu=mu, a=a, b=b: r * bessel_k(mu, a * r) * bessel_k(mu, b * r)
            )
            if result.error_estimate >= abs(result.value - truth):
                hits += 1
        assert hits >= 95

    def test_finite_interval(self):
        result = integrate_interval(lambda r: 1.0 / math.sqrt(r), 0.0, 1.0)
        assert result.value.real == pytest.approx(2.0, abs=1e-9)


class TestMatching:
    def test_calibration_point(self):
        energy = matching_energy(MatchingProblem(nu=0.0, phase=0.0, config=CONFIG))
        assert energy == pytest.approx(-CONFIG.kappa, rel=1e-10)

    def test_log_family_grid(self):
        for eta in (-2.5, -1.0, 0.5, 2.0):
            oracle = matching_energy(MatchingProblem(nu=0.0, phase=eta, config=CONFIG))
            closed = spectrum.energy_theta0(eta, CONFIG).energy
            assert oracle == pytest.approx(closed, rel=1e-8)

    def test_power_family_grid(self):
        for theta in (0.2, 0.5, 0.8):
            lo, hi = spectrum.window_m0(theta)
            for frac in (0.2, 0.6):
                rho = lo + frac * (hi - lo)
                oracle = matching_energy(MatchingProblem(nu=theta, phase=rho, config=CONFIG))
                closed = spectrum.energy_m0(theta, rho, CONFIG).energy
                assert oracle == pytest.approx(closed, rel=1e-8)

    def test_mirror_family(self):
        theta = 0.7
        eta = 0.3
        oracle = matching_energy(
            MatchingProblem(nu=1.0 - theta, phase=eta, config=CONFIG)
        )
        closed = spectrum.energy_m_minus1(theta, eta, CONFIG).energy
        assert oracle == pytest.approx(closed, rel=1e-8)

    def test_order_mirror_symmetry(self):
        # the nu and 1-nu problems with one phase mirror the two channels
        phase = 0.4
        e_small = matching_energy(MatchingProblem(nu=0.3, phase=phase, config=CONFIG))
        e_large = matching_energy(MatchingProblem(nu=0.7, phase=phase, config=CONFIG))
        assert e_small == pytest.approx(spectrum.energy_m0(0.3, phase, CONFIG).energy)
        assert e_large == pytest.approx(
            spectrum.energy_m_minus1(0.3, phase, CONFIG).energy
        )

    def test_absent_outside_window(self):
        theta = 0.5
        assert (
            matching_energy(MatchingProblem(nu=theta, phase=0.9 * math.pi, config=CONFIG))
            is None
        )
        assert (
            matching_energy(
                MatchingProblem(nu=1.0 - 0.9, phase=0.99 * math.pi, config=CONFIG)
            )
            is None
        )

    def test_log_family_bracket_exhaustion_distinct(self):
        # at nu = 0 a state exists for every phase, but the root escapes the
        # bracket close to -pi; that is an error, not an absence
        with pytest.raises(RootBracketError):
            matching_energy(
                MatchingProblem(nu=0.0, phase=-math.pi + 1e-4, config=CONFIG)
            )

    def test_dimensionful_configs(self):
        config = PhysicalConfig(hbar=2.0, mass=1.5, kappa=3.0)
        oracle = matching_energy(MatchingProblem(nu=0.0, phase=0.7, config=config))
        closed = spectrum.energy_theta0(0.7, config).energy
        assert oracle == pytest.approx(closed, rel=1e-8)

    def test_order_domain(self):
        with pytest.raises(ValueError):
            MatchingProblem(nu=1.0, phase=0.0)


class TestDomainMembership:
    def test_passes_per_family(self):
        cases = [
            (spectrum.energy_theta0(0.0, CONFIG), Theta0Params(0.0)),
            (spectrum.energy_m0(0.3, 0.5, CONFIG), ThetaGeneralParams(0.5, 0.1)),
            (
                spectrum.energy_m_minus1(0.3, 0.5, CONFIG),
                ThetaGeneralParams(0.1, 0.5),
            ),
            (spectrum.spectrum_half_T(0.0, CONFIG), TimeReversalHalfParams(0.0)),
        ]
        for state, params in cases:
            report = verify_domain_membership(state, params, CONFIG)
            assert report.passed, report.detail

    def test_negative_control_fails_on_log_coefficient(self):
        state = spectrum.energy_theta0(0.0, CONFIG)
        report = verify_domain_membership(
            state, Theta0Params(0.0), CONFIG, constant_override=0.7
        )
        assert not report.passed
        assert report.value_residual > 1e-2

    def test_wrong_energy_fails(self):
        state = spectrum.energy_theta0(0.3, CONFIG)
        tampered = spectrum.BoundState(
            energy=1.05 * state.energy,
            channel=state.channel,
            match_constant=state.match_constant,
        )
        report = verify_domain_membership(tampered, Theta0Params(0.3), CONFIG)
        assert not report.passed


class TestIntegrabilityProbe:
    @pytest.mark.parametrize(
        "nu,expected",
        [(0.0, True), (0.5, True), (0.9, True), (1.3, False), (1.5, False)],
    )
    def test_probe_matches_order_rule(self, nu, expected):
        assert square_integrability_probe(nu, CONFIG) is expected
