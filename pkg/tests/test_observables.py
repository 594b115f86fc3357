import math

import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from dbisol import (DbisolError, GridSpec, KineticLaw, ModelParams, Sector,
                    baby_energy_closed, baby_old_exact, baby_old_radius,
                    charge_quadrature, compute_energy_report, energy_per_charge_average,
                    energy_per_charge_average_plain, energy_quadrature,
                    large_beta_sweep, limiting_baby_slope, make_potential,
                    power_family_energy_per_charge, profile_on_grid,
                    skyrme_bps_energy_closed, skyrme_standard_energy_closed,
                    small_mu_sweep, solve_profile, target_measure)

OLD = make_potential("old-baby-power", 1.0)
STD = make_potential("skyrme-standard")
BPSPOT = make_potential("bps-potential")

# energy of the unit-coupling planar compacton, evaluated analytically
BABY_E_UNIT = math.sqrt(1.5) - math.log(2.0 + math.sqrt(3.0)) / (2.0 * math.sqrt(2.0))


def baby(**kw):
    base = dict(beta=1.0, mu=1.0, charge=1, sector=Sector.BABY2D)
    base.update(kw)
    return ModelParams(**base)


def skyrme(**kw):
    base = dict(beta=1.0, mu=1.0, charge=1, sector=Sector.SKYRME3D)
    base.update(kw)
    return ModelParams(**base)


def reference_baby_energy(model, pot):
    """Independent route: integrate the energy density over the coordinate."""
    def integrand(x):
        h = float(baby_old_exact(x, model))
        eps = model.mu ** 2 * h / model.beta ** 2
        root = math.sqrt(eps * (2 + eps)) / (1 + eps)
        kin = model.beta ** 2 * (1 - math.sqrt(1 - root * root))
        return 2 * math.pi * (kin + model.mu ** 2 * h)
    x0 = baby_old_radius(model)
    val, _ = quad(integrand, 0.0, x0, epsabs=1e-13, epsrel=1e-12, limit=300)
    return val


def reference_skyrme_energy(model, pot):
    """Independent route: field-space integral written from scratch."""
    s = model.sigma

    def integrand(xi):
        v = float(pot.evaluate(xi))
        eps = v / s
        q = 1.0 + eps
        ymag = math.sqrt(eps * (2 + eps)) / q
        if ymag == 0.0:
            return 0.0
        dens = model.beta ** 2 * (1 - 1 / q) + model.mu ** 2 * v
        return dens * math.sin(xi) ** 2 / ymag
    val, _ = quad(integrand, 0.0, math.pi, epsabs=1e-14, epsrel=1e-13, limit=300)
    return math.sqrt(2.0) * abs(model.charge) / (3.0 * math.pi * model.beta) * val


class TestBabyEnergy:
    def test_quadrature_vs_closed_and_reference(self):
        p = baby()
        prof = solve_profile(p, OLD)
        e_quad = energy_quadrature(prof, p, OLD)
        e_closed = baby_energy_closed(p)
        assert abs(e_quad - e_closed) / e_closed < 1e-6
        assert e_closed == pytest.approx(BABY_E_UNIT, abs=1e-12)
        assert e_quad == pytest.approx(reference_baby_energy(p, OLD), rel=1e-9)

    def test_linear_in_charge(self):
        assert baby_energy_closed(baby(charge=5)) == pytest.approx(5 * BABY_E_UNIT, rel=1e-12)

    def test_small_mu_closed_form(self):
        p = baby(mu=1e-3)
        assert baby_energy_closed(p) == pytest.approx(2.0 / 3.0 * 1e-3, rel=0.01)

    def test_mu_zero_rejected(self):
        with pytest.raises(DbisolError):
            baby_energy_closed(baby(mu=0.0))

    def test_energy_scale_multiplies(self):
        assert baby_energy_closed(baby(energy_scale=2.0)) == pytest.approx(2 * BABY_E_UNIT,
                                                                           rel=1e-12)


class TestSkyrmeEnergies:
    @pytest.mark.parametrize("sigma", [0.25, 1.0, 4.0])
    def test_standard_closed_vs_quadrature(self, sigma):
        p = skyrme(beta=math.sqrt(sigma))
        prof = solve_profile(p, STD)
        e_quad = energy_quadrature(prof, p, STD)
        e_closed = skyrme_standard_energy_closed(p)
        assert abs(e_quad - e_closed) / e_closed < 1e-6
        assert e_closed == pytest.approx(reference_skyrme_energy(p, STD), rel=1e-10)

    def test_standard_sigma_one_value(self):
        # at sigma = 1 the closed bracket collapses to 8/3, giving 8 sqrt2 / (9 pi)
        e = skyrme_standard_energy_closed(skyrme())
        assert e == pytest.approx(8.0 * math.sqrt(2.0) / (9.0 * math.pi), abs=1e-14)

    @pytest.mark.parametrize("sigma", [0.25, 1.0, 4.0])
    def test_bps_closed_vs_quadrature(self, sigma):
        p = skyrme(beta=math.sqrt(sigma))
        prof = solve_profile(p, BPSPOT)
        e_quad = energy_quadrature(prof, p, BPSPOT)
        e_closed = skyrme_bps_energy_closed(p)
        assert abs(e_quad - e_closed) / e_closed < 1e-6
        assert e_closed == pytest.approx(reference_skyrme_energy(p, BPSPOT), rel=1e-10)

    def test_bps_sigma_one_value(self):
        # z0 sqrt(1+z0^2) collapses to z0 (1 + pi/2) at sigma = 1
        z0 = 0.5 * math.sqrt(math.pi) * math.sqrt(math.pi + 4.0)
        expected = math.sqrt(2.0) / (6.0 * math.pi) * (z0 * (1 + math.pi / 2) - math.asinh(z0))
        got = skyrme_bps_energy_closed(skyrme())
        assert got == pytest.approx(expected, abs=1e-14)
        assert got == pytest.approx(0.336969, abs=5e-6)

    def test_standard_doubles_with_charge(self):
        assert skyrme_standard_energy_closed(skyrme(charge=2)) == pytest.approx(
            2 * skyrme_standard_energy_closed(skyrme()), rel=1e-14)

    def test_bps_triples_with_charge(self):
        assert skyrme_bps_energy_closed(skyrme(charge=3)) == pytest.approx(
            3 * skyrme_bps_energy_closed(skyrme()), rel=1e-14)


class TestCharge:
    def test_baby_unit(self):
        p = baby()
        prof = solve_profile(p, OLD)
        assert charge_quadrature(prof, p) == pytest.approx(1.0, abs=1e-6)

    def test_skyrme_charge_three(self):
        p = skyrme(charge=3)
        prof = solve_profile(p, STD)
        assert charge_quadrature(prof, p) == pytest.approx(3.0, abs=1e-6)

    def test_negative_charge(self):
        p = baby(charge=-2)
        prof = solve_profile(p, OLD)
        assert charge_quadrature(prof, p) == pytest.approx(-2.0, abs=1e-6)

    def test_truncated_profile_partial_charge(self):
        p = baby()
        x_half = brentq(lambda x: float(baby_old_exact(x, p)) - 0.5, 0.0, baby_old_radius(p))
        prof = profile_on_grid(lambda x: baby_old_exact(x, p), p, OLD,
                               count=300, extent=x_half)
        assert charge_quadrature(prof, p) == pytest.approx(0.5, abs=1e-8)


class TestAverages:
    def test_baby_average_matches_quadrature(self):
        for p in (baby(), baby(beta=0.7, mu=1.4, charge=2)):
            prof = solve_profile(p, OLD)
            per = energy_quadrature(prof, p, OLD) / abs(p.charge)
            assert abs(energy_per_charge_average(p, OLD) - per) / per < 1e-8

    def test_baby_average_against_independent_integral(self):
        # <sqrt(h^2 + 2h)> with flat unit measure, times mu/sqrt(2)
        val, _ = quad(lambda h: math.sqrt(h * h + 2 * h), 0.0, 1.0,
                      epsabs=1e-14, epsrel=1e-13)
        assert energy_per_charge_average(baby(), OLD) == pytest.approx(val / math.sqrt(2.0),
                                                                       rel=1e-10)
        assert val / math.sqrt(2.0) == pytest.approx(BABY_E_UNIT, abs=1e-12)

    @pytest.mark.parametrize("pot,sigma", [(STD, 1.0), (STD, 4.0), (BPSPOT, 1.0),
                                           (BPSPOT, 0.25)])
    def test_skyrme_average_matches_quadrature(self, pot, sigma):
        p = skyrme(beta=math.sqrt(sigma))
        prof = solve_profile(p, pot)
        per = energy_quadrature(prof, p, pot) / abs(p.charge)
        assert abs(energy_per_charge_average(p, pot) - per) / per < 1e-8

    def test_plain_prefactor_ratio(self):
        # the plain sqrt(2) mu convention differs by the fixed chart factors
        b = energy_per_charge_average(baby(), OLD)
        assert energy_per_charge_average_plain(baby(), OLD) == pytest.approx(2 * b, rel=1e-12)
        s = energy_per_charge_average(skyrme(), BPSPOT)
        assert energy_per_charge_average_plain(skyrme(), BPSPOT) == pytest.approx(6 * s,
                                                                                  rel=1e-12)

    def test_mu_zero_warns_and_returns_zero(self):
        with pytest.warns(UserWarning, match="no soliton"):
            assert energy_per_charge_average(baby(mu=0.0), OLD) == 0.0

    def test_power_family_oracle(self):
        p = baby(kinetic_law=KineticLaw.power(1.0))
        got = power_family_energy_per_charge(p, OLD)
        assert got == pytest.approx(4.0 / 3.0, rel=1e-12)
        # dual route: quadrature over the solved power-family compacton
        prof = solve_profile(p, OLD)
        per = energy_quadrature(prof, p, OLD) / abs(p.charge)
        assert abs(got - per) / per < 1e-8

    def test_power_family_scales_with_mu(self):
        p = baby(mu=2.0, kinetic_law=KineticLaw.power(1.0))
        assert power_family_energy_per_charge(p, OLD) == pytest.approx(8.0 / 3.0, rel=1e-12)

    def test_power_family_rejects_dbi(self):
        with pytest.raises(DbisolError):
            power_family_energy_per_charge(baby(), OLD)


class TestLinearity:
    @pytest.mark.parametrize("sector,pot,law", [
        (Sector.BABY2D, OLD, KineticLaw.dbi()),
        (Sector.BABY2D, OLD, KineticLaw.power(1.0)),
        (Sector.BABY2D, OLD, KineticLaw.power(0.75)),
        (Sector.SKYRME3D, STD, KineticLaw.dbi()),
        (Sector.SKYRME3D, BPSPOT, KineticLaw.dbi()),
    ])
    def test_energy_per_charge_constant(self, sector, pot, law):
        per = []
        for n in range(1, 6):
            p = ModelParams(1.0, 1.0, n, sector, law)
            prof = solve_profile(p, pot, GridSpec(count=400))
            per.append(energy_quadrature(prof, p, pot) / n)
        spread = (max(per) - min(per)) / per[0]
        assert spread < 1e-8


class TestSweeps:
    def test_small_mu_slope(self):
        res = small_mu_sweep(baby(), [1e-2, 1e-3, 1e-4])
        assert res.slope == pytest.approx(2.0 / 3.0, rel=0.01)

    def test_small_mu_slope_charge_four(self):
        res = small_mu_sweep(baby(charge=4), [1e-2, 1e-3, 1e-4])
        assert res.slope == pytest.approx(8.0 / 3.0, rel=0.01)

    def test_small_mu_needs_three_points(self):
        with pytest.raises(DbisolError):
            small_mu_sweep(baby(), [0.5])

    def test_large_beta_exponent(self):
        res = large_beta_sweep(baby(), [10.0, 100.0, 1000.0])
        assert res.exponent == pytest.approx(-2.0, abs=0.1)

    def test_large_beta_distance_ratio(self):
        res = large_beta_sweep(baby(), [10.0, 100.0, 1000.0])
        ratio = res.distances[0] / res.distances[1]
        assert 80.0 < ratio < 125.0

    def test_large_beta_needs_three_points(self):
        with pytest.raises(DbisolError):
            large_beta_sweep(baby(), [10.0, 100.0])

    def test_limiting_slope_value(self):
        assert limiting_baby_slope(1.0, OLD, baby()) == pytest.approx(-4.0 * math.pi,
                                                                      abs=1e-12)


class TestEnergyReport:
    def test_json_keys(self):
        p = baby()
        prof = solve_profile(p, OLD, GridSpec(count=400))
        rep = compute_energy_report(prof, p, OLD)
        d = rep.to_json_dict()
        assert set(d) == {"energy_quadrature", "energy_closed_form",
                          "energy_per_charge_avg", "charge",
                          "rel_discrepancy_closed", "rel_discrepancy_avg"}
        assert d["rel_discrepancy_closed"] < 1e-6
        assert d["rel_discrepancy_avg"] < 1e-8
        assert d["charge"] == pytest.approx(1.0, abs=1e-6)

    def test_no_closed_form_for_generic_potential(self):
        pot = make_potential("old-baby-power", 1.5)
        p = baby()
        prof = solve_profile(p, pot, GridSpec(count=400))
        rep = compute_energy_report(prof, p, pot)
        assert rep.energy_closed_form is None
        assert rep.rel_discrepancy_closed is None
        assert rep.rel_discrepancy_avg < 1e-8


class TestMeasureConsistency:
    def test_explicit_measure_argument(self):
        meas = target_measure(Sector.BABY2D)
        assert energy_per_charge_average(baby(), OLD, meas) == pytest.approx(
            energy_per_charge_average(baby(), OLD), rel=1e-14)
