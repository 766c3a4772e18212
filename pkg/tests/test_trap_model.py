import math

import pytest

from conftest import TWO_PI, case_a_params, field_for_cyclotron
from penning_chain.constants import CODATA2018
from penning_chain.trap_model import (
    AnomalyMode,
    ComplexFrequency,
    HierarchyViolation,
    TrapParams,
    coulomb_scale,
    derive_quantities,
    validate_regime,
)


class TestDerivedQuantities:
    def test_reference_point_exact_mode(self, case_a):
        assert case_a.omega_c == pytest.approx(TWO_PI * 8e9, rel=1e-12)
        assert case_a.omega_z == pytest.approx(TWO_PI * 490e6, rel=1e-12)
        assert case_a.omega_m == pytest.approx(9.4287049516e7, rel=1e-9)
        assert case_a.omega_s == pytest.approx(5.0323772925e10, rel=1e-9)
        assert case_a.omega_a == pytest.approx(5.8290467263e7, rel=1e-9)
        assert case_a.omega_c_tilde == pytest.approx(5.0076553301e10, rel=1e-9)
        assert case_a.delta_z == pytest.approx(1.3711678147e-7, rel=1e-9)
        assert case_a.epsilon == pytest.approx(1.4099657571e-2, rel=1e-9)

    def test_approx_mode_anomaly(self, case_a_approx):
        assert case_a_approx.omega_a == pytest.approx(
            1e-3 * case_a_approx.omega_c, rel=1e-15
        )
        assert case_a_approx.omega_a == pytest.approx(5.0265482457e7, rel=1e-9)

    def test_modes_differ_only_in_anomaly(self, case_a, case_a_approx):
        for name in ("omega_c", "omega_z", "omega_m", "omega_s", "omega_c_tilde",
                     "delta_z", "epsilon"):
            assert getattr(case_a, name) == getattr(case_a_approx, name)
        assert case_a.omega_a != case_a_approx.omega_a

    def test_voltage_form_matches_direct_form(self):
        consts = CODATA2018
        v0, ell = 0.1, 50e-6
        omega_z = math.sqrt(2.0 * consts.e * v0 / (consts.m_e * ell**2))
        b0 = field_for_cyclotron(8e9)
        via_voltage = derive_quantities(TrapParams(B0=b0, b=100.0, V0=v0, ell=ell))
        direct = derive_quantities(TrapParams(B0=b0, b=100.0, omega_z_in=omega_z))
        assert via_voltage.omega_z == pytest.approx(direct.omega_z, rel=1e-15)
        assert via_voltage.epsilon == pytest.approx(direct.epsilon, rel=1e-15)

    def test_ground_state_amplitude_scaling(self):
        low = derive_quantities(case_a_params(f_z=200e6))
        high = derive_quantities(case_a_params(f_z=800e6))
        assert low.delta_z / high.delta_z == pytest.approx(2.0, rel=1e-12)

    def test_gradient_coupling_linear_in_gradient(self):
        one = derive_quantities(case_a_params(gradient=300.0))
        three = derive_quantities(case_a_params(gradient=900.0))
        assert three.epsilon / one.epsilon == pytest.approx(3.0, rel=1e-12)
        zero = derive_quantities(case_a_params(gradient=0.0))
        assert zero.epsilon == 0.0


class TestParameterValidation:
    def test_rejects_non_positive_field(self):
        with pytest.raises(ValueError):
            TrapParams(B0=0.0, b=0.0, omega_z_in=1e9)

    def test_rejects_negative_gradient(self):
        with pytest.raises(ValueError):
            TrapParams(B0=1.0, b=-1.0, omega_z_in=1e9)

    def test_rejects_both_axial_forms(self):
        with pytest.raises(ValueError):
            TrapParams(B0=1.0, b=0.0, omega_z_in=1e9, V0=1.0, ell=1e-4)

    def test_rejects_missing_axial_form(self):
        with pytest.raises(ValueError):
            TrapParams(B0=1.0, b=0.0)
        with pytest.raises(ValueError):
            TrapParams(B0=1.0, b=0.0, V0=1.0)


class TestStabilityAndHierarchy:
    def test_complex_radial_frequency_raises(self):
        params = TrapParams(
            B0=field_for_cyclotron(1e9), b=0.0, omega_z_in=TWO_PI * 900e6
        )
        with pytest.raises(ComplexFrequency):
            derive_quantities(params, strict=False)

    def test_broken_hierarchy_raises_when_strict(self):
        params = case_a_params(f_z=4000e6)
        with pytest.raises(HierarchyViolation):
            derive_quantities(params)

    def test_broken_hierarchy_warns_when_not_strict(self):
        params = case_a_params(f_z=4000e6)
        with pytest.warns(UserWarning, match="frequency hierarchy"):
            dq = derive_quantities(params, strict=False)
        assert dq.omega_z == pytest.approx(TWO_PI * 4000e6, rel=1e-12)

    def test_marginal_hierarchy_warns_but_passes_strict(self):
        # separation factor ~7 sits in the warn band, not the error band
        params = case_a_params(f_z=8e9 / 7.0)
        with pytest.warns(UserWarning, match="separation factor"):
            derive_quantities(params, strict=True)


class TestCoulombScale:
    def test_reference_value(self, case_a):
        assert coulomb_scale(case_a, 10e-6) == pytest.approx(4.1130809203e7, rel=1e-9)

    def test_inverse_cube_distance_law(self, case_a):
        assert coulomb_scale(case_a, 20e-6) == pytest.approx(
            coulomb_scale(case_a, 10e-6) / 8.0, rel=1e-12
        )

    def test_rejects_non_positive_distance(self, case_a):
        with pytest.raises(ValueError):
            coulomb_scale(case_a, 0.0)


class TestRegimeReport:
    def test_reference_point_is_valid(self, case_a):
        report = validate_regime(
            case_a, xi=coulomb_scale(case_a, 10e-6), l_bar=2.0
        )
        assert report.ok
        assert not report.failing()
        assert {c.name for c in report.conditions} == {
            "magnetron_below_axial",
            "axial_below_cyclotron",
            "weak_gradient",
            "magnetron_occupation",
            "cross_trap_rotating_terms",
        }

    def test_hot_magnetron_mode_fails(self, case_a):
        report = validate_regime(case_a, xi=0.0, l_bar=1e4)
        assert not report.ok
        assert "magnetron_occupation" in report.failing()

    def test_ratios_are_positive_and_finite(self, case_a):
        report = validate_regime(case_a, xi=coulomb_scale(case_a, 10e-6), l_bar=2.0)
        for condition in report.conditions:
            assert math.isfinite(condition.ratio)
            assert condition.ratio >= 0.0
