"""Shared fixtures: reference design points and prebuilt truncated-Fock systems."""

import math

import pytest

from penning_chain.constants import CODATA2018
from penning_chain.couplings import Orientation
from penning_chain.microscopic_oracle import (
    FockTruncation,
    build_microscopic,
    synthetic_quantities,
)
from penning_chain.trap_model import AnomalyMode, TrapParams, derive_quantities

TWO_PI = 2.0 * math.pi


def field_for_cyclotron(f_c: float) -> float:
    """Axial field (T) giving cyclotron frequency f_c (Hz)."""
    return TWO_PI * f_c * CODATA2018.m_e / CODATA2018.e


def case_a_params(
    mode: AnomalyMode = AnomalyMode.EXACT_G,
    gradient: float = 1800.0,
    f_z: float = 490e6,
) -> TrapParams:
    """Reference design point A: 8 GHz cyclotron, 490 MHz axial, 1800 T/m."""
    return TrapParams(
        B0=field_for_cyclotron(8e9),
        b=gradient,
        omega_z_in=TWO_PI * f_z,
        anomaly_mode=mode,
    )


def case_b_params(mode: AnomalyMode = AnomalyMode.EXACT_G) -> TrapParams:
    """Reference design point B: 11 GHz cyclotron, 730 MHz axial, 1100 T/m."""
    return TrapParams(
        B0=field_for_cyclotron(11e9),
        b=1100.0,
        omega_z_in=TWO_PI * 730e6,
        anomaly_mode=mode,
    )


@pytest.fixture(scope="session")
def case_a():
    return derive_quantities(case_a_params())


@pytest.fixture(scope="session")
def case_a_approx():
    return derive_quantities(case_a_params(AnomalyMode.APPROX_1E3))


@pytest.fixture(scope="session")
def case_b():
    return derive_quantities(case_b_params())


@pytest.fixture(scope="session")
def strong_system():
    """Truncated-Fock pair at the exaggerated point (eps=0.05, ratio 15)."""
    dq = synthetic_quantities(0.05, 15.0)
    return build_microscopic(
        dq, 0.01 * dq.omega_z, Orientation.AXIAL_Z, FockTruncation(3, 3)
    )


@pytest.fixture(scope="session")
def dispersive_system():
    """Truncated-Fock pair at the default validation point (eps=0.025)."""
    dq = synthetic_quantities(0.025, 15.0)
    return build_microscopic(
        dq, 0.01 * dq.omega_z, Orientation.AXIAL_Z, FockTruncation(3, 3)
    )
