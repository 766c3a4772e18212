"""Spin-spin couplings across spacing, gradient, and frequency ratio.

Shows how the Ising and flip-flop couplings of two gradient-coupled
electrons scale with inter-trap distance and field gradient, how long a
single excitation swap takes, and where the chain becomes an isotropic
Heisenberg model.

Run:  python3 demos/coupling_landscape.py
"""

import math

import numpy as np

from penning_chain import (
    AnomalyMode,
    TrapParams,
    coupling_matrix,
    derive_quantities,
    isotropy_ratio,
    pair_coupling_strengths,
    swap_time,
    uniform_chain,
)
from penning_chain.constants import CODATA2018
from penning_chain.microscopic_oracle import synthetic_quantities

TWO_PI = 2.0 * math.pi
B0 = TWO_PI * 8.0e9 * CODATA2018.m_e / CODATA2018.e  # 8 GHz cyclotron


def quantities(gradient: float, f_z: float = 490.0e6):
    return derive_quantities(
        TrapParams(
            B0=B0,
            b=gradient,
            omega_z_in=TWO_PI * f_z,
            anomaly_mode=AnomalyMode.EXACT_G,
        )
    )


# --- couplings against spacing: both fall off as the inverse cube --------
dq = quantities(1800.0)
print("couplings vs spacing at 1800 T/m (exact-g anomaly):")
print(f"  {'d (um)':>8s} {'Jz (rad/s)':>14s} {'Jxy (rad/s)':>14s} {'swap time (s)':>14s}")
for d in (50.0e-6, 30.0e-6, 10.0e-6, 3.0e-6):
    jz, jxy = pair_coupling_strengths(dq, d)
    print(f"  {d * 1e6:8.1f} {jz:14.6e} {jxy:14.6e} {swap_time(jxy):14.6e}")

# --- couplings against gradient: both grow as the gradient squared -------
print("\ncouplings vs gradient at 10 um spacing:")
print(f"  {'b (T/m)':>8s} {'Jz (rad/s)':>14s} {'Jxy (rad/s)':>14s} {'2Jz/Jxy':>10s}")
for b in (350.0, 600.0, 1100.0, 1800.0):
    dq_b = quantities(b)
    jz, jxy = pair_coupling_strengths(dq_b, 10.0e-6)
    print(f"  {b:8.0f} {jz:14.6e} {jxy:14.6e} {2.0 * jz / jxy:10.6f}")
print("  (the anisotropy 2Jz/Jxy never moves: gradient and spacing cancel)")

# --- the isotropic Heisenberg point --------------------------------------
# in the rounded anomaly convention the anisotropy depends only on the
# cyclotron/axial frequency ratio and crosses one near 18.8
print("\nanisotropy vs cyclotron/axial frequency ratio (1e-3 anomaly conv.):")
print(f"  {'ratio':>8s} {'2Jz/Jxy':>10s}")
for ratio in (14.0, 16.0, 18.0, 18.8, 20.0, 24.0):
    dq_r = synthetic_quantities(0.01, ratio, AnomalyMode.APPROX_1E3)
    print(f"  {ratio:8.1f} {isotropy_ratio(dq_r):10.6f}")
print("  at 18.8 the chain sits within 1% of the isotropic point")

# --- a whole chain at once ------------------------------------------------
# beyond-nearest-neighbor couplings inherit the inverse-cube falloff, so
# the second neighbor is already an eight-fold weaker perturbation
cm = coupling_matrix(dq, uniform_chain(5, 10.0e-6))
print("\nflip-flop coupling matrix of a five-trap chain at 10 um (rad/s):")
with np.printoptions(precision=3, suppress=False, linewidth=100):
    print(cm.jxy)
print(f"second/first neighbor ratio: {cm.jxy[0, 2] / cm.jxy[0, 1]:.4f} (1/8 = 0.125)")
