"""Brute-force validation of the effective spin-chain description.

Assembles the untransformed two-electron Hamiltonian in a truncated Fock
space — spins, cyclotron and axial ladders, gradient coupling, and the
Coulomb link, with nothing adiabatically eliminated — and measures the
flip-flop and Ising couplings directly from its dynamics and spectrum.
The measured values are compared against the analytic formulas, first in
the dispersive window where they agree, then at a deliberately overdriven
gradient where the analytic description breaks down and the measurement
honestly says so.

Run:  python3 demos/oracle_validation.py
"""

import math

from penning_chain import (
    FockTruncation,
    Orientation,
    build_microscopic,
    extract_effective_jxy,
    extract_effective_jz,
)
from penning_chain.constants import CODATA2018
from penning_chain.microscopic_oracle import (
    predicted_couplings,
    run_validation_suite,
    synthetic_quantities,
)

FREQ_RATIO = 15.0  # cyclotron / axial
XI = 0.01          # Coulomb rate in units of the axial frequency
TRUNC = FockTruncation(n_max=3, k_max=3)


def mixing(dq) -> float:
    """Single-electron spin-axial mixing parameter of the gradient drive."""
    return (
        0.25
        * CODATA2018.g
        * dq.epsilon
        * (dq.omega_z / dq.omega_a)
        * math.sqrt(dq.omega_z / dq.omega_c_tilde)
    )


# --- the dispersive window: measurement meets prediction ------------------
print("measured vs analytic couplings (scaled units, axial frequency = 1):")
print(f"  {'epsilon':>8s} {'mixing':>7s} {'Jxy predicted':>14s} {'Jxy splitting':>14s} "
      f"{'Jxy fit':>12s} {'ratio':>6s}")
for eps in (0.01, 0.02, 0.025):
    dq = synthetic_quantities(eps, FREQ_RATIO)
    system = build_microscopic(dq, XI, Orientation.AXIAL_Z, TRUNC)
    _, j_pred = predicted_couplings(dq, XI)
    j_split = abs(extract_effective_jxy(system, method="splitting"))
    j_fit = extract_effective_jxy(system, method="fit")
    print(f"  {eps:8.3f} {mixing(dq):7.3f} {j_pred:14.6e} {j_split:14.6e} "
          f"{j_fit:12.6e} {j_split / j_pred:6.3f}")

dq = synthetic_quantities(0.025, FREQ_RATIO)
system = build_microscopic(dq, XI, Orientation.AXIAL_Z, TRUNC)
jz_pred, _ = predicted_couplings(dq, XI)
jz_meas = extract_effective_jz(system)
print(f"  Ising coupling at epsilon = 0.025: measured/predicted = {jz_meas / jz_pred:.4f}")

# --- convergence in the Fock cutoff ---------------------------------------
dq = synthetic_quantities(0.05, FREQ_RATIO)
print("\nsplitting-based Jxy against the axial Fock cutoff (epsilon = 0.05):")
previous = None
for k_max in (1, 2, 3, 4):
    system = build_microscopic(dq, XI, Orientation.AXIAL_Z, FockTruncation(3, k_max))
    j = abs(extract_effective_jxy(system, method="splitting"))
    step = "" if previous is None else f"  step {abs(j - previous):.3e}"
    print(f"  k_max = {k_max}: Jxy = {j:.12e}{step}")
    previous = j

# --- the overdriven point: an honest failure ------------------------------
# at epsilon = 0.05 the mixing parameter reaches 0.37, the dressed spin
# states carry a 14% axial admixture, and the analytic formula overshoots
# the true coupling by almost a third; the packaged validation suite
# reports exactly that instead of glossing over it
print(f"\nvalidation suite at the dispersive point (epsilon = 0.025):")
report = run_validation_suite()
print("\n".join("  " + line for line in report.as_text().splitlines()))

print(f"\nvalidation suite at the overdriven point (epsilon = 0.05, mixing {mixing(dq):.3f}):")
report = run_validation_suite(epsilon=0.05)
print("\n".join("  " + line for line in report.as_text().splitlines()))
