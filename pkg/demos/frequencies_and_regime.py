"""Per-trap mode frequencies and operating-regime checks.

Derives the full frequency set of a single-electron micro-trap for the two
reference configurations, compares the exact and the rounded spin-anomaly
conventions, and prints the regime report that guards every downstream
calculation in the package.

Run:  python3 demos/frequencies_and_regime.py
"""

import math

from penning_chain import AnomalyMode, TrapParams, derive_quantities, validate_regime
from penning_chain.constants import CODATA2018

TWO_PI = 2.0 * math.pi


def field_for_cyclotron(f_c: float) -> float:
    """Static field (tesla) giving the chosen cyclotron frequency (Hz)."""
    return TWO_PI * f_c * CODATA2018.m_e / CODATA2018.e


CONFIGS = {
    "A": dict(f_c=8.0e9, f_z=490.0e6, gradient=1800.0),
    "B": dict(f_c=11.0e9, f_z=730.0e6, gradient=1100.0),
}

for name, cfg in CONFIGS.items():
    params = TrapParams(
        B0=field_for_cyclotron(cfg["f_c"]),
        b=cfg["gradient"],
        omega_z_in=TWO_PI * cfg["f_z"],
        anomaly_mode=AnomalyMode.EXACT_G,
    )
    dq = derive_quantities(params)

    print(f"configuration {name}")
    print(f"  static field          {params.B0:12.6f} T")
    print(f"  field gradient        {params.b:12.1f} T/m")
    table = [
        ("magnetron", dq.omega_m),
        ("axial", dq.omega_z),
        ("cyclotron", dq.omega_c),
        ("shifted cyclotron", dq.omega_c_tilde),
        ("spin", dq.omega_s),
        ("anomaly (exact g)", dq.omega_a),
    ]
    for label, value in table:
        print(f"  {label:<20s}  {value:16.8e} rad/s  = 2 pi x {value / TWO_PI:14.6e} Hz")
    print(f"  zero-point spread     {dq.delta_z:16.8e} m")
    print(f"  gradient coupling     {dq.epsilon:16.8e} (dimensionless)")

    # the anomaly frequency is the one derived quantity that depends on the
    # convention: exact g gives omega_s - omega_c, the rounded convention
    # pins it at one part in a thousand of the cyclotron frequency
    approx = derive_quantities(
        TrapParams(
            B0=params.B0,
            b=params.b,
            omega_z_in=params.omega_z_in,
            anomaly_mode=AnomalyMode.APPROX_1E3,
        )
    )
    print(f"  anomaly (1e-3 conv.)  {approx.omega_a:16.8e} rad/s "
          f"({approx.omega_a / dq.omega_a:.4f} of exact)")

    # every validity condition is a ratio that must stay below the margin;
    # xi and the magnetron occupation enter once a chain is specified
    report = validate_regime(dq, xi=4.1e7, l_bar=2.0)
    print("  regime report:", "ok" if report.ok else f"FAILING {report.failing()}")
    for cond in report.conditions:
        print(f"    {cond.name:<28s} ratio {cond.ratio:10.3e}  {'ok' if cond.ok else 'FAIL'}")
    print()

# the derivation refuses hierarchies that are outright broken: pushing the
# axial frequency towards the cyclotron frequency drags the magnetron mode
# up underneath it and leaves no room for the ordered mode structure
print("pathological input:")
try:
    derive_quantities(
        TrapParams(
            B0=field_for_cyclotron(8.0e9),
            b=1800.0,
            omega_z_in=TWO_PI * 5.0e9,
            anomaly_mode=AnomalyMode.EXACT_G,
        )
    )
except Exception as exc:  # noqa: BLE001 - demonstration of the guard
    print(f"  {type(exc).__name__}: {exc}")
