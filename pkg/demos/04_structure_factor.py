"""Dynamic structure factor of the ideal gas and its exact properties.

The structure factor is the energy-resolved probability for the gas to
absorb momentum q and energy E in a single collision.  Two identities pin
it down: detailed balance ties energy gain to energy loss through a
Boltzmann factor, and the zeroth and first frequency moments integrate to
1 and to the recoil energy q^2/2m.  Quantum statistics enter only through
a fugacity-dependent prefactor on the scattering rate.
"""

import numpy as np

from qbmlab import (
    BOSE,
    FERMI,
    MAXWELL_BOLTZMANN,
    GasThermodynamics,
    friction_ratio,
    s_mb,
    statistics_prefactor,
    sum_rule_f,
    sum_rule_zero,
)

gas = GasThermodynamics(beta=1.0, gas_mass=1.0)

print("detailed balance: S(q,-E) = exp(-beta*E) * S(q,E)")
q = 1.5
for energy in (0.5, 1.0, 3.0):
    lhs = s_mb(q, -energy, gas)
    rhs = np.exp(-gas.beta * energy) * s_mb(q, energy, gas)
    print("  E = %.1f   S(q,-E) = %.6e   exp(-bE) S(q,E) = %.6e   rel %.1e"
          % (energy, lhs, rhs, abs(lhs - rhs) / rhs))
print()

print("sum rules (normalization and recoil)")
for q in (0.2, 1.0, 5.0):
    s0 = sum_rule_zero(q, gas)
    sf = sum_rule_f(q, gas)
    recoil = q * q / (2.0 * gas.gas_mass)
    print("  q = %-4.1f  zeroth = %.12f   f-sum = %.6e  (recoil %.6e)"
          % (q, s0, sf, recoil))
print()

print("quantum statistics rescale the collision rate through the fugacity")
print("  %-8s %-22s %-22s" % ("z", "prefactor/z", "friction ratio"))
for z in (0.01, 0.3, 0.9):
    row = []
    for stat in (MAXWELL_BOLTZMANN, BOSE, FERMI):
        g = GasThermodynamics(beta=1.0, gas_mass=1.0, fugacity=z,
                              statistics=stat)
        row.append(statistics_prefactor(g) / z)
    g_bose = GasThermodynamics(1.0, 1.0, z, statistics=BOSE)
    g_fermi = GasThermodynamics(1.0, 1.0, z, statistics=FERMI)
    print("  %-8.2f mb/bose/fermi = %.4f / %.4f / %.4f   bose %.2f fermi %.2f"
          % (z, row[0], row[1], row[2],
             friction_ratio(g_bose), friction_ratio(g_fermi)))
print()
print("bosonic enhancement raises the rate above the classical value,")
print("fermionic blocking lowers it; the friction ratio is exactly 1 -+ z.")
