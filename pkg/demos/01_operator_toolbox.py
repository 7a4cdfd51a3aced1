"""Tour of the finite-dimensional operator toolbox.

Position and momentum live on a truncated number basis, so the canonical
commutator cannot be proportional to the identity everywhere: the last
diagonal entry carries a large negative compensation that keeps the trace
at zero.  This script builds the operators, shows where the truncation
lives, and prepares a few standard states.
"""

import numpy as np

from qbmlab import (
    HilbertConfig,
    build_position,
    build_momentum,
    build_hamiltonian,
    coherent_state,
    squeezed_state,
    thermal_state,
    expectation,
    purity,
)

cfg = HilbertConfig(dim=12)
x = build_position(cfg)
p = build_momentum(cfg)

comm = x @ p - p @ x
diag = np.diag(comm).imag

print("canonical commutator on a %d-level truncation" % cfg.dim)
print("  diagonal / hbar:", np.round(diag / cfg.hbar, 10))
print("  trace:", np.trace(comm))
print()
print("every entry equals i*hbar except the corner, which is -i*hbar*(dim-1);")
print("expectation values of states with negligible weight on the top level")
print("never see the defect.")
print()

# A coherent state displaced along both quadratures.
alpha = 1.0 + 0.5j
rho = coherent_state(cfg, alpha)
print("coherent state alpha = %s" % alpha)
print("  <x> = %.6f   (expected %.6f)" % (
    expectation(rho, x).real, np.sqrt(2.0) * alpha.real))
print("  <p> = %.6f   (expected %.6f)" % (
    expectation(rho, p).real, np.sqrt(2.0) * alpha.imag))
print("  purity = %.12f" % purity(rho))
print()

# Squeezing trades position variance against momentum variance.
for r in (-0.5, 0.0, 0.5):
    rho = squeezed_state(cfg, r)
    var_x = expectation(rho, x @ x).real - expectation(rho, x).real ** 2
    var_p = expectation(rho, p @ p).real - expectation(rho, p).real ** 2
    print("squeezed r=%+.1f   var_x = %.6f   var_p = %.6f   product = %.6f"
          % (r, var_x, var_p, var_x * var_p))
print()
print("the uncertainty product stays at the Heisenberg floor of 0.25")
print("while the individual variances move by exp(±2r).")
print()

# Thermal states approach the vacuum as the occupation goes to zero.
ham = build_hamiltonian(cfg, "harmonic")
for n_bar in (0.05, 0.5, 2.0):
    rho = thermal_state(cfg, n_bar)
    print("thermal n_bar=%.2f   <H> = %.6f   purity = %.6f"
          % (n_bar, expectation(rho, ham).real, purity(rho)))
