"""Quantum momentum variance against the classical kinetic equation.

A free particle coupled to a thermal gas forgets its initial momentum
distribution at rate 4*z*gamma and settles at the equipartition value
M/beta.  The same relaxation is encoded in a classical velocity-space
advection-diffusion equation with matched drift and diffusion.  Starting
both from the narrowest state the quantum side allows (the vacuum), the
two variance histories agree to a fraction of a percent once the classical
initial condition is given the vacuum width.
"""

import numpy as np

from qbmlab import (
    MINIMAL_QBM,
    BilinearCoefficients,
    HilbertConfig,
    IntegratorConfig,
    LiouvillianSpec,
    build_liouvillian,
    fp_solve,
    gaussian_grid,
    propagate,
    stability_bound,
    vacuum_state,
)

BETA = 1.0
D_PP = 2.0
Z = 1.0
T_FINAL = 1.25

cfg = HilbertConfig(dim=40)
gamma = BETA * D_PP / (2.0 * cfg.mass)

liouv = build_liouvillian(cfg, LiouvillianSpec(
    kind=MINIMAL_QBM, beta=BETA,
    coeffs=BilinearCoefficients(d_pp=D_PP, fugacity_z=Z)))
record = propagate(vacuum_state(cfg), liouv, IntegratorConfig(
    t_final=T_FINAL, dt=2.5e-3, monitor_stride=25))

# classical twin: drift eta = 2*z*gamma, diffusion D_v = z*d_pp / M^2,
# initial variance = vacuum momentum width / M^2
eta = 2.0 * Z * gamma
d_v = Z * D_PP / cfg.mass**2
var_v0 = cfg.hbar * cfg.omega_basis / (2.0 * cfg.mass)
sigma = np.sqrt(1.0 / (BETA * cfg.mass))
grid = gaussian_grid(-8.0 * sigma, 8.0 * sigma, 200, mean=0.0, var=var_v0)

# explicit scheme: substep each quantum sample interval to honor the
# parabolic stability limit of the velocity grid
sample_dt = record.times[1] - record.times[0]
n_sub = int(np.ceil(sample_dt / (0.9 * stability_bound(grid, eta, d_v))))
traj = fp_solve(grid, eta, d_v, t_final=T_FINAL, dt=sample_dt / n_sub,
                sample_stride=n_sub)

print("time     var_p (quantum)   M^2 var_v (classical)   rel diff")
worst = 0.0
for i in range(0, len(record.times), 5):
    vq = record.var_p[i]
    vc = cfg.mass**2 * traj.var_v[i]
    rel = abs(vq - vc) / vq
    worst = max(worst, rel)
    print("%-8.3f %-17.10f %-23.10f %.2e" % (record.times[i], vq, vc, rel))

print()
print("worst pointwise disagreement: %.2e" % worst)
print("equipartition target M/beta = %.3f; quantum endpoint = %.6f"
      % (cfg.mass / BETA, record.var_p[-1]))
