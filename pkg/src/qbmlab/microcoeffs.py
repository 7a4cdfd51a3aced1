"""Microscopic transport coefficients from gas-scattering kernels.

The momentum-diffusion coefficient of the weak-coupling Brownian limit is a
radial quadrature of the squared scattering amplitude against the thermal
kernel of the gas:

    D_pp = (2/3) * (pi^2 m^2 / (beta hbar)) * Integral d^3q |t(q)|^2 q e^{-beta q^2 / 8m}

with the angular integral contributing 4*pi.  Position diffusion and friction
follow from D_pp by the fluctuation-dissipation-consistent relations

    D_xx = (beta hbar / 4M)^2 * D_pp,      gamma = (beta / 2M) * D_pp,

which saturate the complete-positivity bound D_xx*D_pp - D_xp^2 >= (gamma hbar/2)^2
exactly, i.e. chi = D_xx*M/(beta hbar^2 gamma) = 1/8.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .structure_factor import BOSE, FERMI, MAXWELL_BOLTZMANN, GasThermodynamics

USER = "user"
EQ_MICRO = "microscopic"


@dataclass(frozen=True)
class TMatrixModel:
    """Squared scattering amplitude |t(q)|^2 as a function of q >= 0.

    kind "constant": |t(q)|^2 = t0^2.
    kind "gaussian": |t(q)|^2 = t0^2 * exp(-q^2 / (2 sigma_q^2)).
    """

    kind: str
    t0: float
    sigma_q: float | None = None

    def __post_init__(self):
        if self.kind not in ("constant", "gaussian"):
            raise ValueError(f"unknown t-matrix kind {self.kind!r}")
        if self.kind == "gaussian" and not (self.sigma_q or 0) > 0:
            raise ValueError("gaussian t-matrix requires sigma_q > 0")

    def squared(self, q):
        q = np.asarray(q, dtype=float)
        if np.any(q < 0):
            raise ValueError("momentum transfer must be nonnegative")
        if self.kind == "constant":
            out = np.full_like(q, self.t0**2)
        else:
            out = self.t0**2 * np.exp(-(q**2) / (2.0 * self.sigma_q**2))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class CoefficientSet:
    """Transport coefficients of the bilinear generator, with provenance."""

    d_pp: float
    d_xx: float
    d_xp: float
    gamma: float
    mu: float
    provenance: str = USER

    def __post_init__(self):
        vals = (self.d_pp, self.d_xx, self.d_xp, self.gamma, self.mu)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"coefficients must be finite, got {vals}")
        if self.d_pp < 0 or self.d_xx < 0:
            raise ValueError("diffusion coefficients d_pp, d_xx must be nonnegative")


def cutoff_momentum(gas: GasThermodynamics) -> float:
    """Upper quadrature limit; kernel tail beyond it is < 1e-16 of the peak."""
    return 12.0 * np.sqrt(8.0 * gas.gas_mass / gas.beta)


def compute_dpp(tmat: TMatrixModel, gas: GasThermodynamics, mass_test: float,
                hbar: float = 1.0) -> CoefficientSet:
    """Momentum diffusion by radial quadrature, with derived d_xx, gamma, mu.

    mu is the friction-consistent coefficient gamma/2 of the anticommutator
    correction used by the single-generator assembly; the bilinear form of the
    resulting generator carries no anticommutator term of its own.
    """
    if not mass_test > 0 or not hbar > 0:
        raise ValueError("test mass and hbar must be positive")
    alpha = gas.beta / (8.0 * gas.gas_mass)
    val, err = scipy.integrate.quad(
        lambda q: q**3 * tmat.squared(q) * np.exp(-alpha * q**2),
        0.0, cutoff_momentum(gas), epsabs=0.0, epsrel=1e-12, limit=200)
    if not np.isfinite(val) or (val != 0.0 and err > 1e-10 * abs(val)):
        raise ArithmeticError(f"radial quadrature did not converge: val={val}, err={err}")
    prefactor = (8.0 * np.pi**3 / 3.0) * gas.gas_mass**2 / (gas.beta * hbar)
    d_pp = prefactor * val
    gamma = gas.beta / (2.0 * mass_test) * d_pp
    d_xx = (gas.beta * hbar / (4.0 * mass_test)) ** 2 * d_pp
    return CoefficientSet(d_pp=d_pp, d_xx=d_xx, d_xp=0.0, gamma=gamma,
                          mu=0.5 * gamma, provenance=EQ_MICRO)


def dpp_constant_closed_form(t0: float, gas: GasThermodynamics, hbar: float = 1.0) -> float:
    """Closed form for a constant amplitude: (256 pi^3 / 3) m^4 t0^2 / (hbar beta^3)."""
    return 256.0 * np.pi**3 / 3.0 * gas.gas_mass**4 * t0**2 / (hbar * gas.beta**3)


def cp_margin(c: CoefficientSet, hbar: float = 1.0) -> float:
    """Signed slack of the complete-positivity bound; >= 0 iff satisfiable."""
    return c.d_xx * c.d_pp - c.d_xp**2 - (c.gamma * hbar / 2.0) ** 2


def cp_check(c: CoefficientSet, hbar: float = 1.0) -> tuple[bool, float]:
    """(satisfied, margin): positivity of both diffusions plus the determinant bound."""
    margin = cp_margin(c, hbar)
    ok = c.d_pp > 0 and c.d_xx > 0 and margin >= 0.0
    return ok, margin


def chi_of(c: CoefficientSet, gas: GasThermodynamics, mass_test: float,
           hbar: float = 1.0) -> float:
    """Position-diffusion strength in units of beta*hbar^2*gamma/M; 1/8 saturates CP."""
    if c.gamma == 0:
        raise ValueError("chi undefined at zero friction")
    return c.d_xx * mass_test / (gas.beta * hbar**2 * c.gamma)


def friction_ratio(gas: GasThermodynamics) -> float:
    """Classical-to-quantum-statistics friction ratio: 1, 1-z, or 1+z."""
    if gas.statistics == MAXWELL_BOLTZMANN:
        return 1.0
    if gas.statistics == BOSE:
        return 1.0 - gas.fugacity
    if gas.statistics == FERMI:
        return 1.0 + gas.fugacity
    raise ValueError(f"unknown statistics {gas.statistics!r}")
