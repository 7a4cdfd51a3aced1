"""Dynamic structure factor of the ideal gas, closed form.

The density-fluctuation spectrum of a classical ideal gas in thermal
equilibrium is Gaussian in the energy transfer E at fixed momentum transfer q,
peaked at the recoil energy q^2/2m.  Sign convention: E is the energy handed
to the gas, so detailed balance reads s(q,-E) = exp(-beta*E) * s(q,E).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAXWELL_BOLTZMANN = "maxwell_boltzmann"
BOSE = "bose"
FERMI = "fermi"
_STATISTICS = (MAXWELL_BOLTZMANN, BOSE, FERMI)


@dataclass(frozen=True)
class GasThermodynamics:
    """Equilibrium parameters of the background gas."""

    beta: float
    gas_mass: float
    fugacity: float = 1.0
    statistics: str = MAXWELL_BOLTZMANN

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.gas_mass > 0:
            raise ValueError(f"gas_mass must be positive, got {self.gas_mass}")
        if not self.fugacity > 0:
            raise ValueError(f"fugacity must be positive, got {self.fugacity}")
        if self.statistics not in _STATISTICS:
            raise ValueError(
                f"statistics must be one of {_STATISTICS}, got {self.statistics!r}")
        if self.statistics == BOSE and self.fugacity >= 1.0:
            raise ValueError("Bose gas requires fugacity < 1")


def s_mb(q: float, energy, gas: GasThermodynamics):
    """Spectrum of density fluctuations at momentum transfer q > 0.

    Returns sqrt(beta*m/(2*pi*q^2)) * exp(-(beta*m/(2*q^2)) * (E - q^2/2m)^2).
    Unit zeroth moment; first moment equals the recoil energy q^2/2m.
    Accepts scalar or array energy.
    """
    if not q > 0:
        raise ValueError(f"momentum transfer q must be positive, got {q}")
    if gas.statistics != MAXWELL_BOLTZMANN:
        raise ValueError("closed form implemented for the Maxwell-Boltzmann gas only")
    beta, m = gas.beta, gas.gas_mass
    recoil = q**2 / (2.0 * m)
    e = np.asarray(energy, dtype=float)
    out = np.sqrt(beta * m / (2.0 * np.pi * q**2)) * np.exp(
        -(beta * m / (2.0 * q**2)) * (e - recoil) ** 2)
    return out if out.ndim else float(out)


def sum_rule_zero(q: float, gas: GasThermodynamics) -> float:
    """Zeroth energy moment of s_mb by adaptive quadrature; equals 1."""
    import scipy.integrate

    if not q > 0:
        raise ValueError(f"momentum transfer q must be positive, got {q}")
    recoil = q**2 / (2.0 * gas.gas_mass)
    width = q / np.sqrt(gas.beta * gas.gas_mass)
    val, err = scipy.integrate.quad(
        lambda e: s_mb(q, e, gas),
        recoil - 14.0 * width, recoil + 14.0 * width,
        epsabs=0.0, epsrel=1e-12, limit=200)
    if err > 1e-8 * max(abs(val), 1.0):
        raise ArithmeticError(f"zeroth-moment quadrature did not converge: err={err:.3e}")
    return val


def sum_rule_f(q: float, gas: GasThermodynamics) -> float:
    """First energy moment of s_mb by adaptive quadrature; equals q^2/2m.

    Kept numerical on purpose: it cross-checks the closed form rather than
    restating it.
    """
    import scipy.integrate

    if not q > 0:
        raise ValueError(f"momentum transfer q must be positive, got {q}")
    recoil = q**2 / (2.0 * gas.gas_mass)
    width = q / np.sqrt(gas.beta * gas.gas_mass)
    val, err = scipy.integrate.quad(
        lambda e: e * s_mb(q, e, gas),
        recoil - 14.0 * width, recoil + 14.0 * width,
        epsabs=0.0, epsrel=1e-12, limit=200)
    if err > 1e-8 * max(abs(val), 1.0):
        raise ArithmeticError(f"first-moment quadrature did not converge: err={err:.3e}")
    return val


def statistics_prefactor(gas: GasThermodynamics) -> float:
    """Fugacity factor scaling the scattering rate: z, z/(1-z), or z/(1+z)."""
    z = gas.fugacity
    if gas.statistics == MAXWELL_BOLTZMANN:
        return z
    if gas.statistics == BOSE:
        return z / (1.0 - z)
    return z / (1.0 + z)
