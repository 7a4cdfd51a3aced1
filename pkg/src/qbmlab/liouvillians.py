"""Generators drho/dt = L[rho] for the quantum Brownian motion family.

Four builders share one bilinear core:

* damped-commutator generator (friction + momentum diffusion only), the
  high-temperature form that is NOT completely positive;
* general bilinear generator with friction, three diffusion coefficients and
  an anticommutator Hamiltonian correction, subject to the CP bound
  D_xx*D_pp - D_xp^2 >= (gamma*hbar/2)^2;
* minimal completely positive generator, whose d_xx and gamma derive from the
  user-supplied d_pp (equivalently assembled from a single thermal-scale jump
  operator);
* gas-collision generator built from exponential shift/weight sandwiches over
  a signed momentum-transfer quadrature grid.

Every generator annihilates the trace and preserves Hermiticity exactly at
finite truncation, because each term is a commutator or a sandwich of
truncated matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .microcoeffs import TMatrixModel
from .operators import (HilbertConfig, build_annihilator, build_hamiltonian,
                        build_momentum, build_position, thermal_wavelength)

CALDEIRA_LEGGETT = "caldeira_leggett"
BILINEAR = "bilinear"
MINIMAL_QBM = "minimal_qbm"
BOLTZMANN_COLLISION = "boltzmann_collision"

DOUBLE_COMMUTATOR = "double_commutator"
SINGLE_GENERATOR = "single_generator"

# G(q) = exp(-(beta/4M) q p) must stay representable; cap the exponent norm.
_COLLISION_EXPONENT_CAP = 5.0


@dataclass(frozen=True)
class BilinearCoefficients:
    """Coefficients of the bilinear generator; fugacity_z scales the dissipator."""

    gamma: float = 0.0
    d_pp: float = 0.0
    d_xx: float = 0.0
    d_xp: float = 0.0
    mu: float = 0.0
    fugacity_z: float = 1.0

    def __post_init__(self):
        vals = (self.gamma, self.d_pp, self.d_xx, self.d_xp, self.mu, self.fugacity_z)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"coefficients must be finite, got {vals}")
        if self.d_pp < 0 or self.d_xx < 0:
            raise ValueError("diffusion coefficients d_pp, d_xx must be nonnegative")
        if self.fugacity_z < 0:
            raise ValueError("fugacity_z must be nonnegative")


@dataclass(frozen=True)
class CollisionParameters:
    """Gas and quadrature data for the collision generator.

    q_nodes/q_weights discretize the radial momentum-transfer integral on
    (0, q_max]; the weights carry the 3D radial measure q^2, as produced by
    radial_grid().  The builder sums each node with both signs of q.
    """

    gas_mass: float
    beta: float
    fugacity_z: float
    tmatrix: TMatrixModel
    q_nodes: np.ndarray
    q_weights: np.ndarray
    q_max: float

    def __post_init__(self):
        object.__setattr__(self, "q_nodes", np.asarray(self.q_nodes, dtype=float))
        object.__setattr__(self, "q_weights", np.asarray(self.q_weights, dtype=float))
        if not self.gas_mass > 0 or not self.beta > 0:
            raise ValueError("gas_mass and beta must be positive")
        if not self.fugacity_z >= 0:
            raise ValueError("fugacity_z must be nonnegative")
        if self.q_nodes.size == 0:
            raise ValueError("empty momentum-transfer grid")
        if self.q_nodes.shape != self.q_weights.shape:
            raise ValueError("q_nodes and q_weights must have matching shapes")
        if np.any(self.q_nodes <= 0) or np.any(self.q_nodes > self.q_max):
            raise ValueError("q_nodes must lie in (0, q_max]")
        if np.any(self.q_weights <= 0):
            raise ValueError("q_weights must be positive")


def radial_grid(q_max: float, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on (0, q_max) with the radial q^2 measure folded in."""
    if not q_max > 0 or n_nodes < 1:
        raise ValueError("q_max must be positive and n_nodes >= 1")
    t, w = np.polynomial.legendre.leggauss(n_nodes)
    nodes = 0.5 * q_max * (t + 1.0)
    weights = 0.5 * q_max * w * nodes**2
    return nodes, weights


@dataclass(frozen=True)
class LiouvillianSpec:
    """Which generator to build, and with what physics."""

    kind: str
    hamiltonian_kind: str = "free"
    omega_trap: float | None = None
    beta: float | None = None
    coeffs: BilinearCoefficients | None = None
    collision: CollisionParameters | None = None
    assembly: str = DOUBLE_COMMUTATOR


class Liouvillian:
    """Immutable superoperator: callable on a density matrix."""

    def __init__(self, cfg: HilbertConfig, kind: str, apply_fn,
                 coeffs: BilinearCoefficients | None = None,
                 collision: CollisionParameters | None = None):
        self.cfg = cfg
        self.kind = kind
        self.coeffs = coeffs
        self.collision = collision
        self._apply = apply_fn

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        return self._apply(rho)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return self._apply(rho)


def _bilinear_apply_fn(cfg: HilbertConfig, coeffs: BilinearCoefficients,
                       hamiltonian_kind: str, omega_trap: float | None):
    hbar = cfg.hbar
    h = build_hamiltonian(cfg, hamiltonian_kind, omega_trap)
    x = build_position(cfg)
    p = build_momentum(cfg)
    xp_anti = x @ p + p @ x
    gamma, d_pp, d_xx, d_xp = coeffs.gamma, coeffs.d_pp, coeffs.d_xx, coeffs.d_xp
    mu, z = coeffs.mu, coeffs.fugacity_z

    def apply(rho):
        out = (-1j / hbar) * (h @ rho - rho @ h)
        if z == 0.0:
            return out
        dis = np.zeros_like(out)
        comm_x = x @ rho - rho @ x
        comm_p = p @ rho - rho @ p
        if mu != 0.0:
            dis += (-1j / hbar) * mu * (rho @ xp_anti - xp_anti @ rho)
        if gamma != 0.0:
            anti_p = p @ rho + rho @ p
            dis += (-1j / hbar) * gamma * (x @ anti_p - anti_p @ x)
        if d_pp != 0.0:
            dis += (-d_pp / hbar**2) * (x @ comm_x - comm_x @ x)
        if d_xx != 0.0:
            dis += (-d_xx / hbar**2) * (p @ comm_p - comm_p @ p)
        if d_xp != 0.0:
            # symmetric assembly: Hermiticity-safe form of the cross term
            dis += (d_xp / hbar**2) * ((p @ comm_x - comm_x @ p)
                                       + (x @ comm_p - comm_p @ x))
        return out + z * dis

    return apply


def build_bilinear_lindblad(cfg: HilbertConfig, spec: LiouvillianSpec) -> Liouvillian:
    """General bilinear generator with user-supplied coefficients."""
    if spec.kind != BILINEAR:
        raise ValueError(f"spec kind {spec.kind!r} is not {BILINEAR!r}")
    if spec.coeffs is None:
        raise ValueError("bilinear generator requires coefficients")
    fn = _bilinear_apply_fn(cfg, spec.coeffs, spec.hamiltonian_kind, spec.omega_trap)
    return Liouvillian(cfg, BILINEAR, fn, coeffs=spec.coeffs)


def build_caldeira_leggett(cfg: HilbertConfig, spec: LiouvillianSpec) -> Liouvillian:
    """Friction + momentum diffusion d_pp = 2*M*gamma/beta, no position diffusion.

    Delegates to the bilinear core, so it agrees with build_bilinear_lindblad
    at the same coefficients bit for bit.
    """
    if spec.kind != CALDEIRA_LEGGETT:
        raise ValueError(f"spec kind {spec.kind!r} is not {CALDEIRA_LEGGETT!r}")
    if spec.coeffs is None or spec.beta is None:
        raise ValueError("caldeira_leggett requires coeffs.gamma and beta")
    if not spec.beta > 0:
        raise ValueError(f"beta must be positive, got {spec.beta}")
    if spec.coeffs.gamma < 0:
        raise ValueError("gamma must be nonnegative")
    c = spec.coeffs
    if c.d_pp != 0.0 or c.d_xx != 0.0 or c.d_xp != 0.0 or c.mu != 0.0:
        raise ValueError("caldeira_leggett takes only gamma (+ fugacity_z); "
                         "diffusion coefficients are derived")
    derived = BilinearCoefficients(
        gamma=c.gamma, d_pp=2.0 * cfg.mass * c.gamma / spec.beta,
        d_xx=0.0, d_xp=0.0, mu=0.0, fugacity_z=c.fugacity_z)
    fn = _bilinear_apply_fn(cfg, derived, spec.hamiltonian_kind, spec.omega_trap)
    return Liouvillian(cfg, CALDEIRA_LEGGETT, fn, coeffs=derived)


def minimal_coefficients(cfg: HilbertConfig, d_pp: float, beta: float,
                         fugacity_z: float = 1.0) -> BilinearCoefficients:
    """Derive the completely positive coefficient set from d_pp alone.

    gamma = (beta/2M) d_pp and d_xx = (beta hbar/4M)^2 d_pp saturate the CP
    bound; the bilinear form carries no anticommutator correction (mu = 0),
    which is exactly what the single-generator assembly reduces to.
    """
    if d_pp < 0:
        raise ValueError(f"d_pp must be nonnegative, got {d_pp}")
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    return BilinearCoefficients(
        gamma=beta * d_pp / (2.0 * cfg.mass),
        d_pp=d_pp,
        d_xx=(beta * cfg.hbar / (4.0 * cfg.mass)) ** 2 * d_pp,
        d_xp=0.0, mu=0.0, fugacity_z=fugacity_z)


def build_minimal_qbm(cfg: HilbertConfig, spec: LiouvillianSpec) -> Liouvillian:
    """Completely positive Brownian generator from d_pp and fugacity_z only.

    assembly selects between the algebraically identical routes:
    DOUBLE_COMMUTATOR builds the three bilinear terms; SINGLE_GENERATOR builds
    the jump-operator sandwich from the thermal-scale annihilator plus the
    anticommutator Hamiltonian correction with coefficient z*gamma/2.
    """
    if spec.kind != MINIMAL_QBM:
        raise ValueError(f"spec kind {spec.kind!r} is not {MINIMAL_QBM!r}")
    if spec.coeffs is None or spec.beta is None:
        raise ValueError("minimal_qbm requires coeffs.d_pp and beta")
    c = spec.coeffs
    if c.gamma != 0.0 or c.d_xx != 0.0 or c.d_xp != 0.0 or c.mu != 0.0:
        raise ValueError("minimal_qbm takes only d_pp (+ fugacity_z); "
                         "gamma and d_xx are derived")
    derived = minimal_coefficients(cfg, c.d_pp, spec.beta, c.fugacity_z)

    if spec.assembly == DOUBLE_COMMUTATOR:
        fn = _bilinear_apply_fn(cfg, derived, spec.hamiltonian_kind, spec.omega_trap)
        return Liouvillian(cfg, MINIMAL_QBM, fn, coeffs=derived)
    if spec.assembly != SINGLE_GENERATOR:
        raise ValueError(f"unknown assembly {spec.assembly!r}")

    hbar = cfg.hbar
    lam2 = thermal_wavelength(cfg, spec.beta) ** 2
    z, d_pp = derived.fugacity_z, derived.d_pp
    x = build_position(cfg)
    p = build_momentum(cfg)
    # Hamiltonian correction z*d_pp*lam^2/(4 hbar^2) * {x,p} = (z*gamma/2) {x,p}
    h_eff = build_hamiltonian(cfg, spec.hamiltonian_kind, spec.omega_trap) \
        + z * d_pp * lam2 / (4.0 * hbar**2) * (x @ p + p @ x)
    jump = build_annihilator(cfg, spec.beta)
    jdag = jump.conj().T
    jdj = jdag @ jump
    rate = z * d_pp * lam2 / hbar**2

    def apply(rho):
        out = (-1j / hbar) * (h_eff @ rho - rho @ h_eff)
        out += rate * (jump @ rho @ jdag - 0.5 * (jdj @ rho + rho @ jdj))
        return out

    return Liouvillian(cfg, MINIMAL_QBM, apply, coeffs=derived)


def collision_prefactor(params: CollisionParameters, hbar: float) -> float:
    """Constant in front of the collision sum: 8 pi^3 m^2 / (3 beta hbar).

    Calibrated so that the small-q expansion of the signed-q sandwich sum
    reproduces the one-dimensional momentum diffusion coefficient of
    compute_dpp with the same amplitude model (see collision_dpp).
    """
    return 8.0 * np.pi**3 * params.gas_mass**2 / (3.0 * params.beta * hbar)


def collision_dpp(params: CollisionParameters, hbar: float) -> float:
    """Momentum diffusion implied by the collision quadrature grid itself.

    Equals the radial-integral d_pp of compute_dpp restricted to (0, q_max]
    and evaluated with this grid's nodes; the collision generator converges to
    the minimal generator with exactly this coefficient as q_max shrinks.
    """
    kern = params.tmatrix.squared(params.q_nodes) * np.exp(
        -params.beta * params.q_nodes**2 / (8.0 * params.gas_mass))
    return collision_prefactor(params, hbar) * float(
        np.sum(params.q_weights * params.q_nodes * kern))


def build_boltzmann_collision(cfg: HilbertConfig, spec: LiouvillianSpec) -> Liouvillian:
    """Collision generator: momentum-kick sandwiches over the signed q grid.

    Each node contributes, for both signs of q,
        U(q) G(q) rho G(q) U(q)^dag - (1/2){G(q)^2, rho}
    with U(q) = exp((i/hbar) q x) a momentum shift and G(q) = exp(-(beta/4M) q p)
    the thermal weight; all exponentials are cached at construction.
    """
    if spec.kind != BOLTZMANN_COLLISION:
        raise ValueError(f"spec kind {spec.kind!r} is not {BOLTZMANN_COLLISION!r}")
    if spec.collision is None:
        raise ValueError("boltzmann_collision requires CollisionParameters")
    par = spec.collision
    hbar = cfg.hbar
    x = build_position(cfg)
    p = build_momentum(cfg)
    h = build_hamiltonian(cfg, spec.hamiltonian_kind, spec.omega_trap)

    p_norm = np.linalg.norm(p, 2)
    exponent = par.beta * par.q_max * p_norm / (4.0 * cfg.mass)
    if exponent > _COLLISION_EXPONENT_CAP:
        raise ValueError(
            f"collision weight exponent beta*q_max*||p||/(4M) = {exponent:.2f} "
            f"exceeds {_COLLISION_EXPONENT_CAP}; lower q_max, beta, or dim "
            "to keep exp(-(beta/4M) q p) representable")

    c0 = collision_prefactor(par, hbar)
    kern = par.tmatrix.squared(par.q_nodes) * np.exp(
        -par.beta * par.q_nodes**2 / (8.0 * par.gas_mass))
    rates = par.fugacity_z * c0 * par.q_weights * kern / par.q_nodes

    sandwiches = []
    for q, rate in zip(par.q_nodes, rates):
        if rate == 0.0:
            continue
        for sq in (q, -q):
            u = scipy.linalg.expm(1j / hbar * sq * x)
            g = scipy.linalg.expm(-par.beta / (4.0 * cfg.mass) * sq * p)
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(g))):
                raise ArithmeticError(f"non-finite matrix exponential at q={sq}")
            w = u @ g
            sandwiches.append((rate, w, w.conj().T, g @ g))

    def apply(rho):
        out = (-1j / hbar) * (h @ rho - rho @ h)
        for rate, w, wdag, g2 in sandwiches:
            out += rate * (w @ rho @ wdag - 0.5 * (g2 @ rho + rho @ g2))
        return out

    return Liouvillian(cfg, BOLTZMANN_COLLISION, apply, collision=par)


_BUILDERS = {
    CALDEIRA_LEGGETT: build_caldeira_leggett,
    BILINEAR: build_bilinear_lindblad,
    MINIMAL_QBM: build_minimal_qbm,
    BOLTZMANN_COLLISION: build_boltzmann_collision,
}


def build_liouvillian(cfg: HilbertConfig, spec: LiouvillianSpec) -> Liouvillian:
    """Dispatch to the builder named by spec.kind."""
    try:
        builder = _BUILDERS[spec.kind]
    except KeyError:
        raise ValueError(f"unknown generator kind {spec.kind!r}") from None
    return builder(cfg, spec)


def superoperator_matrix(liouv, cfg: HilbertConfig | None = None) -> np.ndarray:
    """Dense column-stacked matrix of a superoperator.

    Column j is vec(L[E_j]) where E_j is the j-th Fortran-order unit matrix,
    so matrix @ vec(rho) reproduces L[rho] for every rho.  Guarded to
    dim^2 <= 10^4.
    """
    if cfg is None:
        cfg = liouv.cfg
    d = cfg.dim
    n = d * d
    if n > 10_000:
        raise ValueError(f"superoperator matrix would be {n}x{n}; guard is 10^4")
    mat = np.zeros((n, n), dtype=complex)
    basis = np.zeros((d, d), dtype=complex)
    for j in range(n):
        basis.flat[:] = 0.0
        # Fortran-order unit matrix: entry (j % d, j // d)
        basis[j % d, j // d] = 1.0
        mat[:, j] = liouv(basis).flatten(order="F")
    return mat
