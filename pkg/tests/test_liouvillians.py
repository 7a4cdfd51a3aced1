import numpy as np
import pytest

from conftest import random_density
from qbmlab import (
    BILINEAR,
    BOLTZMANN_COLLISION,
    CALDEIRA_LEGGETT,
    DOUBLE_COMMUTATOR,
    MINIMAL_QBM,
    SINGLE_GENERATOR,
    BilinearCoefficients,
    CollisionParameters,
    GasThermodynamics,
    HilbertConfig,
    Liouvillian,
    LiouvillianSpec,
    TMatrixModel,
    build_bilinear_lindblad,
    build_boltzmann_collision,
    build_caldeira_leggett,
    build_hamiltonian,
    build_liouvillian,
    build_minimal_qbm,
    collision_dpp,
    collision_prefactor,
    compute_dpp,
    cutoff_momentum,
    minimal_coefficients,
    parity_operator,
    radial_grid,
    superoperator_matrix,
)

CFG = HilbertConfig(dim=12)
TMAT = TMatrixModel(kind="gaussian", t0=0.05, sigma_q=1.0)
GAS = GasThermodynamics(beta=2.0, gas_mass=1.0)


def _collision_params(q_max, n_nodes=60, fugacity_z=0.8):
    nodes, weights = radial_grid(q_max, n_nodes)
    return CollisionParameters(gas_mass=1.0, beta=2.0, fugacity_z=fugacity_z,
                               tmatrix=TMAT, q_nodes=nodes, q_weights=weights,
                               q_max=q_max)


def _all_generators():
    cl = build_liouvillian(CFG, LiouvillianSpec(
        kind=CALDEIRA_LEGGETT, beta=2.0, coeffs=BilinearCoefficients(gamma=0.3)))
    bil = build_liouvillian(CFG, LiouvillianSpec(
        kind=BILINEAR,
        coeffs=BilinearCoefficients(gamma=0.3, d_pp=0.4, d_xx=0.05, d_xp=0.01,
                                    mu=0.1, fugacity_z=0.9)))
    mini = build_liouvillian(CFG, LiouvillianSpec(
        kind=MINIMAL_QBM, beta=2.0,
        coeffs=BilinearCoefficients(d_pp=0.7, fugacity_z=0.8)))
    col = build_liouvillian(CFG, LiouvillianSpec(
        kind=BOLTZMANN_COLLISION, collision=_collision_params(2.0)))
    return [cl, bil, mini, col]


def test_radial_grid_integrates_square_measure():
    # weights carry the q^2 measure: summing them integrates q^2 over [0, q_max]
    for q_max in (0.5, 2.0, 10.0):
        nodes, weights = radial_grid(q_max, 40)
        assert np.all(nodes > 0.0) and np.all(nodes < q_max)
        assert np.all(np.diff(nodes) > 0)
        assert abs(weights.sum() - q_max**3 / 3.0) < 1e-12 * q_max**3


def test_trace_and_hermiticity_preservation(rng):
    for liouv in _all_generators():
        for _ in range(3):
            rho = random_density(CFG.dim, rng)
            out = liouv(rho)
            scale = np.abs(out).max()
            assert abs(np.trace(out)) < 1e-13 * max(scale, 1.0)
            assert np.abs(out - out.conj().T).max() < 1e-13 * max(scale, 1.0)


def test_caldeira_leggett_equals_bilinear_bitwise(rng):
    beta, gamma = 2.0, 0.3
    cl = build_caldeira_leggett(CFG, LiouvillianSpec(
        kind=CALDEIRA_LEGGETT, hamiltonian_kind="harmonic", omega_trap=1.0,
        beta=beta, coeffs=BilinearCoefficients(gamma=gamma)))
    bil = build_bilinear_lindblad(CFG, LiouvillianSpec(
        kind=BILINEAR, hamiltonian_kind="harmonic", omega_trap=1.0,
        coeffs=BilinearCoefficients(gamma=gamma,
                                    d_pp=2.0 * CFG.mass * gamma / beta)))
    for _ in range(5):
        rho = random_density(CFG.dim, rng)
        assert np.array_equal(cl(rho), bil(rho))


def test_minimal_coefficients_derivation():
    derived = minimal_coefficients(CFG, d_pp=0.7, beta=2.0, fugacity_z=0.8)
    assert abs(derived.gamma - 2.0 * 0.7 / (2.0 * CFG.mass)) < 1e-15
    assert abs(derived.d_xx - (2.0 / (4.0 * CFG.mass)) ** 2 * 0.7) < 1e-15
    assert derived.mu == 0.0 and derived.d_xp == 0.0
    with pytest.raises(ValueError):
        minimal_coefficients(CFG, d_pp=-1.0, beta=2.0)
    with pytest.raises(ValueError):
        minimal_coefficients(CFG, d_pp=1.0, beta=0.0)


def test_minimal_assemblies_agree(rng):
    """The three-term commutator assembly and the single-jump assembly are
    the same superoperator, identically in the coefficients."""
    spec_d = LiouvillianSpec(kind=MINIMAL_QBM, beta=2.0,
                             coeffs=BilinearCoefficients(d_pp=0.7, fugacity_z=0.8),
                             assembly=DOUBLE_COMMUTATOR)
    spec_s = LiouvillianSpec(kind=MINIMAL_QBM, beta=2.0,
                             coeffs=BilinearCoefficients(d_pp=0.7, fugacity_z=0.8),
                             assembly=SINGLE_GENERATOR)
    double = build_minimal_qbm(CFG, spec_d)
    single = build_minimal_qbm(CFG, spec_s)
    for _ in range(20):
        rho = random_density(CFG.dim, rng)
        a = double(rho)
        b = single(rho)
        assert np.abs(a - b).max() < 1e-10 * max(np.abs(a).max(), 1.0)


def test_minimal_rejects_redundant_coefficients():
    for bad in (BilinearCoefficients(d_pp=0.7, gamma=0.1),
                BilinearCoefficients(d_pp=0.7, d_xx=0.1),
                BilinearCoefficients(d_pp=0.7, mu=0.1)):
        with pytest.raises(ValueError):
            build_minimal_qbm(CFG, LiouvillianSpec(kind=MINIMAL_QBM, beta=2.0,
                                                   coeffs=bad))
    with pytest.raises(ValueError):
        build_minimal_qbm(CFG, LiouvillianSpec(kind=MINIMAL_QBM,
                                               coeffs=BilinearCoefficients(d_pp=0.7)))
    with pytest.raises(ValueError):
        build_minimal_qbm(CFG, LiouvillianSpec(
            kind=MINIMAL_QBM, beta=2.0,
            coeffs=BilinearCoefficients(d_pp=0.7), assembly="triple"))


def test_zero_fugacity_reduces_to_hamiltonian_flow(rng):
    liouv = build_liouvillian(CFG, LiouvillianSpec(
        kind=MINIMAL_QBM, beta=2.0,
        coeffs=BilinearCoefficients(d_pp=0.7, fugacity_z=0.0)))
    h = build_hamiltonian(CFG, "free")
    rho = random_density(CFG.dim, rng)
    expected = -1j / CFG.hbar * (h @ rho - rho @ h)
    assert np.abs(liouv(rho) - expected).max() < 1e-15


def test_builder_kind_crosschecks():
    good = BilinearCoefficients(gamma=0.3)
    with pytest.raises(ValueError):
        build_caldeira_leggett(CFG, LiouvillianSpec(kind=BILINEAR, coeffs=good))
    with pytest.raises(ValueError):
        build_bilinear_lindblad(CFG, LiouvillianSpec(kind=BILINEAR))
    with pytest.raises(ValueError):
        build_caldeira_leggett(CFG, LiouvillianSpec(kind=CALDEIRA_LEGGETT,
                                                    coeffs=good))
    with pytest.raises(ValueError):
        build_caldeira_leggett(CFG, LiouvillianSpec(
            kind=CALDEIRA_LEGGETT, beta=2.0,
            coeffs=BilinearCoefficients(gamma=0.3, d_pp=1.0)))
    with pytest.raises(ValueError):
        build_liouvillian(CFG, LiouvillianSpec(kind="unitary"))
    with pytest.raises(ValueError):
        build_boltzmann_collision(CFG, LiouvillianSpec(kind=BOLTZMANN_COLLISION))


def test_collision_parameters_validation():
    nodes, weights = radial_grid(2.0, 20)
    with pytest.raises(ValueError):
        CollisionParameters(gas_mass=-1.0, beta=2.0, fugacity_z=0.8,
                            tmatrix=TMAT, q_nodes=nodes, q_weights=weights,
                            q_max=2.0)
    with pytest.raises(ValueError):
        CollisionParameters(gas_mass=1.0, beta=2.0, fugacity_z=-0.1,
                            tmatrix=TMAT, q_nodes=nodes, q_weights=weights,
                            q_max=2.0)
    with pytest.raises(ValueError):
        CollisionParameters(gas_mass=1.0, beta=2.0, fugacity_z=0.8,
                            tmatrix=TMAT, q_nodes=nodes, q_weights=weights[:-1],
                            q_max=2.0)


def test_collision_prefactor_value():
    params = _collision_params(2.0)
    expected = 8.0 * np.pi**3 * 1.0**2 / (3.0 * 2.0 * 1.0)
    assert abs(collision_prefactor(params, 1.0) - expected) < 1e-15 * expected


def test_collision_dpp_matches_quadrature():
    # Gauss-Legendre on the full kernel support reproduces the adaptive result
    q_max = cutoff_momentum(GAS)
    params = _collision_params(q_max)
    reference = compute_dpp(TMAT, GAS, mass_test=1.0).d_pp
    assert abs(collision_dpp(params, 1.0) - reference) < 1e-12 * reference


def test_collision_parity_covariance(rng):
    liouv = build_liouvillian(CFG, LiouvillianSpec(
        kind=BOLTZMANN_COLLISION, collision=_collision_params(2.0)))
    par = parity_operator(CFG)
    rho = random_density(CFG.dim, rng)
    direct = liouv(rho)
    conjugated = par @ liouv(par @ rho @ par) @ par
    assert np.abs(direct - conjugated).max() < 1e-13 * np.abs(direct).max()


def test_collision_approaches_minimal_at_small_momentum_transfer(rng):
    """Shrinking the momentum-transfer support collapses the jump generator
    onto the quadratic minimal generator with the same diffusion strength."""
    rho = random_density(CFG.dim, rng)
    discrepancies = []
    for q_max in (2.0, 1.0, 0.5):
        params = _collision_params(q_max)
        d_pp = collision_dpp(params, CFG.hbar)
        col = build_liouvillian(CFG, LiouvillianSpec(
            kind=BOLTZMANN_COLLISION, collision=params))
        mini = build_liouvillian(CFG, LiouvillianSpec(
            kind=MINIMAL_QBM, beta=2.0,
            coeffs=BilinearCoefficients(d_pp=d_pp, fugacity_z=0.8)))
        ref = mini(rho)
        discrepancies.append(np.abs(col(rho) - ref).max() / np.abs(ref).max())
    assert discrepancies[0] > discrepancies[1] > discrepancies[2]
    assert discrepancies[2] < 0.02


def test_collision_exponent_guard():
    # a huge radial extent would overflow the drift exponential; refuse to build
    with pytest.raises(ValueError):
        build_liouvillian(HilbertConfig(dim=40), LiouvillianSpec(
            kind=BOLTZMANN_COLLISION,
            collision=_collision_params(200.0)))


def test_superoperator_matrix_consistency(rng):
    liouv = build_liouvillian(CFG, LiouvillianSpec(
        kind=MINIMAL_QBM, beta=2.0,
        coeffs=BilinearCoefficients(d_pp=0.7, fugacity_z=0.8)))
    mat = superoperator_matrix(liouv)
    rho = random_density(CFG.dim, rng)
    direct = liouv(rho)
    via_matrix = (mat @ rho.flatten(order="F")).reshape(CFG.dim, CFG.dim, order="F")
    assert np.abs(direct - via_matrix).max() < 1e-13 * np.abs(direct).max()


def test_superoperator_two_level_spectrum():
    # closed two-level system: eigenvalues are 0 (twice) and +-i * gap
    cfg2 = HilbertConfig(dim=2)
    gap = 1.3
    ham = np.diag([0.0, gap]).astype(complex)

    def apply(rho):
        return -1j / cfg2.hbar * (ham @ rho - rho @ ham)

    liouv = Liouvillian(cfg2, "two_level", apply)
    eig = np.linalg.eigvals(superoperator_matrix(liouv, cfg2))
    eig = eig[np.argsort(eig.imag)]
    expected = np.array([-1j * gap, 0.0, 0.0, 1j * gap])
    assert np.abs(eig - expected).max() < 1e-12


def test_superoperator_size_guard():
    big = HilbertConfig(dim=101)
    liouv = build_liouvillian(big, LiouvillianSpec(
        kind=BILINEAR, coeffs=BilinearCoefficients(gamma=0.1, d_pp=0.1)))
    with pytest.raises(ValueError):
        superoperator_matrix(liouv)
