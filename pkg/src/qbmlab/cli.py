"""Command-line front door: one config file, one experiment, one table.

Each subcommand loads a fail-closed INI config, runs a single
experiment, writes a CSV table (17 significant digits) plus a sidecar
metadata file, and prints a short machine-greppable summary to stdout.

Exit codes: 0 success, 2 configuration error (the message names the
offending key), 3 numerical failure.

The data files contain no timestamps or hostnames, so identical configs
produce byte-identical tables; run provenance (version, config hash,
wall-clock time) lives in the `<basename>.meta.txt` sidecar.  The
environment variable QBMLAB_OUTPUT_DIR, when set, overrides the
configured output directory.
"""

import argparse
import hashlib
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .config import ConfigError, load_config
from .fokker_planck import fp_solve, gaussian_grid, maxwell_grid, stability_bound
from .liouvillians import (
    BOLTZMANN_COLLISION,
    CALDEIRA_LEGGETT,
    DOUBLE_COMMUTATOR,
    MINIMAL_QBM,
    BILINEAR,
    BilinearCoefficients,
    CollisionParameters,
    LiouvillianSpec,
    build_liouvillian,
    minimal_coefficients,
    radial_grid,
)
from .microcoeffs import (
    TMatrixModel,
    chi_of,
    compute_dpp,
    cp_margin,
    cutoff_momentum,
    friction_ratio,
)
from .operators import (
    HilbertConfig,
    coherent_state,
    number_state,
    squeezed_state,
    thermal_state,
    vacuum_state,
)
from .propagation import (
    RK4_FIXED,
    IntegratorConfig,
    NumericalFailure,
    positivity_breach_time,
    propagate,
)
from .structure_factor import (
    MAXWELL_BOLTZMANN,
    GasThermodynamics,
    s_mb,
    sum_rule_f,
    sum_rule_zero,
)

OUTPUT_DIR_ENV = "QBMLAB_OUTPUT_DIR"

# substeps between consecutive comparison samples; keeps the quantum and
# classical time grids commensurate
_COMPARE_SUBSTEPS = 20


def _output_dir(rc):
    out = os.environ.get(OUTPUT_DIR_ENV)
    if not out:
        out = rc.get("output", "dir", ".")
    os.makedirs(out, exist_ok=True)
    return out


def _write_csv(out_dir, basename, header, rows, formats=None):
    n_cols = len(header.split(","))
    if formats is None:
        formats = ["%.16e"] * n_cols
    path = os.path.join(out_dir, basename + ".csv")
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(f % v for f, v in zip(formats, row)) + "\n")
    return path


def _write_sidecar(out_dir, basename, rc, command, summary):
    with open(rc.path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    lines = [
        "command=%s" % command,
        "package_version=%s" % __version__,
        "config_path=%s" % rc.path,
        "config_sha256=%s" % digest,
        "written_utc=%s" % datetime.now(timezone.utc).isoformat(),
    ]
    lines.extend(summary)
    path = os.path.join(out_dir, basename + ".meta.txt")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def _hilbert_from(rc):
    return HilbertConfig(
        dim=rc.get("hilbert", "dim", 40),
        hbar=rc.get("hilbert", "hbar", 1.0),
        mass=rc.get("hilbert", "mass", 1.0),
        omega_basis=rc.get("hilbert", "omega_basis", 1.0))


def _gas_from(rc):
    return GasThermodynamics(
        beta=rc.require("gas", "beta"),
        gas_mass=rc.require("gas", "gas_mass"),
        fugacity=rc.get("gas", "fugacity", 1.0),
        statistics=rc.get("gas", "statistics", MAXWELL_BOLTZMANN))


def _tmatrix_from(rc):
    return TMatrixModel(
        kind=rc.require("tmatrix", "kind"),
        t0=rc.require("tmatrix", "t0"),
        sigma_q=rc.get("tmatrix", "sigma_q"))


def _initial_state(rc, cfg):
    kind = rc.get("generator", "initial_state", "vacuum")
    if kind == "vacuum":
        return vacuum_state(cfg)
    if kind == "number":
        return number_state(cfg, rc.require("generator", "initial_n"))
    if kind == "coherent":
        alpha = complex(rc.get("generator", "initial_alpha_re", 0.0),
                        rc.get("generator", "initial_alpha_im", 0.0))
        return coherent_state(cfg, alpha)
    if kind == "squeezed":
        alpha = complex(rc.get("generator", "initial_alpha_re", 0.0),
                        rc.get("generator", "initial_alpha_im", 0.0))
        return squeezed_state(cfg, rc.require("generator", "initial_r"), alpha)
    if kind == "thermal":
        return thermal_state(cfg, rc.require("generator", "initial_nbar"))
    raise ConfigError("unknown initial_state %r in section [generator]" % kind)


def _generator_from(rc, cfg):
    kind = rc.require("generator", "kind")
    ham = rc.get("generator", "hamiltonian", "free")
    omega_trap = rc.get("generator", "omega_trap")
    z = rc.get("generator", "fugacity_z", 1.0)

    if kind == CALDEIRA_LEGGETT:
        coeffs = BilinearCoefficients(
            gamma=rc.require("generator", "gamma"), fugacity_z=z)
        spec = LiouvillianSpec(
            kind=kind, hamiltonian_kind=ham, omega_trap=omega_trap,
            beta=rc.require("generator", "beta"), coeffs=coeffs)
    elif kind == BILINEAR:
        coeffs = BilinearCoefficients(
            gamma=rc.get("generator", "gamma", 0.0),
            d_pp=rc.get("generator", "d_pp", 0.0),
            d_xx=rc.get("generator", "d_xx", 0.0),
            d_xp=rc.get("generator", "d_xp", 0.0),
            mu=rc.get("generator", "mu", 0.0),
            fugacity_z=z)
        spec = LiouvillianSpec(kind=kind, hamiltonian_kind=ham,
                               omega_trap=omega_trap, coeffs=coeffs)
    elif kind == MINIMAL_QBM:
        source = rc.get("generator", "coefficients", "user")
        if source == "microscopic":
            gas = _gas_from(rc)
            if gas.statistics != MAXWELL_BOLTZMANN:
                raise ConfigError(
                    "key 'coefficients=microscopic' in [generator] requires "
                    "statistics=maxwell_boltzmann in [gas]")
            micro = compute_dpp(_tmatrix_from(rc), gas, cfg.mass, cfg.hbar)
            d_pp, beta, z = micro.d_pp, gas.beta, gas.fugacity
        else:
            d_pp = rc.require("generator", "d_pp")
            beta = rc.require("generator", "beta")
        coeffs = BilinearCoefficients(d_pp=d_pp, fugacity_z=z)
        spec = LiouvillianSpec(
            kind=kind, hamiltonian_kind=ham, omega_trap=omega_trap,
            beta=beta, coeffs=coeffs,
            assembly=rc.get("generator", "assembly", DOUBLE_COMMUTATOR))
    elif kind == BOLTZMANN_COLLISION:
        gas = _gas_from(rc)
        q_max = rc.get("generator", "q_max", cutoff_momentum(gas))
        nodes, weights = radial_grid(q_max, rc.get("generator", "n_nodes", 40))
        collision = CollisionParameters(
            gas_mass=gas.gas_mass, beta=gas.beta, fugacity_z=z,
            tmatrix=_tmatrix_from(rc), q_nodes=nodes, q_weights=weights,
            q_max=q_max)
        spec = LiouvillianSpec(kind=kind, hamiltonian_kind=ham,
                               omega_trap=omega_trap, collision=collision)
    else:
        raise ConfigError("unknown generator kind %r" % kind)
    return build_liouvillian(cfg, spec)


def _integrator_from(rc):
    return IntegratorConfig(
        method=rc.get("integrator", "method", RK4_FIXED),
        t_final=rc.require("integrator", "t_final"),
        dt=rc.get("integrator", "dt", 1e-3),
        dt_init=rc.get("integrator", "dt_init", 1e-4),
        rtol=rc.get("integrator", "rtol", 1e-8),
        atol=rc.get("integrator", "atol", 1e-10),
        monitor_stride=rc.get("integrator", "monitor_stride", 1))


def cmd_evolve(rc):
    cfg = _hilbert_from(rc)
    liouv = _generator_from(rc, cfg)
    rho0 = _initial_state(rc, cfg)
    icfg = _integrator_from(rc)
    record = propagate(rho0, liouv, icfg)
    breach = positivity_breach_time(
        record, rc.get("integrator", "breach_threshold", -1e-10))
    rows = zip(record.times, record.trace, record.min_eig, record.purity,
               record.mean_x, record.mean_p, record.var_x, record.var_p)
    out_dir = _output_dir(rc)
    basename = rc.get("output", "basename", "evolve")
    _write_csv(out_dir, basename,
               "t,trace,min_eig,purity,mean_x,mean_p,var_x,var_p", rows)
    summary = "positivity_breach_t=%s" % (
        "none" if breach is None else "%.16e" % breach)
    print(summary)
    _write_sidecar(out_dir, basename, rc, "evolve", [summary])
    return 0


def cmd_coeffs(rc):
    cfg = _hilbert_from(rc)
    gas = _gas_from(rc)
    tmat = _tmatrix_from(rc)
    coeffs = compute_dpp(tmat, gas, cfg.mass, cfg.hbar)
    chi = chi_of(coeffs, gas, cfg.mass, cfg.hbar)
    margin = cp_margin(coeffs, cfg.hbar)
    ratio = friction_ratio(gas)
    out_dir = _output_dir(rc)
    basename = rc.get("output", "basename", "coeffs")
    # chi carries 15 significant digits, everything else 17
    _write_csv(out_dir, basename,
               "D_pp,D_xx,gamma,mu,chi,cp_margin,friction_ratio",
               [(coeffs.d_pp, coeffs.d_xx, coeffs.gamma, coeffs.mu, chi,
                 margin, ratio)],
               formats=["%.16e"] * 4 + ["%.14e", "%.16e", "%.16e"])
    summary = ["chi=%.14e" % chi, "cp_margin=%.16e" % margin,
               "friction_ratio=%.16e" % ratio]
    for line in summary:
        print(line)
    _write_sidecar(out_dir, basename, rc, "coeffs", summary)
    return 0


def cmd_dsf(rc):
    gas = _gas_from(rc)
    q_values = rc.get("dsf", "q_values", (0.2, 1.0, 5.0))
    if any(q <= 0 for q in q_values):
        raise ConfigError(
            "key 'q_values' in section [dsf] must be positive momenta")
    n_e = rc.get("dsf", "n_e", 41)
    e_min = rc.get("dsf", "e_min")
    e_max = rc.get("dsf", "e_max")
    rows = []
    summary = []
    for q in q_values:
        recoil = q**2 / (2.0 * gas.gas_mass)
        width = q / np.sqrt(gas.beta * gas.gas_mass)
        lo = recoil - 8.0 * width if e_min is None else e_min
        hi = recoil + 8.0 * width if e_max is None else e_max
        energies = np.linspace(lo, hi, n_e)
        values = s_mb(q, energies, gas)
        rows.extend((q, e, s) for e, s in zip(energies, values))
        zeroth = sum_rule_zero(q, gas)
        first = sum_rule_f(q, gas)
        summary.append("sum_rule_0=%.16e" % zeroth)
        summary.append("sum_rule_f_ratio=%.16e" % (first / recoil))
    out_dir = _output_dir(rc)
    basename = rc.get("output", "basename", "dsf")
    _write_csv(out_dir, basename, "q,E,S", rows)
    for line in summary:
        print(line)
    _write_sidecar(out_dir, basename, rc, "dsf", summary)
    return 0


def cmd_fp(rc):
    eta = rc.require("fp", "eta")
    d_v = rc.require("fp", "d_v")
    v_min = rc.get("fp", "v_min", -8.0)
    v_max = rc.get("fp", "v_max", 8.0)
    n_cells = rc.get("fp", "n_cells", 200)
    kind = rc.get("fp", "initial", "maxwell")
    if kind == "maxwell":
        grid = maxwell_grid(v_min, v_max, n_cells, eta, d_v)
    else:
        grid = gaussian_grid(v_min, v_max, n_cells,
                             mean=rc.get("fp", "initial_mean", 0.0),
                             var=rc.require("fp", "initial_var"))
    t_final = rc.require("fp", "t_final")
    dt = rc.get("fp", "dt")
    if dt is None:
        bound = stability_bound(grid, eta, d_v)
        if not np.isfinite(bound):
            raise ConfigError(
                "key 'dt' in section [fp] is required when eta = d_v = 0")
        dt = 0.9 * bound
    stride = rc.get("fp", "sample_stride")
    if stride is None:
        stride = max(1, int(np.ceil(t_final / dt / 500.0)))
    traj = fp_solve(grid, eta, d_v, t_final, dt, sample_stride=stride)
    out_dir = _output_dir(rc)
    basename = rc.get("output", "basename", "fp")
    _write_csv(out_dir, basename, "t,mass,mean_v,var_v",
               zip(traj.times, traj.mass, traj.mean_v, traj.var_v))
    summary = "stationary_var=%.16e" % traj.var_v[-1]
    print(summary)
    _write_sidecar(out_dir, basename, rc, "fp", [summary])
    return 0


def cmd_compare(rc):
    beta = rc.require("compare", "beta")
    mass = rc.get("compare", "mass", 1.0)
    d_pp = rc.require("compare", "d_pp")
    z = rc.get("compare", "fugacity_z", 1.0)
    t_final = rc.require("compare", "t_final")
    n_samples = rc.get("compare", "n_samples", 50)
    eta_scale = rc.get("compare", "eta_scale", 1.0)

    cfg = HilbertConfig(dim=rc.get("compare", "dim", 40), hbar=1.0,
                        mass=mass, omega_basis=1.0)
    coeffs = minimal_coefficients(cfg, d_pp, beta, fugacity_z=z)
    spec = LiouvillianSpec(kind=MINIMAL_QBM, hamiltonian_kind="free",
                           beta=beta,
                           coeffs=BilinearCoefficients(d_pp=d_pp, fugacity_z=z))
    liouv = build_liouvillian(cfg, spec)
    rho0 = vacuum_state(cfg)
    delta = t_final / n_samples
    icfg = IntegratorConfig(method=RK4_FIXED, t_final=t_final,
                            dt=delta / _COMPARE_SUBSTEPS,
                            monitor_stride=_COMPARE_SUBSTEPS)
    record = propagate(rho0, liouv, icfg)

    # classical twin: momentum-to-velocity conversion of the same moments
    eta = 2.0 * z * coeffs.gamma * eta_scale
    d_v = z * d_pp / mass**2
    var_v0 = cfg.hbar * cfg.omega_basis / (2.0 * mass)  # vacuum momentum spread
    var_ref = max(var_v0, d_v / eta) if eta > 0.0 else var_v0
    v_max = rc.get("compare", "v_max", 8.0 * np.sqrt(var_ref))
    grid = gaussian_grid(-v_max, v_max, rc.get("compare", "n_cells", 200),
                         mean=0.0, var=var_v0)
    if eta > 0.0 or d_v > 0.0:
        bound = stability_bound(grid, eta, d_v)
        substeps = int(np.ceil(delta / (0.9 * bound)))
    else:
        substeps = 1
    traj = fp_solve(grid, eta, d_v, t_final, delta / substeps,
                    sample_stride=substeps)

    if record.times.shape != traj.times.shape or \
            np.max(np.abs(record.times - traj.times)) > 1e-9 * t_final:
        raise NumericalFailure("comparison time grids failed to align")
    var_q = record.var_p
    var_c = mass**2 * traj.var_v
    rel = np.abs(var_q - var_c) / np.maximum(np.maximum(np.abs(var_q),
                                                        np.abs(var_c)), 1e-300)
    out_dir = _output_dir(rc)
    basename = rc.get("output", "basename", "compare")
    _write_csv(out_dir, basename,
               "t,var_p_quantum,var_p_classical,rel_diff",
               zip(record.times, var_q, var_c, rel))
    summary = "max_rel_diff=%.16e" % np.max(rel)
    print(summary)
    _write_sidecar(out_dir, basename, rc, "compare", [summary])
    return 0


_COMMANDS = {
    "evolve": (cmd_evolve, "integrate a quantum generator and tabulate monitors"),
    "coeffs": (cmd_coeffs, "friction/diffusion coefficients from the gas model"),
    "dsf": (cmd_dsf, "tabulate the gas dynamic structure factor"),
    "fp": (cmd_fp, "solve the classical velocity Fokker-Planck equation"),
    "compare": (cmd_compare, "quantum vs classical momentum-variance cross-check"),
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qbmlab",
        description="Quantum Brownian motion laboratory: generators, "
                    "propagation, gas kernels, and a classical cross-check.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in _COMMANDS.items():
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("config", help="path to an INI run configuration")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        rc = load_config(args.config)
        return _COMMANDS[args.command][0](rc)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except (NumericalFailure, ArithmeticError) as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
