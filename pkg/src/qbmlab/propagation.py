"""Time propagation of density matrices with per-step health monitors.

Two integrators are provided: a fixed-step classical Runge-Kutta scheme
(order 4) and an adaptive Dormand-Prince 5(4) pair with PI-free step
control.  Neither integrator renormalizes the trace or projects onto the
positive cone: trace drift, hermiticity drift and negative eigenvalues
are diagnostics of the generator and must stay visible.

Monitors (trace, minimum eigenvalue, purity, first and second moments of
position and momentum, hermiticity drift) are sampled at t = 0, every
`monitor_stride`-th accepted step, and at the final time.
"""

from dataclasses import dataclass

import numpy as np

from .operators import (
    build_momentum,
    build_position,
    expectation,
    min_eigenvalue,
    purity,
    validate_density_matrix,
    variance,
)

RK4_FIXED = "rk4_fixed"
RK45_ADAPTIVE = "rk45_adaptive"

# Dormand-Prince 5(4) coefficients.  b5 propagates, b4 is the embedded
# error estimator; the last stage reuses the b5 combination (FSAL is not
# exploited, the generator call is cheap relative to the monitors).
_DP_C = np.array([0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0])
_DP_A = [
    np.array([]),
    np.array([1.0 / 5.0]),
    np.array([3.0 / 40.0, 9.0 / 40.0]),
    np.array([44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0]),
    np.array([19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0]),
    np.array([9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0,
              -5103.0 / 18656.0]),
    np.array([35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0,
              11.0 / 84.0]),
]
_DP_B5 = np.array([35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0,
                   -2187.0 / 6784.0, 11.0 / 84.0, 0.0])
_DP_B4 = np.array([5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
                   -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0])

_SAFETY = 0.9
_FACTOR_MIN = 0.2
_FACTOR_MAX = 5.0


class NumericalFailure(RuntimeError):
    """Integration or linear algebra failed in a way that has no answer."""


class DegenerateStationaryState(NumericalFailure):
    """The generator has no unique stationary state at working precision."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Integration request.

    method: RK4_FIXED or RK45_ADAPTIVE.
    t_final: end time, > 0.
    dt: step for the fixed scheme, also the monitor time resolution there.
    dt_init: first trial step for the adaptive scheme.
    rtol, atol: elementwise error weights for the adaptive scheme.
    monitor_stride: sample monitors every this many accepted steps.
    """

    method: str = RK4_FIXED
    t_final: float = 1.0
    dt: float = 1e-3
    dt_init: float = 1e-4
    rtol: float = 1e-8
    atol: float = 1e-10
    monitor_stride: int = 1

    def __post_init__(self):
        if self.method not in (RK4_FIXED, RK45_ADAPTIVE):
            raise ValueError("unknown method %r" % (self.method,))
        if not (self.t_final > 0.0 and np.isfinite(self.t_final)):
            raise ValueError("t_final must be positive and finite")
        for name in ("dt", "dt_init", "rtol", "atol"):
            val = getattr(self, name)
            if not (val > 0.0 and np.isfinite(val)):
                raise ValueError("%s must be positive and finite" % name)
        if self.monitor_stride < 1:
            raise ValueError("monitor_stride must be >= 1")


@dataclass
class TrajectoryRecord:
    """Monitor time series plus the unmodified final state."""

    times: np.ndarray
    trace: np.ndarray
    herm_drift: np.ndarray
    min_eig: np.ndarray
    purity: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    var_x: np.ndarray
    var_p: np.ndarray
    final_state: np.ndarray
    accepted_steps: int
    rejected_steps: int


class _MonitorBuffer:
    def __init__(self, cfg):
        self.x = build_position(cfg)
        self.p = build_momentum(cfg)
        self.x2 = self.x @ self.x
        self.p2 = self.p @ self.p
        self.rows = []

    def sample(self, t, rho):
        # near-overflow states may push monitors to inf; record that honestly
        with np.errstate(over="ignore", invalid="ignore"):
            self._sample(t, rho)

    def _sample(self, t, rho):
        tr = np.trace(rho)
        herm = np.max(np.abs(rho - rho.conj().T))
        self.rows.append((
            t,
            tr.real,
            herm,
            min_eigenvalue(rho),
            purity(rho),
            expectation(rho, self.x).real,
            expectation(rho, self.p).real,
            variance(rho, self.x, self.x2),
            variance(rho, self.p, self.p2),
        ))

    def record(self, final_state, accepted, rejected):
        cols = np.array(self.rows, dtype=float).T
        return TrajectoryRecord(
            times=cols[0], trace=cols[1], herm_drift=cols[2], min_eig=cols[3],
            purity=cols[4], mean_x=cols[5], mean_p=cols[6], var_x=cols[7],
            var_p=cols[8], final_state=final_state, accepted_steps=accepted,
            rejected_steps=rejected)


def _check_finite(rho, t):
    if not np.all(np.isfinite(rho.real)) or not np.all(np.isfinite(rho.imag)):
        raise NumericalFailure("state became non-finite at t=%.6g" % t)


def _rk4_step(apply_fn, rho, dt):
    # overflow here is caught by the finiteness check after the step
    with np.errstate(over="ignore", invalid="ignore"):
        k1 = apply_fn(rho)
        k2 = apply_fn(rho + 0.5 * dt * k1)
        k3 = apply_fn(rho + 0.5 * dt * k2)
        k4 = apply_fn(rho + dt * k3)
        return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _propagate_rk4(rho, apply_fn, icfg, mon):
    t = 0.0
    accepted = 0
    n_full = int(np.floor(icfg.t_final / icfg.dt + 1e-12))
    remainder = icfg.t_final - n_full * icfg.dt
    steps = [icfg.dt] * n_full
    if remainder > 1e-12 * icfg.dt:
        steps.append(remainder)
    for i, h in enumerate(steps):
        rho = _rk4_step(apply_fn, rho, h)
        t = icfg.t_final if i == len(steps) - 1 else t + h
        _check_finite(rho, t)
        accepted += 1
        if accepted % icfg.monitor_stride == 0:
            mon.sample(t, rho)
    if accepted % icfg.monitor_stride != 0:
        mon.sample(icfg.t_final, rho)
    return rho, accepted, 0


def _dp_attempt(apply_fn, rho, dt):
    k = [apply_fn(rho)]
    for i in range(1, 7):
        incr = sum(a * ki for a, ki in zip(_DP_A[i], k))
        k.append(apply_fn(rho + dt * incr))
    rho5 = rho + dt * sum(b * ki for b, ki in zip(_DP_B5, k) if b != 0.0)
    rho4 = rho + dt * sum(b * ki for b, ki in zip(_DP_B4, k) if b != 0.0)
    return rho5, rho4


def _propagate_rk45(rho, apply_fn, icfg, mon):
    t = 0.0
    dt = min(icfg.dt_init, icfg.t_final)
    accepted = 0
    rejected = 0
    dt_floor = 1e-14 * icfg.t_final
    while t < icfg.t_final * (1.0 - 1e-15):
        dt = min(dt, icfg.t_final - t)
        if dt < dt_floor:
            raise NumericalFailure(
                "step size underflow at t=%.6g (dt=%.3g)" % (t, dt))
        rho5, rho4 = _dp_attempt(apply_fn, rho, dt)
        scale = icfg.atol + icfg.rtol * np.maximum(np.abs(rho), np.abs(rho5))
        with np.errstate(invalid="ignore", over="ignore", divide="ignore"):
            err = np.sqrt(np.mean(np.abs((rho5 - rho4) / scale) ** 2))
        if not np.isfinite(err):
            # divergent attempt: shrink hard and retry
            rejected += 1
            sampled_final = False
            dt = dt * _FACTOR_MIN
            continue
        if err <= 1.0:
            t += dt
            if t >= icfg.t_final * (1.0 - 1e-15):
                t = icfg.t_final
            rho = rho5
            _check_finite(rho, t)
            accepted += 1
            if accepted % icfg.monitor_stride == 0:
                mon.sample(t, rho)
            sampled_final = accepted % icfg.monitor_stride == 0
        else:
            rejected += 1
            sampled_final = False
        if err == 0.0:
            factor = _FACTOR_MAX
        else:
            factor = min(_FACTOR_MAX,
                         max(_FACTOR_MIN, _SAFETY * err ** (-0.2)))
        dt = dt * factor
    if not sampled_final:
        mon.sample(icfg.t_final, rho)
    return rho, accepted, rejected


def propagate(rho0, liouvillian, icfg):
    """Integrate d(rho)/dt = L[rho] from a validated initial state.

    Returns a TrajectoryRecord.  The final state is returned exactly as
    the integrator produced it; any trace or positivity defect is left
    for the caller to inspect.
    """
    validate_density_matrix(rho0)
    rho = np.array(rho0, dtype=complex)
    mon = _MonitorBuffer(liouvillian.cfg)
    mon.sample(0.0, rho)
    if icfg.method == RK4_FIXED:
        rho, acc, rej = _propagate_rk4(rho, liouvillian.apply, icfg, mon)
    else:
        rho, acc, rej = _propagate_rk45(rho, liouvillian.apply, icfg, mon)
    return mon.record(rho, acc, rej)


def positivity_breach_time(record, threshold=-1e-10):
    """First sampled time where min_eig dips below threshold, else None."""
    if threshold >= 0.0:
        raise ValueError("threshold must be negative")
    idx = np.nonzero(record.min_eig < threshold)[0]
    if idx.size == 0:
        return None
    return float(record.times[idx[0]])


def stationary_state(l_matrix, degeneracy_tol=1e-8, residual_tol=1e-8):
    """Unique trace-one Hermitian kernel element of a matrixified generator.

    Raises DegenerateStationaryState when the number of singular values
    below degeneracy_tol * sigma_max differs from one, and
    NumericalFailure when the candidate is traceless or fails the
    residual check max|L vec(rho)| < residual_tol.
    """
    if hasattr(l_matrix, "apply"):
        raise TypeError("expected the matrixified generator; pass "
                        "superoperator_matrix(liouvillian), not the "
                        "generator itself")
    l_matrix = np.asarray(l_matrix, dtype=complex)
    n = l_matrix.shape[0]
    d = int(round(np.sqrt(n)))
    if d * d != n or l_matrix.shape != (n, n):
        raise ValueError("expected a square matrix acting on vectorized states")
    _, sigma, vh = np.linalg.svd(l_matrix)
    if sigma[0] == 0.0:
        raise DegenerateStationaryState("generator is identically zero")
    null_mask = sigma < degeneracy_tol * sigma[0]
    n_null = int(np.count_nonzero(null_mask))
    if n_null != 1:
        raise DegenerateStationaryState(
            "expected exactly one singular value below %.1e * sigma_max, "
            "found %d (smallest: %s)"
            % (degeneracy_tol, n_null,
               np.array2string(sigma[-min(4, n):], precision=3)))
    vec = vh[-1].conj()
    rho = vec.reshape((d, d), order="F")
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho)
    if abs(tr) < 1e-10:
        raise NumericalFailure("stationary candidate is traceless")
    rho = rho / tr
    residual = np.max(np.abs(l_matrix @ rho.flatten(order="F")))
    if residual > residual_tol:
        raise NumericalFailure(
            "stationary residual %.3e exceeds %.1e" % (residual, residual_tol))
    return rho
