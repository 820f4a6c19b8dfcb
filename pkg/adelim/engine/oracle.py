'''
Brute-force validation of the reduced model.

The full composite Lindblad equation is integrated on the truncated space by
a dense matrix exponential reused over a uniform time grid, and the partial
trace tr_A rho(t) is compared with the reduced evolution exp(L_s t) rho_s(0),
the composite state being initialized on the invariant manifold,
rho(0) = K(rho_s(0)) / tr K(rho_s(0)).
'''
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.optimize import curve_fit

from adelim import config
from adelim.engine.cpanalysis import QubitGeneratorCoeffs
from adelim.engine.elimination import eliminate, assignment_map, reduced_generator
from adelim.toolbox.errors import InvalidParameters, FitIllConditioned, InitOutsideImage
from adelim.toolbox.matrixops import (bloch_vector, density_from_bloch, hermiticity_defect, min_eigenvalue,
                                      trace_norm)
from adelim.toolbox.superop import vectorize, devectorize, partial_trace, expm_superop

logger = logging.getLogger(__name__)

@dataclass
class Trajectory:
    times: np.ndarray
    states: list
    diagnostics: dict = field(default_factory=dict)

    def bloch(self):
        return np.array([bloch_vector(rho) for rho in self.states])

    def reduce(self, dim_A, dim_B):
        return Trajectory(self.times, [partial_trace(rho, dim_A, dim_B) for rho in self.states],
                          dict(self.diagnostics))


@dataclass
class FitResult:
    inv_T1: float
    inv_T2: float
    omega: float
    R_z: float

    def __iter__(self):
        return iter((self.inv_T1, self.inv_T2, self.omega))

    @property
    def gamma_phi(self):
        return (self.inv_T2 - self.inv_T1 / 2) / 2

    def generator_coeffs(self):
        return QubitGeneratorCoeffs(omega_B=self.omega,
                                    gamma_minus=(1 - self.R_z) * self.inv_T1 / 2,
                                    gamma_plus=(1 + self.R_z) * self.inv_T1 / 2,
                                    gamma_phi=self.gamma_phi)


@dataclass
class ValidationReport:
    order: int
    eps: list
    errors: list
    exponents: list
    t_inv: float
    initial_min_eigenvalue: list
    rows: list = field(default_factory=list)

def _uniform_step(times):
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise InvalidParameters("time grid needs at least two points")
    steps = np.diff(times)
    dt = steps[0]
    if dt <= 0 or not np.allclose(steps, dt, rtol=1e-9, atol=0):
        raise InvalidParameters("time grid must be uniform and increasing")
    if times[0] < 0:
        raise InvalidParameters("times must be >= 0")
    return times, dt

def _propagate(S, rho0, times):
    '''States exp(S t) rho0 on a uniform grid: one exponential per step, reused'''
    times, dt = _uniform_step(times)
    step = sla.expm(dt * S.matrix)
    v = vectorize(rho0)
    if times[0] > 0:
        v = expm_superop(S, times[0]).matrix @ v
    dim = rho0.shape[0]
    states = [devectorize(v, dim)]
    for _ in times[1:]:
        v = step @ v
        states.append(devectorize(v, dim))
    return times, states

def evolve_full(model, rho0, times, eps=None, tol=None):
    tol = config.resolve(tol)
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (model.dim, model.dim):
        raise InvalidParameters("initial state must act on the composite space of dimension %d" % model.dim)
    if hermiticity_defect(rho0) > tol.tau_herm * max(np.linalg.norm(rho0), 1.0):
        raise InvalidParameters("initial state is not Hermitian")
    if abs(np.trace(rho0) - 1) > 1e-9:
        raise InvalidParameters("initial state must have unit trace, got %r" % np.trace(rho0))
    times, states = _propagate(model.total_generator(eps), rho0, times)
    traces = np.array([np.trace(rho).real for rho in states])
    drift = float(np.max(np.abs(traces - 1)))
    herm = float(max(hermiticity_defect(rho) for rho in states))
    logger.debug("full evolution over %d steps: trace drift %.2e, Hermiticity defect %.2e",
                 len(states), drift, herm)
    return Trajectory(times, states, {'trace_drift': drift, 'hermiticity_defect': herm})

def reduced_trajectory(L_s, rho_s0, times):
    times, states = _propagate(L_s, np.asarray(rho_s0, dtype=complex), times)
    return Trajectory(times, states)

def synthetic_trajectory(coeffs, r0, times):
    '''Exact Bloch-vector solution of the phase-covariant generator'''
    times = np.asarray(times, dtype=float)
    r0 = np.asarray(r0, dtype=float)
    z = (r0[0] + 1j * r0[1]) * np.exp((-coeffs.inv_T2 + 1j * coeffs.omega_B) * times)
    rz = coeffs.R_z + (r0[2] - coeffs.R_z) * np.exp(-coeffs.inv_T1 * times)
    return Trajectory(times, [density_from_bloch((zz.real, zz.imag, r)) for zz, r in zip(z, rz)])

def initial_state(res, eps, rho_s0, tol=None):
    '''K(rho_s0) renormalized to unit trace; warns when it is not PSD'''
    tol = config.resolve(tol)
    rho0 = assignment_map(res, eps).apply(np.asarray(rho_s0, dtype=complex))
    rho0 = rho0 / np.trace(rho0)
    rho0 = (rho0 + rho0.conj().T) / 2
    lowest = min_eigenvalue(rho0)
    if lowest < -tol.tau_psd * max(np.linalg.norm(rho0), 1.0):
        warnings.warn("initial composite state has eigenvalue %.3e < 0; rho_s(0) lies outside the image "
                      "of the invariant manifold" % lowest, InitOutsideImage)
        logger.warning("non-PSD initial state (min eigenvalue %.3e), evolution proceeds", lowest)
    return rho0, lowest

def reduction_error(model, res, eps, rho_s0, times, tol=None):
    '''Trace-norm error between tr_A rho(t) and exp(L_s t) rho_s(0), per grid point'''
    rho0, lowest = initial_state(res, eps, rho_s0, tol)
    full = evolve_full(model, rho0, times, eps, tol).reduce(model.dim_A, model.dim_B)
    reduced = reduced_trajectory(reduced_generator(res, eps), rho_s0, times)
    errors = np.array([trace_norm(a - b) for a, b in zip(full.states, reduced.states)])
    return full, reduced, errors, lowest

def validate_reduction(model, order, eps, times, rho_s0=None, result=None, tol=None):
    '''
    Sup-over-window reduction error at eps, eps/2 and eps/4 and the measured
    exponents log2(err(e)/err(e/2)); the window is t >= t_inv.
    '''
    tol = config.resolve(tol)
    res = eliminate(model, order) if result is None else result
    rho_s0 = density_from_bloch((0.3, 0.0, 0.4)) if rho_s0 is None else np.asarray(rho_s0, dtype=complex)
    times = np.asarray(times, dtype=float)
    window = times >= tol.t_inv
    if not window.any():
        raise InvalidParameters("time grid ends before t_inv = %g" % tol.t_inv)
    eps_values = [eps, eps / 2, eps / 4]
    errors, lowest, rows = [], [], []
    for e in eps_values:
        full, _, err, low = reduction_error(model, res, e, rho_s0, times, tol)
        errors.append(float(np.max(err[window])))
        lowest.append(low)
        for t, r, x in zip(times, full.bloch(), err):
            rows.append({'eps': e, 'order': order, 't': t, 'r_x': r[0], 'r_y': r[1], 'r_z': r[2], 'error': x})
    exponents = [float(np.log2(errors[i] / errors[i + 1])) if errors[i + 1] > 0 else float("nan") for i in range(2)]
    logger.debug("order %d reduction errors %s, exponents %s", order, errors, exponents)
    return ValidationReport(order, eps_values, errors, exponents, tol.t_inv, lowest, rows)

def fit_decay_rates(traj, t_min=None, R_z=None, floor=1e-12):
    '''
    (1/T1, 1/T2, omega_B) from a qubit trajectory: r_z(t) - R_z for 1/T1
    (three-parameter fit when R_z is not given), log-linear fits of
    |r_x + i r_y| and of its unwrapped phase for 1/T2 and omega_B.
    '''
    t = np.asarray(traj.times, dtype=float)
    r = traj.bloch()
    if t_min is not None:
        keep = t >= t_min
        t, r = t[keep], r[keep]
    if t.size < 3:
        raise FitIllConditioned("need at least 3 points in the fit window")
    rz = r[:, 2]
    if R_z is None:
        if np.ptp(rz) < floor:
            raise FitIllConditioned("longitudinal signal below %.0e" % floor)
        span = t[-1] - t[0]
        p0 = (rz[-1], rz[0] - rz[-1], 3.0 / span)
        t0 = t[0]
        popt, _ = curve_fit(lambda s, R, A, k: R + A * np.exp(-k * (s - t0)), t, rz, p0=p0,
                            ftol=1e-14, xtol=1e-14, gtol=1e-14, maxfev=20000)
        R_fit, inv_T1 = float(popt[0]), float(popt[2])
    else:
        signal = np.abs(rz - R_z)
        if np.min(signal) < floor:
            raise FitIllConditioned("longitudinal signal below %.0e" % floor)
        inv_T1 = -float(np.polyfit(t, np.log(signal), 1)[0])
        R_fit = float(R_z)
    z = r[:, 0] + 1j * r[:, 1]
    if np.min(np.abs(z)) < floor:
        raise FitIllConditioned("transverse signal below %.0e" % floor)
    inv_T2 = -float(np.polyfit(t, np.log(np.abs(z)), 1)[0])
    omega = float(np.polyfit(t, np.unwrap(np.angle(z)), 1)[0])
    return FitResult(inv_T1, inv_T2, omega, R_fit)

def trajectory_csv_rows(traj, reference=None):
    rows = []
    for k, (t, r) in enumerate(zip(traj.times, traj.bloch())):
        error = None if reference is None else trace_norm(traj.states[k] - reference.states[k])
        rows.append({'t': float(t), 'r_x': r[0], 'r_y': r[1], 'r_z': r[2], 'error': error})
    return rows
