'''
Batch front-end.

    adelim <command> [--config run.json] [--out DIR] [--seed N] [--threads N] [--verbose]

Commands: eliminate, cp-check, region-map, validate, selftest. The run
configuration is one JSON document in reduced units (gamma is the rate unit).
Flags override config values; ADELIM_SEED, ADELIM_THREADS and ADELIM_OUT
override the built-in defaults of the corresponding flags.

Exit codes: 0 success, 2 invalid configuration or parameters, 3 numerical failure.
'''
import argparse
import concurrent.futures
import json
import logging
import os
import sys
from dataclasses import dataclass, field, fields

import numpy as np

from adelim import config
from adelim.engine.cpanalysis import (cp_report, generator_coeffs, generator_from_coeffs, is_cp, is_lindblad,
                                      choi_min_eigenvalue, spectrum_quadruple, transpose_map, wpg_feasible)
from adelim.engine.elimination import eliminate, reduced_generator
from adelim.engine.oracle import validate_reduction, evolve_full, fit_decay_rates
from adelim.schemes.jaynes_cummings import JCParams, JaynesCummings, tail_cutoff
from adelim.schemes.jc_closedform import fourth_order_coeffs, gamma_phi4_sign_boundary
from adelim.toolbox.errors import AdelimError, ConfigError, InvalidParameters
from adelim.toolbox.gridparser import parse_grid
from adelim.toolbox.matrixops import density_from_bloch
from adelim.toolbox.sampling import DEFAULT_SEED, RandomFactory
from adelim.toolbox.serialize import dumps, write_csv

logger = logging.getLogger(__name__)

PARAM_KEYS = ('delta_A', 'gamma', 'n_th', 'g', 'fock_cutoff')

@dataclass
class RunConfig:
    delta_A: float = 0.0
    gamma: float = 1.0
    n_th: float = 1.0
    g: float = 0.1
    fock_cutoff: object = None
    order: int = 4
    eps: object = None
    t_grid: object = "0:200:0.5"
    delta_grid: object = "linspace(0, 0.6, 61)"
    nth_grid: object = "[0, 0.5, 1]"
    dt: float = 0.01
    rho_s0: object = (0.3, 0.0, 0.4)
    n_samples: int = 1000
    transpose_selftest: bool = False
    tolerances: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    threads: int = 1
    out: str = "out"

    @classmethod
    def from_dict(cls, d, environ=None):
        environ = os.environ if environ is None else environ
        if not isinstance(d, dict):
            raise ConfigError("configuration must be a JSON object")
        known = set(f.name for f in fields(cls))
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError("unknown configuration keys: %s" % ", ".join(unknown))
        values = {}
        for key, cast in (('seed', int), ('threads', int), ('out', str)):
            env = 'ADELIM_' + key.upper()
            if env in environ:
                try:
                    values[key] = cast(environ[env])
                except ValueError:
                    raise ConfigError("%s: cannot parse %r" % (env, environ[env]))
        values.update(d)
        cfg = cls(**values)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path, environ=None):
        try:
            with open(path, encoding='utf-8') as f:
                d = json.load(f)
        except OSError as e:
            raise ConfigError("cannot read config %s: %s" % (path, e))
        except json.JSONDecodeError as e:
            raise ConfigError("config %s is not valid JSON: %s" % (path, e))
        return cls.from_dict(d, environ)

    def _field_error(self, name, message):
        raise ConfigError("%s: %s" % (name, message))

    def validate(self):
        for name in ('delta_A', 'gamma', 'n_th', 'g', 'dt'):
            if isinstance(getattr(self, name), bool) or not isinstance(getattr(self, name), (int, float)):
                self._field_error(name, "expected a number, got %r" % (getattr(self, name),))
        for name in ('order', 'n_samples', 'seed', 'threads'):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                self._field_error(name, "expected an integer, got %r" % (v,))
        if self.order < 0:
            self._field_error('order', "must be >= 0")
        if self.threads < 1:
            self._field_error('threads', "must be >= 1")
        if self.dt <= 0:
            self._field_error('dt', "must be > 0")
        if self.fock_cutoff is not None and (isinstance(self.fock_cutoff, bool) or not isinstance(self.fock_cutoff, int)):
            self._field_error('fock_cutoff', "expected an integer or null")
        if (not isinstance(self.rho_s0, (list, tuple)) or len(self.rho_s0) != 3
                or np.linalg.norm(np.asarray(self.rho_s0, dtype=float)) > 1):
            self._field_error('rho_s0', "expected a Bloch vector of norm <= 1")
        if not isinstance(self.tolerances, dict):
            self._field_error('tolerances', "expected an object")
        self.tol = config.tolerances.override(**self.tolerances)
        self.params = JCParams(**{k: getattr(self, k) for k in PARAM_KEYS})
        self.eps_values = parse_grid(self.params.eps if self.eps is None else self.eps)
        if np.any(self.eps_values < 0):
            self._field_error('eps', "values must be >= 0")
        self.times = parse_grid(self.t_grid)
        self.deltas = parse_grid(self.delta_grid)
        self.nths = parse_grid(self.nth_grid)
        return self

    @property
    def elimination_params(self):
        '''params with a null fock_cutoff resolved to the thermal tail cutoff'''
        if self.fock_cutoff is not None:
            return self.params
        return self.params.with_(fock_cutoff=tail_cutoff(self.params.n_th))

    def params_at(self, eps):
        sign = -1.0 if self.params.g < 0 else 1.0
        return self.params.with_(g=sign * eps * self.params.gamma)


def _map(fn, items, threads):
    '''fn over items on a worker pool; results in the order of items'''
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))

def _outpath(cfg, name):
    os.makedirs(cfg.out, exist_ok=True)
    return os.path.join(cfg.out, name)

def _write_json(cfg, name, obj):
    path = _outpath(cfg, name)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(dumps(obj))
    return path

def _row(params, **extra):
    row = params.as_dict()
    row.update(eps=params.eps)
    row.update(extra)
    return row

def cmd_eliminate(cfg):
    model = JaynesCummings(cfg.elimination_params, cfg.tol)
    res = eliminate(model, cfg.order)
    rows = []
    for eps in sorted(cfg.eps_values):
        params = cfg.params_at(eps).with_(fock_cutoff=model.params.N)
        coeffs = generator_coeffs(reduced_generator(res, eps), cfg.tol)
        closed = fourth_order_coeffs(params)
        rows.append(_row(params, order=cfg.order, omega_B=coeffs.omega_B, gamma_minus=coeffs.gamma_minus,
                         gamma_plus=coeffs.gamma_plus, gamma_phi=coeffs.gamma_phi,
                         cf_omega_B4=closed.omega_B4, cf_gamma_minus4=closed.gamma_minus4,
                         cf_gamma_plus4=closed.gamma_plus4, cf_gamma_phi4=closed.gamma_phi4))
    return [_write_json(cfg, 'elimination.json', res), write_csv(_outpath(cfg, 'coefficients.csv'), rows)]

def cmd_cp_check(cfg):
    model = JaynesCummings(cfg.elimination_params, cfg.tol)
    Ls = reduced_generator(eliminate(model, cfg.order), cfg.params.eps)
    report = cp_report(Ls, cfg.dt / cfg.params.gamma, tol=cfg.tol)
    report['params'] = _row(model.params, order=cfg.order)
    if cfg.transpose_selftest:
        T = transpose_map()
        report['transpose_selftest'] = {'cp': is_cp(T, cfg.tol), 'choi_min_eigenvalue': choi_min_eigenvalue(T)}
    return [_write_json(cfg, 'cp_check.json', report)]

def _region_point(cfg):
    def point(key):
        delta_over_gamma, n_th = key
        params = cfg.params.with_(delta_A=delta_over_gamma * cfg.params.gamma, n_th=n_th)
        c = fourth_order_coeffs(params)
        return _row(params, delta_over_gamma=delta_over_gamma, gamma_phi4=c.gamma_phi4,
                    sign=int(np.sign(c.gamma_phi4)), lindblad=is_lindblad(generator_from_coeffs(c.generator_coeffs()),
                                                                         cfg.tol).lindblad)
    return point

def cmd_region_map(cfg):
    keys = sorted((float(d), float(n)) for d in cfg.deltas for n in cfg.nths)
    rows = _map(_region_point(cfg), keys, cfg.threads)
    boundary = [{'n_th': float(n), 'g': cfg.params.g,
                 'boundary_delta_over_gamma': gamma_phi4_sign_boundary(float(n), g=cfg.params.g, gamma=cfg.params.gamma)}
                for n in sorted(cfg.nths)]
    return [write_csv(_outpath(cfg, 'region_map.csv'), rows),
            write_csv(_outpath(cfg, 'region_boundary.csv'), boundary)]

def _validate_point(cfg, model, res):
    rho_s0 = density_from_bloch(cfg.rho_s0)

    def point(eps):
        report = validate_reduction(model, cfg.order, eps, cfg.times, rho_s0, res, cfg.tol)
        # model-free: separable start, no elimination involved
        rho0 = np.kron(model.steady_state_A, rho_s0)
        traj = evolve_full(model, rho0, cfg.times, eps, cfg.tol).reduce(model.dim_A, model.dim_B)
        fit = fit_decay_rates(traj, t_min=cfg.tol.t_inv)
        closed = fourth_order_coeffs(cfg.params_at(eps))
        fit_row = _row(cfg.params_at(eps), inv_T1_fit=fit.inv_T1, inv_T2_fit=fit.inv_T2, omega_fit=fit.omega,
                       gamma_phi_fit=fit.gamma_phi, gamma_phi4=closed.gamma_phi4,
                       inv_T1_closed=closed.gamma_minus4 + closed.gamma_plus4)
        summary = {'eps': report.eps, 'errors': report.errors, 'exponents': report.exponents,
                   'initial_min_eigenvalue': report.initial_min_eigenvalue, 't_inv': report.t_inv}
        return report.rows, fit_row, summary
    return point

def cmd_validate(cfg):
    model = JaynesCummings(cfg.params, cfg.tol)
    res = eliminate(model, cfg.order)
    eps_values = sorted(float(e) for e in cfg.eps_values)
    results = _map(_validate_point(cfg, model, res), eps_values, cfg.threads)
    rows = [r for rs, _, _ in results for r in rs]
    fits = [f for _, f, _ in results]
    summary = {'order': cfg.order, 'params': _row(cfg.params), 'points': [s for _, _, s in results]}
    return [write_csv(_outpath(cfg, 'validation.csv'), rows), write_csv(_outpath(cfg, 'fits.csv'), fits),
            _write_json(cfg, 'validation.json', summary)]

def cmd_selftest(cfg):
    checks = {}
    checks['transpose_not_cp'] = not is_cp(transpose_map(), cfg.tol)
    params = JCParams(delta_A=0.0, gamma=1.0, n_th=1.0, g=0.1, fock_cutoff=tail_cutoff(1.0))
    coeffs = generator_coeffs(reduced_generator(eliminate(JaynesCummings(params, cfg.tol), 4), params.eps), cfg.tol)
    closed = fourth_order_coeffs(params)
    worst = max(abs(coeffs.gamma_minus - closed.gamma_minus4) / closed.gamma_minus4,
                abs(coeffs.gamma_plus - closed.gamma_plus4) / closed.gamma_plus4,
                abs(coeffs.gamma_phi - closed.gamma_phi4) / abs(closed.gamma_phi4))
    checks['elimination_matches_closed_form'] = bool(worst <= 1e-8)
    rand = RandomFactory.getInstance(cfg.seed)
    feasible = [wpg_feasible(spectrum_quadruple(np.linalg.eigvals(rand.kraus_channel().matrix))).feasible
                for _ in range(cfg.n_samples)]
    checks['sampled_channels_wpg_feasible'] = bool(all(feasible))
    report = {'checks': checks, 'closed_form_relative_error': worst, 'n_samples': cfg.n_samples, 'seed': cfg.seed}
    paths = [_write_json(cfg, 'selftest.json', report)]
    failed = sorted(k for k, ok in checks.items() if not ok)
    if failed:
        raise AdelimError("self-test failed: %s" % ", ".join(failed))
    return paths

COMMANDS = {'eliminate': cmd_eliminate, 'cp-check': cmd_cp_check, 'region-map': cmd_region_map,
            'validate': cmd_validate, 'selftest': cmd_selftest}

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON run configuration')
    common.add_argument('--out', help='output directory (default: $ADELIM_OUT or out)')
    common.add_argument('--seed', type=int, help='seed for random sampling (default: $ADELIM_SEED)')
    common.add_argument('--threads', type=int, help='worker threads for sweeps (default: $ADELIM_THREADS or 1)')
    common.add_argument('--verbose', '-v', action='store_true', help='log numerical diagnostics')
    parser = argparse.ArgumentParser(prog='adelim', description='Higher-order adiabatic elimination of '
                                     'a dissipative oscillator coupled to a qubit, with CP diagnostics.')
    sub = parser.add_subparsers(dest='command', required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser

def load_config(args, environ=None):
    d = {}
    if args.config:
        with_file = RunConfig.from_file(args.config, environ)
        d = {f.name: getattr(with_file, f.name) for f in fields(RunConfig)}
    for key in ('out', 'seed', 'threads'):
        if getattr(args, key) is not None:
            d[key] = getattr(args, key)
    return RunConfig.from_dict(d, {} if args.config else environ)

def main(argv=None, environ=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    logging.captureWarnings(True)
    try:
        cfg = load_config(args, environ)
        for path in COMMANDS[args.command](cfg):
            print(path)
    except (ConfigError, InvalidParameters) as e:
        print("adelim: error: %s" % e, file=sys.stderr)
        return 2
    except (AdelimError, np.linalg.LinAlgError) as e:
        print("adelim: numerical failure: %s" % e, file=sys.stderr)
        return 3
    return 0
