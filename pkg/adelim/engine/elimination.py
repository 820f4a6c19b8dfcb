'''
Order-by-order adiabatic elimination of the fast subsystem A.

Notes: the invariance equation K(L_s(rho_s)) = L_tot(K(rho_s)) is expanded in
powers of eps with K = sum eps^n K_n and L_s = sum eps^n L_{s,n}. In the
partial-trace gauge (tr_A K = identity):

    K_0 = rho_A (x) . ,   L_{s,0} = 0

    (L_A (x) I_B) K_n = rho_A (x) L_{s,n} - L_n
    L_n       = L_slow K_{n-1} - sum_{k=1}^{n-1} K_k L_{s,n-k}
    L_{s,n}   = tr_A L_n
    tr_A K_n  = 0                                  (n >= 1)

where L_slow = I_A (x) L_B + L_int in expansion units. Each map is built column
by column on the matrix units of B; the composite images are kept as
operators so no composite superoperator is ever formed.

>>> from adelim.schemes.jaynes_cummings import JaynesCummings, JCParams
>>> res = eliminate(JaynesCummings(JCParams(n_th=1.0, g=0.1, fock_cutoff=12)), 2)
>>> [round(Ls.norm(), 12) for Ls in res.Ls_list[:2]]
[0.0, 0.0]
'''
import logging
from dataclasses import dataclass, field

import numpy as np

from adelim import config
from adelim.schemes.jaynes_cummings import JaynesCummings, JCParams
from adelim.toolbox.errors import InvalidParameters, SingularGauge
from adelim.toolbox.matrixops import matrix_units
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.serialize import dumps, loads, serializeObject, deserializeObject
from adelim.toolbox.superop import (SuperOperator, vectorize, devectorize, partial_trace,
                                    apply_lift_A, solve_lift_A)

logger = logging.getLogger(__name__)

@dataclass
class EliminationResult:
    order: int
    K_list: list
    Ls_list: list
    residual_per_order: list
    gauge: str = 'G=0'
    dims: tuple = (0, 0)
    model: dict = field(default_factory=dict)

    @property
    def dim_A(self):
        return self.dims[0]

    @property
    def dim_B(self):
        return self.dims[1]

    def to_dict(self):
        return {'order': self.order, 'gauge': self.gauge, 'dims': list(self.dims), 'model': self.model,
                'K_list': self.K_list, 'Ls_list': self.Ls_list, 'residual_per_order': self.residual_per_order}

    def to_json(self):
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        d = deserializeObject(serializeObject(d))
        return cls(order=int(d['order']), K_list=list(d['K_list']), Ls_list=list(d['Ls_list']),
                   residual_per_order=[float(r) for r in d['residual_per_order']], gauge=d['gauge'],
                   dims=tuple(int(x) for x in d['dims']), model=dict(d['model']))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(loads(text))


def eliminate(model, order):
    if int(order) != order or order < 0:
        raise InvalidParameters("order must be a non-negative integer, got %r" % order)
    order = int(order)
    dA, dB = model.dim_A, model.dim_B
    rho = model.steady_state_A
    units = matrix_units(dB)
    nb = dB * dB
    # K_ops[n][j] = K_n(E_j), E_j the j-th column-stacking matrix unit of B
    K_ops = [[np.kron(rho, E) for E in units]]
    Ls_mats = [np.zeros((nb, nb), dtype=complex)]
    residuals = [0.0]
    for n in range(1, order + 1):
        L_n = []
        for j in range(nb):
            X = model.apply_slow(K_ops[n - 1][j])
            for k in range(1, n):
                coeffs = Ls_mats[n - k][:, j]
                for i in np.flatnonzero(coeffs):
                    X = X - coeffs[i] * K_ops[k][i]
            L_n.append(X)
        Ls = np.array([vectorize(partial_trace(X, dA, dB)) for X in L_n]).T
        K_n, worst = [], 0.0
        for j, X in enumerate(L_n):
            lifted = np.kron(rho, devectorize(Ls[:, j], dB))
            Y = lifted - X
            # Y may cancel to rounding noise; judge it against the terms it came from
            scale = max(np.linalg.norm(lifted) + np.linalg.norm(X), 1e-300)
            Kj = solve_lift_A(model.solver, Y, dB, model.projector, scale=scale)
            worst = max(worst, float(np.linalg.norm(apply_lift_A(model.L_A, Kj, dB) - Y)) / scale)
            K_n.append(Kj)
        K_ops.append(K_n)
        Ls_mats.append(Ls)
        residuals.append(worst)
        logger.debug("order %d: |L_s,n| = %.3e, relative residual %.2e", n, np.linalg.norm(Ls), worst)
    K_list = [SuperOperator(np.array([vectorize(X) for X in ops]).T, dB, dA * dB) for ops in K_ops]
    Ls_list = [SuperOperator(Ls, dB, dB) for Ls in Ls_mats]
    return EliminationResult(order, K_list, Ls_list, residuals, dims=(dA, dB), model=model.parameterRow())

def _check_eps(eps):
    if not eps >= 0:
        raise InvalidParameters("eps must be >= 0, got %r" % eps)

def reduced_generator(res, eps):
    _check_eps(eps)
    out = SuperOperator.zero(res.dim_B)
    for n, Ls in enumerate(res.Ls_list):
        out = out + eps ** n * Ls
    return out

def assignment_map(res, eps):
    _check_eps(eps)
    out = SuperOperator.zero(res.dim_B, res.dim_A * res.dim_B)
    for n, K in enumerate(res.K_list):
        out = out + eps ** n * K
    return out

def invariance_residual(res, eps, model):
    '''Spectral norm of K o L_s - L_tot o K over the truncated sums'''
    K = assignment_map(res, eps)
    Ls = reduced_generator(res, eps)
    D = res.dim_A * res.dim_B
    lhs = K.matrix @ Ls.matrix
    cols = []
    for j in range(K.dim_in):
        X = devectorize(K.matrix[:, j], D)
        cols.append(lhs[:, j] - vectorize(model.apply_total(X, eps)))
    return float(np.linalg.norm(np.array(cols).T, 2))

def scaling_exponent(model, order, eps_pair=(0.1, 0.05), result=None):
    '''log(r(e1)/r(e2)) / log(e1/e2) for the invariance residual r'''
    res = eliminate(model, order) if result is None else result
    e1, e2 = eps_pair
    r1, r2 = invariance_residual(res, e1, model), invariance_residual(res, e2, model)
    logger.debug("order %d residuals %.3e at %g, %.3e at %g", order, r1, e1, r2, e2)
    return float(np.log(r1 / r2) / np.log(e1 / e2))


@dataclass
class GaugeMap:
    '''G = sum_{n >= 1} eps^n G_n, linear and time independent'''
    orders: dict = field(default_factory=dict)
    dim: int = 2

    def __post_init__(self):
        for n, G in self.orders.items():
            if n < 1:
                raise InvalidParameters("gauge terms start at order 1, got %r" % n)
            if (G.d_in, G.d_out) != (self.dim, self.dim):
                raise InvalidParameters("gauge term of order %d acts on the wrong space" % n)

    @classmethod
    def zero(cls, dim=2):
        return cls({}, dim)

    @classmethod
    def random(cls, rand=None, max_norm=0.1, orders=(1, 2), dim=2):
        rand = RandomFactory.getInstance() if rand is None else rand
        return cls({n: rand.gauge(dim, max_norm) for n in orders}, dim)

    def at(self, eps):
        out = SuperOperator.zero(self.dim)
        for n, G in sorted(self.orders.items()):
            out = out + eps ** n * G
        return out

def apply_gauge(res, G, eps, tol=None):
    '''(K^G, L_s^G) = (K o (I + G), (I + G)^-1 o L_s o (I + G))'''
    tol = config.resolve(tol)
    M = SuperOperator.identity(res.dim_B) + G.at(eps)
    kappa = np.linalg.cond(M.matrix)
    logger.debug("gauge condition number %.3e", kappa)
    if not np.isfinite(kappa) or kappa > tol.kappa_max:
        raise SingularGauge("I + G has condition number %.3e > %.1e" % (kappa, tol.kappa_max))
    M_inv = SuperOperator(np.linalg.inv(M.matrix), res.dim_B, res.dim_B)
    return assignment_map(res, eps) @ M, M_inv @ reduced_generator(res, eps) @ M

def converged_cutoff(params, order=4, rtol=1e-8, max_cutoff=96):
    '''
    Doubles the Fock cutoff until the reduced generator at params.eps changes
    by less than rtol (relative); returns (N, change) for the last accepted N.
    '''
    if not isinstance(params, JCParams):
        params = JCParams(**params)
    N = params.N

    def generator(cutoff):
        model = JaynesCummings(params.with_(fock_cutoff=cutoff))
        return reduced_generator(eliminate(model, order), params.eps).matrix

    current = generator(N)
    change = np.inf
    while 2 * N <= max_cutoff:
        doubled = generator(2 * N)
        change = float(np.linalg.norm(doubled - current) / max(np.linalg.norm(doubled), 1e-300))
        logger.debug("cutoff %d -> %d: relative change %.2e", N, 2 * N, change)
        if change < rtol:
            return N, change
        N, current = 2 * N, doubled
    logger.warning("cutoff not converged to %.1e below %d (last change %.2e)", rtol, max_cutoff, change)
    return N, change
