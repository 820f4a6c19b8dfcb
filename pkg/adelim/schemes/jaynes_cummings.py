'''
Dissipative Jaynes-Cummings model: a thermally damped oscillator (fast, A)
coupled to a non-dissipative qubit (slow, B), in the frame rotating with the
qubit frequency.

* fast generator:  L_A = -i Delta_A (a^dagger a)^x + gamma (1 + n_th) D[a] + gamma n_th D[a^dagger]
* coupling:        eps L_int = -i g (a^dagger (x) sigma_- + a (x) sigma_+)^x,  eps = |g|/gamma
* slow generator:  L_B = 0

Units: gamma sets the rate unit; Delta_A, g are given in the same unit.

>>> params = JCParams(delta_A=0.0, gamma=1.0, n_th=1.0, g=0.1, fock_cutoff=10)
>>> params.eps
0.1
>>> model = JaynesCummings(params)
>>> round(float(model.steady_state_A[0, 0].real), 6)
0.500244
'''
import logging
import math
import warnings
from dataclasses import dataclass, replace, asdict
from typing import Optional

import numpy as np

from adelim import config
from adelim.toolbox.BipartiteModel import BipartiteModel, steady_state
from adelim.toolbox.errors import InvalidParameters, LargeExpansionParameter
from adelim.toolbox.matrixops import SIGMA_MINUS, SIGMA_PLUS
from adelim.toolbox.modelbase import ModelBase
from adelim.toolbox.superop import commutator_superop, dissipator_superop

logger = logging.getLogger(__name__)

def default_cutoff(n_th):
    '''Fock cutoff heuristic N = ceil(8 n_th + 12)'''
    return int(math.ceil(8 * n_th + 12))

def tail_cutoff(n_th, tail=1e-13):
    '''Smallest N >= default_cutoff(n_th) with thermal ratio^N below tail'''
    N = default_cutoff(n_th)
    if n_th > 0:
        ratio = n_th / (1.0 + n_th)
        N = max(N, int(math.ceil(math.log(tail) / math.log(ratio))))
    return N

@dataclass(frozen=True)
class JCParams:
    delta_A: float = 0.0
    gamma: float = 1.0
    n_th: float = 0.0
    g: float = 0.1
    fock_cutoff: Optional[int] = None

    def __post_init__(self):
        if not self.gamma > 0:
            raise InvalidParameters("gamma must be > 0 (unique oscillator steady state), got %r" % self.gamma)
        if not self.n_th >= 0:
            raise InvalidParameters("n_th must be >= 0, got %r" % self.n_th)
        if self.fock_cutoff is not None and int(self.fock_cutoff) < 2:
            raise InvalidParameters("fock_cutoff must be >= 2, got %r" % self.fock_cutoff)
        if not np.isfinite([self.delta_A, self.g]).all():
            raise InvalidParameters("delta_A and g must be finite")
        if self.eps >= config.tolerances.eps_warn:
            warnings.warn("expansion parameter eps = |g|/gamma = %.3g is not small" % self.eps,
                          LargeExpansionParameter)

    @property
    def N(self):
        return default_cutoff(self.n_th) if self.fock_cutoff is None else int(self.fock_cutoff)

    @property
    def eps(self):
        return abs(self.g) / self.gamma

    @property
    def n_plus(self):
        return self.n_th

    @property
    def n_minus(self):
        return 1.0 + self.n_th

    @property
    def gamma_bar(self):
        return self.gamma + 2j * self.delta_A

    def with_(self, **changes):
        return replace(self, **changes)

    def as_dict(self):
        d = asdict(self)
        d['fock_cutoff'] = self.N
        return d

def oscillator_ops(N):
    '''(a, a^dagger, a^dagger a) on the Fock space truncated at level N'''
    if N < 2:
        raise InvalidParameters("Fock cutoff must be >= 2")
    a = np.diag(np.sqrt(np.arange(1, N + 1)), k=1).astype(complex)
    ad = a.conj().T
    return a, ad, ad @ a

def jc_coupling(N):
    '''a^dagger (x) sigma_- + a (x) sigma_+'''
    a, ad, _ = oscillator_ops(N)
    return np.kron(ad, SIGMA_MINUS) + np.kron(a, SIGMA_PLUS)

def build_LA(params):
    a, ad, n = oscillator_ops(params.N)
    return (-1j * params.delta_A * commutator_superop(n)
            + params.gamma * (1 + params.n_th) * dissipator_superop(a)
            + params.gamma * params.n_th * dissipator_superop(ad))

def build_Lint(params):
    '''Physical coupling map -i g (a^dagger (x) sigma_- + a (x) sigma_+)^x, eps not factored out'''
    return -1j * params.g * commutator_superop(jc_coupling(params.N))

def thermal_state(n_th, N):
    '''Analytic thermal state on levels 0..N, renormalized over the truncated space'''
    if n_th == 0:
        p = np.zeros(N + 1)
        p[0] = 1.0
    else:
        p = (n_th / (1.0 + n_th)) ** np.arange(N + 1)
        p /= p.sum()
    return np.diag(p).astype(complex)


class JaynesCummings(BipartiteModel):
    def __init__(self, params, tol=None):
        BipartiteModel.__init__(self, tol)
        if not isinstance(params, JCParams):
            params = JCParams(**params)
        self.params = params
        ModelBase._setProperty(self, model='JaynesCummings', fast='oscillator', slow='qubit',
                               params=params.as_dict(), eps=params.eps)
        self.logProperties()

    @property
    def dim_A(self):
        return self.params.N + 1

    @property
    def dim_B(self):
        return 2

    @property
    def eps(self):
        return self.params.eps

    def fast_generator(self):
        return build_LA(self.params)

    def slow_hamiltonian(self):
        return np.zeros((2, 2), dtype=complex)

    def coupling_hamiltonian(self):
        # L_int in expansion units: (gamma/|g|) (-i g H^x) = -i gamma sign(g) H^x
        sign = -1.0 if self.params.g < 0 else 1.0
        return sign * self.params.gamma * jc_coupling(self.params.N)

    def with_params(self, **changes):
        return JaynesCummings(self.params.with_(**changes), self.tol)

    def cutoff_diagnostic(self):
        '''Deviation from the analytic thermal state and population of the top levels'''
        rho = self.steady_state_A
        deviation = float(np.max(np.abs(rho - thermal_state(self.params.n_th, self.params.N))))
        tail = float(np.max(np.abs(np.diag(rho)[-3:])))
        if deviation > self.tol.tau_thermal:
            logger.warning("steady state deviates from the thermal state by %.2e at N=%d", deviation, self.params.N)
        if tail > self.tol.tau_tail:
            logger.debug("thermal tail %.2e above %.1e at N=%d", tail, self.tol.tau_tail, self.params.N)
        return {'thermal_deviation': deviation, 'tail_population': tail}
