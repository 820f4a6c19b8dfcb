'''
Base class for bipartite Lindblad models

Notes: a model is the composite generator

    L_tot = L_A (x) I_B + eps (I_A (x) L_B + L_int)

with L_A a Lindbladian on the fast subsystem A that has a unique steady
state, and L_B, L_int Hamiltonian maps given in expansion units
(L_B = -i H_B^x, L_int = -i H_int^x). Subclasses provide
(fast_generator, slow_hamiltonian, coupling_hamiltonian, eps).
'''
import logging
from functools import cached_property

import numpy as np

from adelim import config
from adelim.toolbox.errors import DimensionMismatch, ZeroNotSimple
from adelim.toolbox.matrixops import check_square, hermitian_part, min_eigenvalue, commutator
from adelim.toolbox.modelbase import ModelBase
from adelim.toolbox.superop import (SuperOperator, LeastSquaresSolver, KernelProjector, commutator_superop,
                                    lindbladian, lift_A, lift_B, devectorize, spectrum, apply_lift_A)

logger = logging.getLogger(__name__)

def steady_state(L_A, solver=None, tol=None):
    '''Unique steady state of L_A, normalized to unit trace'''
    tol = config.resolve(tol)
    solver = LeastSquaresSolver(L_A, tol) if solver is None else solver
    if solver.nullity != 1:
        raise ZeroNotSimple("fast generator has a %d-dimensional kernel" % solver.nullity)
    rho = devectorize(solver.kernel()[:, 0], L_A.d_in)
    rho = hermitian_part(rho / np.trace(rho))
    residual = np.linalg.norm(L_A.apply(rho))
    if residual > tol.tau_res * max(L_A.norm(), 1.0):
        raise ZeroNotSimple("steady-state residual %.3e too large" % residual)
    lowest = min_eigenvalue(rho)
    if lowest < -tol.tau_psd * max(np.linalg.norm(rho), 1.0):
        logger.warning("steady state has negative eigenvalue %.3e", lowest)
    return rho

class BipartiteModel(ModelBase):
    def __init__(self, tol=None):
        ModelBase.__init__(self)
        ModelBase._setProperty(self, model='Bipartite')
        self.tol = config.resolve(tol)

    # interface

    @property
    def dim_A(self):
        return NotImplemented

    @property
    def dim_B(self):
        return NotImplemented

    @property
    def eps(self):
        return NotImplemented

    def fast_generator(self):
        raise NotImplementedError

    def slow_hamiltonian(self):
        raise NotImplementedError

    def coupling_hamiltonian(self):
        raise NotImplementedError

    # shared machinery

    @property
    def dim(self):
        return self.dim_A * self.dim_B

    @cached_property
    def L_A(self):
        return self.fast_generator()

    @cached_property
    def solver(self):
        '''Factorization of L_A reused by the steady state and every elimination order'''
        return LeastSquaresSolver(self.L_A, self.tol)

    @cached_property
    def steady_state_A(self):
        return steady_state(self.L_A, self.solver, self.tol)

    @cached_property
    def projector(self):
        return KernelProjector.trace_free(self.steady_state_A)

    @cached_property
    def slow_generator_hamiltonian(self):
        '''I_A (x) H_B + H_int, the Hamiltonian of eps (I_A (x) L_B + L_int)'''
        H_int = check_square(self.coupling_hamiltonian(), 'H_int')
        if H_int.shape[0] != self.dim:
            raise DimensionMismatch("coupling Hamiltonian must act on the composite space")
        return np.kron(np.eye(self.dim_A), check_square(self.slow_hamiltonian(), 'H_B')) + H_int

    @cached_property
    def L_B(self):
        return -1j * commutator_superop(self.slow_hamiltonian())

    @cached_property
    def L_int(self):
        return -1j * commutator_superop(self.coupling_hamiltonian())

    def total_generator(self, eps=None):
        '''L_tot as a composite superoperator (materialized, small dimensions only)'''
        eps = self.eps if eps is None else eps
        return lift_A(self.L_A, self.dim_B) + eps * (lift_B(self.L_B, self.dim_A) + self.L_int)

    @cached_property
    def L_tot(self):
        return self.total_generator()

    def apply_slow(self, X):
        '''(I_A (x) L_B + L_int)(X) in expansion units'''
        return -1j * commutator(self.slow_generator_hamiltonian, X)

    def apply_total(self, X, eps=None):
        eps = self.eps if eps is None else eps
        return apply_lift_A(self.L_A, X, self.dim_B) + eps * self.apply_slow(X)

    def verify_spectrum(self):
        '''Full eigendecomposition check of the uniqueness assumption; cost grows as dim_A^6'''
        return spectrum(self.L_A, unique_zero=True, tol=self.tol)


class GenericBipartiteModel(BipartiteModel):
    '''
    Model assembled from plain matrices:
    L_A = -i H_A^x + sum D[L_k], L_B = -i H_B^x, L_int = -i H_int^x.
    '''
    def __init__(self, H_A, jumps_A, H_B, H_int, eps, tol=None):
        BipartiteModel.__init__(self, tol)
        self._H_A = check_square(np.asarray(H_A, dtype=complex), 'H_A')
        self._jumps = [check_square(np.asarray(L, dtype=complex), 'jump') for L in jumps_A]
        self._H_B = check_square(np.asarray(H_B, dtype=complex), 'H_B')
        self._H_int = check_square(np.asarray(H_int, dtype=complex), 'H_int')
        self._eps = float(eps)
        ModelBase._setProperty(self, model='Generic', fast='generic', slow='dim=%d' % self._H_B.shape[0],
                               params={'eps': self._eps})

    @property
    def dim_A(self):
        return self._H_A.shape[0]

    @property
    def dim_B(self):
        return self._H_B.shape[0]

    @property
    def eps(self):
        return self._eps

    def fast_generator(self):
        return lindbladian(self._H_A, self._jumps)

    def slow_hamiltonian(self):
        return self._H_B

    def coupling_hamiltonian(self):
        return self._H_int
