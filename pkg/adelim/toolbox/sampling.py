'''
Seeded randomness for property checks and sampling scans.

Classes call ``rand = RandomFactory.getInstance(seed)`` to acquire a generator,
so the randomness engine can be swapped in one place.

>>> rand = RandomFactory.getInstance(7)
>>> U = rand.haar_unitary(3)
>>> import numpy as np
>>> bool(np.allclose(U.conj().T @ U, np.eye(3)))
True
'''
import numpy as np

from adelim.toolbox.matrixops import dagger, PAULI_BASIS
from adelim.toolbox.superop import SuperOperator, gks_superop, partial_trace

DEFAULT_SEED = 20230101

class RandomSource():
    def __init__(self, seed=None):
        self.seed = DEFAULT_SEED if seed is None else int(seed)
        self.rng = np.random.default_rng(self.seed)

    def ginibre(self, rows, cols=None):
        cols = rows if cols is None else cols
        return (self.rng.standard_normal((rows, cols)) + 1j * self.rng.standard_normal((rows, cols))) / np.sqrt(2)

    def operator(self, d):
        return self.ginibre(d)

    def hermitian(self, d):
        X = self.ginibre(d)
        return (X + dagger(X)) / 2

    def haar_isometry(self, d_in, d_out):
        '''d_out x d_in matrix V with V^dagger V = I, Haar distributed'''
        Q, R = np.linalg.qr(self.ginibre(d_out, d_in))
        phases = np.diag(R) / np.abs(np.diag(R))
        return Q * phases

    def haar_unitary(self, d):
        return self.haar_isometry(d, d)

    def pure_state(self, d):
        psi = self.ginibre(d, 1).reshape(-1)
        return psi / np.linalg.norm(psi)

    def density(self, d, rank=None):
        X = self.ginibre(d, d if rank is None else rank)
        rho = X @ dagger(X)
        return rho / np.trace(rho).real

    def sphere_points(self, n):
        v = self.rng.standard_normal((n, 3))
        return v / np.linalg.norm(v, axis=1, keepdims=True)

    def kraus_channel(self, d=2, env_dim=8):
        '''Stinespring construction: Phi(rho) = tr_env(V rho V^dagger), V Haar isometry'''
        V = self.haar_isometry(d, d * env_dim)
        cols = []
        for j in range(d):
            for i in range(d):
                E = np.zeros((d, d), dtype=complex)
                E[i, j] = 1.0
                # output ordered system (x) environment
                out = partial_trace(V @ E @ dagger(V), d, env_dim, keep='A')
                cols.append(out.reshape(-1, order='F'))
        return SuperOperator(np.array(cols).T, d, d)

    def qubit_generator(self, scale=1.0, lindblad=False):
        '''
        Trace-annihilating Hermiticity-preserving qubit map. The GKS matrix is
        indefinite by default; lindblad=True draws a positive definite one.
        '''
        H = scale * self.hermitian(2)
        H -= np.trace(H) / 2 * np.eye(2)
        X = self.ginibre(3)
        if lindblad:
            Gamma = scale * (X @ dagger(X) + 0.1 * np.eye(3))
        else:
            Gamma = scale * (X + dagger(X)) / 2
        return gks_superop(H, Gamma, basis=PAULI_BASIS[1:])

    def gauge(self, d=2, max_norm=0.1):
        X = self.ginibre(d * d)
        return SuperOperator(max_norm * self.rng.uniform() * X / np.linalg.norm(X, 2), d, d)

class RandomFactory():
    '''
    Central place to obtain the random source used by the sampling scans.
    '''
    @classmethod
    def getInstance(self, seed=None):
        return RandomSource(seed)
