'''
Vectorized superoperator algebra.

Convention: operators are vectorized by column stacking, so that the matrix of
X -> A X B is ``kron(B.T, A)``. Composite spaces are ordered A (fast) then B
(slow): the composite operator of X_A and X_B is ``kron(X_A, X_B)``.

>>> import numpy as np
>>> vectorize(np.eye(2)).real.tolist()
[1.0, 0.0, 0.0, 1.0]
>>> from adelim.toolbox.matrixops import SIGMA_Z, SIGMA_PLUS
>>> Z = commutator_superop(SIGMA_Z)
>>> bool(np.allclose(Z.apply(SIGMA_PLUS), 2 * SIGMA_PLUS))
True
'''
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg as sla

from adelim import config
from adelim.toolbox.errors import DimensionMismatch, NotSolvable, ZeroNotSimple
from adelim.toolbox.matrixops import check_square, dagger

logger = logging.getLogger(__name__)

def vectorize(X):
    X = check_square(X)
    return np.asarray(X, dtype=complex).reshape(-1, order='F')

def devectorize(v, dim):
    v = np.asarray(v)
    if v.size != dim * dim:
        raise DimensionMismatch("vector of length %d cannot hold a %dx%d operator" % (v.size, dim, dim))
    return v.reshape((dim, dim), order='F')

def _hilbert_dim(n):
    d = int(round(np.sqrt(n)))
    if d * d != n:
        raise DimensionMismatch("%d is not an operator-space dimension" % n)
    return d

def _transpose_permutation(d):
    # vec(X^T)[i + j d] = vec(X)[j + i d]
    idx = np.arange(d * d)
    i, j = idx % d, idx // d
    return j + i * d


class SuperOperator:
    '''Linear map from operators on C^d_in to operators on C^d_out'''
    # numpy scalars defer to __rmul__
    __array_ufunc__ = None

    def __init__(self, matrix, d_in=None, d_out=None):
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2:
            raise DimensionMismatch("superoperator matrix must be 2-dimensional")
        self.d_in = _hilbert_dim(matrix.shape[1]) if d_in is None else int(d_in)
        self.d_out = _hilbert_dim(matrix.shape[0]) if d_out is None else int(d_out)
        if matrix.shape != (self.d_out ** 2, self.d_in ** 2):
            raise DimensionMismatch("matrix shape %s does not match d_in=%d, d_out=%d"
                                    % (matrix.shape, self.d_in, self.d_out))
        self.matrix = matrix

    @property
    def dim_in(self):
        return self.d_in ** 2

    @property
    def dim_out(self):
        return self.d_out ** 2

    @classmethod
    def identity(cls, d):
        return cls(np.eye(d * d, dtype=complex), d, d)

    @classmethod
    def zero(cls, d_in, d_out=None):
        d_out = d_in if d_out is None else d_out
        return cls(np.zeros((d_out ** 2, d_in ** 2), dtype=complex), d_in, d_out)

    def apply(self, X):
        X = check_square(X)
        if X.shape[0] != self.d_in:
            raise DimensionMismatch("operator of dimension %d applied to map on dimension %d"
                                    % (X.shape[0], self.d_in))
        return devectorize(self.matrix @ vectorize(X), self.d_out)

    __call__ = apply

    def __matmul__(self, other):
        if not isinstance(other, SuperOperator):
            return NotImplemented
        if other.d_out != self.d_in:
            raise DimensionMismatch("cannot compose: inner dimensions %d and %d" % (other.d_out, self.d_in))
        return SuperOperator(self.matrix @ other.matrix, other.d_in, self.d_out)

    def _check_same(self, other):
        if (self.d_in, self.d_out) != (other.d_in, other.d_out):
            raise DimensionMismatch("superoperators act on different spaces")

    def __add__(self, other):
        self._check_same(other)
        return SuperOperator(self.matrix + other.matrix, self.d_in, self.d_out)

    def __sub__(self, other):
        self._check_same(other)
        return SuperOperator(self.matrix - other.matrix, self.d_in, self.d_out)

    def __mul__(self, scalar):
        return SuperOperator(scalar * self.matrix, self.d_in, self.d_out)

    __rmul__ = __mul__

    def __neg__(self):
        return SuperOperator(-self.matrix, self.d_in, self.d_out)

    def __repr__(self):
        return "SuperOperator(d_in=%d, d_out=%d)" % (self.d_in, self.d_out)

    def norm(self, ord='fro'):
        return float(np.linalg.norm(self.matrix, ord))

    def dagger(self):
        '''Adjoint with respect to the Hilbert-Schmidt inner product'''
        return SuperOperator(dagger(self.matrix), self.d_out, self.d_in)

    def trace_row(self):
        '''tr(S(X)) as a row vector acting on vec(X)'''
        return vectorize(np.eye(self.d_out)).conj() @ self.matrix

    def is_trace_annihilating(self, rel_tol=1e-10):
        return np.linalg.norm(self.trace_row()) <= rel_tol * max(self.norm(), 1.0)

    def is_trace_preserving(self, rel_tol=1e-10):
        target = vectorize(np.eye(self.d_in)).conj()
        return np.linalg.norm(self.trace_row() - target) <= rel_tol * max(self.norm(), 1.0)

    def hermiticity_defect(self):
        p_out = _transpose_permutation(self.d_out)
        p_in = _transpose_permutation(self.d_in)
        mirrored = np.conj(self.matrix)[np.ix_(p_out, p_in)]
        return float(np.linalg.norm(self.matrix - mirrored))

    def is_hermiticity_preserving(self, rel_tol=1e-10):
        return self.hermiticity_defect() <= rel_tol * max(self.norm(), 1.0)


def sandwich_superop(A, B):
    '''Matrix of X -> A X B'''
    A, B = np.asarray(A, dtype=complex), np.asarray(B, dtype=complex)
    if A.shape[1] != B.shape[0] or A.shape[0] != B.shape[1]:
        raise DimensionMismatch("A X B requires A of shape (m, n) and B of shape (n, m)")
    return SuperOperator(np.kron(B.T, A), A.shape[1], A.shape[0])

def commutator_superop(H):
    '''H^x(X) = H X - X H; the factor -i is applied by callers'''
    H = check_square(np.asarray(H, dtype=complex), 'Hamiltonian')
    I = np.eye(H.shape[0])
    return SuperOperator(np.kron(I, H) - np.kron(H.T, I))

def dissipator_superop(L):
    '''D[L](X) = L X L^dagger - (L^dagger L X + X L^dagger L)/2'''
    L = check_square(np.asarray(L, dtype=complex), 'jump operator')
    I = np.eye(L.shape[0])
    LdL = dagger(L) @ L
    return SuperOperator(np.kron(L.conj(), L) - 0.5 * (np.kron(I, LdL) + np.kron(LdL.T, I)))

def lindbladian(H=None, jumps=(), dim=None):
    '''-i H^x + sum_k D[L_k]'''
    if H is None:
        if dim is None:
            dim = check_square(jumps[0]).shape[0]
        S = SuperOperator.zero(dim)
    else:
        S = -1j * commutator_superop(H)
    for L in jumps:
        S = S + dissipator_superop(L)
    return S

def lift_A(S, dim_B):
    '''S on A extended to S (x) I_B on the composite space A (x) B'''
    dA = S.d_in
    if S.d_out != dA:
        raise DimensionMismatch("lift_A requires a map from A to A")
    S4 = S.matrix.reshape(dA, dA, dA, dA)
    IB = np.eye(dim_B)
    D = dA * dim_B
    return SuperOperator(np.einsum('abcd,ef,gh->aebgcfdh', S4, IB, IB).reshape(D * D, D * D), D, D)

def lift_B(S, dim_A):
    '''S on B extended to I_A (x) S on the composite space A (x) B'''
    dB = S.d_in
    if S.d_out != dB:
        raise DimensionMismatch("lift_B requires a map from B to B")
    S4 = S.matrix.reshape(dB, dB, dB, dB)
    IA = np.eye(dim_A)
    D = dim_A * dB
    return SuperOperator(np.einsum('pq,rs,efgh->perfqgsh', IA, IA, S4).reshape(D * D, D * D), D, D)

def partial_trace_A(dim_A, dim_B):
    '''tr_A as a superoperator from A (x) B operators to B operators'''
    IA, IB = np.eye(dim_A), np.eye(dim_B)
    D = dim_A * dim_B
    M = np.einsum('ki,ac,bd->abkcid', IA, IB, IB).reshape(dim_B * dim_B, D * D)
    return SuperOperator(M.astype(complex), D, dim_B)

def partial_trace(X, dim_A, dim_B, keep='B'):
    X4 = np.asarray(X).reshape(dim_A, dim_B, dim_A, dim_B)
    if keep == 'B':
        return np.einsum('ibic->bc', X4)
    elif keep == 'A':
        return np.einsum('ibkb->ik', X4)
    raise ValueError("keep must be 'A' or 'B'")

# operator-form action of lifted maps; avoids building composite superoperators

def _blocks(X, dA, dB):
    # columns are vec(X_bb'), the A-operator blocks of X, ordered b*dB + b'
    X4 = np.asarray(X).reshape(dA, dB, dA, dB)
    return X4.transpose(1, 3, 2, 0).reshape(dB * dB, dA * dA).T

def _unblocks(cols, dA, dB):
    Y = np.asarray(cols).T.reshape(dB, dB, dA, dA)
    return Y.transpose(3, 0, 2, 1).reshape(dA * dB, dA * dB)

def apply_lift_A(S, X, dim_B):
    dA = S.d_in
    return _unblocks(S.matrix @ _blocks(X, dA, dim_B), dA, dim_B)

def solve_lift_A(solver, Y, dim_B, projector=None, scale=None):
    '''Solve (S (x) I_B)(X) = Y block by block with a factorized S'''
    dA = solver.dim
    cols = solver.solve(_blocks(Y, dA, dim_B), scale)
    if projector is not None:
        cols = projector.remove(cols)
    return _unblocks(cols, dA, dim_B)

def expm_superop(S, t=1.0):
    return SuperOperator(sla.expm(t * S.matrix), S.d_in, S.d_out)


@dataclass
class SpectralData:
    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray
    zero_index: Optional[int] = None

    @property
    def gap(self):
        '''Smallest distance of the non-zero eigenvalues from the imaginary axis'''
        rest = np.delete(self.eigenvalues, [] if self.zero_index is None else [self.zero_index])
        return float(-np.max(rest.real)) if rest.size else np.inf

def spectrum(S, unique_zero=False, tol=None):
    tol = config.resolve(tol)
    w, V = sla.eig(S.matrix)
    scale = max(S.norm(), 1e-300)
    zeros = np.flatnonzero(np.abs(w) <= tol.tau_zero * scale)
    zero_index = int(zeros[np.argmin(np.abs(w[zeros]))]) if zeros.size else None
    if unique_zero:
        if zeros.size != 1:
            raise ZeroNotSimple("%d eigenvalues within %.1e of zero" % (zeros.size, tol.tau_zero * scale))
        rest = np.delete(w, zero_index)
        if rest.size and np.max(rest.real) >= -tol.tau_gap * scale:
            raise ZeroNotSimple("non-zero eigenvalue with real part %.3e, no spectral gap" % np.max(rest.real))
    return SpectralData(w, V, zero_index)


class KernelProjector:
    '''Removes the kernel direction k from x so that functional(x) = 0'''
    def __init__(self, kernel, functional):
        self.kernel = np.asarray(kernel, dtype=complex).reshape(-1)
        self.functional = np.asarray(functional, dtype=complex).reshape(-1)
        self._norm = self.functional @ self.kernel
        if abs(self._norm) == 0:
            raise ValueError("functional vanishes on the kernel direction")

    @classmethod
    def trace_free(cls, steady):
        '''Projector for the elimination gauge: tr X = 0 along the steady-state direction'''
        d = steady.shape[0]
        return cls(vectorize(steady), vectorize(np.eye(d)))

    def component(self, x):
        return self.functional @ x

    def remove(self, x):
        c = self.component(x) / self._norm
        return x - np.multiply.outer(self.kernel, c) if np.ndim(x) > 1 else x - c * self.kernel


class LeastSquaresSolver:
    '''
    Column-pivoted QR factorization of a (possibly singular) square
    superoperator, reused for every right-hand side.
    '''
    def __init__(self, S, tol=None):
        self.tol = config.resolve(tol)
        M = S.matrix if isinstance(S, SuperOperator) else np.asarray(S, dtype=complex)
        if M.shape[0] != M.shape[1]:
            raise DimensionMismatch("LeastSquaresSolver requires a square matrix")
        self.matrix = M
        self.n = M.shape[0]
        self.dim = _hilbert_dim(self.n)
        self.Q, self.R, self.perm = sla.qr(M, pivoting=True)
        diag = np.abs(np.diag(self.R))
        self._norm = np.linalg.norm(M)
        threshold = self.tol.tau_zero * max(self._norm, 1e-300)
        self.rank = int(np.count_nonzero(diag > threshold))
        logger.debug("factorized %dx%d superoperator, numerical rank %d", self.n, self.n, self.rank)

    @property
    def nullity(self):
        return self.n - self.rank

    def kernel(self):
        '''Basis of the numerical kernel, one column per null direction'''
        r, n = self.rank, self.n
        basis = np.zeros((n, n - r), dtype=complex)
        if n - r == 0:
            return basis
        basis[r:, :] = np.eye(n - r)
        basis[:r, :] = -sla.solve_triangular(self.R[:r, :r], self.R[:r, r:])
        out = np.empty_like(basis)
        out[self.perm, :] = basis
        return out / np.linalg.norm(out, axis=0)

    def solve(self, Y, scale=None):
        '''
        Least-squares solution of M x = Y.

        The residual is accepted as a backward error: relative to |Y| and
        |M| |x|, plus a rounding floor at the magnitude ``scale`` of the
        terms Y was computed from (defaults to |Y|).
        '''
        Y = np.asarray(Y, dtype=complex)
        r = self.rank
        z = self.Q.conj().T @ Y
        xp = np.zeros_like(z)
        xp[:r] = sla.solve_triangular(self.R[:r, :r], z[:r])
        x = np.empty_like(xp)
        x[self.perm] = xp
        residual = np.linalg.norm(self.matrix @ x - Y)
        y_norm = np.linalg.norm(Y)
        mx_norm = self._norm * np.linalg.norm(x)
        scale = y_norm if scale is None else max(float(scale), y_norm)
        bound = (self.tol.tau_res * max(y_norm, mx_norm)
                 + self.n * np.finfo(float).eps * (mx_norm + scale))
        if residual > bound:
            raise NotSolvable("least-squares residual %.3e exceeds %.3e; right-hand side outside the image"
                              % (residual, bound))
        self.last_residual = float(residual)
        return x

def constrained_solve(S, Y, kernel_projector=None, tol=None, scale=None):
    '''Solve S X = Y in the least-squares sense, then remove the kernel component'''
    x = LeastSquaresSolver(S, tol).solve(Y, scale)
    if kernel_projector is not None:
        x = kernel_projector.remove(x)
    return x

def gks_superop(H, Gamma, basis):
    '''-i H^x + sum_ab Gamma_ab (A_a . A_b^dagger - {A_b^dagger A_a, .}/2)'''
    H = check_square(np.asarray(H, dtype=complex), 'Hamiltonian')
    d = H.shape[0]
    I = np.eye(d)
    S = -1j * commutator_superop(H).matrix
    for a, Aa in enumerate(basis):
        for b, Ab in enumerate(basis):
            if Gamma[a, b] == 0:
                continue
            AbA = dagger(Ab) @ Aa
            S = S + Gamma[a, b] * (np.kron(Ab.conj(), Aa) - 0.5 * (np.kron(I, AbA) + np.kron(AbA.T, I)))
    return SuperOperator(S, d, d)
