'''
Matrix operations over complex operators: qubit constants, Hermiticity and
positivity predicates, Bloch-vector conversions.

Qubit basis convention: |0> is the ground state, |1> the excited state.
sigma_minus = |0><1| lowers, sigma_plus = |1><0| raises and
sigma_z = [sigma_plus, sigma_minus] = |1><1| - |0><0|, so the ground state has
Bloch coordinate r_z = -1. sigma_x, sigma_y follow from
sigma_pm = (sigma_x +- i sigma_y)/2.

>>> import numpy as np
>>> bool(np.allclose(commutator(SIGMA_Z, SIGMA_PLUS), 2 * SIGMA_PLUS))
True
>>> float(bloch_vector(GROUND)[2])
-1.0
'''
import numpy as np
from adelim.toolbox.errors import DimensionMismatch

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = SIGMA_PLUS @ SIGMA_MINUS - SIGMA_MINUS @ SIGMA_PLUS
SIGMA_X = SIGMA_PLUS + SIGMA_MINUS
SIGMA_Y = -1j * (SIGMA_PLUS - SIGMA_MINUS)
IDENTITY_2 = np.eye(2, dtype=complex)

GROUND = np.array([[1, 0], [0, 0]], dtype=complex)
EXCITED = np.array([[0, 0], [0, 1]], dtype=complex)

# orthonormal (Hilbert-Schmidt) Pauli basis {I, sx, sy, sz}/sqrt(2)
PAULI_BASIS = tuple(P / np.sqrt(2) for P in (IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z))

def dagger(X):
    return np.conj(X).T

def commutator(A, B):
    return A @ B - B @ A

def check_square(X, name='operator'):
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionMismatch("%s must be a square matrix, got shape %s" % (name, X.shape))
    return X

def hermitian_part(X):
    return (X + dagger(X)) / 2

def hermiticity_defect(X):
    '''||X - X^dagger||, zero for Hermitian X'''
    return np.linalg.norm(X - dagger(X))

def is_hermitian(X, rel_tol=1e-10):
    scale = max(np.linalg.norm(X), 1.0)
    return hermiticity_defect(X) <= rel_tol * scale

def min_eigenvalue(X):
    '''Smallest eigenvalue of the Hermitian part of X'''
    return float(np.linalg.eigvalsh(hermitian_part(X))[0])

def is_psd(X, rel_tol=1e-10):
    scale = max(np.linalg.norm(X), 1.0)
    return min_eigenvalue(X) >= -rel_tol * scale

def matrix_unit(i, j, dim):
    E = np.zeros((dim, dim), dtype=complex)
    E[i, j] = 1.0
    return E

def matrix_units(dim):
    '''Matrix units ordered as the column-stacking vector slots'''
    return [matrix_unit(i, j, dim) for j in range(dim) for i in range(dim)]

def density_from_bloch(r):
    r = np.asarray(r, dtype=float)
    if r.shape != (3,):
        raise DimensionMismatch("Bloch vector must have 3 components")
    return (IDENTITY_2 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z) / 2

def bloch_vector(rho):
    rho = check_square(rho, 'qubit state')
    if rho.shape != (2, 2):
        raise DimensionMismatch("Bloch vector only defined for qubit operators")
    return np.array([np.trace(rho @ P).real for P in (SIGMA_X, SIGMA_Y, SIGMA_Z)])

def purity(rho):
    return float(np.trace(rho @ rho).real)

def trace_norm(X):
    return float(np.sum(np.linalg.svd(X, compute_uv=False)))

def projector(psi):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())
