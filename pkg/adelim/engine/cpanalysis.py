'''
Positivity and complete-positivity diagnostics for qubit generators and
qubit evolution maps.

* GKS test:     a trace-annihilating Hermiticity-preserving generator is of
                Lindblad form iff its GKS matrix over a traceless basis is PSD
* Choi test:    a map is completely positive iff its Choi matrix is PSD
* WPG test:     the spectrum of a qubit channel must satisfy the tetrahedron
                conditions on (s1, s2, s3)
* Bloch test:   positivity of exp(L t) certified from the Bloch-ball flow

The GKS basis is (sigma_-, sigma_+, sigma_z/sqrt(2)). For the phase-covariant
generator

    L = -i (omega_B/2) sigma_z^x + gamma_- D[sigma_-] + gamma_+ D[sigma_+] + gamma_phi D[sigma_z]

the GKS matrix is diag(gamma_-, gamma_+, 2 gamma_phi), the factor 2 coming from
D[sigma_z] = 2 D[sigma_z/sqrt(2)].

>>> coeffs = QubitGeneratorCoeffs(0.0, 0.0896, 0.0448, -0.0048)
>>> round(coeffs.R_z, 12)
-0.333333333333
>>> bool(is_lindblad(generator_from_coeffs(coeffs)))
False
'''
import logging
from dataclasses import dataclass, field, asdict
from typing import Optional

import numpy as np
from scipy.optimize import brentq, linear_sum_assignment

from adelim import config
from adelim.toolbox.errors import (NotHermPreserving, NotConjugateClosed, CertificateInconclusive,
                                   InvalidParameters, DimensionMismatch)
from adelim.toolbox.matrixops import (SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z, IDENTITY_2, PAULI_BASIS,
                                      hermitian_part, min_eigenvalue)
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.superop import (SuperOperator, gks_superop, devectorize, expm_superop,
                                    _transpose_permutation)

logger = logging.getLogger(__name__)

GKS_BASIS = (SIGMA_MINUS, SIGMA_PLUS, SIGMA_Z / np.sqrt(2))
# orthonormal completion of GKS_BASIS
_FULL_BASIS = (IDENTITY_2 / np.sqrt(2),) + GKS_BASIS


@dataclass(frozen=True)
class QubitGeneratorCoeffs:
    omega_B: float
    gamma_minus: float
    gamma_plus: float
    gamma_phi: float
    # norm of the non phase-covariant part left over by generator_coeffs
    defect: float = field(default=0.0, compare=False)

    @property
    def inv_T1(self):
        return self.gamma_minus + self.gamma_plus

    @property
    def inv_T2(self):
        return self.inv_T1 / 2 + 2 * self.gamma_phi

    @property
    def T1(self):
        return 1.0 / self.inv_T1

    @property
    def T2(self):
        return 1.0 / self.inv_T2

    @property
    def R_z(self):
        return -(self.gamma_minus - self.gamma_plus) * self.T1

    @property
    def inv_DeltaT(self):
        return self.inv_T1 - self.inv_T2

    @property
    def DeltaT(self):
        return 1.0 / self.inv_DeltaT

    def as_dict(self):
        d = asdict(self)
        d.update(inv_T1=self.inv_T1, inv_T2=self.inv_T2, R_z=self.R_z, inv_DeltaT=self.inv_DeltaT)
        return d


@dataclass
class GKSDecomposition:
    H_eff: np.ndarray
    Gamma: np.ndarray
    basis: tuple = GKS_BASIS

    def reconstruct(self):
        return gks_superop(self.H_eff, self.Gamma, self.basis)

    @property
    def min_eigenvalue(self):
        return float(np.linalg.eigvalsh(self.Gamma)[0])


@dataclass
class LindbladTest:
    lindblad: bool
    margin: float
    witness: Optional[np.ndarray] = None
    witness_operator: Optional[np.ndarray] = None

    def __bool__(self):
        return self.lindblad


@dataclass
class SpectrumQuadruple:
    Lambda: np.ndarray
    s: np.ndarray


@dataclass
class WPGResult:
    feasible: bool
    margin: float
    violated_condition: Optional[str] = None

    def __bool__(self):
        return self.feasible


@dataclass
class OnsetResult:
    violated_at_zero: bool
    slope: float
    times: np.ndarray
    gap: np.ndarray
    t_star: Optional[float] = None


@dataclass
class BlochDynamics:
    coeffs: QubitGeneratorCoeffs
    certificate: bool
    positive: bool
    method: str

    @property
    def asymptote(self):
        return np.array([0.0, 0.0, self.coeffs.R_z])

    def rhs(self, r):
        '''d/dt (r_x, r_y, r_z)'''
        c = self.coeffs
        rx, ry, rz = r
        return np.array([-rx * c.inv_T2 - c.omega_B * ry,
                         -ry * c.inv_T2 + c.omega_B * rx,
                         -(rz - c.R_z) * c.inv_T1])

    def d_r2(self, r):
        '''d/dt |r|^2'''
        c = self.coeffs
        r = np.asarray(r, dtype=float)
        r2 = np.sum(r * r, axis=-1)
        rz = r[..., 2]
        return -2 * ((r2 - rz ** 2) * c.inv_T2 + rz * (rz - c.R_z) * c.inv_T1)

    def boundary_rate(self, rz):
        '''d/dt |r|^2 on the unit sphere written as a function of r_z'''
        c = self.coeffs
        return -2 * c.inv_DeltaT * ((rz - c.R_z * c.DeltaT * c.inv_T1 / 2) ** 2
                                    + c.DeltaT ** 2 * (c.gamma_minus * c.gamma_plus - 4 * c.gamma_phi ** 2))


def _check_qubit(L):
    if L.d_in != 2 or L.d_out != 2:
        raise DimensionMismatch("qubit diagnostics need a map on 2x2 operators, got %r" % L)

def gks_decompose(L, tol=None):
    tol = config.resolve(tol)
    _check_qubit(L)
    scale = max(L.norm(), 1e-300)
    if L.hermiticity_defect() > tol.tau_herm * scale:
        raise NotHermPreserving("generator is not Hermiticity-preserving (defect %.2e)" % L.hermiticity_defect())
    if np.linalg.norm(L.trace_row()) > tol.tau_herm * scale:
        raise InvalidParameters("generator is not trace-annihilating")
    # coefficients of L(X) = sum_ab c_ab F_a X F_b^dagger over an orthonormal basis
    c = np.empty((4, 4), dtype=complex)
    for a, Fa in enumerate(_FULL_BASIS):
        for b, Fb in enumerate(_FULL_BASIS):
            c[a, b] = np.vdot(np.kron(Fb.conj(), Fa), L.matrix)
    Gamma = hermitian_part(c[1:, 1:])
    F = c[0, 0] * IDENTITY_2 / 4 + sum(c[k + 1, 0] * A for k, A in enumerate(GKS_BASIS)) / np.sqrt(2)
    H_eff = hermitian_part(1j * (F - F.conj().T) / 2)
    return GKSDecomposition(H_eff, Gamma)

def is_lindblad(L, tol=None):
    tol = config.resolve(tol)
    gks = gks_decompose(L, tol)
    w, v = np.linalg.eigh(gks.Gamma)
    scale = max(np.linalg.norm(gks.Gamma), L.norm(), 1e-300)
    margin = float(w[0])
    if margin >= -tol.tau_psd * scale:
        return LindbladTest(True, margin)
    witness = v[:, 0]
    operator = sum(x * A for x, A in zip(witness, GKS_BASIS))
    logger.debug("GKS matrix has negative eigenvalue %.3e", margin)
    return LindbladTest(False, margin, witness, operator)

def generator_coeffs(L, tol=None):
    '''(omega_B, gamma_-, gamma_+, gamma_phi) of a phase-covariant qubit generator'''
    gks = gks_decompose(L, tol)
    G, H = gks.Gamma, gks.H_eff
    defect = float(np.linalg.norm(G - np.diag(np.diag(G))) + abs(H[0, 1]) + abs(H[1, 0]))
    if defect > 1e-8 * max(np.linalg.norm(G), np.linalg.norm(H), 1e-300):
        logger.warning("generator is not phase covariant, off-diagonal part %.2e dropped", defect)
    return QubitGeneratorCoeffs(omega_B=float((H[1, 1] - H[0, 0]).real),
                                gamma_minus=float(G[0, 0].real), gamma_plus=float(G[1, 1].real),
                                gamma_phi=float(G[2, 2].real) / 2, defect=defect)

def generator_from_coeffs(coeffs):
    H = coeffs.omega_B / 2 * SIGMA_Z
    Gamma = np.diag([coeffs.gamma_minus, coeffs.gamma_plus, 2 * coeffs.gamma_phi]).astype(complex)
    return gks_superop(H, Gamma, GKS_BASIS)

def choi_matrix(M):
    '''C = sum_ij E_ij (x) M(E_ij)'''
    d, e = M.d_in, M.d_out
    C = np.zeros((d * e, d * e), dtype=complex)
    for j in range(d):
        for i in range(d):
            C[i * e:(i + 1) * e, j * e:(j + 1) * e] = devectorize(M.matrix[:, i + j * d], e)
    return C

def choi_min_eigenvalue(M):
    return min_eigenvalue(choi_matrix(M))

def is_cp(M, tol=None):
    tol = config.resolve(tol)
    C = choi_matrix(M)
    return min_eigenvalue(C) >= -tol.tau_psd * max(np.linalg.norm(C), 1.0)

def transpose_map(d=2):
    '''X -> X^T, positive but not completely positive'''
    return SuperOperator(np.eye(d * d)[_transpose_permutation(d)], d, d)

def pauli_transfer_matrix(M):
    '''R_ab = tr(P_a M(P_b)) over the orthonormal Pauli basis {I, sx, sy, sz}/sqrt(2)'''
    _check_qubit(M)
    R = np.empty((4, 4), dtype=complex)
    for b, Pb in enumerate(PAULI_BASIS):
        out = M.apply(Pb)
        for a, Pa in enumerate(PAULI_BASIS):
            R[a, b] = np.trace(Pa.conj().T @ out)
    return R

def spectrum_quadruple(eigenvalues, tol=1e-9):
    '''SpectrumQuadruple from the four eigenvalues of a qubit map'''
    Lam = np.asarray(eigenvalues, dtype=complex).reshape(-1)
    if Lam.size != 4:
        raise DimensionMismatch("a qubit map has 4 eigenvalues, got %d" % Lam.size)
    k = int(np.argmin(np.abs(Lam - 1)))
    if abs(Lam[k] - 1) > tol:
        raise NotConjugateClosed("spectrum does not contain 1")
    lam = np.delete(Lam, k)
    lam = np.where(np.abs(lam.imag) <= tol, lam.real, lam)
    # each eigenvalue must have its conjugate in the list; match by distance, not by sort order
    rows, cols = linear_sum_assignment(np.abs(lam[:, None] - lam.conj()[None, :]))
    if np.max(np.abs(lam[rows] - lam.conj()[cols])) > tol:
        raise NotConjugateClosed("spectrum %s is not closed under conjugation" % lam)
    s = np.where(np.abs(lam.imag) <= tol, lam.real, np.abs(lam)).real
    return SpectrumQuadruple(np.concatenate([[1.0 + 0j], lam]), s.astype(float))

def evolution_spectrum(coeffs, t):
    if t < 0:
        raise InvalidParameters("t must be >= 0")
    decay = np.exp(-t * coeffs.inv_T2)
    rot = np.exp(1j * coeffs.omega_B * t)
    Lam = np.array([1.0, decay * rot, decay * np.conj(rot), np.exp(-t * coeffs.inv_T1)], dtype=complex)
    return SpectrumQuadruple(Lam, np.array([decay, decay, np.exp(-t * coeffs.inv_T1)]))

# tetrahedron with corners (1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)
_FACES = (((-1, -1, 1), "1 - s1 - s2 + s3 >= 0"),
          ((-1, 1, -1), "1 - s1 + s2 - s3 >= 0"),
          ((1, -1, -1), "1 + s1 - s2 - s3 >= 0"),
          ((1, 1, 1), "1 + s1 + s2 + s3 >= 0"))

def wpg_feasible(S, tol=1e-12):
    if not isinstance(S, SpectrumQuadruple):
        S = spectrum_quadruple(S)
    # sorted so the report is permutation independent
    s = np.sort(np.asarray(S.s, dtype=float))[::-1]
    values = [1 + np.dot(sign, s) for sign, _ in _FACES]
    k = int(np.argmin(values))
    margin = float(values[k])
    if margin >= -tol:
        return WPGResult(True, margin)
    return WPGResult(False, margin, _FACES[k][1])

def wpg_gap(coeffs, t):
    '''1 + exp(-t/T1) - 2 exp(-t/T2)'''
    t = np.asarray(t, dtype=float)
    return 1 + np.exp(-t * coeffs.inv_T1) - 2 * np.exp(-t * coeffs.inv_T2)

def cp_violation_onset(coeffs, times=None):
    if not (coeffs.inv_T1 > 0 and coeffs.inv_T2 > 0):
        raise InvalidParameters("T1 and T2 must be positive")
    if times is None:
        times = np.linspace(0.0, 5 * coeffs.T1, 501)
    times = np.asarray(times, dtype=float)
    gap = wpg_gap(coeffs, times)
    slope = 4 * coeffs.gamma_phi
    violated = bool(slope < 0)
    t_star = None
    if violated:
        positive = np.flatnonzero((gap >= 0) & (times > 0))
        if positive.size:
            i = positive[0]
            if i > 0 and wpg_gap(coeffs, times[i - 1]) < 0:
                t_star = float(brentq(lambda t: wpg_gap(coeffs, t), times[i - 1], times[i]))
            else:
                t_star = float(times[i])
    return OnsetResult(violated, slope, times, gap, t_star)

def bloch_dynamics(coeffs, strict=False, n_samples=1000, seed=None, tol=1e-12):
    if coeffs.inv_DeltaT == 0:
        raise InvalidParameters("1/T1 = 1/T2, the Bloch certificate is undefined")
    certificate = coeffs.inv_DeltaT > 0 and coeffs.gamma_minus * coeffs.gamma_plus > 4 * coeffs.gamma_phi ** 2
    if certificate:
        return BlochDynamics(coeffs, True, True, 'certificate')
    if strict:
        raise CertificateInconclusive("DeltaT > 0 and gamma_- gamma_+ > 4 gamma_phi^2 do not both hold")
    logger.warning("Bloch certificate inconclusive for %s, testing %d sphere points", coeffs, n_samples)
    dyn = BlochDynamics(coeffs, False, False, 'sampled')
    points = RandomFactory.getInstance(seed).sphere_points(n_samples)
    dyn.positive = bool(np.all(dyn.d_r2(points) <= tol))
    return dyn

def evolution_map(L, t):
    return expm_superop(L, t)

def cp_report(L, dt, times=None, tol=None):
    '''Diagnostics of a qubit generator: Lindblad form, Choi at dt, WPG gap and Bloch certificate'''
    lindblad = is_lindblad(L, tol)
    coeffs = generator_coeffs(L, tol)
    step = evolution_map(L, dt)
    choi_min = choi_min_eigenvalue(step)
    onset = cp_violation_onset(coeffs, times)
    bloch = bloch_dynamics(coeffs)
    return {'lindblad': lindblad.lindblad, 'gks_margin': lindblad.margin,
            'cp_at_dt': is_cp(step, tol), 'choi_min_eigenvalue': choi_min, 'dt': dt,
            'wpg_violated_at_zero': onset.violated_at_zero, 't_star': onset.t_star,
            'wpg_gap': {'t': onset.times, 'gap': onset.gap},
            'positive': bloch.positive, 'certificate': bloch.certificate,
            'coeffs': coeffs.as_dict()}
