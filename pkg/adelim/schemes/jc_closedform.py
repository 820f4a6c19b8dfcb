'''
| Closed forms of the dissipative Jaynes-Cummings elimination
| Fourth-order reduced generator coefficients, sign region of the
| pure-dephasing rate, second-order assignment map and its negativity.

* model:          oscillator (fast) + non-dissipative qubit (slow)
* valid for:      eps = |g|/gamma << 1
* assignment map: Delta_A = 0 only

Fourth order, with n_+ = n_th, n_- = 1 + n_th, gbar = gamma + 2i Delta_A:

    b_pm = 2 g^2 n_pm / gbar + 8 g^4 n_pm^2 / gbar^3
           + 8 g^4 n_+ n_- (1 + 8i gamma Delta_A / |gbar|^2) / (conj(gbar) |gbar|^2)

    omega_B = Im(b_- + b_+),  gamma_pm = 2 Re(b_pm)

    gamma_phi = -8 g^4 n_+ n_- (3 - 6x^2 - x^4) / (gamma^3 (1 + x^2)^3),  x = 2 Delta_A / gamma

>>> from adelim.schemes.jaynes_cummings import JCParams
>>> c = fourth_order_coeffs(JCParams(delta_A=0.0, gamma=1.0, n_th=1.0, g=0.1))
>>> [round(v, 10) for v in (c.gamma_minus4, c.gamma_plus4, c.gamma_phi4)]
[0.0896, 0.0448, -0.0048]
>>> abs(c.omega_B4) < 1e-15
True
>>> round(negativity_threshold(), 6)
0.340625
'''
import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from adelim.engine.cpanalysis import QubitGeneratorCoeffs
from adelim.schemes.jaynes_cummings import JCParams, oscillator_ops, jc_coupling, thermal_state
from adelim.toolbox.errors import RequiresZeroDetuning, InvalidParameters
from adelim.toolbox.matrixops import (SIGMA_MINUS, SIGMA_PLUS, IDENTITY_2, dagger, density_from_bloch,
                                      matrix_units, min_eigenvalue, projector)
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.superop import SuperOperator, vectorize

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class FourthOrderCoeffs:
    b_minus: complex
    b_plus: complex
    omega_B4: float
    gamma_minus4: float
    gamma_plus4: float
    gamma_phi4: float
    gamma_minus2: float
    gamma_plus2: float
    g: float
    gamma: float
    delta_A: float
    n_th: float

    @property
    def n_plus(self):
        return self.n_th

    @property
    def n_minus(self):
        return 1.0 + self.n_th

    @property
    def gamma_bar(self):
        return self.gamma + 2j * self.delta_A

    def generator_coeffs(self):
        return QubitGeneratorCoeffs(self.omega_B4, self.gamma_minus4, self.gamma_plus4, self.gamma_phi4)

    def second_order_coeffs(self):
        omega2 = float(np.imag(2 * self.g ** 2 * (self.n_minus + self.n_plus) / self.gamma_bar))
        return QubitGeneratorCoeffs(omega2, self.gamma_minus2, self.gamma_plus2, 0.0)

    def row(self):
        '''CSV row keyed by (Delta_A/gamma, n_th, g/gamma)'''
        return {'delta_over_gamma': self.delta_A / self.gamma, 'n_th': self.n_th, 'g_over_gamma': self.g / self.gamma,
                'omega_B4': self.omega_B4, 'gamma_minus4': self.gamma_minus4, 'gamma_plus4': self.gamma_plus4,
                'gamma_phi4': self.gamma_phi4, 'gamma_minus2': self.gamma_minus2, 'gamma_plus2': self.gamma_plus2}

def _dephasing_polynomial(x):
    return 3 - 6 * x ** 2 - x ** 4

def fourth_order_coeffs(params):
    if not isinstance(params, JCParams):
        params = JCParams(**params)
    g, gamma, delta, n = params.g, params.gamma, params.delta_A, params.n_th
    n_plus, n_minus = n, 1.0 + n
    gbar = gamma + 2j * delta
    mod2 = abs(gbar) ** 2
    cross = 8 * g ** 4 * n_plus * n_minus * (1 + 8j * gamma * delta / mod2) / (np.conj(gbar) * mod2)

    def b(n_pm):
        return 2 * g ** 2 * n_pm / gbar + 8 * g ** 4 * n_pm ** 2 / gbar ** 3 + cross

    b_minus, b_plus = complex(b(n_minus)), complex(b(n_plus))
    x = 2 * delta / gamma
    gamma_phi = -8 * g ** 4 * n_plus * n_minus * _dephasing_polynomial(x) / (gamma ** 3 * (1 + x ** 2) ** 3)
    return FourthOrderCoeffs(b_minus=b_minus, b_plus=b_plus,
                             omega_B4=float((b_minus + b_plus).imag),
                             gamma_minus4=2 * b_minus.real, gamma_plus4=2 * b_plus.real,
                             gamma_phi4=float(gamma_phi),
                             gamma_minus2=4 * g ** 2 * gamma * n_minus / mod2,
                             gamma_plus2=4 * g ** 2 * gamma * n_plus / mod2,
                             g=g, gamma=gamma, delta_A=delta, n_th=n)

def negativity_threshold():
    '''|Delta_A|/gamma where 3 - 6x^2 - x^4 changes sign (x = 2 Delta_A/gamma)'''
    # quadratic in y = x^2: y^2 + 6y - 3 = 0
    y = max(np.roots([1.0, 6.0, -3.0]).real)
    return float(np.sqrt(y) / 2)

def phi_negativity_region(delta_over_gamma, n_th):
    '''True iff gamma_phi^(4) < 0'''
    return bool(n_th > 0 and _dephasing_polynomial(2 * delta_over_gamma) > 0)

def gamma_phi4_sign_boundary(n_th, g=0.1, gamma=1.0, hi=0.6, xtol=1e-12):
    '''Delta_A/gamma in (0, hi) where gamma_phi^(4) changes sign, None if it vanishes identically'''
    if n_th == 0:
        return None

    def phi(d):
        return fourth_order_coeffs(JCParams(delta_A=d * gamma, gamma=gamma, n_th=n_th, g=g)).gamma_phi4

    return float(brentq(phi, 0.0, hi, xtol=xtol))

# second-order assignment map

def _require_resonant(params):
    if params.delta_A != 0:
        raise RequiresZeroDetuning("the closed-form assignment map assumes Delta_A = 0, got %r" % params.delta_A)

def _assignment_parts(params):
    '''V = I + g V1 + g^2 V2 and the reference state rho_A'''
    N, gamma, n = params.N, params.gamma, params.n_th
    _, _, num = oscillator_ops(N)
    I = np.eye(2 * (N + 1))
    V1 = -2j / gamma * jc_coupling(N)
    V2 = -2 / gamma ** 2 * np.kron(num - n * np.eye(N + 1), IDENTITY_2)
    return I, V1, V2, thermal_state(n, N)

def assignment_second_order(params, truncate=True):
    '''
    K(rho_B) = V (rho_A (x) rho_B) V^dagger - 4g^2(1+n_th)/gamma^2 (I (x) sigma_-) (.) (I (x) sigma_-)^dagger
               - 4g^2 n_th/gamma^2 (I (x) sigma_+) (.) (I (x) sigma_+)^dagger

    With truncate=True the product V(.)V^dagger is expanded and only terms up
    to g^2 are kept; truncate=False returns the literal form.
    '''
    if not isinstance(params, JCParams):
        params = JCParams(**params)
    _require_resonant(params)
    g, gamma, n = params.g, params.gamma, params.n_th
    I, V1, V2, rho_A = _assignment_parts(params)
    V = I + g * V1 + g ** 2 * V2
    Sm = np.kron(np.eye(params.N + 1), SIGMA_MINUS)
    Sp = np.kron(np.eye(params.N + 1), SIGMA_PLUS)
    c_minus = 4 * g ** 2 * (1 + n) / gamma ** 2
    c_plus = 4 * g ** 2 * n / gamma ** 2

    def K(rho_B):
        X = np.kron(rho_A, rho_B)
        if truncate:
            out = (X + g * (V1 @ X + X @ dagger(V1))
                   + g ** 2 * (V2 @ X + X @ dagger(V2) + V1 @ X @ dagger(V1)))
        else:
            out = V @ X @ dagger(V)
        return out - c_minus * Sm @ X @ dagger(Sm) - c_plus * Sp @ X @ dagger(Sp)

    cols = [vectorize(K(E)) for E in matrix_units(2)]
    return SuperOperator(np.array(cols).T, 2, 2 * (params.N + 1))

def negativity_element(psi, rho_B, params):
    '''<0,psi| K(rho_B) |0,psi> from the closed form, psi a qubit vector'''
    if not isinstance(params, JCParams):
        params = JCParams(**params)
    _require_resonant(params)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    g, gamma, n = params.g, params.gamma, params.n_th
    p0 = thermal_state(n, params.N)[0, 0].real
    psi_plus, psi_minus = SIGMA_PLUS @ psi, SIGMA_MINUS @ psi

    def expect(v):
        return np.vdot(v, rho_B @ v).real

    return float(p0 * ((1 + 4 * g ** 2 * n / gamma ** 2) * expect(psi)
                       - 4 * g ** 2 * (1 + n) / gamma ** 2 * expect(psi_plus)
                       - 4 * g ** 2 * n ** 2 / (gamma ** 2 * (1 + n)) * expect(psi_minus)))

def composite_min_eigenvalue(K, rho_B):
    return min_eigenvalue(K.apply(rho_B))

def purity_threshold(K, direction, tol=1e-10, xtol=1e-6):
    '''Largest Bloch radius along direction whose image under K is PSD'''
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)

    def margin(r):
        X = K.apply(density_from_bloch(r * direction))
        return min_eigenvalue(X) + tol * max(np.linalg.norm(X), 1.0)

    if margin(0.0) < 0:
        return 0.0
    if margin(1.0) >= 0:
        return 1.0
    return float(brentq(margin, 0.0, 1.0, xtol=xtol))

def image_boundary_scan(params, n_samples=100, seed=None, n_directions=8, truncate=True):
    '''
    Min eigenvalues of K(rho_B) for Haar-random pure qubit states and for the
    maximally mixed state, plus the Bloch radius beyond which K(rho_B) stops
    being PSD, minimized over random directions.
    '''
    if not isinstance(params, JCParams):
        params = JCParams(**params)
    _require_resonant(params)
    if n_samples < 1:
        raise InvalidParameters("n_samples must be >= 1")
    K = assignment_second_order(params, truncate)
    rand = RandomFactory.getInstance(seed)
    pure = np.array([composite_min_eigenvalue(K, projector(rand.pure_state(2))) for _ in range(n_samples)])
    mixed = composite_min_eigenvalue(K, IDENTITY_2 / 2)
    radii = [purity_threshold(K, d) for d in rand.sphere_points(n_directions)]
    radius = float(min(radii))
    logger.debug("image scan g=%g n_th=%g: max pure min-eig %.3e, mixed min-eig %.3e, radius %.4f",
                 params.g, params.n_th, pure.max(), mixed, radius)
    return {'params': params.as_dict(), 'n_samples': n_samples,
            'pure_min_eigenvalues': pure, 'pure_fraction_negative': float(np.mean(pure < 0)),
            'mixed_min_eigenvalue': mixed, 'mixed_psd': bool(mixed >= 0),
            'threshold_radius': radius, 'threshold_purity': (1 + radius ** 2) / 2}
