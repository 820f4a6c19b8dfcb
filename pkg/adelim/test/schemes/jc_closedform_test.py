from adelim.engine.elimination import eliminate, assignment_map
from adelim.schemes.jaynes_cummings import JCParams, JaynesCummings, thermal_state, tail_cutoff
from adelim.schemes.jc_closedform import (fourth_order_coeffs, negativity_threshold, phi_negativity_region,
                                          gamma_phi4_sign_boundary, assignment_second_order, negativity_element,
                                          composite_min_eigenvalue, purity_threshold, image_boundary_scan)
from adelim.toolbox.errors import RequiresZeroDetuning
from adelim.toolbox.matrixops import GROUND, EXCITED, IDENTITY_2, projector, density_from_bloch, is_hermitian
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.superop import partial_trace
import numpy as np
import numpy.testing as npt
import unittest

debug = False

GRID = [(d, n) for d in (0.0, 0.2, 0.5) for n in (0.0, 0.5, 1.0)]

class FourthOrderTest(unittest.TestCase):
    def testResonantExample(self):
        c = fourth_order_coeffs(JCParams(delta_A=0.0, gamma=1.0, n_th=1.0, g=0.1))
        self.assertAlmostEqual(c.gamma_minus4, 0.0896, places=12)
        self.assertAlmostEqual(c.gamma_plus4, 0.0448, places=12)
        self.assertAlmostEqual(c.gamma_phi4, -0.0048, places=12)
        self.assertAlmostEqual(c.omega_B4, 0.0, places=14)
        # -24 g^4 n_+ n_- at resonance
        self.assertAlmostEqual(c.gamma_phi4, -24 * 0.1 ** 4 * 2, places=14)
        self.assertAlmostEqual(c.gamma_minus2, 0.08, places=14)
        self.assertAlmostEqual(c.gamma_plus2, 0.04, places=14)

    def testZeroTemperature(self):
        for d in (0.0, 0.2, 0.5):
            c = fourth_order_coeffs(JCParams(delta_A=d, n_th=0.0, g=0.1))
            self.assertEqual(c.gamma_phi4, 0.0)
            self.assertEqual(c.gamma_plus4, 0.0)

    def testZeroCoupling(self):
        c = fourth_order_coeffs(JCParams(delta_A=0.3, n_th=1.0, g=0.0))
        for v in (c.omega_B4, c.gamma_minus4, c.gamma_plus4, c.gamma_phi4):
            self.assertEqual(v, 0.0)

    def testDetuningSymmetry(self):
        a = fourth_order_coeffs(JCParams(delta_A=0.3, n_th=0.5, g=0.1))
        b = fourth_order_coeffs(JCParams(delta_A=-0.3, n_th=0.5, g=0.1))
        self.assertAlmostEqual(a.gamma_phi4, b.gamma_phi4, places=15)
        self.assertAlmostEqual(a.gamma_minus4, b.gamma_minus4, places=15)
        self.assertAlmostEqual(a.omega_B4, -b.omega_B4, places=15)
        self.assertNotEqual(a.omega_B4, 0.0)

    def testGeneratorCoeffs(self):
        c = fourth_order_coeffs(JCParams(n_th=1.0, g=0.1))
        q = c.generator_coeffs()
        self.assertAlmostEqual(q.inv_T1, 0.1344, places=12)
        self.assertAlmostEqual(q.R_z, -1.0 / 3, places=12)
        row = c.row()
        self.assertEqual(row['g_over_gamma'], 0.1)
        self.assertEqual(row['gamma_phi4'], c.gamma_phi4)
        self.assertEqual(c.second_order_coeffs().gamma_phi, 0.0)


class NegativityRegionTest(unittest.TestCase):
    def testThreshold(self):
        expected = np.sqrt(2 * np.sqrt(3) - 3) / 2
        self.assertAlmostEqual(negativity_threshold(), expected, places=12)
        self.assertAlmostEqual(negativity_threshold(), 0.3406250193, places=9)

    def testRegion(self):
        self.assertTrue(phi_negativity_region(0.2, 1.0))
        self.assertFalse(phi_negativity_region(0.5, 1.0))
        self.assertFalse(phi_negativity_region(0.2, 0.0))
        self.assertTrue(phi_negativity_region(-0.2, 1.0))
        at = fourth_order_coeffs(JCParams(delta_A=negativity_threshold(), n_th=1.0, g=0.1))
        self.assertLess(abs(at.gamma_phi4), 1e-12)

    def testBoundary(self):
        b = gamma_phi4_sign_boundary(1.0)
        self.assertAlmostEqual(b, negativity_threshold(), places=9)
        self.assertIsNone(gamma_phi4_sign_boundary(0.0))

    def testSignAgreement(self):
        for d, n in GRID:
            for g in (0.05, 0.1, 0.2):
                c = fourth_order_coeffs(JCParams(delta_A=d, n_th=n, g=g))
                self.assertEqual(c.gamma_phi4 < 0, phi_negativity_region(d, n), (d, n, g))


class AssignmentTest(unittest.TestCase):
    def setUp(self):
        self.params = JCParams(delta_A=0.0, gamma=1.0, n_th=1.0, g=0.1)

    def testZeroCoupling(self):
        p = self.params.with_(g=0.0)
        K = assignment_second_order(p)
        rho_B = density_from_bloch((0.1, 0.2, 0.3))
        npt.assert_allclose(K.apply(rho_B), np.kron(thermal_state(1.0, p.N), rho_B), atol=1e-15)

    def testRequiresResonance(self):
        self.assertRaises(RequiresZeroDetuning, assignment_second_order, self.params.with_(delta_A=0.1))
        self.assertRaises(RequiresZeroDetuning, negativity_element, [1, 0], GROUND, self.params.with_(delta_A=0.1))

    def testTraceAndHermiticity(self):
        p = self.params.with_(fock_cutoff=tail_cutoff(1.0))
        K = assignment_second_order(p)
        rand = RandomFactory.getInstance(5)
        for _ in range(10):
            rho_B = rand.density(2)
            out = K.apply(rho_B)
            self.assertLess(abs(np.trace(out) - 1), 1e-10)
            self.assertTrue(is_hermitian(out, 1e-12))

    def testLiteralForm(self):
        # the literal V(.)V^dagger differs from the truncated map at order g^3
        diffs = []
        for g in (0.1, 0.05):
            p = self.params.with_(g=g)
            diffs.append(np.linalg.norm(assignment_second_order(p, truncate=False).matrix
                                        - assignment_second_order(p).matrix))
        self.assertGreater(np.log2(diffs[0] / diffs[1]), 2.7)

    def testMatchesElimination(self):
        p = self.params.with_(fock_cutoff=tail_cutoff(1.0))
        res = eliminate(JaynesCummings(p), 2)
        numeric = assignment_map(res, p.eps).matrix
        closed = assignment_second_order(p).matrix
        self.assertLess(np.linalg.norm(numeric - closed), 1e-8 * np.linalg.norm(closed))

    def testGroundStateNegativity(self):
        K = assignment_second_order(self.params)
        self.assertLess(composite_min_eigenvalue(K, GROUND), 0)
        psi = np.array([0, 1], dtype=complex)
        value = negativity_element(psi, GROUND, self.params)
        p0 = thermal_state(1.0, self.params.N)[0, 0].real
        self.assertAlmostEqual(value, -4 * 0.01 * 1.0 / 2.0 * p0, places=14)
        v = np.kron(np.eye(self.params.N + 1)[0], psi)
        self.assertAlmostEqual(value, np.vdot(v, K.apply(GROUND) @ v).real, places=12)

    def testElementFormula(self):
        K = assignment_second_order(self.params)
        rand = RandomFactory.getInstance(6)
        e0 = np.eye(self.params.N + 1)[0]
        for _ in range(100):
            psi, rho_B = rand.pure_state(2), rand.density(2)
            v = np.kron(e0, psi)
            direct = np.vdot(v, K.apply(rho_B) @ v).real
            self.assertLess(abs(negativity_element(psi, rho_B, self.params) - direct), 1e-10)
        v = np.kron(e0, [1, 0])
        direct = np.vdot(v, K.apply(IDENTITY_2 / 2) @ v).real
        self.assertLess(abs(negativity_element([1, 0], IDENTITY_2 / 2, self.params) - direct), 1e-10)

    def testNoCouplingElement(self):
        p = self.params.with_(g=0.0)
        psi = RandomFactory.getInstance(7).pure_state(2)
        rho_B = density_from_bloch((0, 0, 0.5))
        p0 = thermal_state(1.0, p.N)[0, 0].real
        self.assertAlmostEqual(negativity_element(psi, rho_B, p), p0 * np.vdot(psi, rho_B @ psi).real, places=14)


class ImageScanTest(unittest.TestCase):
    def testPureStatesOutsideImage(self):
        report = image_boundary_scan(JCParams(n_th=1.0, g=0.1), n_samples=100, seed=11)
        if debug: print(report['threshold_radius'], report['threshold_purity'])
        self.assertEqual(report['pure_fraction_negative'], 1.0)
        self.assertTrue(np.all(report['pure_min_eigenvalues'] < 0))
        self.assertLess(report['threshold_radius'], 1.0)

    def testMixedStateInsideImage(self):
        report = image_boundary_scan(JCParams(n_th=1.0, g=0.05), n_samples=10, seed=12)
        self.assertTrue(report['mixed_psd'])
        self.assertGreater(report['threshold_radius'], 0.0)
        self.assertLess(report['threshold_radius'], 1.0)
        self.assertGreater(report['threshold_purity'], 0.5)

    def testThresholdShrinksWithCoupling(self):
        direction = np.array([0.0, 0.0, -1.0])
        weak = purity_threshold(assignment_second_order(JCParams(n_th=1.0, g=0.02)), direction)
        strong = purity_threshold(assignment_second_order(JCParams(n_th=1.0, g=0.1)), direction)
        self.assertGreater(weak, strong)

if __name__ == "__main__":
    unittest.main()
