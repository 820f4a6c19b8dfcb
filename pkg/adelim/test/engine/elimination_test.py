from adelim.engine.cpanalysis import generator_coeffs, spectrum_quadruple, wpg_feasible
from adelim.engine.elimination import (EliminationResult, GaugeMap, eliminate, reduced_generator, assignment_map,
                                       invariance_residual, scaling_exponent, apply_gauge, converged_cutoff)
from adelim.schemes.jaynes_cummings import JCParams, JaynesCummings, tail_cutoff
from adelim.schemes.jc_closedform import fourth_order_coeffs
from adelim.test.toolbox.bipartitemodel_test import decaying_qubit_pair
from adelim.toolbox.errors import InvalidParameters, SingularGauge
from adelim.toolbox.matrixops import matrix_units
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.superop import SuperOperator, devectorize, expm_superop, partial_trace, vectorize
import numpy as np
import numpy.testing as npt
import unittest

debug = False

def trace_out_A(K, dim_A, dim_B):
    '''tr_A o K as a B -> B matrix'''
    D = dim_A * dim_B
    cols = [vectorize(partial_trace(devectorize(K.matrix[:, j], D), dim_A, dim_B)) for j in range(K.dim_in)]
    return np.array(cols).T

def match_eigenvalues(a, b):
    '''largest nearest-neighbour distance from the entries of a to b'''
    return max(np.min(np.abs(np.asarray(b) - w)) for w in a)

class StructureTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = JaynesCummings(JCParams(delta_A=0.2, n_th=0.5, g=0.1, fock_cutoff=10))
        cls.res = eliminate(cls.model, 4)

    def testOrderZero(self):
        res = eliminate(self.model, 0)
        self.assertEqual(len(res.K_list), 1)
        npt.assert_array_equal(res.Ls_list[0].matrix, 0)
        rho = self.model.steady_state_A
        for j, E in enumerate(matrix_units(2)):
            npt.assert_allclose(devectorize(res.K_list[0].matrix[:, j], self.model.dim), np.kron(rho, E))

    def testOddOrdersVanish(self):
        for n in (1, 3):
            self.assertLessEqual(self.res.Ls_list[n].norm(), 1e-10)
        self.assertGreater(self.res.Ls_list[2].norm(), 1e-3)
        self.assertGreater(self.res.K_list[1].norm(), 1e-3)

    def testGauge(self):
        npt.assert_allclose(trace_out_A(self.res.K_list[0], self.res.dim_A, 2), np.eye(4), atol=1e-12)
        for n in range(1, 5):
            self.assertLessEqual(np.linalg.norm(trace_out_A(self.res.K_list[n], self.res.dim_A, 2)), 1e-10)

    def testReducedGenerator(self):
        Ls = reduced_generator(self.res, 0.1)
        self.assertTrue(Ls.is_trace_annihilating())
        self.assertTrue(Ls.is_hermiticity_preserving())
        K = assignment_map(self.res, 0.1)
        self.assertEqual((K.d_in, K.d_out), (2, self.model.dim))
        npt.assert_allclose(reduced_generator(self.res, 0.0).matrix, 0)

    def testSolveResiduals(self):
        self.assertEqual(len(self.res.residual_per_order), 5)
        self.assertLess(max(self.res.residual_per_order), 1e-10)

    def testInvalid(self):
        self.assertRaises(InvalidParameters, eliminate, self.model, -1)
        self.assertRaises(InvalidParameters, eliminate, self.model, 1.5)
        self.assertRaises(InvalidParameters, reduced_generator, self.res, -0.1)

    def testSerialization(self):
        back = EliminationResult.from_json(self.res.to_json())
        self.assertEqual((back.order, back.dims, back.gauge), (4, self.res.dims, 'G=0'))
        for a, b in zip(back.K_list, self.res.K_list):
            npt.assert_array_equal(a.matrix, b.matrix)
        npt.assert_array_equal(reduced_generator(back, 0.1).matrix, reduced_generator(self.res, 0.1).matrix)
        self.assertEqual(back.model, self.res.model)


class ClosedFormTest(unittest.TestCase):
    def testFourthOrderRates(self):
        for d in (0.0, 0.2, 0.5):
            for n in (0.0, 0.5, 1.0):
                base = JCParams(delta_A=d, n_th=n, g=0.1, fock_cutoff=tail_cutoff(n))
                res = eliminate(JaynesCummings(base), 4)
                for g in (0.05, 0.1, 0.2):
                    p = base.with_(g=g)
                    c = generator_coeffs(reduced_generator(res, p.eps))
                    cf = fourth_order_coeffs(p)
                    numeric = np.array([c.omega_B, c.gamma_minus, c.gamma_plus, c.gamma_phi])
                    closed = np.array([cf.omega_B4, cf.gamma_minus4, cf.gamma_plus4, cf.gamma_phi4])
                    if debug: print(d, n, g, numeric - closed)
                    npt.assert_allclose(numeric, closed, rtol=1e-8, atol=1e-8 * np.max(np.abs(closed)),
                                        err_msg=str((d, n, g)))

    def testSecondOrderRates(self):
        p = JCParams(n_th=1.0, g=0.1, fock_cutoff=tail_cutoff(1.0))
        c = generator_coeffs(reduced_generator(eliminate(JaynesCummings(p), 2), p.eps))
        self.assertAlmostEqual(c.gamma_minus, 0.08, places=9)
        self.assertAlmostEqual(c.gamma_plus, 0.04, places=9)
        self.assertAlmostEqual(c.gamma_phi, 0.0, places=9)

    def testZeroTemperatureCutoffs(self):
        for N in (6, 8, 12):
            p = JCParams(delta_A=0.2, n_th=0.0, g=0.1, fock_cutoff=N)
            res = eliminate(JaynesCummings(p), 4)
            self.assertLess(max(res.residual_per_order), 1e-10)
            c = generator_coeffs(reduced_generator(res, p.eps))
            cf = fourth_order_coeffs(p)
            if debug: print(N, c, cf)
            self.assertAlmostEqual(c.gamma_minus, cf.gamma_minus4, places=10)
            self.assertAlmostEqual(c.gamma_plus, 0.0, places=10)
            self.assertAlmostEqual(c.gamma_phi, 0.0, places=10)

    def testExpansionIndependentOfCouplingSign(self):
        a = eliminate(JaynesCummings(JCParams(n_th=0.5, g=0.1, fock_cutoff=8)), 4)
        b = eliminate(JaynesCummings(JCParams(n_th=0.5, g=-0.1, fock_cutoff=8)), 4)
        npt.assert_allclose(reduced_generator(a, 0.1).matrix, reduced_generator(b, 0.1).matrix, atol=1e-12)


class ResidualTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.model = JaynesCummings(JCParams(delta_A=0.2, n_th=0.5, g=0.1, fock_cutoff=16))
        cls.res = eliminate(cls.model, 4)

    def testScalingExponents(self):
        for k in (0, 2, 4):
            res = EliminationResult(k, self.res.K_list[:k + 1], self.res.Ls_list[:k + 1],
                                    self.res.residual_per_order[:k + 1], dims=self.res.dims)
            p = scaling_exponent(self.model, k, result=res)
            if debug: print(k, p)
            self.assertGreaterEqual(p, k + 0.7)

    def testResidualDecreasesWithOrder(self):
        r = []
        for k in (0, 2, 4):
            res = EliminationResult(k, self.res.K_list[:k + 1], self.res.Ls_list[:k + 1],
                                    self.res.residual_per_order[:k + 1], dims=self.res.dims)
            r.append(invariance_residual(res, 0.05, self.model))
        self.assertGreater(r[0], r[1])
        self.assertGreater(r[1], r[2])

    def testGenericModel(self):
        model = decaying_qubit_pair(eps=0.05)
        res = eliminate(model, 4)
        self.assertLess(max(res.residual_per_order), 1e-10)
        self.assertTrue(reduced_generator(res, 0.05).is_trace_annihilating())
        self.assertGreaterEqual(scaling_exponent(model, 2), 2.7)


class GaugeTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.params = JCParams(n_th=1.0, g=0.1)
        cls.res = eliminate(JaynesCummings(cls.params), 4)

    def testRandomGauges(self):
        eps = self.params.eps
        Ls = reduced_generator(self.res, eps)
        base = np.linalg.eigvals(Ls.matrix)
        K0 = trace_out_A(assignment_map(self.res, eps), self.res.dim_A, 2)
        rand = RandomFactory.getInstance(17)
        for _ in range(20):
            G = GaugeMap.random(rand, max_norm=0.1)
            K_G, Ls_G = apply_gauge(self.res, G, eps)
            self.assertLess(match_eigenvalues(np.linalg.eigvals(Ls_G.matrix), base), 1e-9)
            npt.assert_allclose(trace_out_A(K_G, self.res.dim_A, 2), K0 @ (np.eye(4) + G.at(eps).matrix),
                                atol=1e-10)
            S = spectrum_quadruple(np.linalg.eigvals(expm_superop(Ls_G, 1.0).matrix), tol=1e-7)
            result = wpg_feasible(S)
            if debug: print(result.margin)
            self.assertFalse(result.feasible)
            self.assertLess(result.margin, -0.01)

    def testZeroGauge(self):
        K_G, Ls_G = apply_gauge(self.res, GaugeMap.zero(), 0.1)
        npt.assert_allclose(Ls_G.matrix, reduced_generator(self.res, 0.1).matrix, atol=1e-14)
        npt.assert_allclose(K_G.matrix, assignment_map(self.res, 0.1).matrix, atol=1e-14)

    def testSingularGauge(self):
        G1 = np.zeros((4, 4), dtype=complex)
        G1[0, 0] = -10.0
        G = GaugeMap({1: SuperOperator(G1, 2, 2)})
        with np.errstate(divide='ignore', invalid='ignore'):
            self.assertRaises(SingularGauge, apply_gauge, self.res, G, 0.1)

    def testInvalidGauge(self):
        self.assertRaises(InvalidParameters, GaugeMap, {0: SuperOperator.identity(2)})
        self.assertRaises(InvalidParameters, GaugeMap, {1: SuperOperator.identity(3)})


class CutoffTest(unittest.TestCase):
    def testConvergedCutoff(self):
        N, change = converged_cutoff(JCParams(n_th=0.2, g=0.1, fock_cutoff=6), order=2, rtol=1e-6, max_cutoff=48)
        if debug: print(N, change)
        self.assertLess(change, 1e-6)
        self.assertIn(N, (6, 12, 24))

    def testTailCutoffIsConverged(self):
        p = JCParams(delta_A=0.2, n_th=0.5, g=0.1, fock_cutoff=tail_cutoff(0.5))
        coeffs = []
        for N in (p.N, 2 * p.N):
            c = generator_coeffs(reduced_generator(eliminate(JaynesCummings(p.with_(fock_cutoff=N)), 4), p.eps))
            coeffs.append(np.array([c.omega_B, c.gamma_minus, c.gamma_plus, c.gamma_phi]))
        if debug: print(coeffs[1] - coeffs[0])
        npt.assert_allclose(coeffs[1], coeffs[0], rtol=1e-8, atol=1e-8 * np.max(np.abs(coeffs[0])))

if __name__ == "__main__":
    unittest.main()
