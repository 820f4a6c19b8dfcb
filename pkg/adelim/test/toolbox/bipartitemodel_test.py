from adelim.toolbox.BipartiteModel import GenericBipartiteModel, steady_state
from adelim.toolbox.errors import ZeroNotSimple, DimensionMismatch
from adelim.toolbox.matrixops import SIGMA_MINUS, SIGMA_X, SIGMA_Z, GROUND
from adelim.toolbox.sampling import RandomFactory
from adelim.toolbox.superop import lift_A, lift_B, lindbladian, commutator_superop
import numpy as np
import numpy.testing as npt
import unittest

debug = False

def decaying_qubit_pair(eps=0.1, gamma=1.0):
    # fast qubit A decaying at rate gamma, slow qubit B, exchange coupling
    return GenericBipartiteModel(H_A=0.3 * SIGMA_Z, jumps_A=[np.sqrt(gamma) * SIGMA_MINUS],
                                 H_B=0.5 * SIGMA_Z, H_int=np.kron(SIGMA_X, SIGMA_X), eps=eps)

class GenericModelTest(unittest.TestCase):
    def testSteadyState(self):
        model = decaying_qubit_pair()
        npt.assert_allclose(model.steady_state_A, GROUND, atol=1e-12)
        self.assertEqual(model.solver.nullity, 1)
        self.assertEqual((model.dim_A, model.dim_B, model.dim), (2, 2, 4))

    def testDegenerateFastPart(self):
        # a Hamiltonian-only fast part has a degenerate kernel
        L = lindbladian(SIGMA_Z, [])
        self.assertRaises(ZeroNotSimple, steady_state, L)

    def testTotalGenerator(self):
        model = decaying_qubit_pair(eps=0.2)
        direct = (lift_A(model.L_A, 2) + 0.2 * lift_B(-1j * commutator_superop(0.5 * SIGMA_Z), 2)
                  - 0.2j * commutator_superop(np.kron(SIGMA_X, SIGMA_X)))
        npt.assert_allclose(model.L_tot.matrix, direct.matrix, atol=1e-12)
        X = RandomFactory.getInstance(1).operator(4)
        npt.assert_allclose(model.apply_total(X), model.L_tot.apply(X), atol=1e-12)
        npt.assert_allclose(model.apply_total(X, 0.0), lift_A(model.L_A, 2).apply(X), atol=1e-12)

    def testSpectrumCheck(self):
        data = decaying_qubit_pair().verify_spectrum()
        self.assertGreater(data.gap, 0)

    def testProperties(self):
        model = decaying_qubit_pair(eps=0.05)
        self.assertTrue(model.checkProperty([('model', 'Generic'), ('fast', 'generic')]))
        self.assertEqual(model.parameterRow()['eps'], 0.05)

    def testBadCoupling(self):
        model = GenericBipartiteModel(SIGMA_Z, [SIGMA_MINUS], SIGMA_Z, np.eye(3), eps=0.1)
        self.assertRaises(DimensionMismatch, lambda: model.slow_generator_hamiltonian)

if __name__ == "__main__":
    unittest.main()
