from adelim.toolbox.errors import ConfigError
from adelim.toolbox.matrixops import SIGMA_MINUS
from adelim.toolbox.serialize import serializeObject, deserializeObject, dumps, loads, write_csv
from adelim.toolbox.superop import dissipator_superop
import numpy as np
import numpy.testing as npt
import os
import tempfile
import unittest

debug = False

class SerializeTest(unittest.TestCase):
    def testNested(self):
        S = dissipator_superop(SIGMA_MINUS)
        data = {'S': S, 'z': 1 - 2j, 'list': [1, 1.5, None, "foo", True], 'rho': np.eye(2) / 2}
        back = loads(dumps(data))
        npt.assert_array_equal(back['S'].matrix, S.matrix)
        self.assertEqual((back['S'].d_in, back['S'].d_out), (2, 2))
        self.assertEqual(back['z'], 1 - 2j)
        self.assertEqual(back['list'], [1, 1.5, None, "foo", True])
        npt.assert_array_equal(back['rho'], np.eye(2) / 2)

    def testMatrixLayout(self):
        s = serializeObject(np.array([[1, 2j], [3, 4]]))
        self.assertEqual(s['dims'], [2, 2])
        # row-major, each entry [re, im]
        self.assertEqual(s['data'], [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]])

    def testDeterministic(self):
        data = {'b': np.arange(3), 'a': {'y': 1, 'x': 2}}
        self.assertEqual(dumps(data), dumps(deserializeObject(serializeObject(data))))
        self.assertTrue(dumps(data).endswith("\n"))
        self.assertLess(dumps(data).index('"a"'), dumps(data).index('"b"'))

    def testNumpyScalars(self):
        data = serializeObject({'i': np.int64(3), 'f': np.float64(0.5), 'b': np.bool_(True)})
        self.assertEqual(data, {'i': 3, 'f': 0.5, 'b': True})

    def testErrors(self):
        self.assertRaises(TypeError, serializeObject, object())
        self.assertRaises(ConfigError, loads, "{not json")

    def testCsv(self):
        rows = [{'t': 0.1, 'ok': True, 'n': 3, 'missing': None}, {'t': 2.0, 'ok': False, 'n': 4, 'missing': None}]
        with tempfile.TemporaryDirectory() as d:
            path = write_csv(os.path.join(d, 'rows.csv'), rows)
            with open(path, 'rb') as f:
                text = f.read()
        if debug: print(text)
        self.assertEqual(text, b"t,ok,n,missing\n0.1,true,3,\n2.0,false,4,\n")

if __name__ == "__main__":
    unittest.main()
