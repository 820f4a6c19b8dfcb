from adelim.toolbox.errors import ConfigError
from adelim.toolbox.gridparser import GridParser, parse_grid
import numpy as np
import numpy.testing as npt
import unittest

debug = False

class GridParserTest(unittest.TestCase):
    def testForms(self):
        parser = GridParser(verbose=debug)
        npt.assert_allclose(parser.parse("0:200:0.5"), np.arange(401) * 0.5)
        npt.assert_allclose(parser.parse("linspace(0, 0.6, 61)"), np.linspace(0, 0.6, 61))
        npt.assert_allclose(parser.parse("LOGSPACE(-2, 0, 3)"), [0.01, 0.1, 1.0])
        npt.assert_allclose(parser.parse("[0, 0.5, 1]"), [0.0, 0.5, 1.0])
        npt.assert_allclose(parser.parse("  0.05 "), [0.05])
        npt.assert_allclose(parser.parse("1e-2"), [0.01])

    def testInclusiveRange(self):
        grid = parse_grid("0:1:0.1")
        self.assertEqual(grid.size, 11)
        self.assertAlmostEqual(grid[-1], 1.0, places=12)

    def testJsonValues(self):
        npt.assert_allclose(parse_grid([0.1, 0.05]), [0.1, 0.05])
        npt.assert_allclose(parse_grid(3), [3.0])

    def testInvalid(self):
        for bad in ("0:1", "linspace(0, 1)", "[0, a]", "1:0:0.1", "0:1:-1", "linspace(0, 1, 0)", "sin(1)"):
            self.assertRaises(ConfigError, parse_grid, bad)
        self.assertRaises(ConfigError, parse_grid, True)
        self.assertRaises(ConfigError, parse_grid, {'a': 1})
        self.assertRaises(ConfigError, parse_grid, ["x"])

    def testVerboseLogs(self):
        with self.assertLogs('adelim.toolbox.gridparser', level='DEBUG') as cm:
            GridParser(verbose=True).parse("0:1:0.5")
        self.assertIn("grid 0:1:0.5 -> 3 points", cm.output[0])

if __name__ == "__main__":
    unittest.main()
