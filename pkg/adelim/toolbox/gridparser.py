'''
Grammar for grid-valued configuration fields.

Accepted forms:

* ``start:stop:step``       inclusive of stop
* ``linspace(a, b, n)``
* ``logspace(a, b, n)``     base 10 exponents, as numpy
* ``[v1, v2, ...]``
* a single number

>>> GridParser().parse("0:1:0.25").tolist()
[0.0, 0.25, 0.5, 0.75, 1.0]
>>> GridParser().parse("linspace(0, 1, 3)").tolist()
[0.0, 0.5, 1.0]
'''
import logging

import numpy as np
from pyparsing import (CaselessKeyword, Literal, Optional, ParseException, StringEnd, Suppress,
                       delimitedList, pyparsing_common)

from adelim.toolbox.errors import ConfigError

logger = logging.getLogger(__name__)

def createRange(s, loc, toks):
    start, stop, step = toks
    if step <= 0 or stop < start:
        raise ParseException(s, loc, "range needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + step * np.arange(n)]

def createSpace(s, loc, toks):
    kind, a, b, n = toks
    if n < 1:
        raise ParseException(s, loc, "%s needs n >= 1" % kind)
    space = np.linspace if kind == 'linspace' else np.logspace
    return [space(a, b, n)]

def createList(s, loc, toks):
    return [np.array(list(toks), dtype=float)]

class GridParser:
    def __init__(self, verbose=False):
        self.finalGrid = self.getBNF()
        self.verbose = verbose

    def getBNF(self):
        number = pyparsing_common.fnumber
        integer = pyparsing_common.signed_integer
        lpar, rpar = Suppress("("), Suppress(")")
        comma, colon = Suppress(","), Suppress(":")

        rangeSpec = (number + colon + number + colon + number).setParseAction(createRange)
        func = CaselessKeyword("linspace") | CaselessKeyword("logspace")
        spaceSpec = (func + lpar + number + comma + number + comma + integer + rpar).setParseAction(createSpace)
        listSpec = (Suppress("[") + Optional(delimitedList(number)) + Suppress("]")).setParseAction(createList)
        single = number.copy().setParseAction(lambda s, loc, toks: [np.array([float(toks[0])])])

        return (rangeSpec | spaceSpec | listSpec | single) + StringEnd()

    def parse(self, string):
        try:
            result = self.finalGrid.parseString(string.strip())
        except ParseException as e:
            raise ConfigError("invalid grid '%s': %s" % (string, e))
        grid = np.asarray(result[0], dtype=float)
        if self.verbose:
            logger.debug("grid %s -> %d points", string, grid.size)
        return grid

def parse_grid(value, parser=None):
    '''Grid from a JSON list, a number or a grid string'''
    if isinstance(value, str):
        return (parser or GridParser()).parse(value)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return np.array([float(value)])
    if isinstance(value, (list, tuple)):
        try:
            return np.array(value, dtype=float).reshape(-1)
        except (TypeError, ValueError):
            raise ConfigError("grid list must hold numbers, got %r" % (value,))
    raise ConfigError("cannot interpret %r as a grid" % (value,))
