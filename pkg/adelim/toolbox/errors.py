'''
Exception hierarchy shared by the toolbox, the schemes and the engine.
'''

class AdelimError(Exception):
    '''Base class for every error raised by adelim'''

class DimensionMismatch(AdelimError, ValueError):
    pass

class InvalidParameters(AdelimError, ValueError):
    pass

class ConfigError(AdelimError, ValueError):
    pass

class ZeroNotSimple(AdelimError):
    '''The fast generator does not have a unique steady state'''

class NotSolvable(AdelimError):
    '''Right-hand side is outside the image of a singular superoperator'''

class SingularGauge(AdelimError):
    pass

class NotHermPreserving(AdelimError):
    pass

class NotConjugateClosed(AdelimError):
    pass

class CertificateInconclusive(AdelimError):
    pass

class RequiresZeroDetuning(AdelimError):
    pass

class FitIllConditioned(AdelimError):
    pass

class InitOutsideImage(UserWarning):
    '''Initial composite state is not positive semidefinite'''

class LargeExpansionParameter(UserWarning):
    pass
