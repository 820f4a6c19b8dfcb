'''
adelim: higher-order adiabatic elimination of a fast dissipative subsystem
from bipartite Lindblad equations, with complete-positivity diagnostics of
the reduced qubit dynamics.
'''
__version__ = '0.9.0'
