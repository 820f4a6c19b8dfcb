'''
Runtime tolerances and defaults.

Every numerical routine takes an optional ``tol`` argument; when omitted the
module-level ``tolerances`` instance is used. Values can be overridden through
environment variables prefixed ``ADELIM_``, e.g. ``ADELIM_TAU_RES=1e-7``.

>>> Tolerances().kappa_max
1000000.0
'''
import os
from dataclasses import dataclass, fields, replace

ENV_PREFIX = 'ADELIM_'

@dataclass(frozen=True)
class Tolerances:
    # relative factors, multiplied by the norm of the object under test
    tau_zero: float = 1e-9
    tau_gap: float = 1e-9
    tau_res: float = 1e-8
    tau_herm: float = 1e-10
    tau_psd: float = 1e-10
    # gauge invertibility
    kappa_max: float = 1e6
    # truncation diagnostics of the oscillator steady state
    tau_thermal: float = 1e-6
    tau_tail: float = 1e-8
    # expansion parameter above which a warning is issued
    eps_warn: float = 0.3
    # post-transient window start, in units of 1/gamma
    t_inv: float = 10.0

    def override(self, **kwargs):
        unknown = set(kwargs) - set(f.name for f in fields(self))
        if unknown:
            from adelim.toolbox.errors import ConfigError
            raise ConfigError("unknown tolerance keys: %s" % ", ".join(sorted(unknown)))
        return replace(self, **{k: float(v) for k, v in kwargs.items()})

    @classmethod
    def from_env(cls, environ=None):
        environ = os.environ if environ is None else environ
        found = {}
        for f in fields(cls):
            key = ENV_PREFIX + f.name.upper()
            if key in environ:
                found[f.name] = float(environ[key])
        return cls(**found)

tolerances = Tolerances.from_env()

def resolve(tol=None):
    return tolerances if tol is None else tol
