from types import SimpleNamespace
from copy import deepcopy
import os

from .errors import ConfigError


# Defaults arguments
defaults = SimpleNamespace()

defaults.prec = 128                 # working precision in bits
defaults.guard = 16                 # guard bits added to internal evaluations
defaults.factor_bound = 10 ** 7     # trial division bound on squarefree parts
defaults.enum_bound = 10 ** 6       # largest discriminant handled by form enumeration
defaults.density_bound = 10 ** 5
defaults.target_prec = 768          # necromancy Newton target in bits
defaults.newton_iters = 40
defaults.lll_delta = 0.99
defaults.quad_degree = 8            # maximal tanh-sinh degree
defaults.threads = 1
defaults.shift = 1
defaults.out = "runs"
defaults.format = "json"
defaults.progbar = True

MIN_PREC = 64
PREC_ENV = "GHOSTSIC_PREC"


def default_prec():
    """ Working precision in bits, honoring the GHOSTSIC_PREC environment variable. """
    value = os.environ.get(PREC_ENV)
    if value is None:
        return defaults.prec
    try:
        bits = int(value)
    except ValueError:
        raise ConfigError("{} must be an integer, got {!r}".format(PREC_ENV, value))
    if bits < MIN_PREC:
        raise ConfigError("{}={} is below the minimum of {} bits".format(PREC_ENV, bits, MIN_PREC))
    return bits


def make_args(**overrides):
    """ Copy of the defaults with the given fields replaced.

    Arguments:
        overrides: fields of the defaults namespace to replace

    Returns:
        args: (SimpleNamespace) independent copy of the defaults
    """
    args = deepcopy(defaults)
    args.prec = default_prec()
    for (key, value) in overrides.items():
        if not hasattr(defaults, key):
            raise ConfigError("unknown setting {!r}".format(key))
        setattr(args, key, value)
    return args
