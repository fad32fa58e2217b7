""" Exception hierarchy shared by every ghostsic module.

Each exception carries a short machine-readable ``code`` which the command
line surface prints and maps to an exit status.
"""


class GhostSicError(ValueError):
    code = "error"
    exit_status = 3

    def __init__(self, message, **details):
        super(GhostSicError, self).__init__(message)
        self.details = details

    def report(self):
        """ Dictionary form used in JSON reports. """
        out = {"code": self.code, "message": str(self)}
        for (key, value) in self.details.items():
            out[key] = value if isinstance(value, (int, str, list, dict)) else str(value)
        return out


class ConfigError(GhostSicError):
    code = "config"
    exit_status = 2


class DomainError(GhostSicError):
    code = "domain"


class BoundError(GhostSicError):
    code = "bound"


class PoleError(GhostSicError):
    code = "pole"

    def __init__(self, message, index=None, **details):
        super(PoleError, self).__init__(message, index=index, **details)
        self.index = index


class PrecisionError(GhostSicError):
    code = "precision"
    exit_status = 4

    def __init__(self, message, needed_bits=None, **details):
        super(PrecisionError, self).__init__(message, needed_bits=needed_bits, **details)
        self.needed_bits = needed_bits


class ConvergenceError(GhostSicError):
    code = "convergence"
    exit_status = 4


class RecognitionError(GhostSicError):
    code = "recognition"
    exit_status = 5


class ReconstructionError(GhostSicError):
    code = "reconstruction"
    exit_status = 5

    def __init__(self, message, diagnostics=None, **details):
        super(ReconstructionError, self).__init__(message, diagnostics=diagnostics or [], **details)
        self.diagnostics = diagnostics or []
