"""Exception hierarchy shared by the numerical kernels and the CLI."""


class FdjcError(Exception):
    """Base class for every error raised by this package."""


class NumericalError(FdjcError, ArithmeticError):
    """A numerical routine could not deliver a trustworthy result."""


class PoleError(NumericalError):
    """Argument sits on (or within 1e-12 of) a pole of Gamma or of 1F1's ``b``."""


class NoConvergence(NumericalError):
    """A series or scan ran out of terms before meeting its tolerance."""


class PrecisionLoss(NoConvergence):
    """Series converged but cancellation destroyed the requested accuracy."""


class DomainError(NumericalError, ValueError):
    """Argument outside the mathematical domain (e.g. negative radicand)."""


class SingularWronskian(NumericalError):
    """The two solutions used to match initial data are numerically dependent."""


class DegenerateBranch(NumericalError):
    """Closed-form branch requested where it is undefined (e.g. ``kg == 0``)."""


class DegenerateField(NumericalError):
    """Mean photon number too small for a normalized correlation function."""


class ConfigError(FdjcError, ValueError):
    """Invalid run configuration."""


class ParseError(ConfigError):
    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UnknownKey(ConfigError):
    def __init__(self, key, suggestion=None):
        self.key = key
        self.suggestion = suggestion
        msg = f"unknown key {key!r}"
        if suggestion:
            msg += f"; did you mean {suggestion!r}?"
        super().__init__(msg)


class MissingKey(ConfigError):
    def __init__(self, keys):
        self.keys = sorted(keys)
        super().__init__("missing required key(s): " + ", ".join(self.keys))


class UnknownPreset(ConfigError):
    def __init__(self, name, known=()):
        self.name = name
        super().__init__(f"unknown preset {name!r}; known presets: {', '.join(known)}")
