"""Exception types raised across the package."""


class BlendifsError(Exception):
    """Base class for every error this package raises on purpose."""


class EmptyIfsError(BlendifsError, ValueError):
    """An IFS needs at least one map."""


class NotContractiveError(BlendifsError, ValueError):
    """Some map has a Lipschitz constant >= 1."""

    def __init__(self, index: int, lip: float):
        self.index = index
        self.lip = lip
        super().__init__(f"map {index} is not a contraction (Lipschitz constant {lip:.6g} >= 1)")


class SymbolOutOfRangeError(BlendifsError, ValueError):
    """A code-word or blending-sequence symbol falls outside 1..n."""


class LambdaOutOfRangeError(BlendifsError, ValueError):
    """A contraction factor must lie strictly between 0 and 1."""


class EmptyInputError(BlendifsError, ValueError):
    """An operation that needs a nonempty set received an empty one."""


class DeltaNonPositiveError(BlendifsError, ValueError):
    """The requested accuracy must be positive."""


class BadLengthError(BlendifsError, ValueError):
    """A generated sequence must have length >= 1."""


class NeedTwoSystemsError(BlendifsError, ValueError):
    """The ordered covering radii are only defined for two or more systems."""


class GridMismatchError(BlendifsError, ValueError):
    """Two operands live on different grids (or a file targets another resolution)."""


class UnknownIfsError(BlendifsError, ValueError):
    """A named IFS does not exist in the configuration."""


class ConfigError(BlendifsError, ValueError):
    """A run configuration failed validation."""


class ConfigNotFoundError(ConfigError, FileNotFoundError):
    """No config file at the given path and no bundled config of that name."""


class ThetaParseError(BlendifsError, ValueError):
    """A blending-sequence literal could not be parsed."""
