"""Exception types raised by the package."""


class WvmetroError(Exception):
    """Base class for all package-specific errors."""


class OrthogonalPostSelection(WvmetroError):
    """Post-selection state is orthogonal to the pre-selection; weak value undefined."""


class SingularCombination(WvmetroError):
    """Accepted/rejected weights cancel; the difference combination is undefined."""


class GridTooNarrow(WvmetroError):
    """Requested grid leaves more tail mass outside than the accuracy budget allows."""


class DegenerateModification(WvmetroError):
    """Finite-strength modification factor vanished; conditional mean undefined."""


class AllTrialsSingular(WvmetroError):
    """Every Monte Carlo trial landed on a singular count combination."""


class UnknownPreset(WvmetroError):
    """No figure preset registered under the requested name."""


class ConfigError(WvmetroError):
    """Sweep configuration file is missing, malformed, or inconsistent."""
