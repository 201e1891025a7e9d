"""Exception hierarchy shared by all fkchain modules."""


class FKChainError(Exception):
    """Base class for all fkchain errors."""


class DomainError(FKChainError):
    """Argument outside the mathematical domain of an operation."""


class DivergentIntegral(FKChainError):
    """Requested value of an integral that diverges (e.g. K(1))."""


class NoRoot(FKChainError):
    """A defining transcendental equation has no root in the search interval."""


class NoCenters(FKChainError):
    """No soliton center (odd-pi crossing) found in a configuration."""


class NotConverged(FKChainError):
    """Iterative relaxation failed to reach the gradient tolerance."""


class Unstable(FKChainError):
    """Configuration has a negative fluctuation eigenvalue beyond tolerance."""


class ZeroMode(FKChainError):
    """A normal-mode frequency is too close to zero to build a ground state."""


class NotPositiveDefinite(FKChainError):
    """A covariance block expected to be positive-definite is not."""


class OverlappingBlocks(FKChainError):
    """Two site blocks that must be disjoint share indices."""


class TooFewInternalModes(FKChainError):
    """An operation requires more internal modes than the basis provides."""


class InvalidPartition(FKChainError):
    """Blocks passed to an entanglement bound do not partition the system."""


class NotGroundForm(FKChainError):
    """A squeeze was requested on a state that is not in normal-mode ground form."""


class NoStableConfiguration(FKChainError):
    """No stable classical configuration exists for the requested parameters."""


class FitWindowTooSmall(FKChainError):
    """A regression window contains too few points."""


class ConfigError(FKChainError):
    """Malformed or incomplete experiment configuration."""
