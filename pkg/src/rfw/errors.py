"""Exception types shared across the toolkit."""


class RfwError(Exception):
    """Base class for all toolkit errors."""


class ContractError(RfwError):
    """A caller violated a documented precondition (wrong base point,
    zero direction, point outside the feasible set, ...)."""


class DomainError(RfwError):
    """An operation was asked to leave its mathematical domain, e.g.
    exp beyond the supported radius or log at the cut locus."""


class NoIntersectionError(DomainError):
    """A geodesic ray does not meet the boundary it was intersected with."""


class NumericsError(RfwError):
    """A numerical routine could not deliver its contract (lost bracket,
    singular branch, failed convergence)."""


class BracketError(NumericsError):
    """A root bracket with opposite signs could not be established."""


class ConfigError(RfwError):
    """Invalid configuration (bad dimension, radius, preset, ...)."""
