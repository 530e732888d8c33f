"""Exception hierarchy shared across the package."""


class CytomonError(Exception):
    """Base class for all package errors."""


class StructuralError(CytomonError):
    """Malformed network, template, or distribution specification."""


class ContractError(CytomonError):
    """An operation was called outside its contract."""


class CapabilityError(CytomonError):
    """A full conditional outside the supported sampler families."""


class ConfigError(CytomonError):
    """Invalid chain or pipeline configuration."""


class DataError(CytomonError):
    """Invalid input data (patient database rows, sample files)."""


class FormatVersionError(DataError):
    """Persisted file has an incompatible format version."""
