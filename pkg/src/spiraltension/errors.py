"""Error taxonomy shared by the library, CLI and service layers."""


class SpiralTensionError(Exception):
    """Base class for all package errors."""


class InputError(SpiralTensionError):
    """Malformed or out-of-contract input data (CLI exit code 1, HTTP 422)."""


class ConfigurationError(SpiralTensionError):
    """Invalid parameters or unusable configuration (CLI exit code 2)."""
