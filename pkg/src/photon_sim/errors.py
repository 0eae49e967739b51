"""Exception types raised by the simulator blocks."""


class PhotonSimError(Exception):
    """Base class for every simulator error."""


class InvalidGrid(PhotonSimError, ValueError):
    pass


class GridMismatch(PhotonSimError, ValueError):
    pass


class UnitMismatch(PhotonSimError, ValueError):
    pass


class AllZeroSpectrum(PhotonSimError, ValueError):
    pass


class ZeroTotalPower(PhotonSimError, ValueError):
    pass


class BadCutoff(PhotonSimError, ValueError):
    pass


class BadPassband(PhotonSimError, ValueError):
    pass


class BadFrequency(PhotonSimError, ValueError):
    pass


class CombOverflow(PhotonSimError, ValueError):
    pass


class UnreachableTarget(PhotonSimError, ValueError):
    pass


class ConfigError(PhotonSimError):
    """Problem with a chain configuration; ``key`` names the offending entry."""

    exit_code = 1

    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(f"{key}: {message}" if key else message)


class ParseError(ConfigError):
    exit_code = 2


class ValidationError(ConfigError, ValueError):
    exit_code = 3
