"""Exception types raised by discordfreeze."""


class DiscordFreezeError(Exception):
    """Base class for all package errors."""


class DimensionError(DiscordFreezeError, ValueError):
    pass


class NotHermitianError(DiscordFreezeError, ValueError):
    pass


class InvalidProbabilityError(DiscordFreezeError, ValueError):
    pass


class UnphysicalStateError(DiscordFreezeError, ValueError):
    """A state whose spectrum has a component below the clamping slack."""


class UnsupportedRegimeError(DiscordFreezeError, ValueError):
    """Noise parameters outside the supported (underdamped) regime."""


class NotFrozenError(DiscordFreezeError, ValueError):
    """A freezing quantity was requested for a state that does not freeze."""


class NotApplicableError(DiscordFreezeError, ValueError):
    """The requested quantity is undefined on the active discord branch."""


class ConvergenceError(DiscordFreezeError, RuntimeError):
    pass


class SpecParseError(DiscordFreezeError, ValueError):
    """Malformed state or schedule specification text."""
