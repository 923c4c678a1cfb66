"""Exception hierarchy shared by all mpslab modules."""


class MpslabError(Exception):
    """Base class for all mpslab errors."""


class InvalidInput(MpslabError):
    """Malformed or out-of-contract input (bad shapes, ranges, file contents)."""


class CorruptMps(InvalidInput):
    """MPS with inconsistent bond dimensions or broken tensor structure."""


class NumericalFailure(MpslabError):
    """An iterative or direct numerical routine failed to converge."""


class TooLarge(MpslabError):
    """Request exceeds the configured dense-size or memory guard."""
