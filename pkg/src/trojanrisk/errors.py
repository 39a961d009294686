"""Exception hierarchy.

Input errors (bad files, out-of-range queries) map to CLI exit code 2,
configuration-semantic errors to exit code 3.
"""


class TrojanRiskError(Exception):
    pass


class InputError(TrojanRiskError, ValueError):
    pass


class ConfigError(TrojanRiskError, ValueError):
    pass


class MalformedRow(InputError):
    pass


class DuplicateWavelength(InputError):
    pass


class TooFewPoints(InputError):
    pass


class NoOverlap(InputError):
    pass


class OutOfRange(InputError):
    pass


class NotInvertible(InputError):
    pass


class EmptyGrid(InputError):
    pass


class InvalidObservation(InputError):
    pass


class InvalidDirection(ConfigError):
    pass
