class PureResError(Exception):
    """Base class for computation failures reported by the engine."""


class RetriesExhausted(PureResError):
    pass


class SchemaViolation(PureResError):
    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


class FiberInjectivityFailed(PureResError):
    pass


class PurityViolation(PureResError):
    pass


class BettiMismatch(PureResError):
    pass


class ScheduleTooTight(PureResError):
    def __init__(self, message: str, minimal: int):
        super().__init__(message)
        self.minimal = minimal


class IndeterminateEntry(PureResError):
    pass


class PreconditionViolated(PureResError):
    pass


class NotInjective(PureResError):
    pass


class RankTooSmall(PureResError):
    pass
