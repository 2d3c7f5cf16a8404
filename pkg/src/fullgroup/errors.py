"""Exception hierarchy shared by every module of the workbench."""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class MalformedNumberError(WorkbenchError):
    pass


class BadFieldError(WorkbenchError):
    """Square-free check failed, or values from different fields were mixed."""


class ParseError(WorkbenchError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class PreconditionError(WorkbenchError):
    pass


class NonElementError(WorkbenchError):
    """A proposed map is not a bijection of the circle / of Z_m."""


class InvariantViolation(WorkbenchError):
    """An internal invariant broke. Always a bug, never bad input."""


class ResourceError(WorkbenchError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class LevelError(WorkbenchError):
    pass
