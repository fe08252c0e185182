"""Exception types shared across the package."""


class DynDistError(Exception):
    """Base class for every error raised by dyndist."""


class ConfigError(DynDistError):
    pass


class NotInvertible(DynDistError):
    pass


class Singular(DynDistError):
    pass


class SetError(DynDistError):
    pass


class GraphError(DynDistError):
    pass


class CapacityError(DynDistError):
    pass


class StreamError(DynDistError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"event {index}: {message}")
        self.index = index
