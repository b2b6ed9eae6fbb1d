"""Exception hierarchy shared by the library and the CLI."""


class TopoZXError(Exception):
    """Base class for every error raised by this package."""


class InputError(TopoZXError, ValueError):
    """Malformed user input: bad JSON, bad spec fields, bad arguments."""


class ValidationError(InputError):
    def __init__(self, violation):
        self.violation = violation
        super().__init__(str(violation))


class CompositionError(InputError):
    pass


class ShapeError(InputError):
    pass


class ColouringError(InputError):
    pass


class SpecError(InputError):
    """A defect, operator or pattern refers to sites that cannot carry it."""


class PatternError(SpecError):
    pass


class MatchError(TopoZXError):
    """A match no longer applies to the diagram it is being applied to."""


class ReplayError(TopoZXError):
    def __init__(self, index: int, message: str):
        self.index = index
        super().__init__(f"replay failed at step {index}: {message}")


class ResourceError(TopoZXError):
    """A configured size cap would be exceeded."""


class BudgetError(ResourceError):
    def __init__(self, message: str, diagram=None, trace=None):
        self.diagram = diagram
        self.trace = trace
        super().__init__(message)
