"""Exception hierarchy shared by all modules.

CLI exit codes are attached to the classes so ``cli`` can map failures
without a lookup table.
"""


class DiffCechError(Exception):
    exit_code = 3


class MalformedInputError(DiffCechError):
    """Structurally broken input: bad JSON, unknown ids, shape mismatches."""

    exit_code = 3


class MalformedComplexError(MalformedInputError):
    pass


class CategoryLawError(MalformedInputError):
    pass


class ModelError(MalformedInputError):
    """A finite model violates a structural requirement (action, components)."""


class ConventionError(DiffCechError):
    exit_code = 3


class ScopeError(DiffCechError):
    exit_code = 3


class BoundError(DiffCechError):
    """Truncation degree too low for the requested computation."""

    exit_code = 3


class ResourceCapError(DiffCechError):
    exit_code = 2

    def __init__(self, what, reached, cap):
        super().__init__(f"{what}: count {reached} exceeds cap {cap}")
        self.what = what
        self.reached = reached
        self.cap = cap


class ValidationError(DiffCechError):
    """Semantic validation failed; carries the violation report."""

    exit_code = 1

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class ConsistencyError(DiffCechError):
    """Two routes that must agree did not. Always a bug or a model defect."""

    exit_code = 1


class NotACoverError(ModelError):
    """A map that should be jointly surjective misses points."""
