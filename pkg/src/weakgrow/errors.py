"""Exception types shared across the package."""


class WeakGrowError(Exception):
    """Base class for all package errors."""


class ParameterError(WeakGrowError, ValueError):
    """Invalid parameter value (even kernel, bad polygon, ...)."""


class ContractError(WeakGrowError):
    """A documented precondition was violated by the caller."""


class ConstraintGeometryError(WeakGrowError):
    """Constraint outline is degenerate or self-intersecting."""


class WeakLabelError(WeakGrowError, ValueError):
    """Base class for weak-label document problems."""


class LabelSyntaxError(WeakLabelError):
    """Document is not valid JSON."""


class LabelSchemaError(WeakLabelError):
    """Document structure or per-kind point/line counts are wrong."""


class LabelBoundsError(WeakLabelError):
    """A coordinate lies outside the image bounds."""


class DuplicateKindError(WeakLabelError):
    """The same region kind appears more than once."""
