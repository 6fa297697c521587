"""Exception hierarchy shared by every scottkit module."""


class ScottkitError(Exception):
    """Base class for all library errors."""


class SignatureMismatch(ScottkitError):
    pass


class InvalidStructure(ScottkitError):
    pass


class InconsistentDiagram(ScottkitError):
    """A diagram (or an operator's output) asserts a fact with both polarities."""


class BudgetExceeded(ScottkitError):
    pass


class DecodeError(ScottkitError):
    """The input is not in the image of the encoder being inverted."""


class UnrealizableSpec(ScottkitError):
    pass


class ShapeError(ScottkitError):
    """An argument lies outside the shape an algorithm supports."""


class NotAMember(ScottkitError):
    """An order element violates the membership constraints of the image."""


class FamilyViolation(ScottkitError):
    """A partial map left the family of order-image partial isomorphisms."""
