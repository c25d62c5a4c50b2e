"""Exception hierarchy shared by every graphspec module."""


class GraphSpecError(ValueError):
    """Base class for domain errors (bad graphs, bad parameters)."""


class IndexOutOfRange(GraphSpecError):
    pass


class SelfLoop(GraphSpecError):
    pass


class CycleTooSmall(GraphSpecError):
    pass


class EmptyGraph(GraphSpecError):
    pass


class IsolatedVertex(GraphSpecError):
    pass


class Disconnected(GraphSpecError):
    pass


class MTooSmall(GraphSpecError):
    pass


class InvalidCopyPair(GraphSpecError):
    pass


class MOutOfTheoremRange(GraphSpecError):
    """The operation parameter lies outside the range where a closed form is stated."""


class OrderTooLarge(GraphSpecError):
    pass


class NoConvergence(ArithmeticError):
    """Cyclic Jacobi exhausted its sweep budget."""
