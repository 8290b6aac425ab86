"""Exception hierarchy shared by every trireg module."""


class TriregError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class InvalidEdge(TriregError, ValueError):
    pass


class VertexOutOfRange(TriregError, IndexError):
    pass


class NotAnEdge(TriregError, ValueError):
    pass


class EmptyGraph(TriregError, ValueError):
    pass


class EmptyFactor(TriregError, ValueError):
    pass


class TooManyVertices(TriregError, ValueError):
    pass


class IndivisibleParts(TriregError, ValueError):
    pass


class UnknownGraph(TriregError, KeyError):
    pass


class InvalidRecipe(TriregError, ValueError):
    pass


class ParityError(TriregError, ValueError):
    pass


class DegreeTooLarge(TriregError, ValueError):
    pass


class GenerationFailed(TriregError, RuntimeError):
    pass


class DeskScaleExceeded(TriregError, ValueError):
    pass


class FormatError(TriregError, ValueError):
    pass
