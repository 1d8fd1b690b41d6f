"""Exception types raised by the construction and verification machinery."""


class TrilobattoError(Exception):
    """Base class for all library errors."""


class ParameterError(TrilobattoError, ValueError):
    """Invalid argument: bad weight exponents, mismatched weights, missing moments."""


class ConstructionFailedError(TrilobattoError):
    """Moment solver exhausted its restart budget without a converged solution."""

    def __init__(self, message, best_residual=None):
        super().__init__(message)
        self.best_residual = best_residual


class RejectedSolutionError(TrilobattoError):
    """Solver converged, but every converged candidate violated a constraint
    (node outside the open triangle, nonpositive weight, or node collision).
    Carries the first offending solution for diagnostics."""

    def __init__(self, message, nodes=None, weights=None):
        super().__init__(message)
        self.nodes = nodes
        self.weights = weights


class ZeroCountError(TrilobattoError):
    """common_zeros found a different number of distinct zeros than expected."""

    def __init__(self, message, zeros=()):
        super().__init__(message)
        self.zeros = tuple(zeros)


class DivisionHazardError(TrilobattoError):
    """A node sits too close to the boundary for the bubble-weight division."""


class IndefiniteFunctionalError(TrilobattoError):
    """Moment functional is not positive definite at the requested degree."""

    def __init__(self, message, degree=None, edge=None):
        super().__init__(message)
        self.degree = degree
        self.edge = edge


class NonGaussianSpectrumError(TrilobattoError):
    """Polynomial has complex or multiple roots where real simple ones are required."""


class NodePlacementError(TrilobattoError):
    """Quadrature node fell outside the open interval (0, 1)."""


class PositivityError(TrilobattoError):
    """Gaussian quadrature produced a nonpositive weight."""


class ParameterDegeneracyError(TrilobattoError):
    """The quasi-orthogonal mixing parameter is undefined: p_{n-1}(fixed_node) = 0."""


class DegenerateGeometryError(TrilobattoError):
    """Corner weight system is singular."""

    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class ClassificationError(TrilobattoError):
    """Stored nodes disagree with their declared class (interior/edge/corner)."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)


class VerificationError(TrilobattoError):
    """A freshly constructed rule failed its mandatory exactness verification."""
