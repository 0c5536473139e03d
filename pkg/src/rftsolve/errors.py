"""Exception types raised by the solver modules."""


class SolverError(Exception):
    """Base class for all solver errors."""


class NonTraceless(SolverError):
    pass


class DefectiveMatrix(SolverError):
    pass


class GrazingMode(SolverError):
    pass


class QuadratureFailure(SolverError):
    pass


class InvalidDim(SolverError):
    pass


class EmptySet(SolverError):
    pass


class ParamBlowup(SolverError):
    """Riccati pole hit while reconstructing g from the vector pair."""


class NonFinite(SolverError):
    pass


class NoConvergence(SolverError):
    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = list(residual_history or [])


class PoleHit(SolverError):
    pass


class DomainError(SolverError):
    pass


class SingularBlock(SolverError):
    pass


class ParseError(SolverError):
    pass


class ValidationError(SolverError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
