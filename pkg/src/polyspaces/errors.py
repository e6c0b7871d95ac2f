"""Exception types shared across the package."""


class PolySpacesError(Exception):
    pass


class InvalidInputError(PolySpacesError, ValueError):
    pass


class ContractViolationError(PolySpacesError, ValueError):
    """A caller broke a documented precondition (e.g. non-squarefree input to Sturm)."""


class UnsupportedParametersError(PolySpacesError, ValueError):
    pass


class NumericalFailure(PolySpacesError, ArithmeticError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class RefineFirstError(PolySpacesError):
    """Loop sample too coarse to continue a sign lift unambiguously."""


class InternalConsistencyError(PolySpacesError, AssertionError):
    pass
