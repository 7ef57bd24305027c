"""Exception hierarchy shared by every module."""


class AlgebraError(ValueError):
    """Base class for input and precondition failures."""


class DimensionMismatch(AlgebraError):
    pass


class ModeMismatch(AlgebraError):
    pass


class PreconditionError(AlgebraError):
    pass


class VerificationError(AlgebraError):
    """A constructed object failed its own post-condition check."""


class SingularMatrixError(AlgebraError):
    pass


class UnitVerificationError(AlgebraError):
    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"declared unit fails on basis element e{index}")


class DependentVectorsError(AlgebraError):
    def __init__(self, relation, message: str | None = None):
        self.relation = relation
        super().__init__(message or "input vectors are linearly dependent")


class IsotropicVectorError(AlgebraError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"intermediate vector b{index} is isotropic")
