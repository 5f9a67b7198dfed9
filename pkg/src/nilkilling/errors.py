"""Exception hierarchy.

``ValidationError`` covers bad user input (CLI exit code 1); ``InternalError``
covers failed self-checks that indicate a bug (exit code 2).
"""


class NilKillingError(Exception):
    pass


class ValidationError(NilKillingError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class NotAntisymmetric(ValidationError):
    pass


class JacobiFails(ValidationError):
    pass


class NotTwoStep(ValidationError):
    pass


class Abelian(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NotSkew(ValidationError):
    pass


class NotSymmetric(ValidationError):
    pass


class NotKilling(ValidationError):
    pass


class GeneratorsDependent(ValidationError):
    pass


class NonFloatMode(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)
        self.line = line


class InternalError(NilKillingError):
    pass


class InternalInconsistency(InternalError):
    pass


class MethodMismatch(InternalError):
    pass


class InternalAssertion(InternalError):
    pass


class OracleDisagreement(InternalError):
    pass


class NeedsFloatFallback(ArithmeticError):
    """Exact eigen-solve found irrational eigenvalues; rerun in float mode."""
