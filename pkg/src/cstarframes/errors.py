"""Exception hierarchy.

Input errors (malformed data, shape or rule mismatches) derive from
``InputError``; mathematical failures that a certificate can witness
(not a frame, not a dual, violated hypotheses) derive from ``CertificationError``.
The CLI maps the first family to exit code 2 and the second to exit code 1.
"""


class FrameError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FrameError):
    pass


class CertificationError(FrameError):
    """A mathematical precondition or conclusion failed.

    ``residual`` carries the offending quantity when one exists.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ShapeMismatch(InputError, ValueError):
    pass


class DescriptorMismatch(ShapeMismatch):
    pass


class BlockPatternViolation(InputError, ValueError):
    pass


class RuleMismatch(InputError, ValueError):
    pass


class OffNodeEvaluation(InputError, ValueError):
    pass


class NegativeWeight(InputError, ValueError):
    pass


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class NamedObjectMissing(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownCommand(InputError):
    pass


class SingularElement(CertificationError, ArithmeticError):
    pass


class NotHermitian(CertificationError, ValueError):
    pass


class NotAFrame(CertificationError):
    pass


class NotADual(CertificationError):
    pass


class NullityViolated(CertificationError):
    pass


class HypothesisViolated(CertificationError):
    pass


class NotCentral(CertificationError):
    pass


class AffinityViolated(CertificationError):
    pass
