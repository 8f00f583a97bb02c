"""Exception hierarchy shared by every module."""


class CombError(Exception):
    """Base class for all errors raised by combsmt."""


class SortError(CombError):
    """A formula or problem file is not well-sorted."""


class UnknownSymbol(SortError):
    pass


class ArityMismatch(SortError):
    pass


class SortMismatch(SortError):
    pass


class MixedSorts(SortError):
    pass


class UnassignedVariable(CombError):
    pass


class DnfBlowup(CombError):
    pass


class NonEmptySignature(CombError):
    pass


class UnsupportedLiteral(CombError):
    pass


class TooManyVariables(CombError):
    pass


class UnguardedSelector(CombError):
    pass


class NonDisjointSignatures(CombError):
    pass


class HypothesisViolation(CombError):
    """The chosen combination mode's hypotheses are not met by the theories."""


class CapExceeded(CombError):
    pass


class ParseError(CombError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(where + message)


class UnknownTheory(CombError):
    pass


class DemoAssertionFailed(CombError):
    pass
