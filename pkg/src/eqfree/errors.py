"""Exception hierarchy. Every library error derives from :class:`EqfreeError`."""


class EqfreeError(Exception):
    pass


class AlphabetMismatchError(EqfreeError, ValueError):
    pass


class ParseError(EqfreeError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)


class ValidationError(EqfreeError, ValueError):
    pass


class NotMemberError(EqfreeError):
    pass


class NotInImageError(NotMemberError):
    pass


class InjectiveError(EqfreeError):
    """Raised when a kernel element is requested from an injective map."""


class NotBothNonInjectiveError(EqfreeError):
    pass


class NotInjectiveError(EqfreeError):
    """Raised when an operation needs an injective map and neither is."""


class BudgetExceededError(EqfreeError):
    pass


class NotASolutionError(EqfreeError):
    pass


class WrongShapeError(EqfreeError):
    pass


class NotDecomposableError(EqfreeError):
    pass


class HypothesesRefutedError(EqfreeError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"conjugacy hypotheses refuted by x = {witness}")
