from typing import Optional, Sequence


class GenLogicError(ValueError):
    pass


class VocabularyError(GenLogicError):
    pass


class FormulaSyntaxError(GenLogicError):
    def __init__(self, message: str, position: int, expected: Optional[Sequence[str]] = None):
        self.position = position
        self.expected = tuple(expected or ())
        detail = f"{message} at position {position}"
        if self.expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class UnboundVariableError(GenLogicError):
    pass


class UnknownSymbolError(GenLogicError):
    pass


class ArityMismatchError(GenLogicError):
    pass


class GroundingError(GenLogicError):
    pass


class DataFormatError(GenLogicError):
    pass


class PriorError(GenLogicError):
    pass


class FrozenPriorError(PriorError):
    pass


class BoundExceededError(GenLogicError):
    pass


class OracleMismatchError(GenLogicError):
    """Two independent computations of the same oracle quantity disagreed."""
