from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional, Union

from core.errors import GenLogicError


class Regime(Enum):
    STRICT = "strict"
    LIMIT = "limit"
    FIXED = "fixed"


@dataclass(frozen=True)
class Semantics:
    """Interpretation regime: mu = 1, mu -> 1, or a fixed rational mu in (0, 1)."""
    regime: Regime
    mu: Optional[Fraction] = None

    def __post_init__(self):
        if self.regime is Regime.FIXED:
            if self.mu is None:
                raise GenLogicError("Fixed semantics needs a value for mu")
            mu = Fraction(self.mu)
            if not 0 < mu < 1:
                raise GenLogicError(f"Fixed mu must lie strictly between 0 and 1, got {mu}")
            object.__setattr__(self, 'mu', mu)
        elif self.mu is not None:
            raise GenLogicError(f"{self.regime.value} semantics takes no mu")

    @classmethod
    def strict(cls) -> "Semantics":
        return cls(Regime.STRICT)

    @classmethod
    def limit(cls) -> "Semantics":
        return cls(Regime.LIMIT)

    @classmethod
    def fixed(cls, mu: Union[Fraction, int, str]) -> "Semantics":
        return cls(Regime.FIXED, Fraction(mu))

    @classmethod
    def parse(cls, text: str) -> "Semantics":
        value = text.strip().lower()
        if value == "strict":
            return cls.strict()
        if value == "limit":
            return cls.limit()
        if value.startswith("mu="):
            try:
                mu = Fraction(value[3:])
            except (ValueError, ZeroDivisionError) as e:
                raise GenLogicError(f"Invalid mu in {text!r}") from e
            return cls.fixed(mu)
        raise GenLogicError(f"Unknown semantics {text!r}; use strict, limit or mu=N/D")

    def __str__(self) -> str:
        if self.regime is Regime.FIXED:
            return f"mu={self.mu.numerator}/{self.mu.denominator}"
        return self.regime.value


@dataclass(frozen=True)
class ProbResult:
    value: Optional[Fraction] = None
    reason: Optional[str] = None

    def __post_init__(self):
        if self.value is None:
            if not self.reason:
                raise GenLogicError("An undefined result must carry a reason")
            return
        value = Fraction(self.value)
        if not 0 <= value <= 1:
            raise GenLogicError(f"Probability {value} lies outside [0, 1]")
        object.__setattr__(self, 'value', value)

    @classmethod
    def of(cls, value: Union[Fraction, int]) -> "ProbResult":
        return cls(Fraction(value))

    @classmethod
    def undefined(cls, reason: str) -> "ProbResult":
        return cls(None, reason)

    @property
    def is_undefined(self) -> bool:
        return self.value is None

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, ProbResult):
            return self.value == other.value
        if self.value is None:
            return False
        return self.value == other

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        if self.value is None:
            return "undefined"
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def to_dict(self, decimal_places: int = 6) -> Dict[str, Any]:
        if self.value is None:
            return {'p': "undefined", 'reason': self.reason}
        return {'p': str(self), 'decimal': float(round(self.value, decimal_places))}
