"""Exact spider phases, stored as rational multiples of pi."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

PhaseLike = Union["Phase", Fraction, int]


@dataclass(frozen=True, order=True)
class Phase:
    """A phase ``value * pi`` with ``value`` reduced into ``[0, 2)``."""

    value: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", Fraction(self.value) % 2)

    @classmethod
    def of(cls, x: PhaseLike) -> "Phase":
        if isinstance(x, Phase):
            return x
        return cls(Fraction(x))

    @classmethod
    def from_ratio(cls, num: int, den: int = 1) -> "Phase":
        if den <= 0:
            raise ValueError(f"phase denominator must be positive, got {den}")
        return cls(Fraction(num, den))

    @property
    def num(self) -> int:
        return self.value.numerator

    @property
    def den(self) -> int:
        return self.value.denominator

    def __add__(self, other: PhaseLike) -> "Phase":
        return Phase(self.value + Phase.of(other).value)

    __radd__ = __add__

    def __neg__(self) -> "Phase":
        return Phase(-self.value)

    def __sub__(self, other: PhaseLike) -> "Phase":
        return self + (-Phase.of(other))

    def is_zero(self) -> bool:
        return self.value == 0

    def is_pi(self) -> bool:
        return self.value == 1

    def is_pauli(self) -> bool:
        return self.value in (0, 1)

    def radians(self) -> float:
        import math

        return float(self.value) * math.pi

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}

    @classmethod
    def from_json(cls, obj: dict) -> "Phase":
        return cls.from_ratio(int(obj["num"]), int(obj["den"]))

    def __str__(self) -> str:
        if self.value == 0:
            return "0"
        if self.value == 1:
            return "pi"
        if self.num == 1:
            return f"pi/{self.den}"
        if self.den == 1:
            return f"{self.num}pi"
        return f"{self.num}pi/{self.den}"


ZERO = Phase()
PI = Phase(Fraction(1))
