"""Data model for constant-coefficient linear ODEs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Expr


@dataclass(frozen=True)
class LinearODE:
    """a_n y^(n) + ... + a_1 y' + a_0 y = q(t).

    ``coeffs`` lists a_0 .. a_n in ascending derivative order; the leading
    coefficient must be nonzero and the order at least 1.  Coefficients are
    Fractions in exact mode or floats in approximate mode.
    """

    coeffs: tuple
    forcing: Expr
    var: str = "t"

    def __post_init__(self):
        coeffs = tuple(
            c if isinstance(c, (Fraction, float)) else Fraction(c) for c in self.coeffs
        )
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) < 2:
            raise ValueError("the equation must be at least first order")
        if not coeffs[-1]:
            raise ValueError("leading coefficient must be nonzero")
        for c in coeffs:
            if isinstance(c, float) and not math.isfinite(c):
                raise ValueError("coefficients must be finite")
        if self.var not in ("t", "x"):
            raise ValueError("variable must be 't' or 'x'")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs) and self.forcing.is_exact()

    def to_float(self) -> "LinearODE":
        return LinearODE(
            tuple(float(c) for c in self.coeffs), self.forcing.to_float(), self.var
        )
