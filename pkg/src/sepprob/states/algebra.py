"""Division-algebra tags for the three ensembles."""

from __future__ import annotations

import enum
from fractions import Fraction


class DivisionAlgebra(enum.Enum):
    """Scalar field of the density matrices, with its Dyson-like index.

    ``alpha`` is the series parameter (1/2, 1, 2) and ``beta = 2*alpha`` is
    the number of real components per scalar.
    """

    REAL = "real"
    COMPLEX = "complex"
    QUATERNION = "quaternion"

    @property
    def alpha(self) -> Fraction:
        return _ALPHA[self]

    @property
    def beta(self) -> int:
        return int(2 * _ALPHA[self])

    @classmethod
    def parse(cls, name: "str | DivisionAlgebra") -> "DivisionAlgebra":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ValueError(f"unknown algebra {name!r}; expected real, complex or quaternion") from None

    @classmethod
    def from_alpha(cls, alpha) -> "DivisionAlgebra":
        a = Fraction(alpha)
        for tag, value in _ALPHA.items():
            if value == a:
                return tag
        raise ValueError(f"no division algebra has alpha={a}")


_ALPHA = {
    DivisionAlgebra.REAL: Fraction(1, 2),
    DivisionAlgebra.COMPLEX: Fraction(1),
    DivisionAlgebra.QUATERNION: Fraction(2),
}
