"""Closed-form moments of Jacobi weights on the unit triangle.

The weight family is W(x, y) = x^alpha * y^beta * (1 - x - y)^gamma on the
triangle {x >= 0, y >= 0, x + y <= 1}, with all exponents > -1.  Every
monomial moment has the Dirichlet-integral closed form

    integral x^a y^b (1-x-y)^c dx dy
        = Gamma(a+1) Gamma(b+1) Gamma(c+1) / Gamma(a+b+c+3),

evaluated through log-Gamma differences so that degrees up to ~60 stay well
inside binary64 range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class JacobiExponents:
    """Exponents (alpha, beta, gamma) of the triangle Jacobi weight."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= -1.0:
                raise_parameter_error(
                    f"Jacobi exponent {name}={value!r} must be finite and > -1"
                )

    def bumped(self, by: float = 1.0) -> "JacobiExponents":
        """Weight with every exponent shifted by `by` (the bubble-function shift)."""
        return JacobiExponents(self.alpha + by, self.beta + by, self.gamma + by)

    def is_symmetric(self) -> bool:
        return self.alpha == self.beta == self.gamma


@dataclass(frozen=True)
class MonomialIndex:
    """Exponent pair of the monomial x^i y^j."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise_parameter_error(f"monomial exponents must be >= 0, got {self}")

    @property
    def degree(self) -> int:
        return self.i + self.j


def raise_parameter_error(message):
    # local import indirection keeps moments.py importable on its own
    from .errors import ParameterError

    raise ParameterError(message)


def triangle_moment(m: MonomialIndex, w: JacobiExponents) -> float:
    """Integral of x^i y^j against the Jacobi weight over the unit triangle.

    Always strictly positive for valid exponents.
    """
    a = m.i + w.alpha
    b = m.j + w.beta
    c = w.gamma
    return math.exp(
        math.lgamma(a + 1.0)
        + math.lgamma(b + 1.0)
        + math.lgamma(c + 1.0)
        - math.lgamma(a + b + c + 3.0)
    )


def dim_poly_space(n: int) -> int:
    """Dimension of the space of bivariate polynomials of total degree <= n."""
    if n < 0:
        raise_parameter_error(f"polynomial degree must be >= 0, got {n}")
    return (n + 1) * (n + 2) // 2


def monomials_up_to(degree: int) -> list[MonomialIndex]:
    """All monomial indices of total degree <= degree, ordered by (degree, i)."""
    return [
        MonomialIndex(i, d - i) for d in range(degree + 1) for i in range(d + 1)
    ]
