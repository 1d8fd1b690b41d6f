"""Boundary moment functionals built from an interior rule.

For each edge of the triangle there is a univariate linear functional:
the integral of g (in the edge parameter) against a once-bumped Jacobi
weight, minus the interior-rule sum of g weighted by the complementary
coordinate product.  Applied to the assembled rule these functionals are
exactly what the edge quadratures must reproduce.  Positive definiteness
of the induced bilinear form decides whether Gaussian quadrature exists;
it is detected here through Hankel-matrix pivots, never predicted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import ParameterError
from .interior import InteriorRule, shift_weights_in
from .moments import JacobiExponents, MonomialIndex, triangle_moment

EDGE_Y0 = "edge_y0"      # side y = 0, parameterized by x
EDGE_X0 = "edge_x0"      # side x = 0, parameterized by y
EDGE_DIAG = "edge_diag"  # side x + y = 1, parameterized by x
EDGE_LABELS = (EDGE_Y0, EDGE_X0, EDGE_DIAG)

PIVOT_DELTA = 1e-13  # pivots below this (times max |moment|) count as not positive


@dataclass(frozen=True)
class MomentFunctional:
    """Univariate linear functional given by its moments mu_k = L(t^k)."""

    moments: tuple[float, ...]
    edge_label: str
    max_exact_degree: int

    def __post_init__(self):
        if self.edge_label not in EDGE_LABELS:
            raise ParameterError(f"unknown edge label {self.edge_label!r}")
        if len(self.moments) != self.max_exact_degree + 1:
            raise ParameterError(
                f"expected {self.max_exact_degree + 1} moments, got {len(self.moments)}"
            )
        if not all(np.isfinite(self.moments)):
            raise ParameterError("moments must all be finite")

    def moment_array(self) -> np.ndarray:
        return np.array(self.moments)

    def apply(self, coeffs) -> float:
        """Apply to a polynomial given by ascending coefficients."""
        coeffs = np.asarray(coeffs, dtype=float)
        if len(coeffs) > len(self.moments):
            raise ParameterError("polynomial degree exceeds stored moments")
        return float(np.dot(coeffs, self.moments[: len(coeffs)]))


class PositiveDefiniteness(NamedTuple):
    ok: bool
    failed_pivot: int | None  # index of the first nonpositive pivot, when not ok


def boundary_functional(
    rule: InteriorRule,
    base: JacobiExponents,
    which: str,
    m_max: int,
) -> MomentFunctional:
    """Build the edge functional for `which` from a step-1 interior rule.

    The rule must be for the base weight bumped by (1, 1, 1); its weights
    are converted through the bubble shift before entering the discrete
    term.  Integral terms reduce to closed-form triangle moments.
    """
    expected = base.bumped(1.0)
    if (rule.weight.alpha, rule.weight.beta, rule.weight.gamma) != (
        expected.alpha,
        expected.beta,
        expected.gamma,
    ):
        raise ParameterError(
            f"interior rule weight {rule.weight} is not the base {base} bumped by one"
        )
    if which not in EDGE_LABELS:
        raise ParameterError(f"unknown edge label {which!r}")
    if m_max < 0:
        raise ParameterError(f"m_max must be >= 0, got {m_max}")

    xs, ys, _ = rule.node_arrays()
    zs = 1.0 - xs - ys
    lam = np.array(shift_weights_in(rule))

    if which == EDGE_Y0:
        # L g = integral g(x) W_{a+1,b,c+1} - sum lam * x * z * g(x)
        bumped = JacobiExponents(base.alpha + 1.0, base.beta, base.gamma + 1.0)
        factor = lam * xs * zs
        arg = xs
        moment_of = lambda k: triangle_moment(MonomialIndex(k, 0), bumped)
    elif which == EDGE_X0:
        bumped = JacobiExponents(base.alpha, base.beta + 1.0, base.gamma + 1.0)
        factor = lam * ys * zs
        arg = ys
        moment_of = lambda k: triangle_moment(MonomialIndex(0, k), bumped)
    else:
        bumped = JacobiExponents(base.alpha + 1.0, base.beta + 1.0, base.gamma)
        factor = lam * xs * ys
        arg = xs
        moment_of = lambda k: triangle_moment(MonomialIndex(k, 0), bumped)

    moments = tuple(
        moment_of(k) - float(np.sum(factor * arg**k)) for k in range(m_max + 1)
    )
    return MomentFunctional(moments=moments, edge_label=which, max_exact_degree=m_max)


def is_positive_definite(functional: MomentFunctional, degree: int) -> PositiveDefiniteness:
    """Whether the bilinear form (p, q) -> L(pq) is positive definite on
    polynomials of degree <= `degree`.

    Runs a Cholesky-style elimination on the Hankel matrix H[r, c] =
    mu_{r+c}; every pivot must clear a small threshold scaled by the
    largest moment.  Near-zero pivots are classified indefinite so the
    construction fails loudly instead of producing spurious nodes later.
    """
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    if 2 * degree > functional.max_exact_degree:
        raise ParameterError(
            f"positive-definiteness at degree {degree} needs moments through "
            f"{2 * degree}, have {functional.max_exact_degree}"
        )
    mu = functional.moment_array()
    size = degree + 1
    hankel = mu[np.arange(size)[:, None] + np.arange(size)[None, :]]
    threshold = PIVOT_DELTA * float(np.max(np.abs(mu)))

    work = hankel.copy()
    for k in range(size):
        pivot = work[k, k]
        if not pivot > threshold:
            return PositiveDefiniteness(ok=False, failed_pivot=k)
        if k + 1 < size:
            row = work[k, k + 1 :]
            work[k + 1 :, k + 1 :] -= np.outer(row, row) / pivot
    return PositiveDefiniteness(ok=True, failed_pivot=None)
