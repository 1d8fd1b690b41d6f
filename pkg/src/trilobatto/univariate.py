"""Orthogonal polynomials and quadrature for a moment functional (Step 2).

Recurrence coefficients come out of the classical moment-table recursion;
Gaussian nodes are eigenvalues of the symmetric tridiagonal recurrence
matrix, while the quasi-orthogonal even-degree variant falls back to
companion-matrix roots.  Weights always come from a Vandermonde solve and
are re-verified against every available moment before anything is
returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .errors import (
    IndefiniteFunctionalError,
    NodePlacementError,
    NonGaussianSpectrumError,
    ParameterDegeneracyError,
    ParameterError,
    PositivityError,
    VerificationError,
)
from .functionals import PIVOT_DELTA, MomentFunctional, is_positive_definite
from .interior import EPS_ZERO, TAU

QUAD_MOMENT_TOL = 1e-11   # re-verification tolerance, relative to moment scale
NEWTON_POLISH_MAX = 10
ROOT_IMAG_TOL = 1e-8
ROOT_SEPARATION = 1e-8


@dataclass(frozen=True)
class MonicPoly:
    """Monic univariate polynomial; coeffs ascending, leading 1 implicit."""

    coeffs: tuple[float, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def full_coeffs(self) -> np.ndarray:
        """Ascending coefficients including the leading 1."""
        return np.append(np.array(self.coeffs, dtype=float), 1.0)

    def __call__(self, t: float) -> float:
        acc = 1.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def derivative_at(self, t: float) -> float:
        full = self.full_coeffs()
        acc = 0.0
        for k in range(len(full) - 1, 0, -1):
            acc = acc * t + k * full[k]
        return acc

    def coefficient_scale(self) -> float:
        return max(1.0, max(abs(c) for c in self.coeffs)) if self.coeffs else 1.0


@dataclass(frozen=True)
class EdgeQuadrature:
    """Quadrature for an edge functional, in the star (pre-shift) weights.

    Node range is deliberately not constrained here: quasi-orthogonal
    quadratures may legitimately place a node on the interval boundary.
    Assembly rejects such rules when it maps nodes onto the triangle.
    """

    nodes: tuple[float, ...]
    star_weights: tuple[float, ...]
    edge_label: str

    def __post_init__(self):
        if len(self.nodes) != len(self.star_weights):
            raise ParameterError("node and weight counts differ")
        if any(not math.isfinite(t) for t in self.nodes):
            raise ParameterError("nodes must be finite")
        for a, b in zip(self.nodes, self.nodes[1:]):
            if not a < b:
                raise ParameterError("nodes must be strictly increasing")

    def node_array(self) -> np.ndarray:
        return np.array(self.nodes)

    def weight_array(self) -> np.ndarray:
        return np.array(self.star_weights)

    def negative_weight_indices(self) -> tuple[int, ...]:
        return tuple(k for k, w in enumerate(self.star_weights) if w <= 0.0)


def recurrence_coefficients(functional: MomentFunctional, count: int):
    """First `count` three-term recurrence coefficient pairs from raw moments.

    Returns (alpha, beta) with beta[0] = mu_0.  Raises when a moment-table
    pivot is not positive, naming the degree at which orthogonality breaks.
    """
    mu = functional.moment_array()
    if count < 1:
        raise ParameterError(f"count must be >= 1, got {count}")
    if len(mu) < 2 * count:
        raise ParameterError(
            f"{count} recurrence pairs need {2 * count} moments, have {len(mu)}"
        )
    threshold = PIVOT_DELTA * float(np.max(np.abs(mu)))
    if not mu[0] > threshold:
        raise IndefiniteFunctionalError(
            "mu_0 is not positive", degree=0, edge=functional.edge_label
        )
    alpha = np.zeros(count)
    beta = np.zeros(count)
    alpha[0] = mu[1] / mu[0]
    beta[0] = mu[0]
    sigma_prev = np.zeros(2 * count)
    sigma = mu[: 2 * count].astype(float).copy()
    for k in range(2, count + 1):
        sigma_next = np.zeros(2 * count)
        for m in range(k - 1, 2 * count - k + 1):
            sigma_next[m] = (
                sigma[m + 1]
                - alpha[k - 2] * sigma[m]
                - beta[k - 2] * sigma_prev[m]
            )
        if not sigma_next[k - 1] > threshold:
            raise IndefiniteFunctionalError(
                f"orthogonal polynomial of degree {k - 1} has nonpositive norm",
                degree=k - 1,
                edge=functional.edge_label,
            )
        alpha[k - 1] = sigma_next[k] / sigma_next[k - 1] - sigma[k - 1] / sigma[k - 2]
        beta[k - 1] = sigma_next[k - 1] / sigma[k - 2]
        sigma_prev, sigma = sigma, sigma_next
    return alpha, beta


def orthogonal_polynomials(functional: MomentFunctional, up_to: int) -> list[MonicPoly]:
    """Monic orthogonal polynomials p_0 .. p_up_to for the functional."""
    if up_to < 0:
        raise ParameterError(f"up_to must be >= 0, got {up_to}")
    polys = [MonicPoly(coeffs=())]
    if up_to == 0:
        return polys
    alpha, beta = recurrence_coefficients(functional, up_to)
    prev = np.array([1.0])                     # p_0, full ascending coeffs
    cur = np.array([-alpha[0], 1.0])           # p_1
    polys.append(MonicPoly(coeffs=tuple(cur[:-1])))
    for k in range(1, up_to):
        nxt = np.zeros(k + 2)
        nxt[1:] += cur
        nxt[: k + 1] -= alpha[k] * cur
        nxt[: k] -= beta[k] * prev
        polys.append(MonicPoly(coeffs=tuple(nxt[:-1])))
        prev, cur = cur, nxt
    return polys


def real_roots(poly: MonicPoly, recurrence=None) -> np.ndarray:
    """All roots of the polynomial, required real and simple.

    When the recurrence coefficients of the generating functional are
    supplied, roots are eigenvalues of the symmetric tridiagonal matrix
    (numerically the stable route); otherwise companion-matrix eigenvalues.
    Every root is polished by Newton and checked for residual, realness,
    and separation.
    """
    d = poly.degree
    if d < 1:
        raise ParameterError("root extraction needs degree >= 1")
    if recurrence is not None:
        alpha, beta = recurrence
        if len(alpha) < d or len(beta) < d:
            raise ParameterError(f"recurrence too short for degree {d}")
        if d == 1:
            roots = np.array([alpha[0]])
        else:
            roots = eigvalsh_tridiagonal(alpha[:d], np.sqrt(beta[1:d]))
    else:
        companion = np.zeros((d, d))
        if d > 1:
            companion[1:, :-1] = np.eye(d - 1)
        companion[:, -1] = -np.array(poly.coeffs)
        eigs = np.linalg.eigvals(companion)
        if np.max(np.abs(eigs.imag)) > ROOT_IMAG_TOL * max(1.0, np.max(np.abs(eigs))):
            raise NonGaussianSpectrumError(
                f"complex roots detected: {np.sort_complex(eigs)}"
            )
        roots = np.sort(eigs.real)

    target = EPS_ZERO * poly.coefficient_scale()
    polished = []
    for r in roots:
        t = float(r)
        for _ in range(NEWTON_POLISH_MAX):
            value = poly(t)
            if abs(value) <= target:
                break
            slope = poly.derivative_at(t)
            if slope == 0.0:
                break
            t -= value / slope
        if abs(poly(t)) > target:
            raise NonGaussianSpectrumError(
                f"root {t} did not polish below {target:.3e} "
                "(multiple root or degenerate functional)"
            )
        polished.append(t)
    polished.sort()
    span = max(1.0, polished[-1] - polished[0]) if d > 1 else 1.0
    for a, b in zip(polished, polished[1:]):
        if b - a <= ROOT_SEPARATION * span:
            raise NonGaussianSpectrumError(
                f"multiple root detected near t = {a}"
            )
    return np.array(polished)


def _vandermonde_weights(nodes, mu):
    m = len(nodes)
    vander = np.vander(nodes, m, increasing=True).T
    return np.linalg.solve(vander, mu[:m])


def _verify_moments(nodes, weights, mu, through, label):
    scale = max(float(np.max(np.abs(mu))), 1e-300)
    for k in range(through + 1):
        got = float(np.sum(weights * nodes**k))
        if abs(got - mu[k]) > QUAD_MOMENT_TOL * scale:
            raise VerificationError(
                f"{label}: reconstructed quadrature fails moment {k}: "
                f"{got} vs {mu[k]}"
            )


def gaussian_quadrature(functional: MomentFunctional, node_count: int) -> EdgeQuadrature:
    """Gaussian quadrature with node_count nodes for a positive-definite
    functional; exact through degree 2*node_count - 1 (re-verified)."""
    if node_count < 1:
        raise ParameterError(f"node_count must be >= 1, got {node_count}")
    pd = is_positive_definite(functional, node_count)
    if not pd.ok:
        raise IndefiniteFunctionalError(
            f"functional is not positive definite at degree {node_count} "
            f"(pivot {pd.failed_pivot})",
            degree=pd.failed_pivot,
            edge=functional.edge_label,
        )
    alpha, beta = recurrence_coefficients(functional, node_count)
    poly = orthogonal_polynomials(functional, node_count)[node_count]
    nodes = real_roots(poly, recurrence=(alpha, beta))
    if np.any(nodes <= TAU) or np.any(nodes >= 1.0 - TAU):
        raise NodePlacementError(
            f"{functional.edge_label}: Gaussian node outside (0, 1): {nodes}"
        )
    mu = functional.moment_array()
    weights = _vandermonde_weights(nodes, mu)
    if np.any(weights <= 0.0):
        raise PositivityError(
            f"{functional.edge_label}: nonpositive Gaussian weight in {weights}"
        )
    through = min(2 * node_count - 1, functional.max_exact_degree)
    _verify_moments(nodes, weights, mu, through, functional.edge_label)
    return EdgeQuadrature(
        nodes=tuple(float(t) for t in nodes),
        star_weights=tuple(float(w) for w in weights),
        edge_label=functional.edge_label,
    )


def quasi_orthogonal_even(
    functional: MomentFunctional,
    node_count: int,
    fixed_node: float = 0.5,
) -> EdgeQuadrature:
    """Quadrature exact one degree below Gaussian, with a root pinned at
    fixed_node by mixing the two top orthogonal polynomials.

    Weights may come out negative; inspect negative_weight_indices() on the
    result.  Nodes may touch the interval boundary.
    """
    n = node_count
    if n < 1:
        raise ParameterError(f"node_count must be >= 1, got {n}")
    if functional.max_exact_degree < 2 * n - 1:
        raise ParameterError(
            f"quasi-orthogonal quadrature with {n} nodes needs moments through "
            f"{2 * n - 1}, have {functional.max_exact_degree}"
        )
    polys = orthogonal_polynomials(functional, n)
    p_top, p_sub = polys[n], polys[n - 1]
    denom = p_sub(fixed_node)
    if abs(denom) <= EPS_ZERO * p_sub.coefficient_scale():
        raise ParameterDegeneracyError(
            f"p_{n - 1}({fixed_node}) = {denom}: mixing parameter undefined"
        )
    mix = -p_top(fixed_node) / denom
    full = p_top.full_coeffs()
    full[:n] += mix * p_sub.full_coeffs()
    quasi = MonicPoly(coeffs=tuple(full[:-1]))
    nodes = real_roots(quasi)
    mu = functional.moment_array()
    weights = _vandermonde_weights(nodes, mu)
    _verify_moments(nodes, weights, mu, 2 * n - 2, functional.edge_label)
    return EdgeQuadrature(
        nodes=tuple(float(t) for t in nodes),
        star_weights=tuple(float(w) for w in weights),
        edge_label=functional.edge_label,
    )
