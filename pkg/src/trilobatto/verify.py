"""Independent rule verification against closed-form moments.

This module is the trusted auditor: it rebuilds node values from scratch
(sharing nothing with the construction side except the closed-form moment
engine) and checks exactness, node classification, weight positivity, and
consistency with the node-count lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assembly import TriangleRule
from .bounds import FeasibilityReport, NodeBudget, check_feasibility
from .errors import ClassificationError
from .interior import TAU
from .moments import MonomialIndex, monomials_up_to, triangle_moment

DEFAULT_TOLERANCE = 1e-10
RELATIVE_FLOOR = 1e-30  # below this, absolute error is used


@dataclass(frozen=True)
class ExactnessReport:
    through_degree: int
    tolerance: float
    max_rel_error: float
    worst_monomial: tuple[int, int]
    failures: tuple[tuple[tuple[int, int], float], ...]

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class Census:
    n0: int
    n1: int
    n2: int
    n3: int
    corners: int

    @property
    def total(self) -> int:
        return self.n0 + self.n1 + self.n2 + self.n3 + self.corners

    def as_tuple(self):
        return (self.n0, self.n1, self.n2, self.n3, self.corners)


@dataclass(frozen=True)
class SummandReport:
    name: str
    checked: int
    max_rel_error: float

    def passed(self, tolerance: float) -> bool:
        return self.max_rel_error <= tolerance


@dataclass(frozen=True)
class DecompositionReport:
    """Exactness per summand of the bubble/edge/linear splitting of the
    polynomial space, mirroring the structural correctness argument."""

    tolerance: float
    summands: tuple[SummandReport, ...]

    @property
    def passed(self) -> bool:
        return all(s.passed(self.tolerance) for s in self.summands)


@dataclass(frozen=True)
class AuditReport:
    claimed_precision: int
    census: Census
    exactness: ExactnessReport
    classification_offenders: tuple[str, ...]
    weights_positive: bool
    negative_weight_count: int
    feasibility: FeasibilityReport | None
    gauss_lobatto: bool

    @property
    def conforming(self) -> bool:
        return self.weights_positive and not self.classification_offenders

    @property
    def ok(self) -> bool:
        return self.conforming and self.exactness.passed

    def summary_lines(self) -> list[str]:
        c = self.census
        lines = [
            f"precision claimed: {self.claimed_precision}",
            f"census: interior={c.n0} edges=({c.n1},{c.n2},{c.n3}) "
            f"corners={c.corners} total={c.total}",
            f"exactness: max relative error {self.exactness.max_rel_error:.3e} "
            f"at degree <= {self.exactness.through_degree} "
            f"[{'pass' if self.exactness.passed else 'FAIL'} "
            f"at {self.exactness.tolerance:.1e}]",
            "weights: all positive"
            if self.weights_positive
            else f"weights: {self.negative_weight_count} nonpositive",
        ]
        for offender in self.classification_offenders:
            lines.append(f"classification: {offender}")
        if self.feasibility is None:
            lines.append("bounds: not applicable (rule has nonpositive weights)")
        elif self.feasibility.feasible:
            lines.append("bounds: consistent with node-count lower bounds")
        else:
            for check in self.feasibility.violations:
                lines.append(f"bounds: VIOLATED {check.describe()}")
        if self.gauss_lobatto:
            lines.append("tag: gauss-lobatto (minimal interior count attained)")
        lines.append(f"verdict: {'conforming' if self.conforming else 'NON-CONFORMING'}")
        return lines


def _rule_points(rule: TriangleRule):
    """Explicit 2-d coordinates and weights of every node, corners last."""
    xs, ys, ws = [], [], []
    for p, w in rule.interior:
        xs.append(p.x)
        ys.append(p.y)
        ws.append(w)
    for t, w in rule.edge_y0:
        xs.append(t)
        ys.append(0.0)
        ws.append(w)
    for t, w in rule.edge_x0:
        xs.append(0.0)
        ys.append(t)
        ws.append(w)
    for t, w in rule.edge_diag:
        xs.append(t)
        ys.append(1.0 - t)
        ws.append(w)
    for (cx, cy), w in zip(((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), rule.corner_weights):
        xs.append(cx)
        ys.append(cy)
        ws.append(w)
    return np.array(xs), np.array(ys), np.array(ws)


def verify_exactness(
    rule: TriangleRule,
    through_degree: int,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ExactnessReport:
    """Compare the rule against closed-form moments for every monomial of
    total degree up to through_degree."""
    xs, ys, ws = _rule_points(rule)
    worst = 0.0
    worst_mon = (0, 0)
    failures = []
    for mon in monomials_up_to(through_degree):
        exact = triangle_moment(mon, rule.weight)
        got = float(np.sum(ws * xs**mon.i * ys**mon.j))
        denom = abs(exact)
        err = abs(got - exact) / denom if denom > RELATIVE_FLOOR else abs(got - exact)
        if err > worst:
            worst = err
            worst_mon = (mon.i, mon.j)
        if err > tolerance:
            failures.append(((mon.i, mon.j), err))
    return ExactnessReport(
        through_degree=through_degree,
        tolerance=tolerance,
        max_rel_error=worst,
        worst_monomial=worst_mon,
        failures=tuple(failures),
    )


def _classify(rule: TriangleRule):
    offenders = []

    def check_distinct(label, coords):
        for a in range(len(coords)):
            for b in range(a + 1, len(coords)):
                dist = np.hypot(
                    coords[a][0] - coords[b][0], coords[a][1] - coords[b][1]
                )
                if dist <= TAU:
                    offenders.append(
                        f"{label}: nodes {a} and {b} coincide within {TAU}"
                    )

    interior_pts = [(p.x, p.y) for p, _ in rule.interior]
    for k, (x, y) in enumerate(interior_pts):
        z = 1.0 - x - y
        if not (x > TAU and y > TAU and z > TAU):
            offenders.append(
                f"interior node {k} at ({x}, {y}) is not strictly inside "
                f"(barycentric ({x:.3g}, {y:.3g}, {z:.3g}))"
            )
    check_distinct("interior", interior_pts)

    for label, entries in (
        ("edge_y0", rule.edge_y0),
        ("edge_x0", rule.edge_x0),
        ("edge_diag", rule.edge_diag),
    ):
        for k, (t, _) in enumerate(entries):
            if not (TAU < t < 1.0 - TAU):
                offenders.append(
                    f"{label} node {k} parameter {t} outside ({TAU}, {1 - TAU})"
                )
        check_distinct(label, [(t, 0.0) for t, _ in entries])

    census = Census(
        n0=len(rule.interior),
        n1=len(rule.edge_y0),
        n2=len(rule.edge_x0),
        n3=len(rule.edge_diag),
        corners=3,
    )
    return census, tuple(offenders)


def classify_nodes(rule: TriangleRule) -> Census:
    """Count nodes per class, validating each against its declared class."""
    census, offenders = _classify(rule)
    if offenders:
        raise ClassificationError(
            f"{len(offenders)} node(s) disagree with their declared class",
            offenders=offenders,
        )
    return census


def audit(
    rule: TriangleRule,
    tolerance: float = DEFAULT_TOLERANCE,
    through_degree: int | None = None,
) -> AuditReport:
    """One-stop report: exactness, census, positivity, bound consistency."""
    census, offenders = _classify(rule)
    degree = rule.precision if through_degree is None else through_degree
    exactness = verify_exactness(rule, degree, tolerance)
    weights_positive = rule.conforming

    feasibility = None
    if weights_positive:
        feasibility = check_feasibility(
            NodeBudget(
                precision=rule.precision,
                n0=census.n0,
                n1=census.n1,
                n2=census.n2,
                n3=census.n3,
                corners=3,
            )
        )

    s = rule.precision
    gauss_lobatto = False
    if s % 2 == 1 and s >= 3:
        n = (s + 1) // 2
        gauss_lobatto = (
            weights_positive
            and not offenders
            and census.n0 == n * (n - 1) // 2
            and census.n1 == census.n2 == census.n3 == n - 1
        )

    return AuditReport(
        claimed_precision=rule.precision,
        census=census,
        exactness=exactness,
        classification_offenders=offenders,
        weights_positive=weights_positive,
        negative_weight_count=rule.negative_weight_count,
        feasibility=feasibility,
        gauss_lobatto=gauss_lobatto,
    )


# --- structural (direct-sum) verification ------------------------------------

_BUBBLE = {(1, 1): 1.0, (2, 1): -1.0, (1, 2): -1.0}   # x y (1-x-y)
_XZ = {(1, 0): 1.0, (2, 0): -1.0, (1, 1): -1.0}        # x (1-x-y)
_YZ = {(0, 1): 1.0, (1, 1): -1.0, (0, 2): -1.0}        # y (1-x-y)
_XY = {(1, 1): 1.0}


def _shift(poly, di, dj):
    return {(i + di, j + dj): c for (i, j), c in poly.items()}


def _eval_poly(poly, xs, ys):
    total = np.zeros_like(xs)
    for (i, j), c in poly.items():
        total += c * xs**i * ys**j
    return total


def _exact_integral(poly, weight):
    return sum(
        c * triangle_moment(MonomialIndex(i, j), weight) for (i, j), c in poly.items()
    )


def decomposition_report(
    rule: TriangleRule,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DecompositionReport:
    """Verify exactness summand by summand for the splitting of degree-s
    polynomials into bubble * full space, one edge-vanishing block per
    side, and the linear closure.  Together these span the whole space, so
    passing here re-derives full exactness structurally."""
    s = rule.precision
    if s < 3:
        raise ValueError("structural verification needs precision >= 3")
    xs, ys, ws = _rule_points(rule)

    def run(name, polys):
        worst = 0.0
        for poly in polys:
            exact = _exact_integral(poly, rule.weight)
            got = float(np.sum(ws * _eval_poly(poly, xs, ys)))
            denom = abs(exact)
            err = abs(got - exact) / denom if denom > RELATIVE_FLOOR else abs(got - exact)
            worst = max(worst, err)
        return SummandReport(name=name, checked=len(polys), max_rel_error=worst)

    bubble_block = [
        _shift(_BUBBLE, m.i, m.j) for m in monomials_up_to(s - 3)
    ]
    xz_block = [_shift(_XZ, k, 0) for k in range(s - 1)]
    yz_block = [_shift(_YZ, 0, k) for k in range(s - 1)]
    xy_block = [_shift(_XY, k, 0) for k in range(s - 1)]
    linear_block = [{(0, 0): 1.0}, {(1, 0): 1.0}, {(0, 1): 1.0}]

    summands = (
        run("bubble * poly(s-3)", bubble_block),
        run("xz * poly_x(s-2)", xz_block),
        run("yz * poly_y(s-2)", yz_block),
        run("xy * poly_x(s-2)", xy_block),
        run("linear", linear_block),
    )
    return DecompositionReport(tolerance=tolerance, summands=summands)
