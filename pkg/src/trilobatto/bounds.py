"""Node-count lower bounds for triangle cubature rules with boundary nodes.

All bounds assume positive weights (the form the construction targets); they
are not claimed for signed rules.  For precision s below 3 only the total
bound applies, since the interior/edge bounds come from degree-(s-3) and
degree-(s-2) transformations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParameterError


@dataclass(frozen=True)
class NodeBudget:
    """Proposed node counts for a rule of stated precision.

    n0 is the interior count, n1/n2/n3 the per-edge counts, corners is 0 or 3.
    """

    precision: int
    n0: int
    n1: int
    n2: int
    n3: int
    corners: int = 3

    def __post_init__(self):
        if self.precision < 1:
            raise ParameterError(f"precision must be >= 1, got {self.precision}")
        if min(self.n0, self.n1, self.n2, self.n3) < 0:
            raise ParameterError("node counts must be >= 0")
        if self.corners not in (0, 3):
            raise ParameterError(f"corners must be 0 or 3, got {self.corners}")

    @property
    def total(self) -> int:
        return self.n0 + self.n1 + self.n2 + self.n3 + self.corners


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: int
    bound: int

    @property
    def satisfied(self) -> bool:
        return self.value >= self.bound

    def describe(self) -> str:
        rel = ">=" if self.satisfied else "<"
        return f"{self.name} = {self.value} {rel} {self.bound}"


@dataclass(frozen=True)
class FeasibilityReport:
    budget: NodeBudget
    checks: tuple[BoundCheck, ...]

    @property
    def feasible(self) -> bool:
        return all(c.satisfied for c in self.checks)

    @property
    def violations(self) -> tuple[BoundCheck, ...]:
        return tuple(c for c in self.checks if not c.satisfied)


def minimal_lower_bound(s: int) -> int:
    """Least node count any positive cubature rule of precision s can have."""
    if s < 1:
        raise ParameterError(f"precision must be >= 1, got {s}")
    n = (s + 2) // 2  # s = 2n-1 (odd) or s = 2n-2 (even)
    if s % 2 == 1:
        return n * (n + 1) // 2 + n // 2
    return n * (n + 1) // 2


def interior_lower_bound(s: int) -> int:
    """Least interior node count for a rule of precision s with boundary nodes."""
    _require_transformable(s)
    n = (s + 1) // 2  # s = 2n-1 or s = 2n
    if s % 2 == 1:
        return n * (n - 1) // 2
    return n * (n - 1) // 2 + (n - 1) // 2


def interior_plus_edge_lower_bound(s: int) -> int:
    """Least combined count of interior nodes plus nodes on any single edge."""
    _require_transformable(s)
    n = (s + 1) // 2
    if s % 2 == 1:
        return n * (n - 1) // 2 + (n - 1) // 2
    return n * (n + 1) // 2


def _require_transformable(s):
    if s < 3:
        raise ParameterError(f"bound requires precision >= 3, got {s}")


def check_feasibility(budget: NodeBudget) -> FeasibilityReport:
    """Check a node budget against every applicable lower bound.

    Infeasible budgets come back as a report listing each violated
    inequality; nothing is raised.
    """
    s = budget.precision
    checks = [BoundCheck("N", budget.total, minimal_lower_bound(s))]
    if s >= 3:
        checks.append(BoundCheck("N0", budget.n0, interior_lower_bound(s)))
        combined = interior_plus_edge_lower_bound(s)
        for i, ni in enumerate((budget.n1, budget.n2, budget.n3), start=1):
            checks.append(BoundCheck(f"N0+N{i}", budget.n0 + ni, combined))
    return FeasibilityReport(budget=budget, checks=tuple(checks))


def strict_gauss_lobatto_budget(n: int) -> NodeBudget:
    """The classical candidate layout: (n-1)(n-2)/2 interior nodes, n-1 per
    edge, corners, claiming precision 2n-1.  Proven infeasible for n >= 2."""
    if n < 2:
        raise ParameterError(f"strict layout needs n >= 2, got {n}")
    return NodeBudget(
        precision=2 * n - 1,
        n0=(n - 1) * (n - 2) // 2,
        n1=n - 1,
        n2=n - 1,
        n3=n - 1,
        corners=3,
    )


def gauss_lobatto_budget(n: int) -> NodeBudget:
    """The attainable target layout: n(n-1)/2 interior nodes, n-1 per edge."""
    if n < 2:
        raise ParameterError(f"layout needs n >= 2, got {n}")
    return NodeBudget(
        precision=2 * n - 1,
        n0=n * (n - 1) // 2,
        n1=n - 1,
        n2=n - 1,
        n3=n - 1,
        corners=3,
    )
