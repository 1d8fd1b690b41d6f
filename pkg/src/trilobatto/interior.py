"""All-interior cubature rules for the bumped weight (Step 1).

Three ways to obtain the interior rule that seeds the boundary bootstrap:
solving the nonlinear moment equations (multi-start damped Newton, with an
optional symmetry reduction to orbit parameters), taking common zeros of
user-supplied polynomials and fitting weights, or ingesting a rule file
(see rulefile).  The bubble-function weight shift that turns a rule for
W_{a+1,b+1,c+1} into interior weights for the base weight lives here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType

import numpy as np

from .errors import (
    ConstructionFailedError,
    DivisionHazardError,
    ParameterError,
    RejectedSolutionError,
    ZeroCountError,
)
from .kernels import power_table, power_table_grads
from .moments import (
    JacobiExponents,
    MonomialIndex,
    dim_poly_space,
    monomials_up_to,
    triangle_moment,
)

TAU = 1e-9                  # containment / classification tolerance
EPS_SOLVE = 1e-12           # residual acceptance, relative to the largest moment
EPS_ZERO = 1e-11            # |p(root)| acceptance after Newton polish
EPS_VERIFY = 1e-10          # relative exactness tolerance for finished rules
MIN_NODE_SEPARATION = 1e-7  # closer node pairs count as a collision
RESTART_BUDGET = 1000
MAX_NEWTON_ITERATIONS = 100


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    @property
    def z(self) -> float:
        """Third barycentric coordinate 1 - x - y."""
        return 1.0 - self.x - self.y

    def is_interior(self, tau: float = TAU) -> bool:
        return self.x > tau and self.y > tau and self.z > tau

    def distance(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class InteriorRule:
    """Cubature rule whose nodes are meant to lie strictly inside the triangle.

    Exactness (weighted node sums matching triangle_moment through `degree`)
    is a property of correctly constructed rules; it is enforced by the
    constructing operations, not by this container, so that deliberately
    broken rules can still be built for diagnosis.  The same goes for strict
    interiority, which the consuming operations check where they rely on it.
    """

    weight: JacobiExponents
    degree: int
    nodes: tuple[Point2, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise ParameterError(f"rule degree must be >= 0, got {self.degree}")
        if len(self.nodes) != len(self.weights):
            raise ParameterError("node and weight counts differ")
        if any(w <= 0.0 or not math.isfinite(w) for w in self.weights):
            raise ParameterError("interior-rule weights must be finite and > 0")
        for a in range(len(self.nodes)):
            for b in range(a + 1, len(self.nodes)):
                if self.nodes[a].distance(self.nodes[b]) <= MIN_NODE_SEPARATION:
                    raise ParameterError(
                        f"nodes {a} and {b} collide: {self.nodes[a]}, {self.nodes[b]}"
                    )

    def node_arrays(self):
        xs = np.array([p.x for p in self.nodes])
        ys = np.array([p.y for p in self.nodes])
        return xs, ys, np.array(self.weights)

    def all_interior(self, tau: float = TAU) -> bool:
        return all(p.is_interior(tau) for p in self.nodes)


@dataclass(frozen=True)
class BivariatePoly:
    """Bivariate polynomial as a map from monomial index to coefficient."""

    coefficients: "MappingProxyType[tuple[int, int], float]"
    degree: int

    def __init__(self, coefficients, degree=None):
        cleaned = {
            (int(i), int(j)): float(c)
            for (i, j), c in dict(coefficients).items()
            if c != 0.0
        }
        if not cleaned:
            raise ParameterError("polynomial has no nonzero coefficients")
        actual = max(i + j for i, j in cleaned)
        if degree is None:
            degree = actual
        elif degree != actual:
            raise ParameterError(
                f"declared degree {degree} but leading terms have degree {actual}"
            )
        object.__setattr__(self, "coefficients", MappingProxyType(cleaned))
        object.__setattr__(self, "degree", degree)

    def __call__(self, x: float, y: float) -> float:
        return sum(c * x**i * y**j for (i, j), c in self.coefficients.items())

    def gradient(self, x: float, y: float) -> tuple[float, float]:
        gx = sum(
            c * i * x ** (i - 1) * y**j
            for (i, j), c in self.coefficients.items()
            if i > 0
        )
        gy = sum(
            c * j * x**i * y ** (j - 1)
            for (i, j), c in self.coefficients.items()
            if j > 0
        )
        return gx, gy

    def coefficient_scale(self) -> float:
        return max(1.0, max(abs(c) for c in self.coefficients.values()))


def shift_weights_in(rule: InteriorRule) -> tuple[float, ...]:
    """Divide out the bubble factor x*y*(1-x-y) at every node.

    Maps the weights of the step-1 rule (for the bumped weight) to the
    interior weights of the assembled rule.
    """
    for k, p in enumerate(rule.nodes):
        if not p.is_interior(TAU):
            raise DivisionHazardError(
                f"node {k} at ({p.x}, {p.y}) is within {TAU} of the boundary"
            )
    return tuple(
        w / (p.x * p.y * p.z) for p, w in zip(rule.nodes, rule.weights)
    )


def interior_rule_max_error(rule: InteriorRule) -> float:
    """Largest relative moment mismatch over all monomials up to the degree.

    Recomputed from scratch (no shared solver code) so solver output is
    never trusted on its own say-so.
    """
    xs, ys, ws = rule.node_arrays()
    worst = 0.0
    for m in monomials_up_to(rule.degree):
        exact = triangle_moment(m, rule.weight)
        got = float(np.sum(ws * xs**m.i * ys**m.j)) if len(ws) else 0.0
        worst = max(worst, abs(got - exact) / exact)
    return worst


def weights_from_nodes(nodes, degree: int, weight: JacobiExponents) -> InteriorRule:
    """Fit positive weights to given nodes by least-squares moment matching."""
    pts = [p if isinstance(p, Point2) else Point2(*p) for p in nodes]
    if not pts:
        raise ParameterError("need at least one node")
    mons = monomials_up_to(degree)
    ii = np.array([m.i for m in mons], dtype=np.int64)
    jj = np.array([m.j for m in mons], dtype=np.int64)
    xs = np.array([p.x for p in pts])
    ys = np.array([p.y for p in pts])
    mvec = np.array([triangle_moment(m, weight) for m in mons])
    p_table = power_table(xs, ys, ii, jj)
    ws, *_ = np.linalg.lstsq(p_table, mvec, rcond=None)
    residual = float(np.max(np.abs(p_table @ ws - mvec)))
    if residual > EPS_SOLVE * mvec.max():
        raise ConstructionFailedError(
            f"nodes do not support a degree-{degree} rule "
            f"(moment residual {residual:.3e})",
            best_residual=residual,
        )
    if np.any(ws <= 0.0):
        raise RejectedSolutionError(
            "least-squares weights are not all positive",
            nodes=tuple((p.x, p.y) for p in pts),
            weights=tuple(ws),
        )
    return InteriorRule(
        weight=weight,
        degree=degree,
        nodes=tuple(pts),
        weights=tuple(float(w) for w in ws),
    )


def common_zeros(
    polys,
    expected_count: int,
    search_box=(-0.75, 1.75),
    grid: int = 24,
) -> list[Point2]:
    """All common zeros of the supplied polynomials near the triangle.

    Multi-start Newton on the first two polynomials over a deterministic
    grid of starts, deduplicated, then filtered against the remaining
    polynomials.  Raises unless exactly `expected_count` zeros survive.
    """
    polys = list(polys)
    if len(polys) < 2:
        raise ParameterError("need at least two polynomials")
    if any(p.degree < 1 for p in polys):
        raise ParameterError("every polynomial must have degree >= 1")

    p1, p2 = polys[0], polys[1]
    scale = max(p1.coefficient_scale(), p2.coefficient_scale())
    lo, hi = search_box
    starts = np.linspace(lo, hi, grid)
    found: list[Point2] = []
    for x0 in starts:
        for y0 in starts:
            pt = _newton_2x2(p1, p2, float(x0), float(y0), scale)
            if pt is None:
                continue
            if all(pt.distance(q) > MIN_NODE_SEPARATION for q in found):
                found.append(pt)

    zeros = [
        pt
        for pt in found
        if all(
            abs(p(pt.x, pt.y)) <= EPS_ZERO * p.coefficient_scale()
            for p in polys[2:]
        )
    ]
    zeros.sort(key=lambda p: (p.y, p.x))
    if len(zeros) != expected_count:
        raise ZeroCountError(
            f"expected {expected_count} common zeros, found {len(zeros)}",
            zeros=zeros,
        )
    return zeros


def _newton_2x2(p1, p2, x, y, scale, iterations=60):
    for _ in range(iterations):
        f1 = p1(x, y)
        f2 = p2(x, y)
        if abs(f1) <= EPS_ZERO * scale and abs(f2) <= EPS_ZERO * scale:
            # polish: a couple of extra full steps tighten to machine level
            for _ in range(3):
                f1, f2 = p1(x, y), p2(x, y)
                a11, a12 = p1.gradient(x, y)
                a21, a22 = p2.gradient(x, y)
                det = a11 * a22 - a12 * a21
                if det == 0.0:
                    break
                x -= (f1 * a22 - f2 * a12) / det
                y -= (a11 * f2 - a21 * f1) / det
            return Point2(x, y)
        a11, a12 = p1.gradient(x, y)
        a21, a22 = p2.gradient(x, y)
        det = a11 * a22 - a12 * a21
        if abs(det) < 1e-300:
            return None
        x -= (f1 * a22 - f2 * a12) / det
        y -= (a11 * f2 - a21 * f1) / det
        if abs(x) > 1e3 or abs(y) > 1e3:
            return None
    return None


# --- moment-equation solver -------------------------------------------------


def solve_moment_equations(
    weight: JacobiExponents,
    degree: int,
    node_count: int,
    seed: int = 0,
    symmetric: bool = False,
    orbits: tuple[int, int, int] | None = None,
    restart_budget: int = RESTART_BUDGET,
    max_iterations: int = MAX_NEWTON_ITERATIONS,
) -> InteriorRule:
    """Find an interior rule of the given degree by multi-start Newton.

    Starts are drawn from a deterministic seed sequence seed, seed+1, ...;
    the first converged candidate that is interior, positive, and
    collision-free wins, which makes the result reproducible.  In symmetric
    mode the unknowns are orbit parameters (`orbits` = counts of center,
    three-point, six-point orbits; enumerated from node_count when omitted)
    and the equations are restricted to a symmetric-polynomial basis.
    """
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    if node_count < 1:
        raise ParameterError(f"node_count must be >= 1, got {node_count}")

    mons = monomials_up_to(degree)
    ii = np.array([m.i for m in mons], dtype=np.int64)
    jj = np.array([m.j for m in mons], dtype=np.int64)
    mvec = np.array([triangle_moment(m, weight) for m in mons])
    scale = mvec.max()

    if symmetric:
        if not weight.is_symmetric():
            raise ParameterError(
                "symmetric mode requires a symmetric weight (alpha=beta=gamma)"
            )
        if orbits is not None:
            c, t, g = orbits
            if c not in (0, 1) or t < 0 or g < 0 or c + 3 * t + 6 * g != node_count:
                raise ParameterError(f"orbit counts {orbits} do not sum to {node_count}")
            configs = [(c, t, g)]
        else:
            configs = _symmetric_orbit_configs(node_count)
            if not configs:
                raise ParameterError(
                    f"{node_count} nodes admit no symmetric orbit decomposition"
                )
        basis = _symmetric_basis_matrix(degree, mons)
        target = basis @ mvec
        eq_scale = float(np.max(np.abs(target)))
    else:
        if 3 * node_count < dim_poly_space(degree):
            raise ParameterError(
                f"{node_count} nodes give {3 * node_count} unknowns, fewer than the "
                f"{dim_poly_space(degree)} moment equations of degree {degree}"
            )
        configs = [None]
        basis = None
        eq_scale = float(scale)

    first_rejected = None
    best_residual = math.inf

    for restart in range(restart_budget):
        rng = np.random.default_rng(seed + restart)
        config = configs[restart % len(configs)]
        if symmetric:
            theta = _symmetric_start(config, rng, mvec[0], node_count)
            fun = lambda th: _symmetric_residual(th, config, ii, jj, basis, target)
            funjac = lambda th: _symmetric_system(th, config, ii, jj, basis, target)
        else:
            theta = _general_start(rng, node_count, mvec[0])
            fun = lambda th: _general_residual(th, node_count, ii, jj, mvec)
            funjac = lambda th: _general_system(th, node_count, ii, jj, mvec)

        theta, res = _damped_newton(theta, fun, funjac, eq_scale, max_iterations)
        best_residual = min(best_residual, res)
        if theta is None:
            continue

        if symmetric:
            xs, ys, ws = _expand_orbits(theta, config)
        else:
            xs = theta[:node_count]
            ys = theta[node_count : 2 * node_count]
            ws = theta[2 * node_count :]
        if not _candidate_valid(xs, ys, ws):
            if first_rejected is None:
                first_rejected = (tuple(zip(xs, ys)), tuple(ws))
            continue

        rule = InteriorRule(
            weight=weight,
            degree=degree,
            nodes=tuple(Point2(float(x), float(y)) for x, y in zip(xs, ys)),
            weights=tuple(float(w) for w in ws),
        )
        err = interior_rule_max_error(rule)
        if err > EPS_VERIFY:
            # converged in the reduced equations but fails full verification
            if first_rejected is None:
                first_rejected = (tuple(zip(xs, ys)), tuple(ws))
            continue
        return rule

    if first_rejected is not None:
        nodes, ws = first_rejected
        raise RejectedSolutionError(
            "every converged candidate had a node outside the open triangle, "
            "a nonpositive weight, or colliding nodes",
            nodes=nodes,
            weights=ws,
        )
    raise ConstructionFailedError(
        f"no converged solution in {restart_budget} restarts "
        f"(best residual {best_residual:.3e})",
        best_residual=best_residual,
    )


def _candidate_valid(xs, ys, ws):
    zs = 1.0 - xs - ys
    if not (np.all(xs > TAU) and np.all(ys > TAU) and np.all(zs > TAU)):
        return False
    if not np.all(ws > 0.0):
        return False
    m = len(xs)
    for a in range(m):
        for b in range(a + 1, m):
            if math.hypot(xs[a] - xs[b], ys[a] - ys[b]) <= MIN_NODE_SEPARATION:
                return False
    return True


def _damped_newton(theta, fun, funjac, eq_scale, max_iterations):
    tol = EPS_SOLVE * eq_scale
    best = math.inf
    residual = fun(theta)
    for _ in range(max_iterations):
        res_max = float(np.max(np.abs(residual)))
        best = min(best, res_max)
        if res_max <= tol:
            return theta, best
        residual, jac = funjac(theta)
        step, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
        norm0 = float(np.linalg.norm(residual))
        damping = 1.0
        for _ in range(30):
            trial = theta + damping * step
            trial_residual = fun(trial)
            if float(np.linalg.norm(trial_residual)) < (1.0 - 1e-4 * damping) * norm0:
                theta = trial
                residual = trial_residual
                break
            damping *= 0.5
        else:
            return None, best
    res_max = float(np.max(np.abs(residual)))
    best = min(best, res_max)
    if res_max <= tol:
        return theta, best
    return None, best


def _general_start(rng, m, total_mass):
    u = rng.random(m)
    v = rng.random(m)
    flip = u + v > 1.0
    u[flip] = 1.0 - u[flip]
    v[flip] = 1.0 - v[flip]
    return np.concatenate([u, v, np.full(m, total_mass / m)])


def _general_residual(theta, m, ii, jj, mvec):
    p = power_table(theta[:m], theta[m : 2 * m], ii, jj)
    return p @ theta[2 * m :] - mvec


def _general_system(theta, m, ii, jj, mvec):
    ws = theta[2 * m :]
    p, px, py = power_table_grads(theta[:m], theta[m : 2 * m], ii, jj)
    residual = p @ ws - mvec
    jac = np.hstack([px * ws, py * ws, p])
    return residual, jac


# --- symmetric mode ----------------------------------------------------------

_CENTER = 1.0 / 3.0

# derivative of each orbit point with respect to the orbit parameters
_MEDIAN_DERIVS = ((1.0, 1.0), (1.0, -2.0), (-2.0, 1.0))
_GENERIC_DU = ((1.0, 0.0), (0.0, -1.0), (-1.0, 1.0), (0.0, 1.0), (-1.0, 0.0), (1.0, -1.0))
_GENERIC_DV = ((0.0, 1.0), (1.0, -1.0), (-1.0, 0.0), (1.0, 0.0), (-1.0, 1.0), (0.0, -1.0))


def _symmetric_orbit_configs(node_count):
    configs = []
    for g in range(node_count // 6 + 1):
        rem = node_count - 6 * g
        for t in range(rem // 3, -1, -1):
            c = rem - 3 * t
            if c in (0, 1):
                configs.append((c, t, g))
    return configs


def _symmetric_basis(degree):
    """Monomial expansions of the invariants e2^a e3^b with 2a+3b <= degree."""
    e2 = {(1, 0): 1.0, (0, 1): 1.0, (2, 0): -1.0, (1, 1): -1.0, (0, 2): -1.0}
    e3 = {(1, 1): 1.0, (2, 1): -1.0, (1, 2): -1.0}
    out = []
    for b in range(degree // 3 + 1):
        for a in range((degree - 3 * b) // 2 + 1):
            term = {(0, 0): 1.0}
            for _ in range(a):
                term = _poly_mul(term, e2)
            for _ in range(b):
                term = _poly_mul(term, e3)
            out.append(term)
    return out


def _poly_mul(p, q):
    out = {}
    for (i1, j1), c1 in p.items():
        for (i2, j2), c2 in q.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, 0.0) + c1 * c2
    return out


def _symmetric_basis_matrix(degree, mons):
    index = {(m.i, m.j): q for q, m in enumerate(mons)}
    elements = _symmetric_basis(degree)
    basis = np.zeros((len(elements), len(mons)))
    for row, term in enumerate(elements):
        for key, coeff in term.items():
            basis[row, index[key]] = coeff
    return basis


def _symmetric_start(config, rng, total_mass, node_count):
    c, t, g = config
    per_node = total_mass / node_count
    params = []
    if c:
        params.append(per_node)
    for _ in range(t):
        params.extend([0.02 + 0.46 * rng.random(), per_node])
    for _ in range(g):
        u = rng.random()
        v = rng.random()
        if u + v > 1.0:
            u, v = 1.0 - u, 1.0 - v
        params.extend([u, v, per_node])
    return np.array(params)


def _orbit_layout(config):
    """Split the parameter vector into orbits and expand to node lists."""
    c, t, g = config
    slots = []
    pos = 0
    if c:
        slots.append(("center", pos, 1))
        pos += 1
    for _ in range(t):
        slots.append(("median", pos, 2))
        pos += 2
    for _ in range(g):
        slots.append(("generic", pos, 3))
        pos += 3
    return slots


def _expand_orbits(theta, config):
    xs, ys, ws = [], [], []
    for kind, pos, _span in _orbit_layout(config):
        if kind == "center":
            a = theta[pos]
            xs.append(_CENTER)
            ys.append(_CENTER)
            ws.append(a)
        elif kind == "median":
            u, a = theta[pos], theta[pos + 1]
            w = 1.0 - 2.0 * u
            for px, py in ((u, u), (u, w), (w, u)):
                xs.append(px)
                ys.append(py)
                ws.append(a)
        else:
            u, v, a = theta[pos], theta[pos + 1], theta[pos + 2]
            w = 1.0 - u - v
            for px, py in ((u, v), (v, w), (w, u), (v, u), (w, v), (u, w)):
                xs.append(px)
                ys.append(py)
                ws.append(a)
    return np.array(xs), np.array(ys), np.array(ws)


def _symmetric_residual(theta, config, ii, jj, basis, target):
    xs, ys, ws = _expand_orbits(theta, config)
    p = power_table(xs, ys, ii, jj)
    return basis @ (p @ ws) - target


def _symmetric_system(theta, config, ii, jj, basis, target):
    xs, ys, ws = _expand_orbits(theta, config)
    p, px, py = power_table_grads(xs, ys, ii, jj)
    residual = basis @ (p @ ws) - target

    columns = []
    col = 0
    for kind, pos, _span in _orbit_layout(config):
        if kind == "center":
            columns.append(p[:, col])
            col += 1
        elif kind == "median":
            a = theta[pos + 1]
            du = np.zeros(p.shape[0])
            dw = np.zeros(p.shape[0])
            for offset, (dx, dy) in enumerate(_MEDIAN_DERIVS):
                du += a * (px[:, col + offset] * dx + py[:, col + offset] * dy)
                dw += p[:, col + offset]
            columns.extend([du, dw])
            col += 3
        else:
            a = theta[pos + 2]
            du = np.zeros(p.shape[0])
            dv = np.zeros(p.shape[0])
            dw = np.zeros(p.shape[0])
            for offset in range(6):
                dxu, dyu = _GENERIC_DU[offset]
                dxv, dyv = _GENERIC_DV[offset]
                du += a * (px[:, col + offset] * dxu + py[:, col + offset] * dyu)
                dv += a * (px[:, col + offset] * dxv + py[:, col + offset] * dyv)
                dw += p[:, col + offset]
            columns.extend([du, dv, dw])
            col += 6
    jac = basis @ np.column_stack(columns)
    return residual, jac
