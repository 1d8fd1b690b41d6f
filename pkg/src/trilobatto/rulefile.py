"""Rule file schema: JSON (round-trip exact) and CSV export.

Every float is serialized as a decimal string with 17 significant digits,
which round-trips binary64 exactly; writing a rule, reading it back, and
writing again produces byte-identical files.  The layout mirrors the rule
form directly: one list per node class plus the three corner weights.
"""

from __future__ import annotations

import json

from .assembly import TriangleRule
from .errors import TrilobattoError
from .interior import EPS_SOLVE, EPS_VERIFY, EPS_ZERO, InteriorRule, Point2
from .moments import JacobiExponents


class RuleFormatError(TrilobattoError):
    """Rule file does not match the schema."""


_TOLERANCES = {"solve": EPS_SOLVE, "zero": EPS_ZERO, "verify": EPS_VERIFY}


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _parse_float(value, context):
    try:
        return float(value)
    except (TypeError, ValueError):
        raise RuleFormatError(f"{context}: expected a number string, got {value!r}")


def rule_to_dict(rule: TriangleRule) -> dict:
    meta = {
        "conforming": rule.conforming,
        "tags": list(rule.tags),
    }
    if rule.seed is not None:
        meta["seed"] = rule.seed
    meta["tolerances"] = {k: _fmt(v) for k, v in _TOLERANCES.items()}
    return {
        "weight": {
            "alpha": _fmt(rule.weight.alpha),
            "beta": _fmt(rule.weight.beta),
            "gamma": _fmt(rule.weight.gamma),
        },
        "precision": rule.precision,
        "interior": [
            {"x": _fmt(p.x), "y": _fmt(p.y), "w": _fmt(w)} for p, w in rule.interior
        ],
        "edge_y0": [{"t": _fmt(t), "w": _fmt(w)} for t, w in rule.edge_y0],
        "edge_x0": [{"t": _fmt(t), "w": _fmt(w)} for t, w in rule.edge_x0],
        "edge_diag": [{"t": _fmt(t), "w": _fmt(w)} for t, w in rule.edge_diag],
        "corners": {
            "mu0": _fmt(rule.corner_weights[0]),
            "mu1": _fmt(rule.corner_weights[1]),
            "mu2": _fmt(rule.corner_weights[2]),
        },
        "meta": meta,
    }


def dumps_rule(rule: TriangleRule) -> str:
    return json.dumps(rule_to_dict(rule), indent=2) + "\n"


def write_rule(rule: TriangleRule, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_rule(rule))


def rule_from_dict(data: dict) -> TriangleRule:
    if not isinstance(data, dict):
        raise RuleFormatError("rule file must contain a JSON object")
    for key in ("weight", "precision", "interior", "edge_y0", "edge_x0",
                "edge_diag", "corners"):
        if key not in data:
            raise RuleFormatError(f"missing key {key!r}")
    wd = data["weight"]
    weight = JacobiExponents(
        _parse_float(wd.get("alpha"), "weight.alpha"),
        _parse_float(wd.get("beta"), "weight.beta"),
        _parse_float(wd.get("gamma"), "weight.gamma"),
    )
    precision = data["precision"]
    if not isinstance(precision, int) or precision < 1:
        raise RuleFormatError(f"precision must be a positive integer, got {precision!r}")

    def edge(key):
        entries = data[key]
        if not isinstance(entries, list):
            raise RuleFormatError(f"{key} must be a list")
        return tuple(
            (_parse_float(e.get("t"), f"{key}.t"), _parse_float(e.get("w"), f"{key}.w"))
            for e in entries
        )

    interior = tuple(
        (
            Point2(
                _parse_float(e.get("x"), "interior.x"),
                _parse_float(e.get("y"), "interior.y"),
            ),
            _parse_float(e.get("w"), "interior.w"),
        )
        for e in data["interior"]
    )
    corners = data["corners"]
    corner_weights = tuple(
        _parse_float(corners.get(k), f"corners.{k}") for k in ("mu0", "mu1", "mu2")
    )
    meta = data.get("meta", {})
    tags = tuple(meta.get("tags", ()))
    seed = meta.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise RuleFormatError(f"meta.seed must be an integer, got {seed!r}")
    return TriangleRule(
        weight=weight,
        precision=precision,
        interior=interior,
        edge_y0=edge("edge_y0"),
        edge_x0=edge("edge_x0"),
        edge_diag=edge("edge_diag"),
        corner_weights=corner_weights,
        tags=tags,
        seed=seed,
    )


def read_rule(path) -> TriangleRule:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise RuleFormatError(f"invalid JSON in {path}: {exc}") from exc
    return rule_from_dict(data)


# --- interior (step-1) rule files --------------------------------------------


def interior_rule_to_dict(rule: InteriorRule) -> dict:
    return {
        "weight": {
            "alpha": _fmt(rule.weight.alpha),
            "beta": _fmt(rule.weight.beta),
            "gamma": _fmt(rule.weight.gamma),
        },
        "degree": rule.degree,
        "nodes": [
            {"x": _fmt(p.x), "y": _fmt(p.y), "w": _fmt(w)}
            for p, w in zip(rule.nodes, rule.weights)
        ],
    }


def write_interior_rule(rule: InteriorRule, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(interior_rule_to_dict(rule), indent=2) + "\n")


def read_interior_rule(path) -> InteriorRule:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise RuleFormatError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or "degree" not in data or "nodes" not in data:
        raise RuleFormatError("interior rule file needs keys 'weight', 'degree', 'nodes'")
    wd = data.get("weight", {})
    weight = JacobiExponents(
        _parse_float(wd.get("alpha"), "weight.alpha"),
        _parse_float(wd.get("beta"), "weight.beta"),
        _parse_float(wd.get("gamma"), "weight.gamma"),
    )
    degree = data["degree"]
    if not isinstance(degree, int) or degree < 0:
        raise RuleFormatError(f"degree must be a nonnegative integer, got {degree!r}")
    nodes = []
    weights = []
    for e in data["nodes"]:
        nodes.append(
            Point2(
                _parse_float(e.get("x"), "nodes.x"),
                _parse_float(e.get("y"), "nodes.y"),
            )
        )
        weights.append(_parse_float(e.get("w"), "nodes.w"))
    return InteriorRule(
        weight=weight, degree=degree, nodes=tuple(nodes), weights=tuple(weights)
    )


# --- CSV export ---------------------------------------------------------------


def rule_to_csv(rule: TriangleRule) -> str:
    lines = ["class,x,y,weight"]
    for p, w in rule.interior:
        lines.append(f"interior,{_fmt(p.x)},{_fmt(p.y)},{_fmt(w)}")
    for t, w in rule.edge_y0:
        lines.append(f"edge_y0,{_fmt(t)},0,{_fmt(w)}")
    for t, w in rule.edge_x0:
        lines.append(f"edge_x0,0,{_fmt(t)},{_fmt(w)}")
    for t, w in rule.edge_diag:
        lines.append(f"edge_diag,{_fmt(t)},{_fmt(1.0 - t)},{_fmt(w)}")
    for (cx, cy), w in zip(
        ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), rule.corner_weights
    ):
        lines.append(f"corner,{_fmt(cx)},{_fmt(cy)},{_fmt(w)}")
    return "\n".join(lines) + "\n"
