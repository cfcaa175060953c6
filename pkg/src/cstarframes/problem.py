"""JSON problem files and report serialisation.

Layout::

    {
      "algebra": {"blocks": [2]},
      "rank": 1,
      "measure": {"type": "interval", "a": 0, "b": 1, "weight": [1]},
      "quadrature_degree": 6,
      "maps": {
        "F": {"type": "polynomial", "degree": 1, "coeffs": [<element>, <element>]},
        "T": {"type": "tabulated", "nodes": [...], "samples": [<element>, ...]}
      },
      "operators": {"X": <operator>},
      "elements": {"a": <algebra>},
      "scalars": {"alpha": 2, "beta": [-1, 0]}
    }

A scalar entry is a real number or an ``[re, im]`` pair.  A matrix is a
row-major list of rows.  An ``<algebra>`` literal is a list with one matrix
per diagonal block, or ``{"dense": matrix}`` for the full ``n x n`` matrix
(whose off-block entries must then be zero).  A module ``<element>`` is a list
of ``rank`` algebra literals, and an ``<operator>`` is a ``rank x rank`` grid
of algebra literals or ``{"dense": matrix}`` of size ``rank n``.

Only ``algebra``, ``rank`` and ``measure`` are required.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from numbers import Real
from pathlib import Path
from typing import Optional

import numpy as np

from .algebra import AlgebraDescriptor, AlgebraElement
from .errors import (
    BlockPatternViolation,
    NamedObjectMissing,
    ParseError,
    SchemaError,
    ShapeMismatch,
)
from .measure import (
    Discrete,
    FrameMap,
    Interval,
    QuadratureRule,
    build_rule,
    default_degree,
)
from .module import ModuleElement, ModuleOperator

NODE_TOL = 1e-12


def _scalar(value, where: str) -> complex:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: expected a number, got a boolean")
    if isinstance(value, Real):
        return complex(float(value))
    if (isinstance(value, list) and len(value) == 2
            and all(isinstance(v, Real) and not isinstance(v, bool) for v in value)):
        return complex(float(value[0]), float(value[1]))
    raise SchemaError(f"{where}: expected a number or an [re, im] pair, got {value!r}")


def _matrix(value, where: str, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise SchemaError(f"{where}: expected a non-empty list of rows")
    width = len(value[0])
    if any(len(r) != width for r in value):
        raise SchemaError(f"{where}: rows have different lengths")
    out = np.array([[_scalar(x, f"{where}[{i}][{j}]") for j, x in enumerate(r)]
                    for i, r in enumerate(value)], dtype=np.complex128)
    if shape is not None and out.shape != shape:
        raise SchemaError(f"{where}: expected a {shape[0]}x{shape[1]} matrix, got {out.shape}")
    return out


def parse_algebra(desc: AlgebraDescriptor, value, where: str) -> AlgebraElement:
    if isinstance(value, dict):
        if set(value) != {"dense"}:
            raise SchemaError(f"{where}: object form must have exactly the key 'dense'")
        m = _matrix(value["dense"], f"{where}.dense", (desc.n, desc.n))
        try:
            return desc.from_dense(m)
        except BlockPatternViolation as exc:
            raise BlockPatternViolation(f"{where}: {exc}") from None
    if not isinstance(value, list) or len(value) != len(desc.blocks):
        raise SchemaError(f"{where}: expected a list of {len(desc.blocks)} block matrices")
    return AlgebraElement(desc, [_matrix(v, f"{where}[{j}]", (b, b))
                                 for j, (v, b) in enumerate(zip(value, desc.blocks))])


def parse_element(desc: AlgebraDescriptor, rank: int, value, where: str) -> ModuleElement:
    if not isinstance(value, list) or len(value) != rank:
        raise SchemaError(f"{where}: expected a list of {rank} algebra elements")
    return ModuleElement.from_components(
        [parse_algebra(desc, v, f"{where}[{i}]") for i, v in enumerate(value)])


def parse_operator(desc: AlgebraDescriptor, rank: int, value, where: str) -> ModuleOperator:
    if isinstance(value, dict):
        if set(value) != {"dense"}:
            raise SchemaError(f"{where}: object form must have exactly the key 'dense'")
        size = rank * desc.n
        m = _matrix(value["dense"], f"{where}.dense", (size, size))
        try:
            return ModuleOperator.from_dense(desc, rank, m)
        except BlockPatternViolation as exc:
            raise BlockPatternViolation(f"{where}: {exc}") from None
    if (not isinstance(value, list) or len(value) != rank
            or not all(isinstance(r, list) and len(r) == rank for r in value)):
        raise SchemaError(f"{where}: expected a {rank}x{rank} grid of algebra elements")
    return ModuleOperator.from_entries(
        [[parse_algebra(desc, v, f"{where}[{i}][{l}]") for l, v in enumerate(row)]
         for i, row in enumerate(value)])


def _require(obj: dict, key: str, where: str, kind=None):
    if key not in obj:
        raise SchemaError(f"{where}: missing field '{key}'")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: wrong type {type(value).__name__}")
    return value


def parse_measure(value) -> Interval | Discrete:
    if not isinstance(value, dict):
        raise SchemaError("measure: expected an object")
    kind = _require(value, "type", "measure", str)
    try:
        if kind == "interval":
            a = _require(value, "a", "measure", Real)
            b = _require(value, "b", "measure", Real)
            weight = value.get("weight", [1])
            if not isinstance(weight, list) or not all(isinstance(c, Real) for c in weight):
                raise SchemaError("measure.weight: expected a list of real coefficients")
            return Interval(float(a), float(b), tuple(weight))
        if kind == "discrete":
            pts = _require(value, "points", "measure", list)
            ms = _require(value, "masses", "measure", list)
            if not all(isinstance(x, Real) for x in pts + ms):
                raise SchemaError("measure: points and masses must be real numbers")
            return Discrete(tuple(pts), tuple(ms))
    except ValueError as exc:
        raise SchemaError(f"measure: {exc}") from None
    raise SchemaError(f"measure.type: unknown measure type {kind!r}")


@dataclass
class Problem:
    descriptor: AlgebraDescriptor
    rank: int
    space: Interval | Discrete
    rule: QuadratureRule
    maps: dict[str, FrameMap] = field(default_factory=dict)
    operators: dict[str, ModuleOperator] = field(default_factory=dict)
    elements: dict[str, AlgebraElement] = field(default_factory=dict)
    scalars: dict[str, complex] = field(default_factory=dict)
    source: Optional[str] = None

    def _get(self, table: dict, kind: str, name: str):
        if name not in table:
            raise NamedObjectMissing(f"no {kind} named {name!r} in the problem")
        return table[name]

    def map(self, name: str) -> FrameMap:
        return self._get(self.maps, "map", name)

    def operator(self, name: str) -> ModuleOperator:
        return self._get(self.operators, "operator", name)

    def element(self, name: str) -> AlgebraElement:
        return self._get(self.elements, "algebra element", name)

    def scalar(self, name: str) -> complex:
        return self._get(self.scalars, "scalar", name)

    @property
    def has_tabulated(self) -> bool:
        return any(not m.is_polynomial for m in self.maps.values())

    def rule_for(self, degree: int) -> QuadratureRule:
        """The problem's rule, rebuilt with higher exactness when no map pins it."""
        if degree <= self.rule.degree or self.has_tabulated:
            return self.rule
        return build_rule(self.space, degree)


def _parse_map(problem: Problem, name: str, value):
    where = f"maps.{name}"
    if not isinstance(value, dict):
        raise SchemaError(f"{where}: expected an object")
    kind = _require(value, "type", where, str)
    desc, rank = problem.descriptor, problem.rank
    if kind == "polynomial":
        coeffs = _require(value, "coeffs", where, list)
        if not coeffs:
            raise SchemaError(f"{where}.coeffs: at least one coefficient is required")
        if "degree" in value and value["degree"] != len(coeffs) - 1:
            raise SchemaError(f"{where}: declared degree {value['degree']} but "
                              f"{len(coeffs)} coefficients given")
        return FrameMap.polynomial([parse_element(desc, rank, c, f"{where}.coeffs[{p}]")
                                    for p, c in enumerate(coeffs)])
    if kind == "tabulated":
        samples = _require(value, "samples", where, list)
        return ("tabulated", [parse_element(desc, rank, s, f"{where}.samples[{q}]")
                              for q, s in enumerate(samples)], value.get("nodes"))
    raise SchemaError(f"{where}.type: unknown map type {kind!r}")


def parse_problem(data: dict, source: Optional[str] = None) -> Problem:
    if not isinstance(data, dict):
        raise SchemaError("top level: expected an object")
    known = {"algebra", "rank", "measure", "quadrature_degree", "maps", "operators",
             "elements", "scalars", "description"}
    extra = set(data) - known
    if extra:
        raise SchemaError(f"top level: unknown fields {sorted(extra)}")
    alg = _require(data, "algebra", "top level", dict)
    blocks = _require(alg, "blocks", "algebra", list)
    if not blocks or not all(isinstance(b, int) and not isinstance(b, bool) and b >= 1
                             for b in blocks):
        raise SchemaError("algebra.blocks: expected a non-empty list of positive integers")
    desc = AlgebraDescriptor(tuple(blocks))
    rank = _require(data, "rank", "top level", int)
    if isinstance(rank, bool) or rank < 1:
        raise SchemaError("rank: expected a positive integer")
    space = parse_measure(_require(data, "measure", "top level"))

    for section in ("maps", "operators", "elements", "scalars"):
        if not isinstance(data.get(section, {}), dict):
            raise SchemaError(f"{section}: expected an object")

    placeholder = build_rule(space, 0)
    problem = Problem(desc, rank, space, placeholder, source=source)
    parsed = {name: _parse_map(problem, name, v)
              for name, v in data.get("maps", {}).items()}
    polys = [m for m in parsed.values() if isinstance(m, FrameMap)]
    if "quadrature_degree" in data:
        qd = data["quadrature_degree"]
        if not isinstance(qd, int) or isinstance(qd, bool) or qd < 0:
            raise SchemaError("quadrature_degree: expected a nonnegative integer")
        needed = 2 * max((m.degree for m in polys), default=0)
        if qd < needed:
            raise SchemaError(f"quadrature_degree {qd} is below {needed}, "
                              "needed for exact frame operators")
    else:
        qd = default_degree(*polys)
    try:
        rule = build_rule(space, qd)
    except ValueError as exc:
        raise SchemaError(f"measure: {exc}") from None
    problem.rule = rule

    for name, m in parsed.items():
        if isinstance(m, FrameMap):
            problem.maps[name] = m
            continue
        _, samples, nodes = m
        where = f"maps.{name}"
        if len(samples) != len(rule):
            raise SchemaError(f"{where}: {len(samples)} samples but the problem's rule has "
                              f"{len(rule)} nodes")
        if nodes is not None:
            if (not isinstance(nodes, list) or len(nodes) != len(rule)
                    or not all(isinstance(x, Real) for x in nodes)):
                raise SchemaError(f"{where}.nodes: expected {len(rule)} real numbers")
            if np.max(np.abs(np.asarray(nodes, dtype=float) - rule.nodes)) > NODE_TOL:
                raise SchemaError(f"{where}.nodes: do not match the problem's quadrature nodes")
        elif not rule.is_discrete:
            raise SchemaError(f"{where}: tabulated maps on an interval must list their nodes")
        problem.maps[name] = FrameMap.tabulated(rule, samples)

    for name, v in data.get("operators", {}).items():
        problem.operators[name] = parse_operator(desc, rank, v, f"operators.{name}")
    for name, v in data.get("elements", {}).items():
        problem.elements[name] = parse_algebra(desc, v, f"elements.{name}")
    for name, v in data.get("scalars", {}).items():
        problem.scalars[name] = _scalar(v, f"scalars.{name}")
    return problem


def parse_problem_text(text: str, source: Optional[str] = None) -> Problem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source or '<string>'}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return parse_problem(data, source)
    except ShapeMismatch as exc:
        if isinstance(exc, BlockPatternViolation):
            raise
        raise SchemaError(str(exc)) from None


def parse_problem_file(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_problem_text(text, str(path))


def bundled_example() -> Path:
    """Path of the shipped problem file with the worked 2x2 example."""
    return Path(__file__).with_name("data") / "example25.json"


# serialisation


def _num(x: complex) -> list:
    re, im = float(np.real(x)), float(np.imag(x))
    return [re + 0.0, im + 0.0]


def matrix_json(m: np.ndarray) -> list:
    return [[_num(x) for x in row] for row in np.asarray(m)]


def algebra_json(a: AlgebraElement) -> list:
    return [matrix_json(p) for p in a.blocks]


def element_json(f: ModuleElement) -> list:
    return [algebra_json(c) for c in f.components]


def operator_json(T: ModuleOperator) -> list:
    return [[algebra_json(e) for e in row] for row in T.entries]


def map_json(F: FrameMap) -> dict:
    if F.is_polynomial:
        return {"type": "polynomial", "degree": F.degree,
                "coeffs": [element_json(c) for c in F.coefficients]}
    samples = [ModuleElement(F.descriptor, F.rank, [p[q] for p in F.parts])
               for q in range(len(F.rule))]
    return {"type": "tabulated", "nodes": [float(x) for x in F.rule.nodes],
            "samples": [element_json(s) for s in samples]}


def real_or_null(x: float):
    return None if x is None or (isinstance(x, float) and not math.isfinite(x)) else float(x)


def dumps(obj, width: int = 96, _indent: int = 0) -> str:
    """Deterministic JSON with short arrays and objects kept on one line."""
    flat = json.dumps(obj, separators=(", ", ": "), allow_nan=False)
    if len(flat) + _indent <= width or not isinstance(obj, (list, dict)) or not obj:
        return flat
    pad = " " * (_indent + 2)
    if isinstance(obj, list):
        items = [pad + dumps(v, width, _indent + 2) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + " " * _indent + "]"
    items = [pad + json.dumps(k) + ": " + dumps(v, width, _indent + 2) for k, v in obj.items()]
    return "{\n" + ",\n".join(items) + "\n" + " " * _indent + "}"
