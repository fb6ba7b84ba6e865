"""Effect-structure diagrams over the three coordinates of a surface.

A diagram is a directed graph on the nodes X (extensive coordinate), Y
(intensive coordinate), and T (temperature-like coordinate) whose arrows are
direct cause-effect channels, plus a declared set of nodes that may receive
exogenous shocks. Three rules decide whether a diagram describes a workable
equation of state:

  1. exactly three arrows;
  2. at least one arrow Y -> X;
  3. shocks may land only on Y or T, never on X.

Valid diagrams fall into classes by their opposite-direction arrow pair:
T<->Y is class I (hydrostatic-style systems), T<->X is class II (Curie-style
systems), Y<->X is class III with four subclasses by the third arrow, and
valid diagrams with no opposite pair are "other".
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from itertools import combinations

from .errors import (
    DiagramParseError,
    InvalidDiagramError,
    SelfLoopError,
    UnknownNodeNameError,
)


class Node(Enum):
    X = "X"
    Y = "Y"
    T = "T"

    @property
    def order(self) -> int:
        return _NODE_ORDER[self]

    def __str__(self) -> str:
        return self.value


_NODE_ORDER = {Node.X: 0, Node.Y: 1, Node.T: 2}

# Built-in name resolution, case-insensitive: hydrostatic (P, V, T),
# demand-side (Pr, Qd, phi), magnetic (B, M, T), plus the literal roles.
BUILTIN_ALIASES = {
    "x": Node.X,
    "y": Node.Y,
    "t": Node.T,
    "p": Node.Y,
    "v": Node.X,
    "pr": Node.Y,
    "qd": Node.X,
    "phi": Node.T,
    "b": Node.Y,
    "m": Node.X,
}


@dataclass(frozen=True)
class Edge:
    """A directed cause-effect arrow; self-loops are rejected."""

    src: Node
    dst: Node

    def __post_init__(self):
        if self.src is self.dst:
            raise SelfLoopError(f"self-loop {self.src}->{self.dst} is not allowed")

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.src.order, self.dst.order)

    def __str__(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class EffectDiagram:
    edges: frozenset[Edge]
    shock_targets: frozenset[Node] = frozenset()

    @classmethod
    def of(cls, edges, shocks=()) -> "EffectDiagram":
        """Build from iterables; duplicate edges collapse to one."""
        return cls(frozenset(edges), frozenset(shocks))

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges, key=lambda e: e.sort_key)


class DiagramClass(Enum):
    CLASS_I = "I"
    CLASS_II = "II"
    CLASS_III_1 = "III.1"
    CLASS_III_2 = "III.2"
    CLASS_III_3 = "III.3"
    CLASS_III_4 = "III.4"
    OTHER_VALID = "other"

    @property
    def label(self) -> str:
        return self.value


@dataclass(frozen=True)
class RuleViolation:
    rule: int
    message: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: tuple[RuleViolation, ...]


_EDGE_RE = re.compile(r"^(\w+)\s*->\s*(\w+)$")


def _resolve(name: str, aliases) -> Node:
    node = aliases.get(name.strip().lower())
    if node is None:
        raise UnknownNodeNameError(f"unknown node name {name.strip()!r}")
    return node


def parse_diagram(text: str, alias_map=None) -> EffectDiagram:
    """Parse ``"A->B, C->D, ..."`` optionally followed by ``"shocks: A, B"``.

    Names resolve case-insensitively through the built-in aliases
    (P/V/T, Pr/Qd/phi, B/M/T, and literal X/Y/T); ``alias_map`` entries
    extend or override them. Duplicate edges collapse to one.
    """
    aliases = dict(BUILTIN_ALIASES)
    if alias_map:
        aliases.update({k.strip().lower(): v for k, v in alias_map.items()})

    head, sep, tail = text.partition("shocks")
    shocks = set()
    if sep:
        tail = tail.lstrip()
        if not tail.startswith(":"):
            raise DiagramParseError("expected ':' after 'shocks'")
        for name in tail[1:].split(","):
            if name.strip():
                shocks.add(_resolve(name, aliases))
        head = head.rstrip().rstrip(",;")

    edges = set()
    for term in head.split(","):
        term = term.strip()
        if not term:
            continue
        match = _EDGE_RE.match(term)
        if match is None:
            raise DiagramParseError(f"malformed edge term {term!r} (expected 'A->B')")
        edges.add(Edge(_resolve(match.group(1), aliases), _resolve(match.group(2), aliases)))
    return EffectDiagram.of(edges, shocks)


def validate(diagram: EffectDiagram) -> ValidationReport:
    """Check the three rules; all violations are reported, not just the first."""
    violations = []
    if len(diagram.edges) != 3:
        violations.append(
            RuleViolation(1, f"number of arrows must be three (got {len(diagram.edges)})")
        )
    if Edge(Node.Y, Node.X) not in diagram.edges:
        violations.append(RuleViolation(2, "missing required arrow Y->X"))
    if Node.X in diagram.shock_targets:
        violations.append(RuleViolation(3, "X cannot take an exogenous shock"))
    return ValidationReport(valid=not violations, violations=tuple(violations))


_THIRD_ARROW_CLASS = {
    Edge(Node.T, Node.X): DiagramClass.CLASS_III_1,
    Edge(Node.X, Node.T): DiagramClass.CLASS_III_2,
    Edge(Node.T, Node.Y): DiagramClass.CLASS_III_3,
    Edge(Node.Y, Node.T): DiagramClass.CLASS_III_4,
}


def classify(diagram: EffectDiagram) -> DiagramClass:
    """Classify a valid diagram by its opposite-direction arrow pair.

    Under rules 1-2 a diagram holds at most one opposite pair (two pairs would
    need four arrows), so the class is unique. Invalid diagrams are rejected.
    """
    report = validate(diagram)
    if not report.valid:
        raise InvalidDiagramError(report)
    edges = diagram.edges
    if Edge(Node.T, Node.Y) in edges and Edge(Node.Y, Node.T) in edges:
        return DiagramClass.CLASS_I
    if Edge(Node.T, Node.X) in edges and Edge(Node.X, Node.T) in edges:
        return DiagramClass.CLASS_II
    if Edge(Node.Y, Node.X) in edges and Edge(Node.X, Node.Y) in edges:
        (third,) = edges - {Edge(Node.Y, Node.X), Edge(Node.X, Node.Y)}
        return _THIRD_ARROW_CLASS[third]
    return DiagramClass.OTHER_VALID


def all_edges() -> list[Edge]:
    """The six possible arrows among the three nodes, in canonical order."""
    return sorted(
        (Edge(a, b) for a in Node for b in Node if a is not b),
        key=lambda e: e.sort_key,
    )


def enumerate_valid() -> list[EffectDiagram]:
    """Every three-arrow diagram passing rules 1-2, canonically sorted.

    There are exactly ten: the arrow Y->X is forced, leaving C(5,2) choices
    of the remaining two arrows. Shock targets are left empty.
    """
    diagrams = [
        EffectDiagram.of(subset)
        for subset in combinations(all_edges(), 3)
        if Edge(Node.Y, Node.X) in subset
    ]
    return sorted(diagrams, key=lambda d: tuple(e.sort_key for e in d.sorted_edges()))


def to_text(diagram: EffectDiagram) -> str:
    """Canonical diagram text; ``parse_diagram`` round-trips it."""
    body = ", ".join(str(e) for e in diagram.sorted_edges())
    if diagram.shock_targets:
        shocks = ", ".join(str(n) for n in sorted(diagram.shock_targets, key=lambda n: n.order))
        body = f"{body} shocks: {shocks}" if body else f"shocks: {shocks}"
    return body


def to_dot(diagram: EffectDiagram, alias_map=None) -> str:
    """Deterministic DOT text, one line per edge in canonical order.

    ``alias_map`` has the same name->node shape as in :func:`parse_diagram`;
    the first name mapped to each node is used for display.
    """
    display = {}
    if alias_map:
        for name, node in alias_map.items():
            display.setdefault(node, name)
    lines = ["digraph effect_structure {"]
    for node in sorted(diagram.shock_targets, key=lambda n: n.order):
        lines.append(f"  // shock target: {display.get(node, str(node))}")
    for edge in diagram.sorted_edges():
        src = display.get(edge.src, str(edge.src))
        dst = display.get(edge.dst, str(edge.dst))
        lines.append(f"  {src} -> {dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
