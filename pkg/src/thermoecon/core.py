"""Shared quantity semantics, state records, and wealth bookkeeping.

Coordinates are demand quantity ``qd`` (extensive, amount of goods), price
``pr`` (money per unit good), and average personal wealth ``phi`` (money per
person, the temperature analogue). Total wealth is ``W = n * phi`` for a
population of ``n`` consumers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidStateError

# Quantity aliases; the semantic reading travels with the name.
GoodsQty = float        # amount of goods, extensive, >= 0
Price = float           # money per unit good, > 0
PersonalWealth = float  # money per person, > 0 wherever it divides
Money = float           # plain money units
Population = int        # number of consumers, >= 1
Entropy = float         # generalized utility per unit personal wealth


@dataclass(frozen=True)
class StatePoint:
    """One point (qd, pr, phi), on or off an equation-of-state surface.

    Construction is permissive so that invalid points can be inspected;
    :func:`validate_state` reports violations and every downstream operation
    refuses invalid points via :func:`require_valid_point`.
    """

    qd: GoodsQty
    pr: Price
    phi: PersonalWealth


@dataclass(frozen=True)
class SystemState:
    """A consumer population at a state point.

    ``entropy`` is an offset from an arbitrary reference state; only
    differences between entropy values are meaningful.
    """

    point: StatePoint
    n: Population
    entropy: Entropy | None = None


@dataclass(frozen=True)
class ValidationOutcome:
    valid: bool
    violations: tuple[str, ...]


def validate_state(point: StatePoint) -> ValidationOutcome:
    """Report every violated invariant of a state point; total function."""
    violations = []
    for name, value in (("qd", point.qd), ("pr", point.pr), ("phi", point.phi)):
        if not math.isfinite(value):
            violations.append(f"non-finite coordinate: {name}={value}")
    if math.isfinite(point.qd) and point.qd < 0:
        violations.append(f"negative quantity: qd={point.qd}")
    if math.isfinite(point.pr) and point.pr <= 0:
        violations.append(f"non-positive price: pr={point.pr}")
    if math.isfinite(point.phi) and point.phi <= 0:
        violations.append(f"non-positive wealth: phi={point.phi}")
    return ValidationOutcome(valid=not violations, violations=tuple(violations))


def require_valid_point(point: StatePoint) -> None:
    """Raise :class:`InvalidStateError` unless the point passes validation.

    This is the single gate shared by every operation whose precondition is
    "point valid"; it accepts exactly what :func:`validate_state` accepts.
    """
    outcome = validate_state(point)
    if not outcome.valid:
        raise InvalidStateError(outcome.violations)


def require_valid_system(state: SystemState) -> None:
    """Validate a population state: point valid, n >= 1, finite total wealth."""
    require_valid_point(state.point)
    if not isinstance(state.n, int) or state.n < 1:
        raise InvalidStateError([f"population must be an integer >= 1: n={state.n}"])
    if not math.isfinite(state.n * state.point.phi):
        raise InvalidStateError([f"total wealth overflows: n={state.n}, phi={state.point.phi}"])


def total_wealth(state: SystemState) -> Money:
    """Total wealth W = n * phi of a consumer population."""
    require_valid_system(state)
    return state.n * state.point.phi
