"""Equations of state linking demand quantity, price, and average wealth.

Every model pins a surface g(qd, pr, phi) = 0, exposed as the explicit branch
qd = f(pr, phi) plus the two analytic inversions. Partial derivatives come in
two independent routes — closed form per model and central finite differences —
so one can always audit the other.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .core import StatePoint
from .errors import (
    DomainBoundsError,
    NegativeDemandError,
    ParamsFormatError,
    SingularInversionError,
)

#: Relative slack for treating a slightly negative surface value as zero.
NEGATIVE_CLAMP_RTOL = 1e-9
#: Relative step used by the finite-difference partials route.
FD_REL_STEP = 1e-5


@dataclass(frozen=True)
class Partials:
    """Slopes of the demand surface at a point."""

    dqd_dpr: float
    dqd_dphi: float


@dataclass(frozen=True)
class Elasticities:
    """Dimensionless responsiveness of demand to price and to wealth."""

    e_pr: float
    e_phi: float


def _require_positive(**named) -> None:
    for name, value in named.items():
        if not math.isfinite(value) or value <= 0.0:
            raise DomainBoundsError(f"{name} must be positive and finite, got {value!r}")


class EosModel(ABC):
    """Common surface protocol; scalars in, scalars out."""

    #: short registry name, e.g. ``"linear"``
    name: str = ""

    @abstractmethod
    def surface_qd(self, pr: float, phi: float) -> float:
        """Raw closed form for qd; no domain checks, may go negative."""

    @abstractmethod
    def pr_of(self, qd: float, phi: float) -> float:
        """Invert the surface for price."""

    @abstractmethod
    def phi_of(self, qd: float, pr: float) -> float:
        """Invert the surface for average wealth."""

    @abstractmethod
    def partials(self, pr: float, phi: float) -> Partials:
        """Closed-form surface slopes at (pr, phi)."""

    @abstractmethod
    def exact_heat_form(self) -> bool:
        """True when the reduced heat form is exact, i.e. pr = phi * h(qd)."""

    @abstractmethod
    def to_params(self) -> dict[str, float]:
        """Parameter dict accepted back by ``from_params``."""

    @property
    def qd_scale(self) -> float:
        """Characteristic demand magnitude, used for round-off clamping."""
        return 1.0

    def pr_primitive(self, qd: float, phi: float) -> float:
        """Antiderivative of pr in qd at fixed phi, for closed-form work."""
        raise NotImplementedError(f"{type(self).__name__} has no closed-form price primitive")

    def entropy_state(self, qd: float, phi: float, n: int) -> float:
        """Entropy as a state function (up to a constant), exact models only."""
        raise NotImplementedError(
            f"{type(self).__name__} has an inexact heat form; entropy is path-dependent"
        )

    def qd_of(self, pr: float, phi: float) -> float:
        """Demand at (pr, phi); negative round-off clamps to zero.

        A genuinely negative surface value means the point lies beyond the
        choke price and is rejected rather than silently truncated.
        """
        _require_positive(pr=pr, phi=phi)
        qd = self.surface_qd(pr, phi)
        if qd < 0.0:
            if qd >= -NEGATIVE_CLAMP_RTOL * self.qd_scale:
                return 0.0
            raise NegativeDemandError(
                f"demand is negative ({qd!r}) at pr={pr!r}, phi={phi!r}"
            )
        return qd

    def residual(self, point: StatePoint) -> float:
        """Signed surface residual qd - f(pr, phi) at a point."""
        return point.qd - self.surface_qd(point.pr, point.phi)

    def on_surface(self, point: StatePoint, rtol: float = 1e-9) -> bool:
        scale = max(1.0, abs(point.qd), self.qd_scale)
        return abs(self.residual(point)) <= rtol * scale

    def choke_price(self, phi: float) -> float:
        """Price at which demand reaches zero, if one exists."""
        raise DomainBoundsError(
            f"{type(self).__name__} has no finite choke price (demand stays positive)"
        )

    def point_elasticities(self, pr: float, phi: float) -> Elasticities:
        """Log-slopes e = (d qd / d z) * z / qd for z in {pr, phi}."""
        qd = self.qd_of(pr, phi)
        if qd == 0.0:
            raise DomainBoundsError("elasticities are undefined where demand is zero")
        p = self.partials(pr, phi)
        return Elasticities(e_pr=p.dqd_dpr * pr / qd, e_phi=p.dqd_dphi * phi / qd)


def finite_difference_partials(
    model: EosModel, pr: float, phi: float, rel_step: float = FD_REL_STEP
) -> Partials:
    """Independent central-difference route for the surface slopes.

    Kept separate from ``EosModel.partials`` on purpose: the two routes
    cross-validate each other and must never be merged.
    """
    _require_positive(pr=pr, phi=phi)
    h_pr = rel_step * max(1.0, abs(pr))
    h_phi = rel_step * max(1.0, abs(phi))
    dqd_dpr = (model.surface_qd(pr + h_pr, phi) - model.surface_qd(pr - h_pr, phi)) / (2 * h_pr)
    dqd_dphi = (model.surface_qd(pr, phi + h_phi) - model.surface_qd(pr, phi - h_phi)) / (2 * h_phi)
    return Partials(dqd_dpr=dqd_dpr, dqd_dphi=dqd_dphi)


@dataclass(frozen=True)
class LinearElasticityEos(EosModel):
    """First-order demand surface around a baseline (q0, pr0, phi0):

        qd = q0 * (1 + beta_pr * (phi - phi0) - kappa_phi * (pr - pr0))

    beta_pr is the wealth response, kappa_phi the price response (both per
    unit of their variable, scaled by baseline demand). The reduced heat
    form of this surface is not exact, so entropy accumulated along a path
    depends on the path taken.
    """

    q0: float
    pr0: float
    phi0: float
    beta_pr: float
    kappa_phi: float

    name = "linear"

    def __post_init__(self):
        problems = []
        for field in ("q0", "pr0", "phi0"):
            value = getattr(self, field)
            if not math.isfinite(value) or value <= 0.0:
                problems.append(f"{field} must be positive and finite, got {value!r}")
        if not math.isfinite(self.beta_pr) or self.beta_pr < 0.0:
            problems.append(f"beta_pr must be non-negative and finite, got {self.beta_pr!r}")
        if not math.isfinite(self.kappa_phi) or self.kappa_phi <= 0.0:
            problems.append(f"kappa_phi must be positive and finite, got {self.kappa_phi!r}")
        if problems:
            raise ParamsFormatError("; ".join(problems))

    @property
    def qd_scale(self) -> float:
        return self.q0

    def surface_qd(self, pr: float, phi: float) -> float:
        return self.q0 * (
            1.0 + self.beta_pr * (phi - self.phi0) - self.kappa_phi * (pr - self.pr0)
        )

    def pr_of(self, qd: float, phi: float) -> float:
        if qd < 0.0:
            raise DomainBoundsError(f"qd must be non-negative, got {qd!r}")
        _require_positive(phi=phi)
        if self.kappa_phi == 0.0:  # unreachable by construction; kept for safety
            raise SingularInversionError("kappa_phi is zero; price does not move demand")
        pr = self.pr0 + (1.0 + self.beta_pr * (phi - self.phi0) - qd / self.q0) / self.kappa_phi
        if pr <= 0.0:
            raise DomainBoundsError(f"implied price is non-positive ({pr!r})")
        return pr

    def phi_of(self, qd: float, pr: float) -> float:
        if qd < 0.0:
            raise DomainBoundsError(f"qd must be non-negative, got {qd!r}")
        _require_positive(pr=pr)
        if self.beta_pr == 0.0:
            raise SingularInversionError(
                "beta_pr is zero; demand does not respond to wealth, phi is undetermined"
            )
        phi = self.phi0 + (qd / self.q0 - 1.0 + self.kappa_phi * (pr - self.pr0)) / self.beta_pr
        if phi <= 0.0:
            raise DomainBoundsError(f"implied wealth is non-positive ({phi!r})")
        return phi

    def partials(self, pr: float, phi: float) -> Partials:
        return Partials(dqd_dpr=-self.q0 * self.kappa_phi, dqd_dphi=self.q0 * self.beta_pr)

    def choke_price(self, phi: float) -> float:
        _require_positive(phi=phi)
        pr = self.pr0 + (1.0 + self.beta_pr * (phi - self.phi0)) / self.kappa_phi
        if pr <= 0.0:
            raise DomainBoundsError(f"choke price is non-positive ({pr!r}) at phi={phi!r}")
        return pr

    def elasticities(self) -> Elasticities:
        """Baseline elasticities: e_pr = -kappa_phi*pr0, e_phi = beta_pr*phi0."""
        return Elasticities(e_pr=-self.kappa_phi * self.pr0, e_phi=self.beta_pr * self.phi0)

    def pr_primitive(self, qd: float, phi: float) -> float:
        intercept = self.pr0 + (1.0 + self.beta_pr * (phi - self.phi0)) / self.kappa_phi
        return intercept * qd - qd * qd / (2.0 * self.q0 * self.kappa_phi)

    def exact_heat_form(self) -> bool:
        return False

    def to_params(self) -> dict[str, float]:
        return {
            "q0": self.q0,
            "pr0": self.pr0,
            "phi0": self.phi0,
            "beta_pr": self.beta_pr,
            "kappa_phi": self.kappa_phi,
        }

    @classmethod
    def from_params(cls, params: dict[str, float]) -> "LinearElasticityEos":
        return cls(**_take(params, "q0", "pr0", "phi0", "beta_pr", "kappa_phi"))


@dataclass(frozen=True)
class IdealAnalogEos(EosModel):
    """Hyperbolic surface pr * qd = n * phi for a system of n agents.

    The direct analogue of an ideal gas with wealth in the temperature slot;
    its reduced heat form is exact, so entropy is a state function.
    """

    n: int = 1

    name = "ideal-analog"

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ParamsFormatError(f"n must be a positive integer, got {self.n!r}")

    def surface_qd(self, pr: float, phi: float) -> float:
        return self.n * phi / pr

    def pr_of(self, qd: float, phi: float) -> float:
        _require_positive(qd=qd, phi=phi)
        return self.n * phi / qd

    def phi_of(self, qd: float, pr: float) -> float:
        _require_positive(qd=qd, pr=pr)
        return pr * qd / self.n

    def partials(self, pr: float, phi: float) -> Partials:
        _require_positive(pr=pr, phi=phi)
        return Partials(dqd_dpr=-self.n * phi / pr**2, dqd_dphi=self.n / pr)

    def pr_primitive(self, qd: float, phi: float) -> float:
        return self.n * phi * math.log(qd)

    def entropy_state(self, qd: float, phi: float, n: int) -> float:
        _require_positive(qd=qd, phi=phi)
        return n * math.log(phi) + self.n * math.log(qd)

    def exact_heat_form(self) -> bool:
        return True

    def to_params(self) -> dict[str, float]:
        return {"n": self.n}

    @classmethod
    def from_params(cls, params: dict[str, float]) -> "IdealAnalogEos":
        got = _take(params, "n")
        return cls(n=_as_count(got["n"]))


@dataclass(frozen=True)
class IdealGasEos(EosModel):
    """pr * qd = n_amount * gas_constant * phi (pressure, volume, temperature)."""

    n_amount: float
    gas_constant: float = 8.314462618

    name = "ideal-gas"

    def __post_init__(self):
        if not math.isfinite(self.n_amount) or self.n_amount <= 0.0:
            raise ParamsFormatError(f"n_amount must be positive, got {self.n_amount!r}")
        if not math.isfinite(self.gas_constant) or self.gas_constant <= 0.0:
            raise ParamsFormatError(f"gas_constant must be positive, got {self.gas_constant!r}")

    def _nr(self) -> float:
        return self.n_amount * self.gas_constant

    def surface_qd(self, pr: float, phi: float) -> float:
        return self._nr() * phi / pr

    def pr_of(self, qd: float, phi: float) -> float:
        _require_positive(qd=qd, phi=phi)
        return self._nr() * phi / qd

    def phi_of(self, qd: float, pr: float) -> float:
        _require_positive(qd=qd, pr=pr)
        return pr * qd / self._nr()

    def partials(self, pr: float, phi: float) -> Partials:
        _require_positive(pr=pr, phi=phi)
        return Partials(dqd_dpr=-self._nr() * phi / pr**2, dqd_dphi=self._nr() / pr)

    def pr_primitive(self, qd: float, phi: float) -> float:
        return self._nr() * phi * math.log(qd)

    def entropy_state(self, qd: float, phi: float, n: int) -> float:
        _require_positive(qd=qd, phi=phi)
        return n * math.log(phi) + self._nr() * math.log(qd)

    def exact_heat_form(self) -> bool:
        return True

    def to_params(self) -> dict[str, float]:
        return {"n_amount": self.n_amount, "gas_constant": self.gas_constant}

    @classmethod
    def from_params(cls, params: dict[str, float]) -> "IdealGasEos":
        kwargs = {"n_amount": _need(params, "n_amount")}
        if "gas_constant" in params:
            kwargs["gas_constant"] = params["gas_constant"]
        _reject_extras(params, {"n_amount", "gas_constant"})
        return cls(**kwargs)


@dataclass(frozen=True)
class CurieEos(EosModel):
    """qd = curie_c * pr / phi (magnetization, field, temperature).

    Demand here rises with price and falls with wealth — the mirror image of
    an ordinary demand curve — which is exactly what makes it a useful foil.
    """

    curie_c: float

    name = "curie"

    def __post_init__(self):
        if not math.isfinite(self.curie_c) or self.curie_c <= 0.0:
            raise ParamsFormatError(f"curie_c must be positive, got {self.curie_c!r}")

    def surface_qd(self, pr: float, phi: float) -> float:
        return self.curie_c * pr / phi

    def pr_of(self, qd: float, phi: float) -> float:
        _require_positive(qd=qd, phi=phi)
        return qd * phi / self.curie_c

    def phi_of(self, qd: float, pr: float) -> float:
        _require_positive(qd=qd, pr=pr)
        return self.curie_c * pr / qd

    def partials(self, pr: float, phi: float) -> Partials:
        _require_positive(pr=pr, phi=phi)
        return Partials(dqd_dpr=self.curie_c / phi, dqd_dphi=-self.curie_c * pr / phi**2)

    def pr_primitive(self, qd: float, phi: float) -> float:
        return phi * qd * qd / (2.0 * self.curie_c)

    def entropy_state(self, qd: float, phi: float, n: int) -> float:
        _require_positive(qd=qd, phi=phi)
        return n * math.log(phi) + qd * qd / (2.0 * self.curie_c)

    def exact_heat_form(self) -> bool:
        return True

    def to_params(self) -> dict[str, float]:
        return {"curie_c": self.curie_c}

    @classmethod
    def from_params(cls, params: dict[str, float]) -> "CurieEos":
        _reject_extras(params, {"curie_c"})
        return cls(curie_c=_need(params, "curie_c"))


MODEL_REGISTRY: dict[str, type] = {
    "linear": LinearElasticityEos,
    "ideal-analog": IdealAnalogEos,
    "ideal-gas": IdealGasEos,
    "curie": CurieEos,
}


def model_from_params(kind: str, params: dict[str, float]) -> EosModel:
    """Instantiate a registered model from its parameter dict."""
    try:
        cls = MODEL_REGISTRY[kind]
    except KeyError:
        known = ", ".join(sorted(MODEL_REGISTRY))
        raise ParamsFormatError(f"unknown model {kind!r} (known: {known})") from None
    return cls.from_params(params)


def _need(params: dict, key: str) -> float:
    if key not in params:
        raise ParamsFormatError(f"missing required parameter {key!r}")
    return params[key]


def _reject_extras(params: dict, allowed: set) -> None:
    extras = set(params) - allowed
    if extras:
        raise ParamsFormatError(f"unexpected parameters: {', '.join(sorted(extras))}")


def _take(params: dict, *keys: str) -> dict:
    _reject_extras(params, set(keys))
    return {k: _need(params, k) for k in keys}


def _as_count(value) -> int:
    if isinstance(value, bool):
        raise ParamsFormatError(f"n must be a positive integer, got {value!r}")
    if isinstance(value, float):
        if not value.is_integer():
            raise ParamsFormatError(f"n must be a whole number, got {value!r}")
        value = int(value)
    return value
