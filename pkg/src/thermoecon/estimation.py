"""Least-squares recovery of demand-surface elasticities from observations.

The first-order surface in reduced form is

    qd / q0 = 1 + beta_pr * (phi - phi0) - kappa_phi * (pr - pr0) + u

so after moving the constant across, ``z = y - 1`` regresses through the
origin on ``(phi - phi0)`` and ``-(pr - pr0)``. No intercept is estimated;
a free-intercept refit is reported purely as a diagnostic (it should sit
near zero when the reduced form is right).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import StatePoint, validate_state
from .eos import LinearElasticityEos
from .errors import (
    CollinearRegressorsError,
    CsvFormatError,
    DegenerateDataError,
    DomainBoundsError,
    InsufficientDataError,
    InvalidStateError,
)

#: Rows are plain surface states; the name just marks intent.
Observation = StatePoint

CSV_HEADER = ("qd", "pr", "phi")

#: Relative determinant threshold below which regressors count as collinear.
COLLINEAR_RTOL = 1e-12


@dataclass(frozen=True)
class RegressionFrame:
    """Centered design ready for fitting."""

    q0: float
    pr0: float
    phi0: float
    y: np.ndarray
    x_phi: np.ndarray
    x_pr: np.ndarray

    @property
    def n_obs(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class FitResult:
    beta_pr: float
    kappa_phi: float
    se_beta_pr: float
    se_kappa_phi: float
    e_pr: float
    e_phi: float
    r2: float
    n_obs: int
    q0: float
    pr0: float
    phi0: float
    intercept_check: float | None

    def to_dict(self) -> dict:
        return {
            "beta_pr": self.beta_pr,
            "kappa_phi": self.kappa_phi,
            "se_beta_pr": self.se_beta_pr,
            "se_kappa_phi": self.se_kappa_phi,
            "e_pr": self.e_pr,
            "e_phi": self.e_phi,
            "r2": self.r2,
            "n_obs": self.n_obs,
            "q0": self.q0,
            "pr0": self.pr0,
            "phi0": self.phi0,
            "intercept_check": self.intercept_check,
        }

    def to_model(self) -> LinearElasticityEos:
        """Promote the fit to a surface; rejects inadmissible estimates."""
        return LinearElasticityEos(
            q0=self.q0,
            pr0=self.pr0,
            phi0=self.phi0,
            beta_pr=self.beta_pr,
            kappa_phi=self.kappa_phi,
        )


def build_frame(
    observations,
    q0: float | None = None,
    pr0: float | None = None,
    phi0: float | None = None,
) -> RegressionFrame:
    """Center observations around baselines (sample means by default)."""
    points = list(observations)
    if not points:
        raise InsufficientDataError("need at least one observation")
    problems = []
    for i, point in enumerate(points):
        outcome = validate_state(point)
        problems.extend(f"row {i + 1}: {v}" for v in outcome.violations)
    if problems:
        raise InvalidStateError(problems)

    qd = np.array([p.qd for p in points], dtype=float)
    pr = np.array([p.pr for p in points], dtype=float)
    phi = np.array([p.phi for p in points], dtype=float)
    q0 = float(np.mean(qd)) if q0 is None else float(q0)
    pr0 = float(np.mean(pr)) if pr0 is None else float(pr0)
    phi0 = float(np.mean(phi)) if phi0 is None else float(phi0)
    if not math.isfinite(q0) or q0 <= 0.0:
        raise DegenerateDataError(f"baseline q0 must be positive, got {q0!r}")
    if pr0 <= 0.0 or phi0 <= 0.0:
        raise DegenerateDataError(f"baselines must be positive (pr0={pr0!r}, phi0={phi0!r})")
    return RegressionFrame(
        q0=q0, pr0=pr0, phi0=phi0, y=qd / q0, x_phi=phi - phi0, x_pr=pr - pr0
    )


def fit(frame: RegressionFrame) -> FitResult:
    """No-intercept least squares for (beta_pr, kappa_phi) via the 2x2 normal equations."""
    n = frame.n_obs
    if n < 3:
        raise InsufficientDataError(f"need at least 3 observations to fit, got {n}")
    z = frame.y - 1.0
    a = frame.x_phi
    b = -frame.x_pr
    s_aa = float(a @ a)
    s_bb = float(b @ b)
    s_ab = float(a @ b)
    s_az = float(a @ z)
    s_bz = float(b @ z)
    det = s_aa * s_bb - s_ab * s_ab
    if det <= COLLINEAR_RTOL * s_aa * s_bb or s_aa == 0.0 or s_bb == 0.0:
        raise CollinearRegressorsError(
            "wealth and price regressors are collinear or constant; "
            "vary both across observations"
        )
    beta = (s_az * s_bb - s_bz * s_ab) / det
    kappa = (s_bz * s_aa - s_az * s_ab) / det

    resid = z - beta * a - kappa * b
    sse = float(resid @ resid)
    sigma2 = sse / (n - 2)
    se_beta = math.sqrt(sigma2 * s_bb / det)
    se_kappa = math.sqrt(sigma2 * s_aa / det)
    tss = float(z @ z)
    r2 = 1.0 - sse / tss if tss > 0.0 else (1.0 if sse == 0.0 else 0.0)

    return FitResult(
        beta_pr=beta,
        kappa_phi=kappa,
        se_beta_pr=se_beta,
        se_kappa_phi=se_kappa,
        e_pr=-kappa * frame.pr0,
        e_phi=beta * frame.phi0,
        r2=r2,
        n_obs=n,
        q0=frame.q0,
        pr0=frame.pr0,
        phi0=frame.phi0,
        intercept_check=_intercept_diagnostic(z, a, b) if n >= 4 else None,
    )


def _intercept_diagnostic(z, a, b):
    """Intercept from a free 3-parameter refit; near zero when the form holds."""
    design = np.column_stack([np.ones_like(z), a, b])
    try:
        coef = np.linalg.solve(design.T @ design, design.T @ z)
    except np.linalg.LinAlgError:
        return None
    return float(coef[0])


def predict(result: FitResult, pr: float, phi: float) -> float:
    """Fitted demand at (pr, phi); raw line, no clamping of noisy negatives."""
    return result.q0 * (
        1.0
        + result.beta_pr * (phi - result.phi0)
        - result.kappa_phi * (pr - result.pr0)
    )


def generate_synthetic(
    model: LinearElasticityEos,
    n_obs: int,
    noise_sd: float = 0.01,
    seed: int | None = 0,
    phi_range: tuple[float, float] | None = None,
    pr_range: tuple[float, float] | None = None,
) -> list[StatePoint]:
    """Draw on-surface observations with additive reduced-form noise.

    Wealth and price are uniform over their ranges (default +/-20% around the
    model baselines); demand is the surface value plus ``q0 * eps`` with
    ``eps ~ N(0, noise_sd)``. Draw order is fixed (wealths, prices, noise) so
    a seed pins the whole sample.
    """
    if n_obs < 1:
        raise DomainBoundsError(f"n_obs must be at least 1, got {n_obs!r}")
    if not math.isfinite(noise_sd) or noise_sd < 0.0:
        raise DomainBoundsError(f"noise_sd must be non-negative, got {noise_sd!r}")
    phi_range = phi_range or (0.8 * model.phi0, 1.2 * model.phi0)
    pr_range = pr_range or (0.8 * model.pr0, 1.2 * model.pr0)
    for name, (lo, hi) in (("phi_range", phi_range), ("pr_range", pr_range)):
        if not (0.0 < lo < hi):
            raise DomainBoundsError(f"{name} must satisfy 0 < lo < hi, got ({lo!r}, {hi!r})")
    # worst corner: dearest price, poorest wealth — demand must stay positive
    if model.surface_qd(pr_range[1], phi_range[0]) <= 0.0:
        raise DomainBoundsError(
            "ranges reach beyond the choke price; shrink pr_range or raise phi_range"
        )

    rng = np.random.default_rng(seed)
    phis = rng.uniform(phi_range[0], phi_range[1], n_obs)
    prs = rng.uniform(pr_range[0], pr_range[1], n_obs)
    eps = rng.normal(0.0, noise_sd, n_obs) if noise_sd > 0.0 else np.zeros(n_obs)

    points = []
    for phi, pr, e in zip(phis, prs, eps):
        qd = model.surface_qd(float(pr), float(phi)) + model.q0 * float(e)
        if qd < 0.0:
            raise DomainBoundsError(
                "noise drove a draw to negative demand; lower noise_sd or tighten ranges"
            )
        points.append(StatePoint(qd=qd, pr=float(pr), phi=float(phi)))
    return points


def read_observations(source) -> list[StatePoint]:
    """Read ``qd,pr,phi`` CSV from a path or an open text stream."""
    if isinstance(source, (str, Path)):
        with open(source, newline="") as f:
            return read_observations(f)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("empty input: expected a 'qd,pr,phi' header") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise CsvFormatError(
            f"bad header {','.join(header)!r}: expected {','.join(CSV_HEADER)!r}"
        )
    points = []
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise CsvFormatError(f"line {lineno}: expected 3 fields, got {len(row)}")
        try:
            qd, pr, phi = (float(field) for field in row)
        except ValueError:
            raise CsvFormatError(f"line {lineno}: non-numeric field in {row!r}") from None
        points.append(StatePoint(qd=qd, pr=pr, phi=phi))
    return points


def write_observations(dest, observations) -> None:
    """Write ``qd,pr,phi`` CSV (round-trippable floats) to a path or stream."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", newline="") as f:
            write_observations(f, observations)
        return
    dest.write(",".join(CSV_HEADER) + "\n")
    for point in observations:
        dest.write(f"{point.qd!r},{point.pr!r},{point.phi!r}\n")
