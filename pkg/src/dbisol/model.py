"""Potentials, couplings and target-space geometry shared by every solver.

Two sectors are supported.  The planar one works on the chart h in [0, 1]
with the vacuum at h = 0, the three-dimensional one on xi in [0, pi] with the
vacuum at xi = 0.  All quantities are dimensionless.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .errors import DbisolError

__all__ = [
    "Sector", "KineticLaw", "PotentialSpec", "ModelParams", "TargetMeasure",
    "make_potential", "validate_params", "target_measure", "fit_vacuum_exponent",
]


class Sector(enum.Enum):
    BABY2D = "baby"
    SKYRME3D = "skyrme"


@dataclass(frozen=True)
class KineticLaw:
    """Kinetic prescription: the square-root (DBI) form or a pure power."""

    kind: str                    # "dbi" or "power"
    alpha_k: float | None = None

    @staticmethod
    def dbi() -> "KineticLaw":
        return KineticLaw("dbi")

    @staticmethod
    def power(alpha_k: float) -> "KineticLaw":
        return KineticLaw("power", float(alpha_k))

    @property
    def is_dbi(self) -> bool:
        return self.kind == "dbi"


@dataclass(frozen=True)
class PotentialSpec:
    """A potential on a one-dimensional target chart.

    evaluate and derivative accept floats or numpy arrays.  vacuum_exponent
    is the leading power of V near the vacuum point, used for localization
    classification and endpoint handling in the profile solver.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]
    vacuum_coordinate: float
    vacuum_exponent: float
    tag: str

    def sector(self) -> Sector:
        return Sector.BABY2D if self.domain[1] <= 1.0 else Sector.SKYRME3D


@dataclass(frozen=True)
class ModelParams:
    beta: float
    mu: float
    charge: int
    sector: Sector
    kinetic_law: KineticLaw = field(default_factory=KineticLaw.dbi)
    energy_scale: float = 1.0

    @property
    def sigma(self) -> float:
        """beta^2 / mu^2, the single shape parameter of the 3-D profiles."""
        return self.beta ** 2 / self.mu ** 2


def validate_params(params: ModelParams) -> ModelParams:
    """Return params unchanged if all invariants hold, else raise."""
    if params.beta <= 0:
        raise DbisolError(f"beta must be positive, got {params.beta}")
    if params.mu < 0:
        raise DbisolError(f"mu must be non-negative, got {params.mu}")
    if int(params.charge) != params.charge or params.charge == 0:
        raise DbisolError(f"topological charge must be a nonzero integer, got {params.charge}")
    if params.energy_scale <= 0:
        raise DbisolError(f"energy_scale must be positive, got {params.energy_scale}")
    if not isinstance(params.sector, Sector):
        raise DbisolError(f"unknown sector {params.sector!r}")
    law = params.kinetic_law
    if law.kind not in ("dbi", "power"):
        raise DbisolError(f"unknown kinetic law {law.kind!r}")
    if law.kind == "power":
        if law.alpha_k is None or law.alpha_k <= 0.5:
            raise DbisolError(
                "power-family exponent must exceed 1/2; at and below that value the "
                "first-order law cannot meet the vacuum boundary condition "
                f"(got {law.alpha_k})")
    return params


# numerically stable 1 - cos(xi) and (xi - cos xi sin xi)/2

def _one_minus_cos(xi):
    xi = np.asarray(xi, dtype=float)
    return 2.0 * np.sin(0.5 * xi) ** 2


def _eta(xi):
    xi = np.asarray(xi, dtype=float)
    x2 = xi * xi
    # series of xi - cos(xi) sin(xi) below 0.1, exact form above; the direct
    # expression loses all digits at small xi
    series = xi * x2 * (2.0 / 3.0 - x2 * (2.0 / 15.0 - x2 * (4.0 / 315.0 - x2 * (2.0 / 2835.0))))
    exact = xi - np.cos(xi) * np.sin(xi)
    return 0.5 * np.where(np.abs(xi) < 0.1, series, exact)


def _eta_deriv(xi):
    return np.sin(np.asarray(xi, dtype=float)) ** 2


def make_potential(tag: str, alpha: float | None = None, *,
                   evaluate: Callable | None = None,
                   derivative: Callable | None = None,
                   domain: tuple[float, float] | None = None,
                   vacuum_coordinate: float | None = None,
                   vacuum_exponent: float | None = None) -> PotentialSpec:
    """Build one of the built-in potentials or wrap a custom one.

    Tags: "old-baby-power" (requires alpha > 0), "skyrme-standard",
    "bps-potential", "custom" (requires every field; the declared
    vacuum_exponent is cross-checked against a log-log fit).
    """
    if tag == "old-baby-power":
        if alpha is None or alpha <= 0:
            raise DbisolError(f"old-baby-power requires a positive exponent, got {alpha}")
        a = float(alpha)
        return PotentialSpec(
            evaluate=lambda h: np.power(np.asarray(h, dtype=float), a),
            derivative=lambda h: a * np.power(np.asarray(h, dtype=float), a - 1.0),
            domain=(0.0, 1.0),
            vacuum_coordinate=0.0,
            vacuum_exponent=a,
            tag=tag,
        )
    if tag == "skyrme-standard":
        return PotentialSpec(
            evaluate=_one_minus_cos,
            derivative=lambda xi: np.sin(np.asarray(xi, dtype=float)),
            domain=(0.0, math.pi),
            vacuum_coordinate=0.0,
            vacuum_exponent=2.0,
            tag=tag,
        )
    if tag == "bps-potential":
        return PotentialSpec(
            evaluate=_eta,
            derivative=_eta_deriv,
            domain=(0.0, math.pi),
            vacuum_coordinate=0.0,
            vacuum_exponent=3.0,
            tag=tag,
        )
    if tag == "custom":
        missing = [name for name, v in (("evaluate", evaluate), ("derivative", derivative),
                                        ("domain", domain), ("vacuum_coordinate", vacuum_coordinate),
                                        ("vacuum_exponent", vacuum_exponent)) if v is None]
        if missing:
            raise DbisolError(f"custom potential requires {', '.join(missing)}")
        if vacuum_exponent <= 0:
            raise DbisolError(f"vacuum_exponent must be positive, got {vacuum_exponent}")
        spec = PotentialSpec(evaluate, derivative, tuple(map(float, domain)),
                             float(vacuum_coordinate), float(vacuum_exponent), tag)
        fitted = fit_vacuum_exponent(spec)
        if not math.isclose(fitted, spec.vacuum_exponent, rel_tol=0.15):
            raise DbisolError(
                f"declared vacuum_exponent {spec.vacuum_exponent} disagrees with the "
                f"log-log fit near the vacuum ({fitted:.4f})")
        return spec
    raise DbisolError(f"unknown potential tag {tag!r}")


def fit_vacuum_exponent(potential: PotentialSpec, decades: tuple[float, float] = (-6.0, -3.0),
                        npts: int = 25) -> float:
    """Least-squares slope of log V against log(distance to the vacuum)."""
    lo, hi = potential.domain
    span = hi - lo
    d = np.logspace(decades[0], decades[1], npts) * span
    if potential.vacuum_coordinate <= 0.5 * (lo + hi):
        s = potential.vacuum_coordinate + d
    else:
        s = potential.vacuum_coordinate - d
    v = np.asarray(potential.evaluate(s), dtype=float)
    if np.any(v <= 0):
        raise DbisolError("potential is not positive next to its vacuum")
    slope = np.polyfit(np.log(d), np.log(v), 1)[0]
    return float(slope)


@dataclass(frozen=True)
class TargetMeasure:
    """Unit-mass weight on the target chart used for potential averages."""

    weight: Callable[[np.ndarray], np.ndarray]
    domain: tuple[float, float]

    def mass(self) -> float:
        val, _ = quad(lambda s: float(self.weight(s)), *self.domain,
                      epsabs=1e-13, epsrel=1e-12, limit=200)
        return val

    def average(self, fn: Callable[[float], float]) -> float:
        val, _ = quad(lambda s: float(self.weight(s)) * float(fn(s)), *self.domain,
                      epsabs=1e-13, epsrel=1e-12, limit=200)
        return val


def target_measure(sector: Sector) -> TargetMeasure:
    """Unit-mass measure: flat on [0,1] for the planar chart, (2/pi) sin^2 on [0,pi]."""
    if sector is Sector.BABY2D:
        return TargetMeasure(lambda h: np.ones_like(np.asarray(h, dtype=float)), (0.0, 1.0))
    return TargetMeasure(lambda xi: (2.0 / math.pi) * np.sin(np.asarray(xi, dtype=float)) ** 2,
                         (0.0, math.pi))
