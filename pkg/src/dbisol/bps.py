"""First-order reduction of the static problem.

The static energy density depends on the field only through the charge
density B0 and the potential, so the second-order equations integrate once to
an algebraic relation B0 = W(field).  This module provides that relation in
closed form for the square-root (DBI) and pure-power energy densities, a
numeric root-finder that recovers it from an arbitrary density F(W, field),
and a finite-difference residual check of the reduced second-order equations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DbisolError, SectorMismatchError
from .model import ModelParams, PotentialSpec, Sector, validate_params

__all__ = [
    "BpsLaw", "EomResidualReport", "bps_law_for",
    "dbi_bps_density", "power_bps_density", "numeric_bps_density",
    "baby_bps_slope", "skyrme_bps_slope", "eom_residual",
]


def _rel_ceiling(v_over_b2):
    """sqrt(1 - (1 + e)^-2) written as sqrt(e(2+e))/(1+e), exact for tiny e."""
    e = np.asarray(v_over_b2, dtype=float)
    return np.sqrt(e * (2.0 + e)) / (1.0 + e)


def dbi_bps_density(v_value, params: ModelParams):
    """Charge density B0 solving the DBI first-order law at potential value V.

    B0 = sqrt(2) beta sqrt(1 - (mu^2 V / beta^2 + 1)^-2); monotone in V and
    bounded by sqrt(2) beta.
    """
    if not params.kinetic_law.is_dbi:
        raise DbisolError("dbi_bps_density requires the DBI kinetic law")
    v = np.asarray(v_value, dtype=float)
    if np.any(v < 0):
        raise DbisolError("potential value must be non-negative")
    out = math.sqrt(2.0) * params.beta * _rel_ceiling(params.mu ** 2 * v / params.beta ** 2)
    return out if out.ndim else float(out)


def power_bps_density(v_value, mu: float, alpha_k: float):
    """Charge density for the pure-power density (B0^2)^alpha_k + mu^2 V."""
    if alpha_k <= 0.5:
        raise DbisolError(f"power-family exponent must exceed 1/2, got {alpha_k}")
    v = np.asarray(v_value, dtype=float)
    if np.any(v < 0):
        raise DbisolError("potential value must be non-negative")
    out = np.power(mu ** 2 * v / (2.0 * alpha_k - 1.0), 1.0 / (2.0 * alpha_k))
    return out if out.ndim else float(out)


def numeric_bps_density(F: Callable[[float, float], float], field_value: float, *,
                        dF_dW: Callable[[float, float], float] | None = None,
                        w_max: float | None = None, tol: float = 1e-12) -> float:
    """Root W >= 0 of W dF/dW - F = 0 at fixed field value.

    Bracketing bisection refined by Newton steps.  When no analytic dF/dW is
    supplied, a central difference is used and a warning is emitted.
    """
    if dF_dW is None:
        warnings.warn("numeric_bps_density: derivative unavailable, falling back to "
                      "central finite differences", stacklevel=2)

        def dF_dW(w, s, _F=F):
            d = 1e-7 * max(1.0, abs(w))
            return (_F(w + d, s) - _F(max(w - d, 0.0), s)) / (d + min(w, d))

    def g(w):
        return w * dF_dW(w, field_value) - F(w, field_value)

    if abs(F(0.0, field_value)) <= tol:
        return 0.0
    lo, glo = 0.0, g(0.0)
    if glo > 0:
        raise DbisolError("no sign change found in the search bracket")
    if w_max is not None:
        hi = w_max
        if g(hi) < 0:
            raise DbisolError("no sign change found in the search bracket")
    else:
        hi = 1.0
        for _ in range(80):
            if g(hi) > 0:
                break
            hi *= 2.0
        else:
            raise DbisolError("no sign change found in the search bracket")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    w = 0.5 * (lo + hi)
    # Newton polish on g; falls back to the bisection value if a step escapes
    for _ in range(4):
        d = 1e-8 * max(1.0, abs(w))
        gp = (g(w + d) - g(w - d)) / (2.0 * d)
        if gp == 0:
            break
        step = g(w) / gp
        if not (lo - tol <= w - step <= hi + tol):
            break
        w -= step
    return float(w)


@dataclass(frozen=True)
class BpsLaw:
    """The relation B0 = W(field) for one model and potential.

    density maps a target coordinate to B0 >= 0; sign selects the branch of
    the slope (-1 for profiles decreasing from the anti-vacuum boundary to
    the vacuum, which is the boundary condition used throughout).
    """

    density: Callable[[np.ndarray], np.ndarray]
    sign: int
    origin: str

    def ceiling(self, params: ModelParams) -> float:
        return math.sqrt(2.0) * params.beta


def bps_law_for(model: ModelParams, potential: PotentialSpec) -> BpsLaw:
    """Closed-form first-order law for the model's kinetic prescription."""
    validate_params(model)
    if model.kinetic_law.is_dbi:
        def density(s):
            return math.sqrt(2.0) * model.beta * _rel_ceiling(
                model.mu ** 2 * np.asarray(potential.evaluate(s), dtype=float) / model.beta ** 2)
        return BpsLaw(density, -1, "closed-form DBI")
    ak = model.kinetic_law.alpha_k

    def density(s):
        return np.power(model.mu ** 2 * np.asarray(potential.evaluate(s), dtype=float)
                        / (2.0 * ak - 1.0), 1.0 / (2.0 * ak))
    return BpsLaw(density, -1, "closed-form power")


def baby_bps_slope(h, potential: PotentialSpec, params: ModelParams):
    """dh/dx on the first-order law; non-positive, zero exactly at the vacuum."""
    if params.sector is not Sector.BABY2D:
        raise SectorMismatchError("baby_bps_slope needs a Baby2D model")
    harr = np.asarray(h, dtype=float)
    if np.any((harr < 0) | (harr > 1)):
        raise DbisolError("field value outside [0, 1]")
    law = bps_law_for(params, potential)
    out = -2.0 * math.pi / abs(params.charge) * law.density(harr)
    return out if out.ndim else float(out)


def skyrme_bps_slope(xi, potential: PotentialSpec, params: ModelParams):
    """The combination sin^2(xi) dxi/dz on the first-order law, in [-1, 0]."""
    if params.sector is not Sector.SKYRME3D:
        raise SectorMismatchError("skyrme_bps_slope needs a Skyrme3D model")
    if not params.kinetic_law.is_dbi:
        raise DbisolError("the 3-D radial chart is defined for the DBI law only")
    xarr = np.asarray(xi, dtype=float)
    if np.any((xarr < 0) | (xarr > math.pi)):
        raise DbisolError("field value outside [0, pi]")
    out = -_rel_ceiling(params.mu ** 2 * np.asarray(potential.evaluate(xarr), dtype=float)
                        / params.beta ** 2)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class EomResidualReport:
    grid_spacing: float
    max_abs_residual: float
    residuals: np.ndarray
    coordinates: np.ndarray

    def __post_init__(self):
        self.residuals.setflags(write=False)
        self.coordinates.setflags(write=False)


def eom_residual(profile, model: ModelParams | None = None, *,
                 edge_margin: float | None = None,
                 vacuum_threshold: float = 1e-12) -> EomResidualReport:
    """Central-difference residual of the reduced second-order equation.

    Evaluated on interior samples only: full stencils, inside the support of
    the field, and at least edge_margin away from any support edge (default
    5 grid spacings), where the derivative of a compact profile degenerates.
    For a profile on the first-order law the maximum residual decays like the
    square of the spacing.
    """
    params = model if model is not None else profile.params
    if model is not None and model.sector is not profile.sector:
        raise SectorMismatchError("profile and model sectors differ")
    x = profile.coordinates
    f = profile.field
    if len(x) < 104:
        raise DbisolError("need at least 100 interior samples")
    steps = np.diff(x)
    delta = float(steps[0])
    if not np.allclose(steps, delta, rtol=1e-8, atol=1e-12):
        raise DbisolError("profile grid is not uniform")
    if edge_margin is None:
        edge_margin = 5.0 * delta

    pot = profile.potential
    if pot is None:
        raise DbisolError("profile carries no potential; cannot form the residual")

    u = np.full_like(f, np.nan)
    u[1:-1] = (f[2:] - f[:-2]) / (2.0 * delta)
    n2 = params.charge ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        if profile.sector is Sector.BABY2D:
            G = u / np.sqrt(np.maximum(1.0 - n2 * u * u / (8.0 * math.pi ** 2 * params.beta ** 2),
                                       1e-300))
        else:
            w = np.sin(f) ** 2 * u
            G = w / np.sqrt(np.maximum(1.0 - w * w, 1e-300))
    R = np.full_like(f, np.nan)
    dG = (G[3:-1] - G[1:-3]) / (2.0 * delta)
    if profile.sector is Sector.BABY2D:
        R[2:-2] = n2 * dG - 8.0 * math.pi ** 2 * params.mu ** 2 \
            * np.asarray(pot.derivative(f[2:-2]), dtype=float)
    else:
        R[2:-2] = params.beta ** 2 * np.sin(f[2:-2]) ** 2 * dG \
            - params.mu ** 2 * np.asarray(pot.derivative(f[2:-2]), dtype=float)

    support = f > vacuum_threshold
    # distance to the nearest support edge, counting domain endpoints
    idx = np.arange(len(x))
    in_support = idx[support]
    mask = np.zeros(len(x), dtype=bool)
    if in_support.size:
        lo_edge = x[in_support[0]]
        hi_edge = x[in_support[-1]]
        mask = support & ~np.isnan(R)
        mask &= (x - lo_edge >= edge_margin) & (hi_edge - x >= edge_margin)
        mask[:2] = False
        mask[-2:] = False
    res = R[mask]
    coords = x[mask]
    max_abs = float(np.max(np.abs(res))) if res.size else 0.0
    return EomResidualReport(delta, max_abs, res, coords)
