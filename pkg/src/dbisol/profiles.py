"""Soliton profile construction and classification.

Profiles are built by quadrature of the separable inverse map: the
first-order law gives the slope as a function of the field alone, so the
coordinate is the integral of 1/slope from the anti-vacuum boundary.  The
vanishing of the slope at the vacuum is removed by the substitution
field = t^p with p chosen from the near-vacuum exponent of the potential,
after which the integrand is smooth and a composite Gauss-Legendre rule is
exact to machine precision.  A forward adaptive stepper with vacuum-event
detection is provided as an independent cross-check.

Closed-form evaluators for the three exactly solvable cases live here too,
together with tail classification.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .bps import BpsLaw, bps_law_for
from .errors import DbisolError, NoSolitonError, SectorMismatchError
from .model import ModelParams, PotentialSpec, Sector, validate_params
from .numerics import CumulativeIntegral, bisect_monotone

__all__ = [
    "LocalizationClass", "GridSpec", "SolitonProfile",
    "solve_profile", "solve_profile_forward", "profile_on_grid", "profile_field_at",
    "baby_old_exact", "baby_old_radius",
    "skyrme_standard_exact", "skyrme_standard_radius", "skyrme_standard_implicit_lhs",
    "skyrme_bps_exact", "skyrme_bps_radius",
    "angular_profile", "coordinate_map",
    "classify_localization", "tail_fit", "endpoint_asymptotics",
    "write_profile_csv", "BABY_LOCALIZATION_THRESHOLD", "SKYRME_LOCALIZATION_THRESHOLD",
]

BABY_LOCALIZATION_THRESHOLD = 2.0
# Threshold in the radial chart of the 3-D sector: the inverse map
# z(xi) = int sin^2 / sqrt(1 - Q^-2) converges at the vacuum exactly when the
# near-vacuum power of V is below 6 (integrand ~ xi^(2 - a/2)).  Both built-in
# 3-D potentials (a = 2 and a = 3) produce compactons, with finite radii given
# by the closed forms below.
SKYRME_LOCALIZATION_THRESHOLD = 6.0


class LocalizationClass(enum.Enum):
    COMPACTON = "compacton"
    EXPONENTIAL = "exponential"
    POWER_LAW = "power-law"
    AMBIGUOUS = "ambiguous"


@dataclass(frozen=True)
class GridSpec:
    """Sampling request for solve_profile.

    count is ignored when spacing is given.  Non-compact profiles are
    resolved down to field_floor; compact profiles get `padding` exact-zero
    samples past the radius.
    """

    count: int = 1000
    spacing: float | None = None
    field_floor: float = 1e-9
    padding: int = 10
    segments: int = 1500


@dataclass(frozen=True)
class SolitonProfile:
    sector: Sector
    coordinate_name: str
    coordinates: np.ndarray
    field: np.ndarray
    derivative: np.ndarray
    energy_density: np.ndarray
    charge_density: np.ndarray
    compacton_radius: float | None
    params: ModelParams
    potential: PotentialSpec | None
    bps_backed: bool = True
    field_floor: float = 0.0

    def __post_init__(self):
        for arr in (self.coordinates, self.field, self.derivative,
                    self.energy_density, self.charge_density):
            arr.setflags(write=False)

    def samples(self):
        """Rows of (coordinate, field, derivative, energy density, charge density)."""
        return zip(self.coordinates, self.field, self.derivative,
                   self.energy_density, self.charge_density)

    @property
    def anti_vacuum(self) -> float:
        return 1.0 if self.sector is Sector.BABY2D else math.pi

    def field_range(self) -> tuple[float, float]:
        """Traversed field interval (min, max), padding excluded."""
        pos = self.field[self.field > 0]
        lo = float(pos.min()) if pos.size else 0.0
        return (0.0 if lo <= self.field_floor else lo, float(self.field[0]))

    def validate_invariants(self, boundary_tol: float = 1e-8) -> None:
        f = self.field
        if np.any(np.diff(f) > 1e-12):
            raise DbisolError("field is not monotone non-increasing")
        if abs(f[0] - self.anti_vacuum) > boundary_tol:
            raise DbisolError("profile does not start at the anti-vacuum value")
        if f[-1] > max(boundary_tol, 10.0 * self.field_floor):
            raise DbisolError("profile does not reach the vacuum")
        sgn = 1.0 if self.params.charge > 0 else -1.0
        if np.any(sgn * self.charge_density < -1e-14):
            raise DbisolError("charge density changes sign against the topological charge")
        if not np.all(np.isfinite(self.energy_density)):
            raise DbisolError("energy density is not finite everywhere")


def coordinate_map(r, sector: Sector, params: ModelParams):
    """Radial coordinate of the reduced problem: x = r^2/2 or z = 2 sqrt2 beta pi^2 r^3 / |n|."""
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise DbisolError("radius must be non-negative")
    if sector is Sector.BABY2D:
        out = 0.5 * rr * rr
    else:
        out = 2.0 * math.sqrt(2.0) * params.beta * math.pi ** 2 / abs(params.charge) * rr ** 3
    return out if out.ndim else float(out)


def angular_profile(theta):
    """tan(theta/2); the solution of the polar equation with g(0) = 0."""
    th = np.asarray(theta, dtype=float)
    if np.any((th < 0) | (th >= math.pi)):
        raise DbisolError("theta must lie in [0, pi); the map has a pole at pi")
    out = np.tan(0.5 * th)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# closed forms

def baby_old_radius(params: ModelParams) -> float:
    return abs(params.charge) / (2.0 * math.pi) * math.sqrt(
        1.0 / (2.0 * params.beta ** 2) + 1.0 / params.mu ** 2)


def baby_old_exact(x, params: ModelParams):
    """Planar compacton of the linear potential V = h."""
    xx = np.asarray(x, dtype=float)
    if np.any(xx < 0):
        raise DbisolError("coordinate must be non-negative")
    x0 = baby_old_radius(params)
    v = 8.0 * math.pi ** 2 * params.mu ** 4 / (params.charge ** 2 * params.beta ** 2)
    w2 = v * (xx - x0) ** 2
    h = params.beta ** 2 / params.mu ** 2 * w2 / (1.0 + np.sqrt(1.0 + w2))
    out = np.where(xx <= x0, h, 0.0)
    return out if out.ndim else float(out)


def skyrme_standard_implicit_lhs(xi, sigma: float):
    """Left side of the implicit profile relation, in half-angle form.

    Monotone decreasing from the radius value at xi = 0 to 0 at xi = pi.
    """
    x = np.asarray(xi, dtype=float)
    s2 = np.sin(0.5 * x) ** 2
    c2 = np.cos(0.5 * x) ** 2
    out = (sigma + 1.0 - 2.0 * s2) * np.sqrt(c2 * (sigma + s2)) \
        + (1.0 - sigma ** 2) * np.arctan(np.sqrt(c2 / (sigma + s2)))
    return out if out.ndim else float(out)


def skyrme_standard_radius(sigma: float) -> float:
    rs = math.sqrt(sigma)
    return rs * (1.0 + sigma) + (1.0 - sigma ** 2) * math.atan(1.0 / rs)


def skyrme_standard_exact(z, sigma: float, tol_iters: int = 60):
    """Profile of the standard potential by bisection on the implicit relation.

    Within a machine-level band of the radius the implicit relation is
    quadratically degenerate and bisection returns square-root-of-epsilon
    noise, so the edge asymptote xi = sqrt(2 (z0 - z)) / sigma^(1/4) is used
    there instead (its own error in that band is far below 1e-12).
    """
    if sigma <= 0:
        raise DbisolError("sigma must be positive")
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    z0 = skyrme_standard_radius(sigma)
    xi = bisect_monotone(lambda t: skyrme_standard_implicit_lhs(t, sigma), zz,
                         0.0, math.pi, increasing=False, iters=tol_iters)
    u = z0 - zz
    edge = np.sqrt(2.0 * np.clip(u, 0.0, None)) * sigma ** -0.25
    xi = np.where(u < 1e-9 * max(1.0, z0), edge, xi)
    # a square-root edge turns machine-level disagreement about the radius
    # into sqrt(eps)-level field noise, so snap to the vacuum inside a band
    # a few hundred ulps wide
    xi = np.where(u < 1e-12 * max(1.0, z0), 0.0, xi)
    xi = np.where(zz <= 0.0, math.pi, xi)
    return xi if np.ndim(z) else float(xi[0])


def skyrme_bps_radius(sigma: float) -> float:
    return 0.5 * math.sqrt(math.pi) * math.sqrt(math.pi + 4.0 * sigma)


def _eta_of_z(z, sigma: float):
    z0 = skyrme_bps_radius(sigma)
    w = (z0 - np.asarray(z, dtype=float)) / sigma
    return sigma * w * w / (1.0 + np.sqrt(1.0 + w * w))


def skyrme_bps_exact(z, sigma: float, tol_iters: int = 60):
    """Profile of the cubic-vacuum potential: closed form in eta, inverted to xi."""
    if sigma <= 0:
        raise DbisolError("sigma must be positive")
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    z0 = skyrme_bps_radius(sigma)
    target = _eta_of_z(np.clip(zz, 0.0, z0), sigma)

    def eta(x):
        x2 = x * x
        series = x * x2 * (2.0 / 3.0 - x2 * (2.0 / 15.0 - x2 * (4.0 / 315.0 - x2 * (2.0 / 2835.0))))
        return 0.5 * np.where(np.abs(x) < 0.1, series, x - np.cos(x) * np.sin(x))

    xi = bisect_monotone(eta, target, 0.0, math.pi, increasing=True, iters=tol_iters)
    xi = np.where(zz >= z0, 0.0, xi)
    xi = np.where(zz <= 0.0, math.pi, xi)
    return xi if np.ndim(z) else float(xi[0])


def endpoint_asymptotics(sigma: float) -> tuple[float, float]:
    """(edge, core) coefficients of the standard-potential profile.

    Near the radius xi ~ edge * sqrt(2 (z0 - z)); near the origin
    xi ~ pi - core * z^(1/3).
    """
    if sigma <= 0:
        raise DbisolError("sigma must be positive")
    edge = sigma ** -0.25
    core = 6.0 ** (1.0 / 3.0) * (1.0 + sigma) ** (1.0 / 6.0) / (2.0 + sigma) ** (1.0 / 3.0)
    return edge, core


# ---------------------------------------------------------------------------
# classification

def classify_localization(vacuum_exponent: float, sector: Sector) -> LocalizationClass:
    """Localization type from the near-vacuum power of the potential.

    Planar thresholds sit at 2.  In the 3-D radial chart the inverse-map
    integrability puts them at 6; see SKYRME_LOCALIZATION_THRESHOLD.
    """
    if vacuum_exponent <= 0:
        raise DbisolError("vacuum exponent must be positive")
    th = BABY_LOCALIZATION_THRESHOLD if sector is Sector.BABY2D else SKYRME_LOCALIZATION_THRESHOLD
    if abs(vacuum_exponent - th) < 1e-12:
        return LocalizationClass.EXPONENTIAL
    if vacuum_exponent < th:
        return LocalizationClass.COMPACTON
    return LocalizationClass.POWER_LAW


def tail_fit(profile: SolitonProfile, tie_tol: float = 1e-6,
             min_samples: int = 10) -> LocalizationClass:
    """Empirical localization class from the solved tail.

    Finite-radius termination wins immediately.  Otherwise log(field) is
    fitted against the coordinate and against log(coordinate) over the last
    decade of field magnitude and the better correlation decides; fits whose
    r^2 differ by less than tie_tol are reported as Ambiguous.
    """
    if profile.compacton_radius is not None:
        return LocalizationClass.COMPACTON
    f = profile.field
    x = profile.coordinates
    pos = f > 0
    if f[pos].min() > 1e-3:
        raise DbisolError("tail not resolved below 1e-3; solve deeper before fitting")
    fmin = f[pos].min()
    sel = pos & (f <= 10.0 * fmin) & (x > 0)
    if sel.sum() < min_samples:
        raise DbisolError("insufficient tail samples for a fit")
    logf = np.log(f[sel])

    def r2(u):
        c = np.corrcoef(u, logf)[0, 1]
        return c * c

    r2_exp = r2(x[sel])
    r2_pow = r2(np.log(x[sel]))
    if abs(r2_exp - r2_pow) < tie_tol:
        return LocalizationClass.AMBIGUOUS
    return LocalizationClass.EXPONENTIAL if r2_exp > r2_pow else LocalizationClass.POWER_LAW


# ---------------------------------------------------------------------------
# solver

def _slope_scale(sector: Sector, params: ModelParams) -> float:
    """Chart factor between B0 and the profile slope combination."""
    if sector is Sector.BABY2D:
        return 2.0 * math.pi / abs(params.charge)
    return 1.0 / (math.sqrt(2.0) * params.beta)


def _near_vacuum_density_exponent(model: ModelParams, potential: PotentialSpec) -> float:
    """Power of the field with which B0 vanishes at the vacuum."""
    if model.kinetic_law.is_dbi:
        return potential.vacuum_exponent / 2.0
    return potential.vacuum_exponent / (2.0 * model.kinetic_law.alpha_k)


def _is_compacton(sector: Sector, a: float) -> bool:
    # a is the vanishing power of B0; the inverse integrand behaves like
    # field^-a (planar) or field^(2-a) (3-D)
    if sector is Sector.BABY2D:
        return a < 1.0
    return a < 3.0


def _substitution_power(sector: Sector, a: float) -> float:
    if sector is Sector.BABY2D:
        return max(2.0, 1.0 / (1.0 - a)) if a < 1.0 else 2.0
    return max(2.0, 1.0 / (3.0 - a)) if a < 3.0 else 2.0


def _assemble_columns(sector: Sector, params: ModelParams, potential: PotentialSpec,
                      law: BpsLaw, field: np.ndarray, n_pad: int):
    """Derivative, energy density and charge density along a first-order profile."""
    n = params.charge
    beta = params.beta
    interior = slice(0, len(field) - n_pad if n_pad else len(field))
    deriv = np.zeros_like(field)
    edens = np.zeros_like(field)
    cdens = np.zeros_like(field)
    f = field[interior]
    b0 = np.asarray(law.density(f), dtype=float)
    v = np.asarray(potential.evaluate(f), dtype=float)
    if sector is Sector.BABY2D:
        slope = law.sign * (2.0 * math.pi / abs(n)) * b0
        deriv[interior] = slope
        if params.kinetic_law.is_dbi:
            r2 = n ** 2 * slope ** 2 / (8.0 * math.pi ** 2 * beta ** 2)
            kin = beta ** 2 * r2 / (1.0 + np.sqrt(np.maximum(1.0 - r2, 0.0)))
        else:
            kin = np.power(b0 * b0, params.kinetic_law.alpha_k)
        edens[interior] = 2.0 * math.pi * (kin + params.mu ** 2 * v) * params.energy_scale
        cdens[interior] = n * np.abs(slope)
    else:
        y = law.sign * b0 / (math.sqrt(2.0) * beta)
        # the slope itself diverges at the anti-vacuum boundary sample
        at_pole = f >= math.pi - 1e-12
        with np.errstate(divide="ignore", invalid="ignore"):
            deriv[interior] = np.where(at_pole, -np.inf,
                                       y / np.where(at_pole, 1.0, np.sin(f) ** 2))
        kin = beta ** 2 * y * y / (1.0 + np.sqrt(np.maximum(1.0 - y * y, 0.0)))
        pref = math.sqrt(2.0) * abs(n) / (3.0 * math.pi * beta)
        edens[interior] = pref * (kin + params.mu ** 2 * v) * params.energy_scale
        cdens[interior] = n * (2.0 / math.pi) * np.abs(y)
    return deriv, edens, cdens


class _InverseMap:
    """Cumulative inverse map of one first-order profile.

    Carries the regularized quadrature of coordinate(field) and inverts it on
    arbitrary coordinate grids.
    """

    def __init__(self, model: ModelParams, potential: PotentialSpec,
                 law: BpsLaw | None = None, *, field_floor: float = 1e-9,
                 segments: int = 1500):
        validate_params(model)
        sector = model.sector
        anti = 1.0 if sector is Sector.BABY2D else math.pi
        if abs(potential.domain[1] - anti) > 1e-12 or potential.domain[0] != 0.0:
            raise SectorMismatchError(
                f"potential domain {potential.domain} does not match sector {sector.value}")
        if model.mu == 0.0:
            raise NoSolitonError(
                "mu = 0 removes the potential term; the first-order law degenerates to "
                "a vanishing slope and cannot connect the anti-vacuum boundary to the vacuum")
        if sector is Sector.SKYRME3D and not model.kinetic_law.is_dbi:
            raise DbisolError("power-family profiles are defined on the planar chart only")

        the_law = law if law is not None else bps_law_for(model, potential)
        scale = _slope_scale(sector, model)

        def inv_integrand(f):
            # 1/|d(coordinate)/d(field)|
            b0 = np.asarray(the_law.density(f), dtype=float)
            if sector is Sector.BABY2D:
                return 1.0 / (scale * b0)
            return np.sin(f) ** 2 / (scale * b0)

        a = _near_vacuum_density_exponent(model, potential)
        self.compact = _is_compacton(sector, a)
        self.law = the_law
        self.anti = anti
        self.field_floor = field_floor
        if self.compact:
            p = _substitution_power(sector, a)
            t_hi = anti ** (1.0 / p)

            def g(t):
                tt = np.asarray(t, dtype=float)
                return p * np.power(tt, p - 1.0) * inv_integrand(np.power(tt, p))

            self.cum = CumulativeIntegral(g, 0.0, t_hi, segments=segments)
            self.to_field = lambda t: np.power(t, p)
        else:
            def g(s):
                f = np.exp(np.asarray(s, dtype=float))
                return f * inv_integrand(f)

            self.cum = CumulativeIntegral(g, math.log(field_floor), math.log(anti),
                                          segments=segments)
            self.to_field = np.exp
        self.extent = self.cum.total
        if not math.isfinite(self.extent) or self.extent <= 0:
            raise DbisolError("inverse map integral did not converge; slope singularity "
                              "is not integrable for this potential")

    def field_at(self, coords: np.ndarray) -> np.ndarray:
        t = self.cum.invert(self.extent - np.asarray(coords, dtype=float))
        field = self.to_field(t)
        return np.where(np.asarray(coords) >= self.extent, 0.0 if self.compact else field, field)


def profile_field_at(model: ModelParams, potential: PotentialSpec, coords, *,
                     law: BpsLaw | None = None, segments: int = 1500) -> np.ndarray:
    """Field values of the first-order profile at arbitrary coordinates."""
    return _InverseMap(model, potential, law, segments=segments).field_at(
        np.asarray(coords, dtype=float))


def solve_profile(model: ModelParams, potential: PotentialSpec,
                  grid_spec: GridSpec | None = None, *,
                  law: BpsLaw | None = None) -> SolitonProfile:
    """Construct the symmetric profile of the first-order law.

    The inverse map coordinate(field) is integrated by a composite
    Gauss-Legendre rule in a regularized parameter and then inverted on a
    uniform coordinate grid.  Compact profiles report their radius and are
    padded with exact-zero samples; others are resolved down to
    grid_spec.field_floor.
    """
    grid = grid_spec or GridSpec()
    inv = _InverseMap(model, potential, law, field_floor=grid.field_floor,
                      segments=grid.segments)
    sector = model.sector
    anti = inv.anti
    the_law = inv.law
    cum = inv.cum
    to_field = inv.to_field
    compact = inv.compact
    extent = inv.extent

    if grid.spacing is not None:
        n_interior = int(math.floor(extent / grid.spacing)) + 1
        coords = np.arange(n_interior, dtype=float) * grid.spacing
        delta = grid.spacing
    else:
        coords = np.linspace(0.0, extent, grid.count)
        delta = coords[1] - coords[0]
    t = cum.invert(extent - coords)
    field = to_field(t)
    field[0] = anti
    n_pad = grid.padding if compact else 0
    if n_pad:
        pad_coords = coords[-1] + delta * np.arange(1, n_pad + 1)
        coords = np.concatenate([coords, pad_coords])
        field = np.concatenate([field, np.zeros(n_pad)])

    deriv, edens, cdens = _assemble_columns(sector, model, potential, the_law, field, n_pad)
    prof = SolitonProfile(
        sector=sector,
        coordinate_name="x" if sector is Sector.BABY2D else "z",
        coordinates=coords,
        field=field,
        derivative=deriv,
        energy_density=edens,
        charge_density=cdens,
        compacton_radius=extent if compact else None,
        params=model,
        potential=potential,
        bps_backed=True,
        field_floor=0.0 if compact else grid.field_floor,
    )
    return prof


def profile_on_grid(field_fn: Callable[[np.ndarray], np.ndarray], model: ModelParams,
                    potential: PotentialSpec, *, spacing: float | None = None,
                    count: int | None = None, extent: float,
                    compacton_radius: float | None = None) -> SolitonProfile:
    """Sample an exact evaluator on a uniform grid and attach law-based columns."""
    validate_params(model)
    if spacing is not None:
        coords = np.arange(0.0, extent + 0.5 * spacing, spacing)
    else:
        coords = np.linspace(0.0, extent, count or 1000)
    field = np.asarray(field_fn(coords), dtype=float)
    law = bps_law_for(model, potential)
    deriv, edens, cdens = _assemble_columns(model.sector, model, potential, law, field, 0)
    return SolitonProfile(
        sector=model.sector,
        coordinate_name="x" if model.sector is Sector.BABY2D else "z",
        coordinates=coords,
        field=field,
        derivative=deriv,
        energy_density=edens,
        charge_density=cdens,
        compacton_radius=compacton_radius,
        params=model,
        potential=potential,
        bps_backed=True,
    )


def solve_profile_forward(model: ModelParams, potential: PotentialSpec, *,
                          floor: float = 1e-10, rtol: float = 1e-10,
                          count: int = 1000) -> tuple[np.ndarray, np.ndarray]:
    """Cross-check oracle: forward ODE integration with vacuum-event detection.

    Returns (coordinates, field).  The planar sector steps the field itself;
    the 3-D sector steps the incomplete volume variable, which stays regular
    at the anti-vacuum boundary, and maps back to the field by bisection.
    """
    validate_params(model)
    if model.mu == 0.0:
        raise NoSolitonError("mu = 0 admits no profile")
    law = bps_law_for(model, potential)
    if model.sector is Sector.BABY2D:
        def rhs(x, y):
            h = min(max(y[0], 0.0), 1.0)
            return [-2.0 * math.pi / abs(model.charge) * float(law.density(h))]

        def hit_floor(x, y):
            return y[0] - floor
        hit_floor.terminal = True
        hit_floor.direction = -1
        span = 50.0 * baby_old_radius(model) + 10.0
        sol = solve_ivp(rhs, (0.0, span), [1.0], events=hit_floor, rtol=rtol,
                        atol=1e-14, dense_output=True, method="RK45", max_step=span / 200)
        x_end = sol.t_events[0][0] if sol.t_events[0].size else sol.t[-1]
        xs = np.linspace(0.0, x_end, count)
        hs = sol.sol(xs)[0]
        return xs, np.clip(hs, 0.0, 1.0)

    # 3-D: integrate deta/dz = -B0/(sqrt2 beta) with eta the incomplete volume
    def eta(x):
        x = np.asarray(x, dtype=float)
        x2 = x * x
        series = x * x2 * (2.0 / 3.0 - x2 * (2.0 / 15.0 - x2 * (4.0 / 315.0)))
        return 0.5 * np.where(np.abs(x) < 0.1, series, x - np.cos(x) * np.sin(x))

    eta_max = eta(math.pi)

    def xi_of_eta(e):
        if e <= 0:
            return 0.0
        if e >= eta_max:
            return math.pi
        return brentq(lambda x: float(eta(x)) - e, 0.0, math.pi, xtol=1e-14)

    def rhs(z, y):
        xi = xi_of_eta(y[0])
        return [-float(law.density(xi)) / (math.sqrt(2.0) * model.beta)]

    def hit_floor(z, y):
        return y[0] - floor
    hit_floor.terminal = True
    hit_floor.direction = -1
    span = 1000.0
    sol = solve_ivp(rhs, (0.0, span), [float(eta_max)], events=hit_floor, rtol=rtol,
                    atol=1e-14, dense_output=True, method="RK45")
    z_end = sol.t_events[0][0] if sol.t_events[0].size else sol.t[-1]
    zs = np.linspace(0.0, z_end, count)
    etas = np.clip(sol.sol(zs)[0], 0.0, float(eta_max))
    xis = np.array([xi_of_eta(e) for e in etas])
    return zs, xis


def write_profile_csv(profile: SolitonProfile, path) -> None:
    """Export the sample table; floats carry 17 significant digits."""
    lines = ["coordinate,field,derivative,energy_density,charge_density"]
    for row in profile.samples():
        lines.append(",".join(f"{v:.17g}" for v in row))
    text = "\n".join(lines) + "\n"
    with open(path, "w") as fh:
        fh.write(text)
