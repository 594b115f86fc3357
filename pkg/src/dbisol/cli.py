"""Command-line surface: solve, verify, bound, sweep, classify.

Outputs are deterministic for a fixed configuration and seed: floats are
written with 17 significant digits, JSON keys are sorted, and files are
written to a temporary name and atomically renamed so no partial artifact
survives a failure.

Exit codes: 0 success, 1 invalid configuration, 2 no soliton exists at the
requested couplings, 3 verification failures, 4 optimizer failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from .bounds import certify, compare_reference, optimize_bound, sharpness
from .bps import eom_residual
from .errors import DbisolError, NoSolitonError, OptimizerError
from .model import KineticLaw, ModelParams, Sector, make_potential, validate_params
from .observables import (bps_energy_integral, compute_energy_report,
                          large_beta_sweep, small_mu_sweep)
from .profiles import (GridSpec, baby_old_exact, baby_old_radius,
                       classify_localization, profile_on_grid, skyrme_standard_exact,
                       skyrme_standard_radius, solve_profile, tail_fit,
                       write_profile_csv)

__all__ = ["main", "RunConfig"]


# ---------------------------------------------------------------------------
# deterministic serialization

def _emit_json(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        if not math.isfinite(f):
            raise DbisolError("non-finite float in JSON output")
        return format(f, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_emit_json(x) for x in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(json.dumps(str(k)) + ": " + _emit_json(v) for k, v in items) + "}"
    raise DbisolError(f"cannot serialize {type(obj).__name__}")


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".dbisol-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json_atomic(path: str, obj) -> None:
    write_atomic(path, _emit_json(obj) + "\n")


# ---------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    command: str = ""
    sector: str = "baby"
    potential: str = "old:1"
    beta: float = 1.0
    mu: float = 1.0
    n: int = 1
    alpha_k: float | None = None
    grid: int = 1000
    out: str = "run"
    seed: int = 0
    tol: float = 1e-9
    order: int = 3
    samples: int = 1_000_000
    axis: str = "mu"
    values: str = ""
    compare_pavlovskii: bool = False
    inject_perturbation: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @staticmethod
    def from_dict(d: dict) -> "RunConfig":
        known = {f.name for f in fields(RunConfig)}
        unknown = set(d) - known
        if unknown:
            raise DbisolError(f"unknown config keys: {sorted(unknown)}")
        return RunConfig(**d)

    def model(self) -> ModelParams:
        sector = {"baby": Sector.BABY2D, "skyrme": Sector.SKYRME3D}.get(self.sector)
        if sector is None:
            raise DbisolError(f"unknown sector {self.sector!r}")
        law = KineticLaw.dbi() if self.alpha_k is None else KineticLaw.power(self.alpha_k)
        return validate_params(ModelParams(self.beta, self.mu, self.n, sector, law))

    def make_potential(self):
        tag = self.potential
        if tag.startswith("old:"):
            return make_potential("old-baby-power", float(tag.split(":", 1)[1]))
        if tag == "standard":
            return make_potential("skyrme-standard")
        if tag == "bps":
            return make_potential("bps-potential")
        if tag.startswith("power:"):
            a = float(tag.split(":", 1)[1])
            if self.sector == "baby":
                return make_potential("old-baby-power", a)
            return make_potential(
                "custom",
                evaluate=lambda xi: np.power(np.asarray(xi, dtype=float), a),
                derivative=lambda xi: a * np.power(np.asarray(xi, dtype=float), a - 1.0),
                domain=(0.0, math.pi), vacuum_coordinate=0.0, vacuum_exponent=a)
        raise DbisolError(f"unknown potential {tag!r}; use old:A, standard, bps or power:A")


_BOOL_KEYS = {"compare_pavlovskii", "inject_perturbation"}
_INT_KEYS = {"n", "grid", "seed", "order", "samples"}
_FLOAT_KEYS = {"beta", "mu", "alpha_k", "tol"}


def _coerce(key: str, raw: str):
    if key in _BOOL_KEYS:
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if key in _INT_KEYS:
        return int(raw)
    if key in _FLOAT_KEYS:
        return float(raw)
    return raw.strip()


def read_config_file(path: str) -> dict:
    """key=value lines, # comments; keys match flag names with underscores."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DbisolError(f"{path}:{lineno}: expected key=value")
            key, raw = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if key not in {f.name for f in fields(RunConfig)}:
                raise DbisolError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, raw)
    return out


def merge_config(command: str, args: argparse.Namespace) -> RunConfig:
    """Precedence: flags over config file over defaults."""
    cfg = RunConfig(command=command)
    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key, val in file_values.items():
        setattr(cfg, key, val)
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None and flag is not False:
            setattr(cfg, f.name, flag)
    cfg.command = command
    return cfg


# ---------------------------------------------------------------------------
# commands

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def cmd_solve(cfg: RunConfig) -> int:
    model = cfg.model()
    potential = cfg.make_potential()
    profile = solve_profile(model, potential, GridSpec(count=cfg.grid))
    profile.validate_invariants()
    report = compute_energy_report(profile, model, potential, epsrel=min(cfg.tol, 1e-9))
    resid = eom_residual(profile)
    summary = {
        "config": cfg.to_dict(),
        "seed": cfg.seed,
        "compacton_radius": profile.compacton_radius,
        "eom_max_residual": resid.max_abs_residual,
        **report.to_json_dict(),
    }
    write_profile_csv(profile, cfg.out + ".csv")
    write_json_atomic(cfg.out + ".json", summary)
    print(f"wrote {cfg.out}.csv and {cfg.out}.json")
    print(f"energy_quadrature = {_fmt(report.energy_quadrature)}")
    if report.energy_closed_form is not None:
        print(f"energy_closed_form = {_fmt(report.energy_closed_form)}")
    if report.energy_per_charge_avg is not None:
        print(f"energy_per_charge_avg = {_fmt(report.energy_per_charge_avg)}")
    print(f"charge = {_fmt(report.charge)}")
    if profile.compacton_radius is not None:
        print(f"compacton_radius = {_fmt(profile.compacton_radius)}")
    return 0


def _verify_checks(cfg: RunConfig) -> list[dict]:
    checks = []
    sector = cfg.sector

    def add(name, passed, **details):
        checks.append({"name": name, "passed": bool(passed), **details})

    if sector == "baby":
        model = cfg.model()
        pot = cfg.make_potential()
        prof = solve_profile(model, pot, GridSpec(count=cfg.grid))
        rep = compute_energy_report(prof, model, pot)
        if rep.energy_closed_form is not None:
            add("closed_vs_quadrature", rep.rel_discrepancy_closed <= 1e-6,
                rel_discrepancy=rep.rel_discrepancy_closed)
        add("charge_quantization", abs(rep.charge - model.charge) <= 1e-6,
            charge=rep.charge, n=model.charge)
        per = []
        for n in range(1, 6):
            m = replace(model, charge=n)
            per.append(bps_energy_integral(m, pot) / n)
        spread = (max(per) - min(per)) / per[0]
        add("linearity", spread <= 1e-8, per_charge_spread=spread)
        checks.extend(_eom_checks_baby(cfg, model))
    else:
        flagged_sigma = cfg.beta ** 2 / cfg.mu ** 2
        for sigma in (0.25, 1.0, 4.0):
            model = replace(cfg.model(), beta=math.sqrt(sigma), mu=1.0)
            for tag in ("standard", "bps"):
                c2 = replace(cfg, potential=tag)
                pot = c2.make_potential()
                prof = solve_profile(model, pot, GridSpec(count=cfg.grid))
                rep = compute_energy_report(prof, model, pot)
                add(f"closed_vs_quadrature[{tag},sigma={sigma}]",
                    rep.rel_discrepancy_closed <= 1e-6,
                    rel_discrepancy=rep.rel_discrepancy_closed)
                add(f"charge_quantization[{tag},sigma={sigma}]",
                    abs(rep.charge - model.charge) <= 1e-6, charge=rep.charge)
        model = replace(cfg.model(), beta=math.sqrt(flagged_sigma), mu=1.0)
        pot = replace(cfg, potential="standard").make_potential()
        per = []
        for n in range(1, 6):
            m = replace(model, charge=n)
            per.append(bps_energy_integral(m, pot) / n)
        spread = (max(per) - min(per)) / per[0]
        add("linearity", spread <= 1e-8, per_charge_spread=spread)
        checks.extend(_eom_checks_skyrme(cfg, model))
    return checks


def _richardson(build, margin: float, perturb: bool) -> tuple[float, float, float]:
    prof1 = build(1e-3, perturb)
    prof2 = build(5e-4, False)
    r1 = eom_residual(prof1, edge_margin=margin).max_abs_residual
    r2 = eom_residual(prof2, edge_margin=margin).max_abs_residual
    return r1, r2, r1 / r2


def _eom_checks_baby(cfg: RunConfig, model: ModelParams) -> list[dict]:
    pot = make_potential("old-baby-power", 1.0)
    x0 = baby_old_radius(model)

    def build(delta, perturb):
        prof = profile_on_grid(lambda x: baby_old_exact(x, model), model, pot,
                               spacing=delta, extent=x0 + 10 * delta, compacton_radius=x0)
        if perturb:
            bump = 0.01 * np.exp(-((prof.coordinates - 0.5 * x0) / (20 * delta)) ** 2)
            prof = replace(prof, field=np.clip(prof.field + bump, 0.0, 1.0))
        return prof

    r1, r2, ratio = _richardson(build, 1e-2, cfg.inject_perturbation)
    ok = (3.5 <= ratio <= 4.5) and r1 < 1e-1
    return [{"name": "eom_convergence", "passed": bool(ok),
             "residual_coarse": r1, "residual_fine": r2, "ratio": ratio}]


def _eom_checks_skyrme(cfg: RunConfig, model: ModelParams) -> list[dict]:
    pot = make_potential("skyrme-standard")
    sigma = model.sigma
    z0 = skyrme_standard_radius(sigma)

    def build(delta, perturb):
        prof = profile_on_grid(lambda z: skyrme_standard_exact(z, sigma), model, pot,
                               spacing=delta, extent=z0 + 10 * delta, compacton_radius=z0)
        if perturb:
            bump = 0.01 * np.exp(-((prof.coordinates - 0.5 * z0) / (20 * delta)) ** 2)
            prof = replace(prof, field=np.clip(prof.field + bump, 0.0, math.pi))
        return prof

    r1, r2, ratio = _richardson(build, 1e-2, cfg.inject_perturbation)
    ok = (3.5 <= ratio <= 4.5) and r1 < 10.0
    return [{"name": "eom_convergence", "passed": bool(ok),
             "residual_coarse": r1, "residual_fine": r2, "ratio": ratio}]


def cmd_verify(cfg: RunConfig) -> int:
    checks = _verify_checks(cfg)
    all_pass = all(c["passed"] for c in checks)
    report = {"config": cfg.to_dict(), "seed": cfg.seed, "checks": checks,
              "all_passed": all_pass}
    write_json_atomic(cfg.out + ".json", report)
    for c in checks:
        print(("PASS" if c["passed"] else "FAIL"), c["name"])
    if not all_pass:
        failed = [c["name"] for c in checks if not c["passed"]]
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 3
    return 0


def cmd_bound(cfg: RunConfig) -> int:
    if not 2 <= cfg.order <= 8:
        raise DbisolError("truncation order must lie in 2..8")
    cert = optimize_bound(cfg.order, cfg.beta, seed=cfg.seed)
    cert = certify(cert, cfg.samples, seed=cfg.seed)
    payload = cert.to_json_dict()
    payload["sharpness_minimum"] = sharpness(cert)
    payload["seed"] = cfg.seed
    if cfg.compare_pavlovskii or abs(cfg.beta - 1.0) < 1e-12:
        payload["pavlovskii"] = compare_reference(cert)
    write_json_atomic(cfg.out + ".json", payload)
    print(f"order {cert.order}: constant = {_fmt(cert.constant)}")
    if cert.alpha is not None:
        print(f"alpha* = {_fmt(cert.alpha)}")
    print(f"min_slack = {_fmt(cert.min_slack)} over {cert.samples} samples")
    if "pavlovskii" in payload:
        p = payload["pavlovskii"]
        print(f"reference {_fmt(p['reference_energy'])} vs bound {_fmt(p['bound_energy'])}"
              f" (relative error {_fmt(p['relative_error'])};"
              f" with constant 3.5: {_fmt(p['relative_error_c35'])})")
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    values = [float(v) for v in cfg.values.split(",") if v.strip()]
    if len(values) < 3:
        print("sweep needs at least 3 values", file=sys.stderr)
        return 1
    model = cfg.model()
    rows = []
    if cfg.axis == "mu":
        res = small_mu_sweep(model, values)
        for mu, e in zip(res.mus, res.energies):
            rows.append((mu, e, e))
        fit = {"axis": "mu", "values": list(res.mus), "energies": list(res.energies),
               "slope": res.slope, "seed": cfg.seed, "config": cfg.to_dict()}
        print(f"fitted slope = {_fmt(res.slope)}")
    elif cfg.axis == "beta":
        res = large_beta_sweep(model, values)
        for b, e, d in zip(res.betas, res.energies, res.distances):
            rows.append((b, e, d))
        fit = {"axis": "beta", "values": list(res.betas), "energies": list(res.energies),
               "distances": list(res.distances), "exponent": res.exponent,
               "seed": cfg.seed, "config": cfg.to_dict()}
        print(f"fitted exponent = {_fmt(res.exponent)}")
    else:
        raise DbisolError(f"unknown sweep axis {cfg.axis!r}")
    lines = ["parameter,energy,distance_to_limit"]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    write_atomic(cfg.out + ".csv", "\n".join(lines) + "\n")
    write_json_atomic(cfg.out + ".json", fit)
    print(f"wrote {cfg.out}.csv and {cfg.out}.json")
    return 0


def cmd_classify(cfg: RunConfig) -> int:
    model = cfg.model()
    potential = cfg.make_potential()
    predicted = classify_localization(potential.vacuum_exponent, model.sector)
    profile = solve_profile(model, potential, GridSpec(count=cfg.grid))
    empirical = tail_fit(profile)
    payload = {
        "config": cfg.to_dict(), "seed": cfg.seed,
        "vacuum_exponent": potential.vacuum_exponent,
        "predicted": predicted.value, "empirical": empirical.value,
        "agree": predicted is empirical,
    }
    write_json_atomic(cfg.out + ".json", payload)
    print(f"predicted = {predicted.value}, empirical = {empirical.value}")
    return 0


# ---------------------------------------------------------------------------
# entry point

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key=value config file; flags take precedence")
    p.add_argument("--sector", choices=["baby", "skyrme"])
    p.add_argument("--potential", help="old:A | standard | bps | power:A")
    p.add_argument("--beta", type=float)
    p.add_argument("--mu", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--alpha-k", dest="alpha_k", type=float,
                   help="use the pure-power kinetic law with this exponent")
    p.add_argument("--grid", type=int)
    p.add_argument("--out", help="output path prefix")
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)


def build_parser() -> _Parser:
    parser = _Parser(prog="dbisol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a profile, export CSV and JSON summary")
    _add_common(p)

    p = sub.add_parser("verify", help="run the consistency suites")
    _add_common(p)
    p.add_argument("--inject-perturbation", action="store_true", default=None,
                   help="perturb the exact profile to exercise the residual check")

    p = sub.add_parser("bound", help="optimize and certify an energy bound")
    _add_common(p)
    p.add_argument("--order", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--compare-pavlovskii", action="store_true", default=None)

    p = sub.add_parser("sweep", help="coupling sweeps with fitted limit laws")
    _add_common(p)
    p.add_argument("--axis", choices=["mu", "beta"])
    p.add_argument("--values", help="comma-separated parameter values")

    p = sub.add_parser("classify", help="localization class, predicted and fitted")
    _add_common(p)
    return parser


_COMMANDS = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "bound": cmd_bound,
    "sweep": cmd_sweep,
    "classify": cmd_classify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = merge_config(args.command, args)
        if cfg.out == "run":
            cfg.out = args.command
        return _COMMANDS[args.command](cfg)
    except NoSolitonError as exc:
        print(f"no soliton: {exc}", file=sys.stderr)
        return 2
    except OptimizerError as exc:
        print(f"optimizer failure: {exc}", file=sys.stderr)
        return 4
    except (DbisolError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
