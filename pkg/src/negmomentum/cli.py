"""Command-line front end.

Subcommands::

    rate      optimal rates and momentum for a (mu, L) pair
    sweep     tabulate rates over a list of condition numbers (CSV)
    simulate  run GDA / OGDA / negative momentum on a quadratic game
    verify    run the cross-module property checks

Exit codes: 0 success, 1 failed verification, 2 invalid input, 3 output not
writable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional

from . import checks
from .chebyshev import ChebParams
from .dynamics import (
    MethodSpec,
    build_game,
    game_spectrum_bounds,
    gda_step_grid,
    iterations_to_tolerance,
    measure_rate,
    ogda_step_grid,
    simulate,
    tune_step_size,
    worst_case_radius,
)
from .rates import Region, lower_bound_rate, momentum_sign, solve_region_rate
from .regions import SpectrumBound

SWEEP_HEADER = [
    "kappa", "rho_k1", "rho_k2", "rho_lower_bound",
    "eta_k1", "beta_k1", "eta_k2", "beta_k2",
    "sign_k1", "sign_k2",
]
TRACE_HEADER = ["method", "iter", "distance", "diverged"]
SIDECAR_KEYS = ("method", "eta", "beta", "alpha", "seed", "measured_rate", "predicted_radius", "diverged")
KNOWN_METHODS = ("GDA", "OGDA", "NM", "NM-K2", "CHEB")


class UsageError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


class OutputError(OSError):
    """Output destination not writable (exit code 3)."""


@dataclass
class ExperimentConfig:
    command: str
    mu: float = 1.0
    L: Optional[float] = None
    kappa: Optional[float] = None
    kappa_list: tuple = ()
    half_dim: int = 100
    seed: int = 0
    t_max: int = 5000
    methods: tuple = ("GDA", "NM", "OGDA")
    out: Optional[str] = None
    format: str = "csv"
    inject_fault: bool = False

    @classmethod
    def from_mapping(cls, mapping):
        known = {f.name for f in fields(cls)}
        unknown = set(mapping) - known
        if unknown:
            raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
        cfg = cls(**mapping)
        cfg.validate()
        return cfg

    def spectrum(self) -> SpectrumBound:
        if self.L is None and self.kappa is None:
            raise UsageError("need --L or --kappa")
        L = self.L if self.L is not None else self.kappa * self.mu
        try:
            return SpectrumBound(self.mu, L)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def validate(self):
        if not (isinstance(self.mu, (int, float)) and math.isfinite(self.mu) and self.mu > 0):
            raise UsageError(f"mu must be positive, got {self.mu}")
        if self.command == "rate":
            self.spectrum()
        if self.command == "sweep":
            for k in self.kappa_list:
                if not (math.isfinite(k) and k > 1):
                    raise UsageError(f"every kappa must exceed 1, got {k}")
        if self.half_dim < 1:
            raise UsageError(f"--dim must be at least 1, got {self.half_dim}")
        if self.t_max < 1:
            raise UsageError(f"--t-max must be at least 1, got {self.t_max}")
        bad = [m for m in self.methods if m not in KNOWN_METHODS]
        if bad:
            raise UsageError(f"unknown methods {bad}; choose from {', '.join(KNOWN_METHODS)}")
        if self.format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.format}")


def _fmt(x):
    return f"{x:.12g}"


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from None


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _num(x):
    # repr gives the shortest round-trip decimal
    return repr(float(x))


def _report_dict(r):
    return {
        "region": r.region_tag.value,
        "rho_hat": r.rho_hat,
        "d": r.d_star,
        "c_sq": r.c_sq_star,
        "a": r.a_star,
        "b": r.b_star,
        "eta": r.params.eta,
        "beta": r.params.beta,
        "vertex_factors": list(r.vertex_factors),
    }


def cmd_rate(cfg: ExperimentConfig):
    s = cfg.spectrum()
    if not s.kappa > 1:
        raise UsageError("rate needs L > mu")
    reports = [solve_region_rate(s, region) for region in Region]
    lb = lower_bound_rate(s)
    print(f"mu = {_fmt(s.mu)}  L = {_fmt(s.L)}  kappa = {_fmt(s.kappa)}")
    for r in reports:
        sign = momentum_sign(s, r.region_tag).value
        print(
            f"{r.region_tag.value}: rho_hat = {_fmt(r.rho_hat)}  eta* = {_fmt(r.params.eta)}  "
            f"beta* = {_fmt(r.params.beta)}  momentum = {sign}  "
            f"(d = {_fmt(r.d_star)}, c^2 = {_fmt(r.c_sq_star)})"
        )
    k = s.kappa
    print(f"rho(K_hat) in [{_fmt(reports[0].rho_hat)}, {_fmt(reports[1].rho_hat)}]")
    print(
        f"K1 bracket [{_fmt(1 - 2 * k**-1.5 - 24 * k**-2)}, {_fmt(1 - math.sqrt(2) / 2 * k**-1.5 + 2.25 * k**-2)}]  "
        f"K2 bracket [{_fmt(1 - 2 * k**-1.5)}, {_fmt(1 - (math.sqrt(2 * k - 1) - 1) / (2 * k * k))}]"
    )
    print(f"rho_opt = {_fmt(lb)}")
    if cfg.out:
        payload = {
            "mu": s.mu, "L": s.L, "kappa": s.kappa,
            "K1": _report_dict(reports[0]), "K2": _report_dict(reports[1]),
            "sign_k1": momentum_sign(s, "K1").value, "sign_k2": momentum_sign(s, "K2").value,
            "rho_lower_bound": lb,
        }
        if cfg.format == "json":
            _write(cfg.out, json.dumps(payload, indent=2) + "\n")
        else:
            header = ["region", "rho_hat", "d", "c_sq", "a", "b", "eta", "beta", "sign", "rho_lower_bound"]
            rows = [
                [r.region_tag.value] + [_num(v) for v in (r.rho_hat, r.d_star, r.c_sq_star, r.a_star, r.b_star, r.params.eta, r.params.beta)]
                + [momentum_sign(s, r.region_tag).value, _num(lb)]
                for r in reports
            ]
            _write(cfg.out, _csv_text(header, rows))
    return 0


def sweep_rows(kappas, mu=1.0):
    rows = []
    for k in kappas:
        s = SpectrumBound(mu, k * mu)
        r1, r2 = solve_region_rate(s, "K1"), solve_region_rate(s, "K2")
        rows.append(
            [_num(k)]
            + [_num(v) for v in (r1.rho_hat, r2.rho_hat, lower_bound_rate(s),
                                 r1.params.eta, r1.params.beta, r2.params.eta, r2.params.beta)]
            + [momentum_sign(s, "K1").value, momentum_sign(s, "K2").value]
        )
    return rows


def cmd_sweep(cfg: ExperimentConfig):
    _write(cfg.out, _csv_text(SWEEP_HEADER, sweep_rows(cfg.kappa_list, cfg.mu)))
    return 0


def resolve_methods(game, names, t_max):
    """Turn method names into :class:`MethodSpec` objects for ``game``.

    GDA and OGDA step sizes are grid-searched on the game itself; NM uses the
    analytic triangle-optimal parameters, NM-K2 the rectangle-optimal ones and
    CHEB the time-varying schedule of the triangle-optimal ellipse.
    """
    s = game_spectrum_bounds(game)
    specs = []
    solved = {}

    def report(region):
        if region not in solved:
            solved[region] = solve_region_rate(s, region)
        return solved[region]

    for name in names:
        if name == "GDA":
            specs.append(MethodSpec.gda(tune_step_size(game, gda_step_grid(s), t_max=t_max)))
        elif name == "OGDA":
            specs.append(MethodSpec.ogda(tune_step_size(game, ogda_step_grid(s), alpha=1.0, t_max=t_max)))
        elif name in ("NM", "NM-K2"):
            r = report("K1" if name == "NM" else "K2")
            specs.append(MethodSpec.negative_momentum(r.params, label=name))
        elif name == "CHEB":
            r = report("K1")
            specs.append(MethodSpec.chebyshev(ChebParams(r.d_star, r.c_sq_star), label=name))
    return s, specs


def run_simulation(cfg: ExperimentConfig):
    game = build_game(cfg.half_dim, cfg.seed)
    s, specs = resolve_methods(game, cfg.methods, cfg.t_max)
    results = []
    for spec in specs:
        trace = simulate(game, spec, t_max=cfg.t_max)
        m = spec.effective_params
        try:
            rate = measure_rate(trace)
        except ValueError:
            rate = None
        try:
            hit, observed = iterations_to_tolerance(trace, 1e-6)
        except ValueError:
            hit, observed = math.nan, False
        side = {
            "method": spec.name,
            "eta": m.eta,
            "beta": m.beta,
            "alpha": m.alpha,
            "seed": cfg.seed,
            "measured_rate": rate,
            "predicted_radius": worst_case_radius(s, m),
            "diverged": trace.diverged,
        }
        results.append((side, trace, hit, observed))
    return s, results


def cmd_simulate(cfg: ExperimentConfig):
    s, results = run_simulation(cfg)
    print(f"game: half_dim={cfg.half_dim} seed={cfg.seed} mu={_fmt(s.mu)} L={_fmt(s.L)} kappa={_fmt(s.kappa)}")
    for side, trace, hit, observed in results:
        rate = "n/a" if side["measured_rate"] is None else _fmt(side["measured_rate"])
        if math.isnan(hit):
            hits = "n/a"
        else:
            hits = f"{_fmt(hit)} ({'observed' if observed else 'extrapolated'})"
        print(
            f"{side['method']:>6}: eta={_fmt(side['eta'])} beta={_fmt(side['beta'])} alpha={_fmt(side['alpha'])} "
            f"rate={rate} predicted<={_fmt(side['predicted_radius'])} "
            f"iters_to_1e-6={hits} diverged={str(side['diverged']).lower()}"
        )
    if not cfg.out:
        return 0
    sidecar = [{k: side[k] for k in SIDECAR_KEYS} for side, *_ in results]
    if cfg.format == "json":
        runs = [dict(entry, distances=[float(x) for x in trace.distances]) for entry, (_, trace, *_r) in zip(sidecar, results)]
        _write(cfg.out, json.dumps({"half_dim": cfg.half_dim, "t_max": cfg.t_max, "runs": runs}, indent=2) + "\n")
        return 0
    rows = []
    for side, trace, *_ in results:
        flag = str(trace.diverged).lower()
        rows.extend([side["method"], t, _num(x), flag] for t, x in enumerate(trace.distances))
    _write(cfg.out, _csv_text(TRACE_HEADER, rows))
    _write(str(sidecar_path(cfg.out)), json.dumps(sidecar, indent=2) + "\n")
    return 0


def sidecar_path(out):
    p = Path(out)
    if p.suffix == ".json":
        return p.with_name(p.stem + ".sidecar.json")
    return p.with_suffix(".json")


def cmd_verify(cfg: ExperimentConfig):
    results = checks.run_all(fault=cfg.inject_fault)
    failed = None
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
        if not r.passed and failed is None:
            failed = r
    if failed is not None:
        print(f"first counterexample ({failed.name}): {failed.detail}")
        return 1
    print("all checks passed")
    return 0


COMMANDS = {"rate": cmd_rate, "sweep": cmd_sweep, "simulate": cmd_simulate, "verify": cmd_verify}


def _float_list(text):
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def _name_list(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def build_parser():
    parser = argparse.ArgumentParser(prog="negmomentum", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rate", help="optimal rates and momentum for (mu, L)")
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--L", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="json")

    p = sub.add_parser("sweep", help="tabulate rates over condition numbers")
    p.add_argument("--kappa-list", type=_float_list, default=(10.0, 100.0, 1000.0))
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--out")

    p = sub.add_parser("simulate", help="simulate methods on a quadratic game")
    p.add_argument("--dim", dest="half_dim", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=int, default=5000)
    p.add_argument("--methods", type=_name_list, default=("GDA", "NM", "OGDA"))
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("verify", help="run the property checks")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_mapping(vars(args))
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OutputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
