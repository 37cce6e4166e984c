"""Command-line entry point: ``screenlab <command> [--config FILE] [overrides]``.

Every run writes its CSV tables, a ``manifest.json`` echoing the resolved
configuration and a ``summary.txt`` into the output directory. Exit codes:
0 success, 2 configuration error, 3 solver failure, 4 non-convergence
(``invert`` only).
"""

from __future__ import annotations

import argparse
import copy
import csv
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import conformal, electrostatic, helmholtz, hilbert, inverse, singular
from .arcgeom import Arc, CircularArc, UNIT_SLIT, arc_from_dict
from .errors import (ConfigError, DegenerateArcError, DomainError, GeometryError, ScreenLabError,
                     SolverError, UnsupportedArcError)

logger = logging.getLogger("screenlab")

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_NO_CONVERGENCE = 0, 2, 3, 4

COMMANDS = ("forward", "farfield", "electro", "hilbert-check", "conformal",
            "fit-singularity", "invert", "uniq", "cauchy-uniq")

DEFAULT_ARC = UNIT_SLIT.to_dict()
DEFAULT_CIRCULAR = CircularArc((0.0, 0.0), 1.0, (math.pi / 4, 3 * math.pi / 4)).to_dict()


def _defaults(command: str) -> dict[str, Any]:
    arc = DEFAULT_CIRCULAR if command in ("conformal", "invert") else DEFAULT_ARC
    return {
        "arc": copy.deepcopy(arc),
        "physics": {"k": 1.0, "theta_degrees": 0.0,
                    "circle": {"center": [0.0, 0.0], "radius": 3.0}},
        "discretization": {"N": 64, "M": 64},
        "inverse": {"parametrization": "circular", "control_points": 6, "lambda": 1e-6,
                    "iterations": 30, "step_tolerance": 1e-9, "jacobian_step": 1e-6,
                    "noise": 0.0, "seed": 0, "N_data": 96, "initial": None},
        "batch": {"pairs": 100},
        "hilbert": {"coefficients": [1.0], "modes": 8},
    }


@dataclass
class RunConfig:
    """Fully resolved settings of one CLI run."""

    command: str
    arc: dict[str, Any]
    physics: dict[str, Any]
    discretization: dict[str, Any]
    inverse: dict[str, Any]
    batch: dict[str, Any]
    hilbert: dict[str, Any]
    output_dir: str = "screenlab-out"

    @classmethod
    def resolve(cls, command: str, file_values: dict[str, Any], args: argparse.Namespace) -> "RunConfig":
        merged = _defaults(command)
        for key, value in file_values.items():
            if key in ("command", "output_dir"):
                continue
            if key not in merged:
                raise ConfigError(f"unknown config key {key!r}")
            if isinstance(merged[key], dict) and isinstance(value, dict):
                _deep_update(merged[key], value)
            else:
                merged[key] = value
        out = args.output_dir or file_values.get("output_dir") or "screenlab-out"
        overrides = {("physics", "k"): args.k, ("physics", "theta_degrees"): args.theta_degrees,
                     ("discretization", "N"): args.N, ("discretization", "M"): args.M,
                     ("inverse", "noise"): args.noise, ("inverse", "seed"): args.seed}
        for (block, key), value in overrides.items():
            if value is not None:
                merged[block][key] = value
        cfg = cls(command=command, output_dir=str(out), **merged)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        k = self.physics.get("k")
        if not isinstance(k, (int, float)) or not k > 0:
            raise ConfigError("physics.k must be a positive number")
        for key in ("N", "M"):
            v = self.discretization.get(key)
            if not isinstance(v, int) or v < 8:
                raise ConfigError(f"discretization.{key} must be an integer >= 8")
        if self.discretization["N"] % 2:
            raise ConfigError("discretization.N must be even")
        if not isinstance(self.inverse.get("seed"), int):
            raise ConfigError("inverse.seed must be an integer")

    @property
    def theta(self) -> float:
        return math.radians(float(self.physics["theta_degrees"]))

    @property
    def circle(self) -> tuple[tuple[float, float], float]:
        c = self.physics["circle"]
        return tuple(float(v) for v in c["center"]), float(c["radius"])

    def build_arc(self, key: str = "arc") -> Arc:
        record = getattr(self, key)
        if record is None:
            raise ConfigError(f"command {self.command!r} needs an {key!r} record")
        return arc_from_dict(record)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _deep_update(base: dict, new: dict) -> None:
    for key, value in new.items():
        if isinstance(base.get(key), dict) and isinstance(value, dict):
            _deep_update(base[key], value)
        else:
            base[key] = value


# -- output -----------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return "%.17g" % float(v)


class Output:
    """Writer for one run directory."""

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.summary: list[str] = []

    def csv(self, name: str, header: list[str], rows) -> Path:
        path = self.dir / name
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        return path

    def note(self, key: str, value) -> None:
        text = _fmt(value) if isinstance(value, (int, float, np.floating, np.integer)) else str(value)
        self.summary.append(f"{key}: {text}")

    def finish(self, cfg: RunConfig, status: str) -> None:
        manifest = cfg.to_dict()
        manifest["status"] = status
        (self.dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        (self.dir / "summary.txt").write_text("\n".join([f"command: {cfg.command}", *self.summary,
                                                         f"status: {status}"]) + "\n")


# -- commands ---------------------------------------------------------------

def cmd_forward(cfg: RunConfig, out: Output) -> int:
    arc = cfg.build_arc()
    n = cfg.discretization["N"]
    inc = helmholtz.IncidentWave.from_angle(cfg.theta, cfg.physics["k"])
    dens = helmholtz.solve_density(arc, inc, n)
    p = arc.eval(dens.nodes)
    out.csv("density.csv", ["t", "x", "y", "psi_re", "psi_im"],
            zip(dens.nodes, p[:, 0], p[:, 1], dens.values.real, dens.values.imag))
    out.note("boundary_residual", helmholtz.boundary_residual(dens, inc))
    a_minus, a_plus = singular.endpoint_amplitudes(dens)
    out.note("amplitude_minus_abs", abs(a_minus))
    out.note("amplitude_plus_abs", abs(a_plus))
    return EXIT_OK


def cmd_farfield(cfg: RunConfig, out: Output) -> int:
    arc = cfg.build_arc()
    inc = helmholtz.IncidentWave.from_angle(cfg.theta, cfg.physics["k"])
    ff = helmholtz.far_field_for(arc, inc, cfg.discretization["N"], cfg.discretization["M"])
    out.csv("far_field.csv", ["angle", "re", "im"], zip(ff.angles, ff.values.real, ff.values.imag))
    out.note("l2_norm", float(np.linalg.norm(ff.values)))
    return EXIT_OK


def cmd_electro(cfg: RunConfig, out: Output) -> int:
    arc = cfg.build_arc()
    sol = electrostatic.solve_equilibrium(arc, cfg.discretization["N"])
    p = arc.eval(sol.density.nodes)
    out.csv("density.csv", ["t", "x", "y", "psi"], zip(sol.density.nodes, p[:, 0], p[:, 1],
                                                       sol.density.values))
    center, radius = cfg.circle
    data = electrostatic.cauchy_data(sol, center, radius, max(cfg.discretization["M"], 32))
    out.csv("cauchy.csv", ["angle", "u", "du_dr"], zip(data.angles, data.u_values, data.du_dr_values))
    out.note("robin_constant", sol.robin_constant)
    out.note("capacity", sol.capacity)
    out.note("gauss_flux", electrostatic.gauss_flux(data))
    return EXIT_OK


def cmd_hilbert_check(cfg: RunConfig, out: Output) -> int:
    g = hilbert.WeightedFunction(np.asarray(cfg.hilbert["coefficients"], dtype=float))
    pts = np.concatenate([hilbert.interior_points(), hilbert.exterior_points()])
    h = hilbert.finite_hilbert(g, pts)
    out.csv("hilbert.csv", ["t", "H"], zip(pts, h))
    inside, outside = hilbert.support_pair_check(g)
    sv, basis = hilbert.hilbert_kernel(int(cfg.hilbert["modes"]))
    out.csv("singular_values.csv", ["index", "sigma"], enumerate(sv))
    out.note("max_interior", inside)
    out.note("max_exterior", outside)
    out.note("kernel_dimension", basis.shape[1])
    return EXIT_OK


def cmd_conformal(cfg: RunConfig, out: Output) -> int:
    arc = cfg.build_arc()
    smap = conformal.build_slit_map(arc)
    m = cfg.discretization["M"]
    t = np.cos((np.arange(m) + 0.5) * math.pi / m)
    _, nu = arc.tangent_normal(t)
    z = conformal.to_complex(arc.eval(t) + 1e-9 * nu)
    w = smap.forward(z)
    out.csv("map.csv", ["t", "x", "y", "w_re", "w_im"], zip(t, z.real, z.imag, w.real, w.imag))
    n = cfg.discretization["N"]
    moved = conformal.transplant_density(electrostatic.solve_equilibrium(UNIT_SLIT, n), smap, n)
    direct = electrostatic.solve_equilibrium(arc, n).density
    out.csv("density.csv", ["t", "psi_transplant", "psi_direct"],
            zip(direct.nodes, moved.values.real, direct.values.real))
    out.note("slit_map_deviation", conformal.slit_map_deviation(smap))
    out.note("robin_constant", smap.robin_constant())
    rel = np.max(np.abs(moved.values - direct.values)) / np.max(np.abs(direct.values))
    out.note("density_relative_difference", float(rel))
    return EXIT_OK


def cmd_fit_singularity(cfg: RunConfig, out: Output) -> int:
    arc = cfg.build_arc()
    n = cfg.discretization["N"]
    inc = helmholtz.IncidentWave.from_angle(cfg.theta, cfg.physics["k"])
    dens = helmholtz.solve_density(arc, inc, n)
    sol = electrostatic.solve_equilibrium(arc, n)
    d = singular.default_distances(1e-2)
    rows, fits = [], []
    for end in (-1, 1):
        rho = singular.density_profile(dens, end, d)
        grad = np.linalg.norm(electrostatic.eval_gradient(sol, singular.tip_ray(arc, end, d)), axis=-1)
        for name, v in (("scattering_density", rho), ("electrostatic_gradient", grad)):
            f = singular.fit_exponent(d, v)
            fits.append((end, name, f.amplitude, f.exponent, f.residual, f.sample_count))
            rows.extend((end, name, di, vi) for di, vi in zip(d, v))
    out.csv("samples.csv", ["end", "quantity", "d", "value"], rows)
    out.csv("fits.csv", ["end", "quantity", "amplitude", "exponent", "residual", "samples"], fits)
    for end, name, _, alpha, _, _ in fits:
        out.note(f"exponent_{name}_{'plus' if end > 0 else 'minus'}", alpha)
    return EXIT_OK


def cmd_invert(cfg: RunConfig, out: Output) -> int:
    truth = cfg.build_arc()
    inv = cfg.inverse
    if inv["initial"] is not None:
        initial = arc_from_dict(inv["initial"])
    elif isinstance(truth, CircularArc):
        c = truth.center
        initial = CircularArc((c[0] + 0.1, c[1]), 1.2 * truth.radius, truth.angles)
    else:
        raise ConfigError("invert needs inverse.initial unless the true arc is circular")
    meas = inverse.simulate(truth, inverse.MeasurementKind.FAR_FIELD, k=cfg.physics["k"],
                            theta=cfg.theta, m=cfg.discretization["M"], noise_level=float(inv["noise"]),
                            seed=inv["seed"], n=int(inv["N_data"]))
    rc = inverse.ReconstructionConfig(
        inverse.Parametrization(inv["parametrization"], int(inv["control_points"])),
        lam=float(inv["lambda"]), max_iterations=int(inv["iterations"]),
        step_tolerance=float(inv["step_tolerance"]), jacobian_step=float(inv["jacobian_step"]),
        n=cfg.discretization["N"])
    res = inverse.reconstruct(meas, rc, initial, truth)
    out.csv("result.csv", ["iteration", "residual"], enumerate(res.residuals))
    q = rc.parametrization.to_params(res.arc)
    out.csv("estimate.csv", ["index", "value"], enumerate(q))
    out.note("converged", res.converged)
    out.note("iterations", res.iterations)
    out.note("final_residual", res.residuals[-1])
    out.note("hausdorff", res.hausdorff)
    return EXIT_OK if res.converged else EXIT_NO_CONVERGENCE


def cmd_uniq(cfg: RunConfig, out: Output) -> int:
    rows = inverse.far_field_uniqueness_batch(
        int(cfg.batch["pairs"]), cfg.inverse["seed"], cfg.physics["k"], cfg.theta,
        cfg.discretization["M"], cfg.discretization["N"])
    out.csv("pairs.csv", ["pair_id", "hausdorff", "discrepancy", "floor"],
            ((r.pair_id, r.hausdorff, r.discrepancy, r.floor) for r in rows))
    dmin = min(r.discrepancy for r in rows)
    floor = max(r.floor for r in rows)
    out.note("min_discrepancy", dmin)
    out.note("max_floor", floor)
    out.note("separated", dmin > 10 * floor)
    return EXIT_OK


def cmd_cauchy_uniq(cfg: RunConfig, out: Output) -> int:
    reports = inverse.cauchy_uniqueness_batch(
        int(cfg.batch["pairs"]), cfg.inverse["seed"], cfg.circle,
        max(cfg.discretization["M"], 32), cfg.discretization["N"])
    rows = []
    for i, rep in enumerate(reports):
        for e in rep.endpoints:
            rows.append((i, rep.data_distance, e.endpoint[0], e.endpoint[1], e.foreign_exponent,
                         e.own_exponent, e.foreign_regular, e.own_singular))
    out.csv("pairs.csv", ["pair_id", "data_distance", "x", "y", "foreign_exponent", "own_exponent",
                          "foreign_regular", "own_singular"], rows)
    out.note("mechanism_pairs", sum(r.mechanism_holds for r in reports))
    out.note("pairs", len(reports))
    return EXIT_OK


HANDLERS: dict[str, Callable[[RunConfig, Output], int]] = {
    "forward": cmd_forward, "farfield": cmd_farfield, "electro": cmd_electro,
    "hilbert-check": cmd_hilbert_check, "conformal": cmd_conformal,
    "fit-singularity": cmd_fit_singularity, "invert": cmd_invert, "uniq": cmd_uniq,
    "cauchy-uniq": cmd_cauchy_uniq,
}


# -- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="screenlab", description=__doc__.splitlines()[0])
    parser.add_argument("--log-level", default="WARNING")
    sub = parser.add_subparsers(dest="command", metavar="command")
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with arc records and settings")
        p.add_argument("--output-dir")
        p.add_argument("--seed", type=int)
        p.add_argument("--k", type=float)
        p.add_argument("--N", type=int)
        p.add_argument("--M", type=int)
        p.add_argument("--theta-degrees", type=float)
        p.add_argument("--noise", type=float)
    return parser


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = None
    try:
        file_values = _load_config(args.config)
        if file_values.get("command", args.command) != args.command:
            raise ConfigError(f"config is for {file_values['command']!r}, not {args.command!r}")
        cfg = RunConfig.resolve(args.command, file_values, args)
        out = Output(cfg.output_dir)
        code = HANDLERS[args.command](cfg, out)
    except (ConfigError, DegenerateArcError, UnsupportedArcError, GeometryError, DomainError) as exc:
        print(f"screenlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SolverError, ScreenLabError) as exc:
        print(f"screenlab: solver error: {exc}", file=sys.stderr)
        if cfg is not None:
            out = Output(cfg.output_dir)
            out.note("error", exc)
            out.finish(cfg, "solver-error")
        return EXIT_SOLVER
    status = {EXIT_OK: "ok", EXIT_NO_CONVERGENCE: "not-converged"}[code]
    out.finish(cfg, status)
    return code


if __name__ == "__main__":
    sys.exit(main())
