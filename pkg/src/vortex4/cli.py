"""Command-line front end.

Every command writes plot-ready CSV or JSON.  CSV files start with one ``#``
line carrying the package version, a hash of the run parameters and the
parameters themselves, so identical inputs give byte-identical files.

Exit codes: 0 ok, 1 usage or configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .equilibria import make, linearize
from .errors import VortexError
from .integrate import IntegratorConfig, integrate
from .poincare import anchored_section, crawl_experiment, rotation_number
from .reduced_dynamics import energy_grid
from .resolution import UState, project, reconstruct
from .vortex_core import Strengths, Trajectory, check_collisions, hamiltonian, momentum, vector_field

log = logging.getLogger("vortex4")

LOG_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kw):
        kw.setdefault("allow_abbrev", False)
        super().__init__(*args, **kw)

    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    gamma: float
    n_sat: int
    positions: list
    integrator: dict = field(default_factory=dict)
    seed: int = 0

    @property
    def strengths(self) -> Strengths:
        return Strengths.family(self.gamma, self.n_sat)

    @property
    def z(self) -> np.ndarray:
        return np.array([complex(x, y) for x, y in self.positions])

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(**self.integrator)


def _preset(d: dict) -> list:
    fam = d.get("family")
    spec = make(fam, float(d.get("alpha", 1.0)), float(d["gamma"]))
    return [[float(x.real), float(x.imag)] for x in spec.z]


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON run configuration.

    ``positions`` may be replaced by ``"preset": {"family": "O", "alpha": 1}``.
    """
    try:
        with open(path) as fh:
            d = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(d, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(d) - {"gamma", "n_sat", "positions", "preset", "integrator", "seed"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    try:
        gamma = float(d["gamma"])
        n_sat = int(d.get("n_sat", 3))
        if "preset" in d:
            positions = _preset({**d["preset"], "gamma": gamma})
        else:
            positions = [[float(p[0]), float(p[1])] for p in d["positions"]]
        integ = dict(d.get("integrator", {}))
        allowed = {f.name for f in fields(IntegratorConfig)}
        if set(integ) - allowed:
            raise UsageError(f"unknown integrator keys: {sorted(set(integ) - allowed)}")
        cfg = RunConfig(gamma, n_sat, positions, integ, int(d.get("seed", 0)))
        cfg.integrator_config()
        cfg.strengths
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"invalid config: {exc!r}") from exc
    if len(positions) != n_sat + 1:
        raise UsageError(f"expected {n_sat + 1} positions, got {len(positions)}")
    z = cfg.z
    if np.any(np.abs(z[:, None] - z[None, :])[~np.eye(z.size, dtype=bool)] == 0):
        raise UsageError("positions must be pairwise distinct")
    return cfg


def metadata_line(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, **params}, sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return f"# vortex4 {__version__} config_hash={digest} params={blob}"


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _rows_csv(header: str, columns: list, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([repr(float(x)) if not isinstance(x, (int, str)) else x for x in r])
    return buf.getvalue()


def _c(x) -> list:
    return [float(np.real(x)), float(np.imag(x))]


# commands

def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    g = cfg.strengths
    z0 = cfg.z
    check_collisions(z0, cfg.integrator_config().collision_guard)
    tr = integrate(lambda t, z: vector_field(z, g), z0, (0.0, args.t_end), cfg.integrator_config())
    cols = ["t"] + [f"{a}{k}" for k in range(z0.size) for a in "xy"] + ["H", "mu", "nu_re", "nu_im"]
    rows = []
    for t, z in zip(tr.times, tr.states):
        m = momentum(z, g)
        rows.append([t, *np.column_stack([z.real, z.imag]).ravel(), hamiltonian(z, g), m.mu,
                     m.nu.real, m.nu.imag])
    params = {"config": asdict(cfg), "t_end": args.t_end}
    _write(args.out, _rows_csv(metadata_line("simulate", params), cols, rows))
    log.info("simulate: %d steps to t=%g", len(tr), args.t_end)
    return 0


def cmd_reduce(args) -> int:
    cfg = load_config(args.config)
    g = cfg.strengths
    z0 = cfg.z
    tr = integrate(lambda t, z: vector_field(z, g), z0, (0.0, args.t_end), cfg.integrator_config())
    n = cfg.n_sat
    cols = ["t", "u0"] + [f"u{k}_{p}" for k in range(1, n + 1) for p in ("re", "im")]
    rows = []
    for t, z in zip(tr.times, tr.states):
        us = project(z, g)
        rows.append([t, us.u0, *np.column_stack([us.u.real, us.u.imag]).ravel()])
    params = {"config": asdict(cfg), "t_end": args.t_end}
    _write(args.out, _rows_csv(metadata_line("reduce", params), cols, rows))
    return 0


def read_reduced_csv(path: str) -> tuple[np.ndarray, float, np.ndarray]:
    try:
        with open(path) as fh:
            lines = [ln for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    rows = list(csv.reader(lines))
    if not rows or rows[0][:2] != ["t", "u0"]:
        raise UsageError(f"{path} is not a reduced-trajectory CSV")
    try:
        data = np.array([[float(x) for x in r] for r in rows[1:]])
    except ValueError as exc:
        raise UsageError(f"bad number in {path}: {exc}") from exc
    if data.ndim != 2 or data.shape[0] < 1 or (data.shape[1] - 2) % 2:
        raise UsageError(f"{path} has no usable rows")
    u = data[:, 2::2] + 1j * data[:, 3::2]
    return data[:, 0], float(data[0, 1]), u


def cmd_reconstruct(args) -> int:
    cfg = load_config(args.config)
    g = cfg.strengths
    times, u0, u = read_reduced_csv(args.input)
    if u.shape[1] != cfg.n_sat:
        raise UsageError(f"reduced data has {u.shape[1]} satellites, config has {cfg.n_sat}")
    UState(u0, u[0])
    c = Trajectory(times, u, {"u0": np.full(times.size, u0)})
    amb = reconstruct(c, g, cfg=cfg.integrator_config())
    cols = ["t"] + [f"{a}{k}" for k in range(cfg.n_sat + 1) for a in "xy"]
    rows = [[t, *np.column_stack([z.real, z.imag]).ravel()] for t, z in zip(amb.times, amb.states)]
    params = {"config": asdict(cfg), "input_rows": int(times.size)}
    _write(args.out, _rows_csv(metadata_line("reconstruct", params), cols, rows))
    return 0


def cmd_req(args) -> int:
    spec = _make_req(args)
    _write(args.out, spec.to_json() + "\n")
    return 0


def _make_req(args):
    try:
        return make(args.family, args.alpha, args.gamma)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_linearize(args) -> int:
    spec = _make_req(args)
    s, xi = spec.standard_gauge()
    lin = linearize(s, spec.strengths, xi)
    ev = sorted(lin.eigenvalues, key=lambda x: (round(x.imag, 12), round(x.real, 12)))
    out = {"req": spec.to_dict(), "eigenvalues": [_c(x) for x in ev]}
    _write(args.out, json.dumps(out, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_poincare(args) -> int:
    gamma = args.gamma if args.gamma is not None else 3 * math.pi * args.alpha**2
    if args.iters < 1:
        raise UsageError("--iters must be positive")
    if args.u < 0:
        raise UsageError("--u must be nonnegative")
    sd = anchored_section(args.alpha, gamma, args.u, args.amplitude, args.iters)
    params = {"alpha_e": args.alpha, "u": args.u, "gamma": gamma, "iters": args.iters,
              "amplitude": args.amplitude, "anchor": _c(sd.anchor)}
    _write(args.out, sd.to_csv(metadata_line("poincare", params)))
    if args.iters >= 10:
        log.info("rotation number %.8g", rotation_number(sd))
    return 0


def cmd_levels(args) -> int:
    b = args.extent
    grid = energy_grid(args.mu, (-b, b, -b, b), args.resolution, Strengths.family(args.gamma, 3))
    params = {"mu": args.mu, "gamma": args.gamma, "extent": b, "resolution": args.resolution}
    _write(args.out, grid.to_csv(metadata_line("levels", params)))
    return 0


def cmd_crawl(args) -> int:
    gamma = args.gamma if args.gamma is not None else 3 * math.pi * args.alpha**2
    period = 2 * math.pi * 3 * math.pi * args.alpha**2 / abs(gamma)
    drift, pred = crawl_experiment(args.alpha, gamma, args.eps, args.periods * period)
    rel = abs(drift - pred) / abs(pred) if pred != 0 else abs(drift)
    ang = math.degrees(abs(np.angle(drift / pred))) if pred != 0 and drift != 0 else 0.0
    params = {"alpha_e": args.alpha, "gamma": gamma, "eps": args.eps, "periods": args.periods}
    cols = ["drift_re", "drift_im", "predicted_re", "predicted_im", "rel_error", "angle_deg"]
    _write(args.out, _rows_csv(metadata_line("crawl", params), cols,
                               [[drift.real, drift.imag, pred.real, pred.imag, rel, ang]]))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vortex4", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"vortex4 {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    s = sub.add_parser("simulate", help="integrate the four-vortex system")
    s.add_argument("--config", required=True)
    s.add_argument("--t-end", type=float, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("reduce", help="integrate and write the reduced trajectory")
    s.add_argument("--config", required=True)
    s.add_argument("--t-end", type=float, required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("reconstruct", help="lift a reduced trajectory CSV back to positions")
    s.add_argument("--config", required=True)
    s.add_argument("--input", required=True)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_reconstruct)

    for name, fn in (("req", cmd_req), ("linearize", cmd_linearize)):
        s = sub.add_parser(name, help=f"{name} for a relative equilibrium")
        s.add_argument("--family", required=True)
        s.add_argument("--alpha", type=float, default=1.0)
        s.add_argument("--gamma", type=float, default=1.0)
        s.add_argument("--out", default="-")
        s.set_defaults(func=fn)

    s = sub.add_parser("poincare", help="section points of the return map near O")
    s.add_argument("--alpha", type=float, default=2.0)
    s.add_argument("--u", type=float, default=0.075)
    s.add_argument("--gamma", type=float, default=None, help="default 3 pi alpha^2 (unit rotation rate)")
    s.add_argument("--iters", type=int, default=200)
    s.add_argument("--amplitude", type=float, default=1e-3)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_poincare)

    s = sub.add_parser("levels", help="reduced energy on a grid in v2/v1")
    s.add_argument("--mu", type=float, default=0.5)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--extent", type=float, default=1.5)
    s.add_argument("--resolution", type=int, default=301)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_levels)

    s = sub.add_parser("crawl", help="drift of O after a small translational-momentum kick")
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--gamma", type=float, default=None, help="default 3 pi alpha^2")
    s.add_argument("--eps", type=float, default=1e-3)
    s.add_argument("--periods", type=float, default=20.0)
    s.add_argument("--out", default="-")
    s.set_defaults(func=cmd_crawl)
    return p


def _setup_logging() -> None:
    level = os.environ.get("VORTEX_LOG", "error").lower()
    if level not in LOG_LEVELS:
        raise UsageError(f"VORTEX_LOG must be one of {sorted(LOG_LEVELS)}, got {level!r}")
    logging.basicConfig(level=LOG_LEVELS[level], stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        force=True)


def main(argv=None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"vortex4: error: {exc}", file=sys.stderr)
        return 1
    except (VortexError, ValueError, ArithmeticError) as exc:
        print(f"vortex4: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
