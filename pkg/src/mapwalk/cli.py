"""Command-line experiment runner.

Subcommands
-----------
run
    Evolve one walk (quantum by default, classical with ``--classical``)
    and emit one record per time step with columns time, msd, entropy,
    pr, plus the full site distribution with ``--emit-distributions``.
sweep
    Same as ``run`` with at least one ``--sweep NAME=v1,v2,...`` over
    M, g, phi or L; records carry the swept values as leading columns
    and are ordered by sweep value, then time.  Runs execute
    concurrently; output assembly is serialized and deterministic.
phase-space
    Iterate seeded trajectories of a classical cell map and emit the
    visited (q, p) pairs, one record per point.

Configuration is a flat ``key = value`` text file (``--config``) with
command-line flags taking precedence.  Output is CSV (default) or JSON
with the resolved parameter set echoed in the metadata; numbers carry
full double precision so downstream comparisons stay exact.  Exit codes:
0 success, 2 configuration error, 1 runtime error.  Output files are
written atomically; a failing run leaves no partial file.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .coins import CoinSpec, coin_matrix, coin_in_position_basis
from .walk import WalkConfig
from .observables import run_time_series, WalkTimeSeries
from .classical import (CellMap, CellPartition, phase_portrait,
                        classical_msd_series)

__all__ = ["main"]

SWEEPABLE = ("M", "g", "phi", "L")


class ConfigError(Exception):
    """Invalid configuration; message names the offending field."""


@dataclass
class RunSettings:
    coin: str = "dft"
    M: int = 2
    L: int = 100
    g: float = 0.0
    tau: float = 1.0
    phi: float | None = None
    t_max: int = 40
    partition: str = "horizontal"
    out_format: str = "csv"
    out: str = "-"
    seed: int = 0
    classical: str | None = None
    n_points: int = 100_000
    emit_distributions: bool = False
    sweep: list[tuple[str, list[float]]] = field(default_factory=list)


_INT_KEYS = {"M", "L", "t-max", "seed", "n-points", "n-trajectories", "n-steps"}
_FLOAT_KEYS = {"g", "tau", "phi"}
_BOOL_KEYS = {"emit-distributions"}
_STR_KEYS = {"coin", "partition", "format", "out", "classical", "map"}
_KNOWN_KEYS = _INT_KEYS | _FLOAT_KEYS | _BOOL_KEYS | _STR_KEYS | {"sweep"}


def _parse_config_file(path: str) -> dict:
    """Flat key = value file; '#' starts a comment; keys match flag names."""
    values: dict = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"config: cannot read {path!r}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config: line {lineno}: expected 'key = value', got {line!r}")
        key, _, val = line.partition("=")
        key = key.strip().replace("_", "-")
        val = val.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"config: line {lineno}: unknown key {key!r}")
        try:
            if key in _INT_KEYS:
                values[key] = int(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _BOOL_KEYS:
                if val.lower() not in ("true", "false", "0", "1"):
                    raise ValueError(val)
                values[key] = val.lower() in ("true", "1")
            elif key == "sweep":
                values.setdefault("sweep", []).extend(
                    _parse_sweep_expr(part) for part in val.split())
            else:
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"config: line {lineno}: bad value for {key!r}: {val!r}") from exc
    return values


def _parse_sweep_expr(expr: str) -> tuple[str, list[float]]:
    name, sep, vals = expr.partition("=")
    name = name.strip()
    if not sep or name not in SWEEPABLE:
        raise ConfigError(f"sweep: expected NAME=v1,v2,... with NAME in {SWEEPABLE}, got {expr!r}")
    try:
        values = [float(v) for v in vals.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"sweep: non-numeric value in {expr!r}") from exc
    if not values:
        raise ConfigError(f"sweep: no values given in {expr!r}")
    for v in values:
        if name in ("M", "L"):
            if v != int(v):
                raise ConfigError(f"sweep: {name} values must be integers, got {v}")
            if name == "M" and (v < 2 or int(v) % 2):
                raise ConfigError(f"sweep: M values must be even and >= 2, got {int(v)}")
            if name == "L" and v < 2:
                raise ConfigError(f"sweep: L values must be >= 2, got {int(v)}")
        elif name == "g" and v < 0:
            raise ConfigError(f"sweep: g values must be >= 0, got {v}")
        elif name == "phi" and not 0.0 <= v < 1.0:
            raise ConfigError(f"sweep: phi values must lie in [0, 1), got {v}")
    return name, sorted(values)


def _merge_settings(args: argparse.Namespace) -> RunSettings:
    s = RunSettings()
    file_vals = _parse_config_file(args.config) if args.config else {}
    key_to_attr = {"coin": "coin", "M": "M", "L": "L", "g": "g", "tau": "tau",
                   "phi": "phi", "t-max": "t_max", "partition": "partition",
                   "format": "out_format", "out": "out", "seed": "seed",
                   "classical": "classical", "n-points": "n_points",
                   "emit-distributions": "emit_distributions", "sweep": "sweep"}
    for key, val in file_vals.items():
        setattr(s, key_to_attr[key], val)
    cli_map = {"coin": args.coin, "M": args.M, "L": args.L, "g": args.g,
               "tau": args.tau, "phi": args.phi, "t-max": args.t_max,
               "partition": args.partition, "format": args.format,
               "out": args.out, "seed": args.seed, "classical": args.classical,
               "n-points": args.n_points,
               "emit-distributions": args.emit_distributions}
    for key, val in cli_map.items():
        if val is not None:
            setattr(s, key_to_attr[key], val)
    if args.sweep:
        s.sweep = list(s.sweep) + [_parse_sweep_expr(e) for e in args.sweep]
    return s


def _validate_settings(s: RunSettings) -> None:
    if s.coin not in ("dft", "harper", "baker"):
        raise ConfigError(f"coin: unknown coin {s.coin!r}")
    if s.M < 2 or s.M % 2:
        raise ConfigError(f"M: must be even and >= 2, got {s.M}")
    if s.L < 2:
        raise ConfigError(f"L: must be >= 2, got {s.L}")
    if s.g < 0:
        raise ConfigError(f"g: must be >= 0, got {s.g}")
    if s.tau <= 0:
        raise ConfigError(f"tau: must be > 0, got {s.tau}")
    if s.phi is not None and not 0.0 <= s.phi < 1.0:
        raise ConfigError(f"phi: must lie in [0, 1), got {s.phi}")
    if s.t_max < 1:
        raise ConfigError(f"t-max: must be >= 1, got {s.t_max}")
    if s.partition not in ("horizontal", "vertical"):
        raise ConfigError(f"partition: must be horizontal or vertical, got {s.partition!r}")
    if s.out_format not in ("csv", "json"):
        raise ConfigError(f"format: must be csv or json, got {s.out_format!r}")
    if s.classical is not None and s.classical not in ("rotation", "baker", "harper"):
        raise ConfigError(f"classical: unknown map {s.classical!r}")
    if s.n_points < 1:
        raise ConfigError(f"n-points: must be >= 1, got {s.n_points}")
    if s.emit_distributions and any(name == "L" for name, _ in s.sweep):
        raise ConfigError("sweep: cannot sweep L together with --emit-distributions "
                          "(column count would vary)")
    seen = set()
    for name, _ in s.sweep:
        if name in seen:
            raise ConfigError(f"sweep: parameter {name!r} swept more than once")
        seen.add(name)


def _single_series(s: RunSettings, overrides: dict) -> WalkTimeSeries:
    """One run with swept parameters applied on top of the base settings."""
    M = int(overrides.get("M", s.M))
    L = int(overrides.get("L", s.L))
    g = float(overrides.get("g", s.g))
    phi = overrides.get("phi", s.phi)
    phi = None if phi is None else float(phi)
    if s.classical is not None:
        cmap = CellMap(s.classical, g=g, tau=s.tau)
        part = CellPartition(orientation=s.partition)
        return classical_msd_series(cmap, part, L, s.t_max,
                                    n_points=s.n_points, seed=s.seed,
                                    keep_distributions=s.emit_distributions)
    spec = CoinSpec(kind=s.coin, M=M, g=g, tau=s.tau, phi=phi)
    U = coin_matrix(spec)
    if s.partition == "vertical":
        U = coin_in_position_basis(U, spec.resolved_phi)
    config = WalkConfig(L=L, coin=spec)
    return run_time_series(config, s.t_max, keep_distributions=s.emit_distributions, U=U)


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _resolved_params(s: RunSettings) -> dict:
    params = {"coin": s.coin, "M": s.M, "L": s.L, "g": s.g, "tau": s.tau,
              "phi": "coin-default" if s.phi is None else s.phi,
              "t_max": s.t_max, "partition": s.partition, "seed": s.seed,
              "classical": s.classical or "no",
              "emit_distributions": s.emit_distributions}
    if s.classical is not None:
        params["n_points"] = s.n_points
    if s.sweep:
        params["sweep"] = " ".join(f"{n}={','.join(_fmt(v) for v in vals)}"
                                   for n, vals in s.sweep)
    return params


def _series_rows(series: WalkTimeSeries, prefix: list) -> list[list]:
    rows = []
    for i, t in enumerate(series.times):
        row = list(prefix) + [int(t), series.msd[i], series.entropy[i], series.pr[i]]
        if series.distributions is not None:
            row.extend(series.distributions[i].probs.tolist())
        rows.append(row)
    return rows


def _run_command(s: RunSettings) -> tuple[dict, list[str], list[list]]:
    _validate_settings(s)
    sweep_names = [name for name, _ in s.sweep]
    combos = list(product(*(vals for _, vals in s.sweep))) if s.sweep else [()]

    def one(combo):
        overrides = dict(zip(sweep_names, combo))
        return _single_series(s, overrides)

    if len(combos) > 1:
        with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
            results = list(pool.map(one, combos))
    else:
        results = [one(combos[0])]

    header = sweep_names + ["time", "msd", "entropy", "pr"]
    if s.emit_distributions:
        L = int(s.L)
        header += [f"p{l}" for l in range(L)]
    rows: list[list] = []
    for combo, series in zip(combos, results):
        prefix = [int(v) if name in ("M", "L") else float(v)
                  for name, v in zip(sweep_names, combo)]
        rows.extend(_series_rows(series, prefix))
    return _resolved_params(s), header, rows


def _phase_space_command(args: argparse.Namespace) -> tuple[dict, list[str], list[list]]:
    kind = args.map or "harper"
    g = args.g if args.g is not None else 1.0
    tau = args.tau if args.tau is not None else 1.0
    n_traj = args.n_trajectories if args.n_trajectories is not None else 100
    n_steps = args.n_steps if args.n_steps is not None else 1000
    seed = args.seed if args.seed is not None else 0
    if kind not in ("rotation", "baker", "harper"):
        raise ConfigError(f"map: unknown map {kind!r}")
    if n_traj < 1:
        raise ConfigError(f"n-trajectories: must be >= 1, got {n_traj}")
    if n_steps < 1:
        raise ConfigError(f"n-steps: must be >= 1, got {n_steps}")
    try:
        cmap = CellMap(kind, g=g, tau=tau)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    pts = phase_portrait(cmap, n_traj, n_steps, seed=seed)
    params = {"map": kind, "g": g, "tau": tau, "n_trajectories": n_traj,
              "n_steps": n_steps, "seed": seed}
    rows = [[float(q), float(p)] for q, p in pts]
    return params, ["q", "p"], rows


def _render_csv(params: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write("# " + " ".join(f"{k}={v}" for k, v in params.items()) + "\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def _render_json(params: dict, header: list[str], rows: list[list]) -> str:
    records = [dict(zip(header, [int(x) if isinstance(x, (int, np.integer)) else float(x)
                                 for x in row])) for row in rows]
    return json.dumps({"params": params, "records": records}, indent=1) + "\n"


def _emit(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".mapwalk-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mapwalk",
        description="Coined quantum walks with quantized-map coins, and their "
                    "classical multi-map counterparts.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--config", help="flat key = value configuration file")
        p.add_argument("--coin", choices=["dft", "harper", "baker"])
        p.add_argument("--M", type=int, help="coin dimension (even)")
        p.add_argument("--L", type=int, help="number of lattice sites")
        p.add_argument("--g", type=float, help="Harper chaos parameter")
        p.add_argument("--tau", type=float, help="kick period (default 1)")
        p.add_argument("--phi", type=float,
                       help="boundary phase in [0,1); default 0 (baker: 1/2)")
        p.add_argument("--t-max", type=int, help="number of time steps")
        p.add_argument("--partition", choices=["horizontal", "vertical"],
                       help="cell splicing orientation (default horizontal)")
        p.add_argument("--format", choices=["csv", "json"], help="output format")
        p.add_argument("--out", help="output path, '-' for stdout (default)")
        p.add_argument("--seed", type=int, help="RNG seed for classical ensembles")
        p.add_argument("--classical", choices=["rotation", "baker", "harper"],
                       help="run the classical multi-map walk instead")
        p.add_argument("--n-points", type=int, help="classical ensemble size")
        p.add_argument("--emit-distributions", action="store_true", default=None,
                       help="append the full site distribution to every record")
        p.add_argument("--sweep", action="append", metavar="NAME=V1,V2,...",
                       help="sweep a parameter (M, g, phi or L); repeatable")

    add_run_flags(sub.add_parser("run", help="single walk run"))
    add_run_flags(sub.add_parser("sweep", help="parameter sweep (requires --sweep)"))

    ps = sub.add_parser("phase-space", help="classical phase-space portrait")
    ps.add_argument("--map", choices=["rotation", "baker", "harper"])
    ps.add_argument("--g", type=float, help="Harper chaos parameter (default 1)")
    ps.add_argument("--tau", type=float, help="kick period (default 1)")
    ps.add_argument("--n-trajectories", type=int, help="number of orbits (default 100)")
    ps.add_argument("--n-steps", type=int, help="points per orbit (default 1000)")
    ps.add_argument("--seed", type=int, help="RNG seed (default 0)")
    ps.add_argument("--format", choices=["csv", "json"])
    ps.add_argument("--out", help="output path, '-' for stdout (default)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "phase-space":
            params, header, rows = _phase_space_command(args)
            out_format = args.format or "csv"
            out = args.out or "-"
        else:
            settings = _merge_settings(args)
            if args.command == "sweep" and not settings.sweep:
                raise ConfigError("sweep: the sweep subcommand needs at least one --sweep")
            params, header, rows = _run_command(settings)
            out_format = settings.out_format
            out = settings.out
        text = (_render_csv if out_format == "csv" else _render_json)(params, header, rows)
        _emit(text, out)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
