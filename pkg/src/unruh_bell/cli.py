"""Command-line interface: sweeps, sector breakdowns, limits, black-hole scans and comparisons.

Every subcommand writes a table (CSV with a header row, or JSON lines) to
``--out`` or standard output.  Settings are resolved as

    command-line flag  >  UNRUH_BELL_* environment variable  >  --config file  >  default

The config file is INI-style; keys may sit in an ``[unruh-bell]`` section
or at top level, and use the flag names with underscores (``a_max``,
``term_tol``).  Environment variables use the same names upper-cased
(``UNRUH_BELL_A_MAX``); the second frequency is ``UNRUH_BELL_OMEGA2``
since ``omega`` and ``Omega`` coincide once upper-cased.

Exit codes: 0 success, 1 comparison failure, 2 invalid configuration,
3 series or truncation non-convergence.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, analytic, blackhole
from .analytic import SeriesConfig
from .entanglement import correlations, family_negativity, negativity
from .states import Kind, Truncation, family_state, reduce_to_region_I
from .thermo import Statistics, accel_param

__all__ = ["main", "build_parser", "resolve_config", "Config", "ConfigError",
           "EXIT_OK", "EXIT_COMPARE_FAIL", "EXIT_INVALID", "EXIT_CONVERGENCE"]

EXIT_OK, EXIT_COMPARE_FAIL, EXIT_INVALID, EXIT_CONVERGENCE = 0, 1, 2, 3
ENV_PREFIX = "UNRUH_BELL_"
COMPARE_TOL = 1e-6
COMPARE_POINTS = 26
MAX_SECTOR_COLUMNS = 64

BELL_FAMILIES = ["Phi_FF", "Psi_FF", "Phi_BB", "Psi_BB", "Phi_BF", "Psi_BF", "X1", "X2"]

DEFAULTS = {
    "family": "Phi_FF",
    "sign": 1,
    "alpha": math.pi / 4,
    "omega": 1.0,
    "Omega": 1.0,
    "a_min": 0.0,
    "a_max": 50.0,
    "points": 201,
    "log_grid": None,
    "equal_accel": True,
    "method": "both",
    "nmax": None,
    "term_tol": 1e-14,
    "rs": 1.0,
    "d_min": 1e-4,
    "d_max": 1.0,
    "format": "csv",
    "out": None,
}

_ENV_NAMES = {k: ENV_PREFIX + k.upper() for k in DEFAULTS}
_ENV_NAMES["Omega"] = ENV_PREFIX + "OMEGA2"


class ConfigError(ValueError):
    pass


def _parse_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {v!r}")


def _opt_int(v):
    return None if v is None or str(v).strip().lower() in ("", "none", "auto") else int(v)


_COERCE = {
    "family": str,
    "sign": int,
    "alpha": float,
    "omega": float,
    "Omega": float,
    "a_min": float,
    "a_max": float,
    "points": int,
    "log_grid": _parse_bool,
    "equal_accel": _parse_bool,
    "method": str,
    "nmax": _opt_int,
    "term_tol": float,
    "rs": float,
    "d_min": float,
    "d_max": float,
    "format": str,
    "out": str,
}


@dataclass
class Config:
    command: str
    family: str
    sign: int
    alpha: float
    omega: float
    Omega: float
    a_min: float
    a_max: float
    points: int
    log_grid: bool
    equal_accel: bool
    method: str
    nmax: int | None
    term_tol: float
    rs: float
    d_min: float
    d_max: float
    format: str
    out: str | None
    points_given: bool = False

    def families(self) -> list:
        if self.family.strip().lower() == "all":
            return list(BELL_FAMILIES)
        return [Kind.parse(f.strip()).value for f in self.family.split(",") if f.strip()]

    def series(self) -> SeriesConfig:
        return SeriesConfig(term_tol=self.term_tol)

    def truncation(self):
        return self.nmax


def _read_config_file(path: str) -> dict:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str  # keep omega and Omega apart
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        if not text.lstrip().startswith("["):
            text = "[unruh-bell]\n" + text
        cp.read_string(text, source=path)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out = dict(cp.defaults())
    for sec in cp.sections():
        out.update({k: v for k, v in cp.items(sec, raw=True)})
    for k in out:
        if k not in DEFAULTS:
            raise ConfigError(f"unknown config key {k!r}")
    return out


def resolve_config(args: argparse.Namespace, environ=None) -> Config:
    """Merge flags, environment, config file and defaults into a validated Config."""
    environ = os.environ if environ is None else environ
    layers = [dict(DEFAULTS)]
    cfg_path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if cfg_path:
        layers.append(_read_config_file(cfg_path))
    layers.append({k: environ[e] for k, e in _ENV_NAMES.items() if e in environ})
    layers.append({k: getattr(args, k) for k in DEFAULTS if getattr(args, k, None) is not None})
    merged = {}
    for layer in layers:
        merged.update(layer)
    points_given = any("points" in layer for layer in layers[1:])
    try:
        vals = {k: (None if merged[k] is None else _COERCE[k](merged[k])) for k in DEFAULTS}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid setting: {exc}") from exc
    if vals["log_grid"] is None:
        vals["log_grid"] = args.command == "blackhole"
    cfg = Config(command=args.command, points_given=points_given, **vals)
    _validate(cfg)
    return cfg


def _validate(cfg: Config) -> None:
    try:
        fams = cfg.families()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not fams:
        raise ConfigError("no family given")
    if cfg.command in ("sweep", "sectors") and len(fams) != 1:
        raise ConfigError(f"{cfg.command} takes a single family")
    if cfg.sign not in (1, -1):
        raise ConfigError("sign must be +1 or -1")
    if not (cfg.omega > 0 and cfg.Omega > 0):
        raise ConfigError("frequencies must be positive")
    if cfg.points < 2:
        raise ConfigError("points must be at least 2")
    if not (0 <= cfg.a_min < cfg.a_max) or not math.isfinite(cfg.a_max):
        raise ConfigError("need 0 <= a_min < a_max")
    if cfg.log_grid and cfg.command in ("sweep", "compare") and cfg.a_min <= 0:
        raise ConfigError("a logarithmic grid needs a_min > 0")
    if cfg.method not in ("analytic", "numeric", "both"):
        raise ConfigError("method must be analytic, numeric or both")
    if cfg.nmax is not None and cfg.nmax < 1:
        raise ConfigError("nmax must be positive")
    if not cfg.term_tol > 0:
        raise ConfigError("term_tol must be positive")
    if not cfg.rs > 0:
        raise ConfigError("rs must be positive")
    if not (0 < cfg.d_min < cfg.d_max):
        raise ConfigError("need 0 < d_min < d_max")
    if cfg.format not in ("csv", "jsonl"):
        raise ConfigError("format must be csv or jsonl")


# ----------------------------------------------------------------- output

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return v


def _json_value(v):
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def write_table(rows: list, columns: list, cfg: Config, stream=None) -> None:
    """Write rows (dicts) in grid order; floats use shortest round-trip formatting."""
    own = stream is None and cfg.out
    fh = open(cfg.out, "w", newline="", encoding="utf-8") if own else (stream or sys.stdout)
    try:
        if cfg.format == "csv":
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(columns)
            for row in rows:
                w.writerow([_cell(row.get(c)) for c in columns])
        else:
            for row in rows:
                fh.write(json.dumps({c: _json_value(row.get(c)) for c in columns}, allow_nan=False) + "\n")
    finally:
        if own:
            fh.close()


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -------------------------------------------------------------- evaluation

def _grid(lo: float, hi: float, n: int, log: bool) -> list:
    g = np.geomspace(lo, hi, n) if log else np.linspace(lo, hi, n)
    return [float(x) for x in g]


def _r_params(kind: Kind, omega: float, Omega: float, a1: float, a2: float) -> tuple:
    s1, s2 = kind.statistics
    return accel_param(s1, omega, a1), accel_param(s2, Omega, a2)


def _analytic(kind: Kind, r1: float, r2: float, cfg: Config):
    if kind.has_alpha:
        return None
    return analytic.family_negativity_r(kind, r1, r2, cfg.series())


def evaluate_point(kind: Kind, a1: float, a2: float, cfg: Config, with_correlations: bool = True) -> dict:
    """One sweep row at accelerations (a1, a2)."""
    r1, r2 = _r_params(kind, cfg.omega, cfg.Omega, a1, a2)
    row = {"family": kind.value, "a_omega": a1, "a_Omega": a2, "r_omega": r1, "r_Omega": r2,
           "method": cfg.method}
    converged = True
    if cfg.method in ("analytic", "both"):
        res = _analytic(kind, r1, r2, cfg)
        if res is not None:
            row.update(N_analytic_leading=res.leading, N_analytic_total=res.total,
                       series_terms=res.n_terms)
            converged &= bool(res.converged)
    if cfg.method in ("numeric", "both"):
        rep = family_negativity(kind, (r1, r2), sign=cfg.sign, alpha=cfg.alpha, truncation=cfg.truncation())
        meta = rep.truncation_meta
        row.update(N_numeric=rep.total, nmax=meta.get("nmax"), norm_deficit=meta.get("norm_deficit"))
        converged &= bool(meta.get("converged", True))
        if with_correlations:
            nmax = max(1, int(meta.get("nmax") or 1))
            rho = reduce_to_region_I(family_state(kind, r1, r2, nmax, cfg.sign, cfg.alpha))
            c = correlations(rho)
            row.update(entropy_nats=c.entropy_nats, mutual_info_bits=c.mutual_information_bits)
    if row.get("N_analytic_total") is not None and row.get("N_numeric") is not None:
        row["abs_diff"] = abs(row["N_analytic_total"] - row["N_numeric"])
    row["converged"] = converged
    return row


SWEEP_COLUMNS = ["family", "a_omega", "a_Omega", "r_omega", "r_Omega", "N_analytic_leading",
                 "N_analytic_total", "N_numeric", "abs_diff", "entropy_nats", "mutual_info_bits",
                 "method", "nmax", "norm_deficit", "series_terms", "converged"]


def _accel_pairs(cfg: Config) -> list:
    grid = _grid(cfg.a_min, cfg.a_max, cfg.points, cfg.log_grid)
    if cfg.equal_accel:
        return [(a, a) for a in grid]
    return [(a1, a2) for a1 in grid for a2 in grid]


def cmd_sweep(cfg: Config) -> int:
    kind = Kind.parse(cfg.families()[0])
    rows = [evaluate_point(kind, a1, a2, cfg) for a1, a2 in _accel_pairs(cfg)]
    write_table(rows, SWEEP_COLUMNS, cfg)
    bad = sum(not r["converged"] for r in rows)
    if bad:
        _note(f"{bad} row(s) did not converge")
        return EXIT_CONVERGENCE
    return EXIT_OK


def cmd_sectors(cfg: Config) -> int:
    """Per-sector negativities along a grid.

    Fermion-fermion families sweep r_f over [0, pi/4] directly; the others
    sweep equal accelerations.  When more than MAX_SECTOR_COLUMNS distinct
    sectors occur, the largest ones get columns and the rest are summed
    into ``sector:other`` so that the columns still add up to the total.
    """
    kind = Kind.parse(cfg.families()[0])
    fermionic = kind.statistics == (Statistics.FERMION, Statistics.FERMION)
    rows, order, peak = [], [], {}
    converged = True
    if fermionic:
        xs = _grid(0.0, math.pi / 4, cfg.points, False)
        pairs = [(x, x) for x in xs]
    else:
        pairs = [_r_params(kind, cfg.omega, cfg.Omega, a, a) for a in _grid(cfg.a_min, cfg.a_max, cfg.points,
                                                                            cfg.log_grid)]
        xs = _grid(cfg.a_min, cfg.a_max, cfg.points, cfg.log_grid)
    for x, (r1, r2) in zip(xs, pairs):
        rep = family_negativity(kind, (r1, r2), sign=cfg.sign, alpha=cfg.alpha, truncation=cfg.truncation())
        converged &= bool(rep.truncation_meta.get("converged", True))
        sec = rep.sector_dict()
        for label, v in sec.items():
            if label not in peak:
                order.append(label)
                peak[label] = 0.0
            peak[label] = max(peak[label], v)
        rows.append(({"family": kind.value, ("r_f" if fermionic else "a"): x, "r_omega": r1, "r_Omega": r2,
                      "total": rep.total, "nmax": rep.truncation_meta.get("nmax")}, sec))
    keep = order
    if len(order) > MAX_SECTOR_COLUMNS:
        ranked = sorted(order, key=lambda s: -peak[s])[:MAX_SECTOR_COLUMNS]
        keep = [s for s in order if s in set(ranked)]
    out = []
    for base, sec in rows:
        row = dict(base)
        for s in keep:
            row["sector:" + s] = sec.get(s, 0.0)
        if len(keep) < len(order):
            row["sector:other"] = math.fsum(v for s, v in sec.items() if s not in set(keep))
        out.append(row)
    cols = ["family", "r_f" if fermionic else "a", "r_omega", "r_Omega", "total", "nmax"]
    cols += ["sector:" + s for s in keep] + (["sector:other"] if len(keep) < len(order) else [])
    write_table(out, cols, cfg)
    return EXIT_OK if converged else EXIT_CONVERGENCE


LIMIT_DESCRIPTIONS = {
    "N_Phi_FF": "negativity of Phi_FF at infinite acceleration",
    "N_Psi_FF": "negativity of Psi_FF at infinite acceleration",
    "S_Phi_FF": "entropy of Phi_FF at infinite acceleration (nats)",
    "S_Psi_FF": "entropy of Psi_FF at infinite acceleration (nats)",
    "I_Phi_FF": "mutual information of Phi_FF at infinite acceleration (bits)",
    "I_Psi_FF": "mutual information of Psi_FF at infinite acceleration (bits)",
}


def cmd_limits(cfg: Config) -> int:
    rows = [{"quantity": k, "value": v, "description": LIMIT_DESCRIPTIONS[k]}
            for k, v in analytic.asymptotic_limits().items()]
    write_table(rows, ["quantity", "value", "description"], cfg)
    return EXIT_OK


def cmd_blackhole(cfg: Config) -> int:
    omega_g = 4 * math.pi * cfg.rs * cfg.omega
    Omega_g = 4 * math.pi * cfg.rs * cfg.Omega
    ds = _grid(cfg.d_min, cfg.d_max, cfg.points, cfg.log_grid)
    methods = ["analytic", "numeric"] if cfg.method == "both" else [cfg.method]
    rows = [{"d_over_rs": d, "a_times_rs": 0.5 * math.sqrt((1 + d) / d)} for d in ds]
    cols = ["d_over_rs", "a_times_rs"]
    for fam in cfg.families():
        kind = Kind.parse(fam)
        for m in methods:
            if m == "analytic" and kind.has_alpha:
                if cfg.method == "analytic":
                    raise ConfigError(f"{kind.value} has no analytic form; use --method numeric")
                continue
            scan = blackhole.negativity_vs_distance(kind, ds, omega_g, Omega_g, method=m,
                                                    sign=cfg.sign, alpha=cfg.alpha)
            col = f"N_{m}[{kind.value}]"
            cols.append(col)
            for row, sr in zip(rows, scan.rows):
                row[col] = sr.negativity
        if kind in (Kind.PHI_BB, Kind.PHI_BF):
            d_star = blackhole.vanishing_distance(kind, omega_g, Omega_g)
            col = f"d_star_over_rs[{kind.value}]"
            cols.append(col)
            for row in rows:
                row[col] = d_star
            _note(f"{kind.value}: d*/R_S = {d_star!r}")
    write_table(rows, cols, cfg)
    return EXIT_OK


COMPARE_COLUMNS = ["family", "a_omega", "a_Omega", "N_analytic_total", "N_numeric", "abs_diff",
                   "tolerance", "nmax", "norm_deficit", "converged", "pass"]


def cmd_compare(cfg: Config) -> int:
    """Analytic vs numeric negativity on an equal-acceleration line and an asymmetric line.

    The asymmetric line uses a_Omega = a_omega / 2.  A point passes when
    the two agree to max(1e-6, 1e-6 * value) and the numeric truncation
    converged.
    """
    n = cfg.points if cfg.points_given else COMPARE_POINTS
    grid = _grid(cfg.a_min, cfg.a_max, n, cfg.log_grid)
    sub = Config(**{**cfg.__dict__, "method": "both"})
    rows = []
    for fam in cfg.families():
        kind = Kind.parse(fam)
        if kind.has_alpha:
            raise ConfigError(f"{kind.value} has no analytic form to compare against")
        for a1, a2 in [(a, a) for a in grid] + [(a, 0.5 * a) for a in grid]:
            row = evaluate_point(kind, a1, a2, sub, with_correlations=False)
            tol = max(COMPARE_TOL, COMPARE_TOL * abs(row["N_numeric"]))
            row["tolerance"] = tol
            row["pass"] = bool(row["abs_diff"] <= tol and row["converged"])
            rows.append(row)
    write_table(rows, COMPARE_COLUMNS, cfg)
    failed = [r for r in rows if not r["pass"]]
    if failed:
        worst = max(failed, key=lambda r: (not r["converged"], r["abs_diff"]))
        _note(f"{len(failed)} of {len(rows)} points failed; worst: family={worst['family']} "
              f"a_omega={worst['a_omega']!r} a_Omega={worst['a_Omega']!r} "
              f"analytic={worst['N_analytic_total']!r} numeric={worst['N_numeric']!r} "
              f"diff={worst['abs_diff']!r} converged={worst['converged']}")
        return EXIT_COMPARE_FAIL
    _note(f"all {len(rows)} points agree")
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "sectors": cmd_sectors,
    "limits": cmd_limits,
    "blackhole": cmd_blackhole,
    "compare": cmd_compare,
}


# ------------------------------------------------------------------ parser

def _add_common(p: argparse.ArgumentParser) -> None:
    env = _ENV_NAMES
    p.add_argument("--family", help=f"family name; 'all' or a comma list for blackhole/compare [{env['family']}]")
    p.add_argument("--sign", type=int, choices=(1, -1), help=f"relative sign of the Bell superposition [{env['sign']}]")
    p.add_argument("--alpha", type=float, help=f"mixing angle of the alpha families [{env['alpha']}]")
    p.add_argument("--omega", type=float, help=f"frequency of the first mode [{env['omega']}]")
    p.add_argument("--Omega", type=float, help=f"frequency of the second mode [{env['Omega']}]")
    p.add_argument("--a-min", dest="a_min", type=float, help=f"smallest acceleration [{env['a_min']}]")
    p.add_argument("--a-max", dest="a_max", type=float, help=f"largest acceleration [{env['a_max']}]")
    p.add_argument("--points", type=int, help=f"grid size [{env['points']}]")
    p.add_argument("--log-grid", dest="log_grid", action=argparse.BooleanOptionalAction, default=None,
                   help=f"geometric instead of linear spacing [{env['log_grid']}]")
    p.add_argument("--equal-accel", dest="equal_accel", action=argparse.BooleanOptionalAction, default=None,
                   help=f"one shared acceleration; --no-equal-accel sweeps the 2D grid [{env['equal_accel']}]")
    p.add_argument("--method", choices=("analytic", "numeric", "both"), help=f"evaluation path [{env['method']}]")
    p.add_argument("--nmax", type=int, help=f"fixed bosonic cutoff instead of adaptive truncation [{env['nmax']}]")
    p.add_argument("--term-tol", dest="term_tol", type=float, help=f"series stopping tolerance [{env['term_tol']}]")
    p.add_argument("--rs", type=float, help=f"Schwarzschild radius [{env['rs']}]")
    p.add_argument("--d-min", dest="d_min", type=float, help=f"smallest distance d/R_S [{env['d_min']}]")
    p.add_argument("--d-max", dest="d_max", type=float, help=f"largest distance d/R_S [{env['d_max']}]")
    p.add_argument("--format", choices=("csv", "jsonl"), help=f"output format [{env['format']}]")
    p.add_argument("--out", help=f"output file, default standard output [{env['out']}]")
    p.add_argument("--config", help=f"INI config file [{ENV_PREFIX}CONFIG]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unruh-bell",
        description="Entanglement of Bell states of two accelerated field modes.",
        epilog=("Settings: flag > environment variable (shown in brackets) > config file > default. "
                "Exit codes: 0 ok, 1 comparison failure, 2 invalid config, 3 non-convergence."),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sweep": "negativity, entropy and mutual information along an acceleration grid",
        "sectors": "per-sector negativities along a grid",
        "limits": "infinite-acceleration constants of the fermion states",
        "blackhole": "negativity against distance to a black-hole horizon",
        "compare": "check analytic against numeric negativities",
    }
    for name, h in helps.items():
        _add_common(sub.add_parser(name, help=h, description=h))
    return parser


def main(argv=None, environ=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args, environ)
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        _note(f"unruh-bell: invalid configuration: {exc}")
        return EXIT_INVALID
    except analytic.SeriesConvergenceError as exc:
        _note(f"unruh-bell: {exc}")
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
