"""Batch front end: ``pcqubit <command> --config run.cfg [--out file]``.

Commands
--------
simulate      reduced qubit trajectory and detector current (CSV)
distribution  counting distribution P_n at t_max from the ladder (CSV)
error-curve   shot, back-action and total error versus window (CSV)
optimal       numeric and closed-form optimal window (JSON)
validate      built-in invariant suite, one PASS/FAIL line per property

Exit status: 0 success, 1 physics/validation failure, 2 usage or config error.

The config is a flat ``key: value`` document; ``#`` starts a comment.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, fields

import numpy as np

from .checks import run_checks
from .core import QubitState, SystemParams
from .errors import ConfigError, PhysicsError
from .ladder import counting_field_distribution, electron_distribution, evolve_ladder
from .limit import (closed_form_weak, closed_form_zeno, error_curve,
                    optimize_measurement_time, single_run_visibility)
from .reduced import evolve_reduced

COMMANDS = ("simulate", "distribution", "error-curve", "optimal", "validate")
N_SCAN = 200


@dataclass(frozen=True)
class SimConfig:
    omega: float
    d1: float
    d2: float
    t_max: float
    epsilon: float = 0.0
    sigma11_0: float = 1.0
    re_sigma12_0: float = 0.0
    im_sigma12_0: float = 0.0
    n_out: int = 101
    n_max_override: int | None = None
    tail_eps: float = 1e-12
    dt_lo: float = 1e-3
    dt_hi: float = 1e3
    error_mode: str = "asymptotic"

    @property
    def params(self) -> SystemParams:
        return SystemParams(self.omega, self.epsilon, self.d1, self.d2)

    @property
    def q0(self) -> QubitState:
        return QubitState(self.sigma11_0, complex(self.re_sigma12_0, self.im_sigma12_0))


REQUIRED = ("omega", "d1", "d2", "t_max")
_INT_KEYS = {"n_out", "n_max_override"}
_STR_KEYS = {"error_mode"}


def _parse_value(key, raw, where):
    if key in _STR_KEYS:
        return raw
    if key == "n_max_override" and raw.lower() in ("none", "null", ""):
        return None
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"{where}: {key}: expected a number, got {raw!r}") from None
    if not math.isfinite(value):
        raise ConfigError(f"{where}: {key}: value must be finite")
    if key in _INT_KEYS:
        if value != int(value):
            raise ConfigError(f"{where}: {key}: expected an integer, got {raw!r}")
        return int(value)
    return value


def load_config(path) -> SimConfig:
    known = {f.name for f in fields(SimConfig)}
    values, lines = {}, {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            where = f"{path}:{lineno}"
            if ":" not in text:
                raise ConfigError(f"{where}: expected 'key: value', got {text!r}")
            key, raw = (s.strip() for s in text.split(":", 1))
            if key not in known:
                raise ConfigError(f"{where}: unknown key {key!r}")
            if key in values:
                raise ConfigError(f"{where}: duplicate key {key!r} (first set on line {lines[key]})")
            values[key] = _parse_value(key, raw, where)
            lines[key] = lineno
    for key in REQUIRED:
        if key not in values:
            raise ConfigError(f"{path}: missing required key {key!r}")
    cfg = SimConfig(**values)
    try:
        cfg.params
        cfg.q0
    except ValueError as exc:
        raise ConfigError(f"{path}: invalid parameters: {exc}") from None
    if cfg.t_max <= 0:
        raise ConfigError(f"{path}:{lines['t_max']}: t_max must be > 0")
    if cfg.n_out < 2:
        raise ConfigError(f"{path}:{lines['n_out']}: n_out must be >= 2")
    if cfg.n_max_override is not None and cfg.n_max_override < 0:
        raise ConfigError(f"{path}:{lines['n_max_override']}: n_max_override must be >= 0")
    if not 0 < cfg.tail_eps <= 1e-6:
        raise ConfigError(f"{path}:{lines['tail_eps']}: tail_eps must lie in (0, 1e-6]")
    if not 0 < cfg.dt_lo < cfg.dt_hi:
        raise ConfigError(f"{path}: need 0 < dt_lo < dt_hi")
    if cfg.error_mode not in ("asymptotic", "exact"):
        raise ConfigError(f"{path}:{lines['error_mode']}: error_mode must be asymptotic or exact")
    return cfg


def _fmt(x) -> str:
    return f"{x:.16e}"


def write_csv(out, header, columns):
    out.write(",".join(header) + "\n")
    for row in zip(*columns):
        out.write(",".join(str(v) if isinstance(v, (int, np.integer)) else _fmt(v) for v in row) + "\n")


def cmd_simulate(cfg, args, out):
    p = cfg.params
    traj = evolve_reduced(p, cfg.q0, np.linspace(0, cfg.t_max, cfg.n_out))
    write_csv(out, ["t", "sigma11", "re_sigma12", "im_sigma12", "current"],
              [traj.times, traj.sigma11, traj.sigma12.real, traj.sigma12.imag, traj.current(p)])


def cmd_distribution(cfg, args, out):
    p = cfg.params
    traj = evolve_ladder(p, cfg.q0, [0.0, cfg.t_max], cfg.n_max_override, cfg.tail_eps)
    probs = electron_distribution(traj[-1]).probs
    n = np.arange(len(probs))
    if not args.oracle:
        write_csv(out, ["n", "p_ladder"], [n, probs])
        return
    oracle = counting_field_distribution(p, cfg.q0, cfg.t_max, tail_eps=cfg.tail_eps).probs
    padded = np.zeros(len(probs))
    k = min(len(probs), len(oracle))
    padded[:k] = oracle[:k]
    write_csv(out, ["n", "p_ladder", "p_oracle"], [n, probs, padded])


def cmd_error_curve(cfg, args, out):
    curve = error_curve(cfg.params, cfg.q0, np.geomspace(cfg.dt_lo, cfg.dt_hi, N_SCAN),
                        args.mode or cfg.error_mode)
    write_csv(out, ["dt", "shot", "backaction", "total_sq"],
              [curve.dts, curve.shot, curve.backaction, curve.total_sq])


def cmd_optimal(cfg, args, out):
    p = cfg.params
    curve = optimize_measurement_time(p, cfg.q0, (cfg.dt_lo, cfg.dt_hi), args.mode or cfg.error_mode)
    record = {"dt_star_numeric": curve.argmin_dt, "min_total_sq": curve.min_total_sq}
    notes = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for tag, fn in (("weak", closed_form_weak), ("zeno", closed_form_zeno)):
            try:
                lim = fn(p)
                record[f"dt_star_{tag}"], record[f"delta2_sq_{tag}"] = lim.dt_star, lim.delta2_sq
            except ValueError as exc:
                record[f"dt_star_{tag}"] = record[f"delta2_sq_{tag}"] = None
                notes.append(f"{tag}: {exc}")
        try:
            record["visibility_ratio"] = single_run_visibility(p)
        except ValueError as exc:
            record["visibility_ratio"] = None
            notes.append(f"visibility: {exc}")
    # one message per regime; the visibility ratio repeats the weak-regime warning
    for w in caught:
        if str(w.message) not in notes:
            notes.append(str(w.message))
    record["warnings"] = notes
    out.write(json.dumps(record, indent=2, sort_keys=True) + "\n")


HANDLERS = {
    "simulate": cmd_simulate,
    "distribution": cmd_distribution,
    "error-curve": cmd_error_curve,
    "optimal": cmd_optimal,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="pcqubit", description=__doc__.split("\n\n")[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="flat key: value run configuration")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--mode", choices=("asymptotic", "exact"), help="shot-noise term; overrides error_mode")
    ap.add_argument("--oracle", action="store_true", help="distribution: add counting-field column")
    return ap


def _emit(text, path):
    # nothing is written unless the command completed
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def run_command(argv) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.oracle and args.command != "distribution":
        print("error: --oracle applies to distribution only", file=sys.stderr)
        return 2
    buf = io.StringIO()
    try:
        if args.command == "validate":
            failed = run_checks(buf)
            _emit(buf.getvalue(), args.out)
            return 1 if failed else 0
        if args.config is None:
            print(f"error: {args.command} requires --config", file=sys.stderr)
            return 2
        cfg = load_config(args.config)
        HANDLERS[args.command](cfg, args, buf)
        _emit(buf.getvalue(), args.out)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PhysicsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
