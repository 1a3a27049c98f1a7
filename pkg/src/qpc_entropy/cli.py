"""Command-line entry point: ``qpc-entropy <command> --config FILE``.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import lattice as lat
from . import verify as verify_mod
from .entropy import DEFAULT_TRUNCATION, entropy_from_cumulants, series_convergence_report
from .errors import ConfigError, DomainError, NumericalError
from .models import BernoulliSet, Gaussian, ImperfectTransmission, model_cumulants
from .schedule import (
    PulseTrain,
    SwitchingSchedule,
    c2_from_schedule,
    effective_temperature,
    entropy_rate,
    g_factor,
    noise_power,
    pulse_train_c2,
)
from .series import CountingStatistics
from .spectral import (
    entropy_from_measure,
    imperfect_measure,
    mu_imperfect,
    rescaling_factor,
    support_edges,
)

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x) + 0.0:.12g}"
    return str(x)


def _clean(obj):
    """Round floats to 12 significant digits for JSON output."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float(f"{v + 0.0:.12g}") if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_table(rows, out, fmt_name, extra=None):
    if fmt_name == "json":
        payload = {"rows": rows}
        if extra:
            payload.update(extra)
        text = json.dumps(_clean(payload), indent=2) + "\n"
    else:
        buf = io.StringIO()
        header = []
        for r in rows:
            header += [k for k in r if k not in header]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(r[k]) if k in r else "" for k in header])
        text = buf.getvalue()
    _emit(text, out)


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write output: {exc}", field="--out") from None


def load_config(path):
    if path is None:
        raise ConfigError("this command needs --config", field="--config")
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"no such file {path}", field="--config") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", field="--config") from None


def _require(cfg, key, kind=float):
    if key not in cfg:
        raise ConfigError("missing key", field=key)
    try:
        return kind(cfg[key])
    except (TypeError, ValueError):
        raise ConfigError(f"expected {kind.__name__}", field=key) from None


def grid(cfg, key):
    """A sweep given as a list or as ``{"start", "stop", "num"}`` (inclusive)."""
    if key not in cfg:
        raise ConfigError("missing key", field=key)
    entry = cfg[key]
    if isinstance(entry, dict):
        try:
            values = np.linspace(float(entry["start"]), float(entry["stop"]), int(entry["num"]))
        except (KeyError, TypeError, ValueError):
            raise ConfigError("grid needs numeric start, stop, num", field=key) from None
    elif isinstance(entry, list):
        try:
            values = np.array([float(v) for v in entry])
        except (TypeError, ValueError):
            raise ConfigError("grid entries must be numbers", field=key) from None
    else:
        raise ConfigError("expected a list or {start, stop, num}", field=key)
    if values.size == 0:
        raise ConfigError("grid is empty", field=key)
    if np.any(np.diff(values) <= 0):
        raise ConfigError("grid must be strictly increasing", field=key)
    return values


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_noise(args):
    cfg = load_config(args.config)
    nu = _require(cfg, "frequency")
    tau = _require(cfg, "tau")
    widths = grid(cfg, "widths")
    rows = []
    for w in widths:
        try:
            rows.append(
                {
                    "w": w,
                    "S2": noise_power(nu, w, tau),
                    "C2_per_cycle": pulse_train_c2(PulseTrain(nu, w, tau, 1)),
                    "entropy_per_cycle": entropy_rate(nu, w, tau) / nu,
                    "T_eff": effective_temperature(nu, w, tau),
                }
            )
        except DomainError as exc:
            raise ConfigError(f"w = {w:g}: {exc}", field="widths") from None
    write_table(rows, args.out, args.format, {"frequency": nu, "tau": tau})
    return EXIT_OK


def cmd_spectral(args):
    cfg = load_config(args.config)
    G = _require(cfg, "G")
    Ds = grid(cfg, "D")
    samples = int(cfg.get("samples", 200))
    if samples < 2:
        raise ConfigError("need at least 2 samples", field="samples")
    if np.any(Ds <= 0) or np.any(Ds > 1):
        raise ConfigError("every D must lie in (0, 1]", field="D")
    z = (np.arange(samples) + 0.5) / samples
    sample_rows, summary = [], []
    S1 = entropy_from_measure(imperfect_measure(G, 1.0))
    for D in Ds:
        zm, zp = support_edges(D)
        # density in units of G/(2 pi^2)
        scaled = mu_imperfect(G, D, z) / (G / (2 * math.pi**2))
        sample_rows += [{"D": D, "z": zi, "mu_scaled": mi} for zi, mi in zip(z, scaled)]
        row = {"D": D, "z_minus": zm, "z_plus": zp}
        try:
            S = entropy_from_measure(imperfect_measure(G, D))
            row.update(S=S, F=rescaling_factor(D), error="")
        except NumericalError as exc:
            row.update(S=float("nan"), F=float("nan"), error=str(exc))
        summary.append(row)
    if args.format == "json":
        write_table(sample_rows, args.out, "json", {"G": G, "S_perfect": S1, "summary": summary})
    else:
        write_table(sample_rows, args.out, "csv")
        text = json.dumps(_clean({"G": G, "S_perfect": S1, "summary": summary}), indent=2) + "\n"
        _emit(text, None if args.out is None else str(args.out) + ".summary.json")
    return EXIT_OK


def cmd_schedule(args):
    cfg = load_config(args.config)
    s = SwitchingSchedule.from_dict(cfg)
    G = g_factor(s)
    c2 = c2_from_schedule(s)
    row = {
        "intervals": len(s.intervals),
        "tau": s.tau,
        "G": G,
        "C2": c2,
        "entropy": math.pi**2 / 3 * c2,
    }
    write_table([row], args.out, args.format)
    return EXIT_OK


def cmd_lattice(args):
    cfg = lat.LatticeConfig.from_dict(load_config(args.config))
    if not cfg.times:
        raise ConfigError("at least one evaluation time required", field="times")
    rows = [p.record(cfg.dump_eigenvalues) for p in lat.run_protocol(cfg)]
    if any(r["beyond_horizon"] for r in rows):
        print(
            f"warning: contact open beyond the reflection horizon t = {cfg.horizon:g}",
            file=sys.stderr,
        )
    extra = {"L": cfg.L, "J": cfg.J, "J_c": cfg.J_c, "D_fermi": lat.bond_transmission(cfg.bond_ratio)}
    write_table(rows, args.out, args.format, extra)
    return EXIT_OK


def _model_from(entry):
    kind = entry.get("type")
    try:
        if kind == "gaussian":
            return Gaussian(float(entry["G"]))
        if kind == "imperfect":
            return ImperfectTransmission(float(entry["G"]), float(entry["D"]))
        if kind == "bernoulli":
            return BernoulliSet(entry["levels"], float(entry.get("charge_offset", 0.0)))
    except KeyError as exc:
        raise ConfigError("missing key", field=f"model.{exc.args[0]}") from None
    raise ConfigError("type must be gaussian, imperfect or bernoulli", field="model.type")


def cmd_entropy(args):
    cfg = load_config(args.config)
    order = int(cfg.get("truncation_order", DEFAULT_TRUNCATION))
    if "cumulants" in cfg:
        vals = cfg["cumulants"]
        if isinstance(vals, dict):
            c = CountingStatistics.from_mapping({int(k): float(v) for k, v in vals.items()},
                                                max(order, max(int(k) for k in vals)))
        else:
            c = CountingStatistics([float(v) for v in vals])
    elif "model" in cfg:
        c = model_cumulants(_model_from(cfg["model"]), int(cfg.get("max_order", max(order, 8))))
    else:
        raise ConfigError("give either 'cumulants' or 'model'", field="cumulants")
    est = entropy_from_cumulants(c, order)
    rows = [
        {"order": m, "cumulant": c[m], "partial_sum": s}
        for m, s in zip(est.orders, est.partial_sums)
    ]
    extra = {"entropy": est.value, "truncation_order": order}
    if c.max_order >= 4:
        extra["convergence"] = series_convergence_report(c, order if order >= 4 else None).as_dict()
    write_table(rows, args.out, args.format, extra)
    return EXIT_OK


def cmd_verify(args):
    checks = verify_mod.run(args.level)
    width = max(len(c.name) for c in checks)
    print(f"{'check':<{width}}  result  expected | observed | tolerance")
    for c in checks:
        print(f"{c.name:<{width}}  {'PASS' if c.passed else 'FAIL':<6}  "
              f"{c.expected} | {c.observed} | {c.tolerance}")
    print("\ndocumented discrepancies:")
    for note in verify_mod.discrepancy_notes():
        print(f"  - {note}")
    failed = [c for c in checks if not c.passed]
    print(f"\n{len(checks) - len(failed)}/{len(checks)} checks passed")
    if args.out:
        text = json.dumps(_clean({"level": args.level, "checks": [c.as_dict() for c in checks],
                                  "discrepancies": verify_mod.discrepancy_notes()}), indent=2)
        _emit(text + "\n", args.out)
    return EXIT_VERIFY if failed else EXIT_OK


COMMANDS = {
    "noise": (cmd_noise, "noise power, entropy and T_eff of a pulse train vs pulse width"),
    "spectral": (cmd_spectral, "eigenvalue density and rescaling factor vs transmission"),
    "schedule": (cmd_schedule, "G-factor, C2 and entropy of an explicit switching schedule"),
    "lattice": (cmd_lattice, "exact free-fermion simulation of a switching protocol"),
    "entropy": (cmd_entropy, "entropy series from cumulants or a generating-function model"),
    "verify": (cmd_verify, "run the cross-check suite"),
}


def build_parser():
    parser = argparse.ArgumentParser(prog="qpc-entropy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="JSON configuration file")
        p.add_argument("--out", type=Path, help="output path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if name == "verify":
            p.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handler = COMMANDS[args.command][0]
    try:
        return handler(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
