"""
Batch experiment runner.

Subcommands ``solve-phases``, ``convergence``, ``fragments`` and
``qubit-baseline`` each emit a CSV or JSON table. Options may also come from a
JSON file given with ``--config``; explicit flags override it.

Exit codes: 0 success, 1 validation error, 2 no phase solution found,
3 dense dimension cap exceeded.
"""

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .darwinism import DimensionCapError, EnvironmentModel, mutual_info_profile, system_state_after
from .monitoring import dephase, irreality
from .observable import PhaseVector
from .operators import (
    check_density,
    ket_to_density,
    make_rng,
    operator_from_json,
    random_density,
    tensor,
    trace_distance,
)
from .phases import analytic_phases, eta_from_phases, solve_phases
from .qubit import channel_mismatch, compare_with_general_T

log = logging.getLogger("qmon")

EXIT_OK, EXIT_INVALID, EXIT_NOT_FOUND, EXIT_CAP = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


class SolverNotFound(RuntimeError):
    pass


COMMON = {"out": None, "format": None, "config": None}
DEFAULTS = {
    "solve-phases": {"d": None, "eta": None, "seed": 0, "tol": 1e-10, "max_restarts": 50},
    "convergence": {
        "d": None, "d_b": 1, "theta": None, "eta": None, "n_max": None,
        "state": "plus", "rank": None, "state_file": None, "seed": 0,
    },
    "fragments": {
        "d": None, "d_b": 1, "theta": None, "eta": None, "phases": None, "n": None,
        "m_max": None, "state": "plus", "rank": None, "state_file": None, "seed": 0,
        "backend": "auto",
    },
    "qubit-baseline": {"thetas": None, "grid": "0:1.5707963267948966:20", "states": 10, "d_b": 1, "seed": 0},
}
DEFAULT_FORMAT = {"solve-phases": "json"}
STATE_KINDS = ("plus", "pure-random", "mixed-random", "file")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.12g}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmon", description=__doc__.strip().splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS

    def common(p):
        p.add_argument("--out", default=S, help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=S)
        p.add_argument("--config", default=S, help="JSON file of options; flags override it")
        p.add_argument("--seed", type=int, default=S)

    def state_opts(p):
        p.add_argument("--d-b", dest="d_b", type=int, default=S, help="bystander dimension")
        p.add_argument("--state", choices=STATE_KINDS, default=S)
        p.add_argument("--rank", type=int, default=S)
        p.add_argument("--state-file", default=S, help="JSON rows of [re, im] pairs, or .npy")

    p = sub.add_parser("solve-phases", help="solve the phase constraints for a target noise")
    p.add_argument("--d", type=int, default=S)
    p.add_argument("--eta", type=float, default=S)
    p.add_argument("--tol", type=float, default=S)
    p.add_argument("--max-restarts", dest="max_restarts", type=int, default=S)
    common(p)

    p = sub.add_parser("convergence", help="distance to the dephased state versus n")
    p.add_argument("--d", type=int, default=S)
    p.add_argument("--theta", type=float, default=S)
    p.add_argument("--eta", type=float, default=S)
    p.add_argument("--n-max", dest="n_max", type=int, default=S)
    state_opts(p)
    common(p)

    p = sub.add_parser("fragments", help="mutual information between system and fragments")
    p.add_argument("--d", type=int, default=S)
    p.add_argument("--theta", type=float, default=S)
    p.add_argument("--eta", type=float, default=S)
    p.add_argument("--phases", default=S, help="JSON array of radians")
    p.add_argument("--n", type=int, default=S)
    p.add_argument("--m-max", dest="m_max", type=int, default=S)
    p.add_argument("--backend", choices=("dense", "structured", "auto"), default=S)
    state_opts(p)
    common(p)

    p = sub.add_parser("qubit-baseline", help="c-maybe gate versus the d=2 phase construction")
    p.add_argument("--thetas", default=S, help="comma-separated angles")
    p.add_argument("--grid", default=S, help="start:stop:count (inclusive)")
    p.add_argument("--states", type=int, default=S, help="random states per angle")
    p.add_argument("--d-b", dest="d_b", type=int, default=S)
    common(p)
    return parser


def resolve_config(command: str, flags: dict) -> dict:
    """Merge defaults, the optional ``--config`` file and explicit flags."""
    allowed = dict(DEFAULTS[command], **COMMON)
    cfg = dict(allowed)
    cfg["format"] = DEFAULT_FORMAT.get(command, "csv")
    path = flags.get("config")
    if path:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {path}: {exc}")
        if not isinstance(loaded, dict):
            raise ValidationError("config file must hold a JSON object")
        loaded = {k.replace("-", "_"): v for k, v in loaded.items()}
        unknown = sorted(set(loaded) - set(allowed) - {"command"})
        if unknown:
            raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
        if loaded.get("command", command) != command:
            raise ValidationError(f"config is for {loaded['command']!r}, not {command!r}")
        loaded.pop("command", None)
        cfg.update(loaded)
    cfg.update({k: v for k, v in flags.items() if k in allowed})
    return cfg


def _require(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ValidationError(f"missing required option(s): {', '.join(missing)}")


def _int(cfg, key, lo=None):
    try:
        v = int(cfg[key])
    except (TypeError, ValueError):
        raise ValidationError(f"{key} must be an integer")
    if lo is not None and v < lo:
        raise ValidationError(f"{key} must be >= {lo}, got {v}")
    return v


def _eta(cfg):
    try:
        eta = float(cfg["eta"])
    except (TypeError, ValueError):
        raise ValidationError("eta must be a number")
    if not 0.0 <= eta <= 1.0:
        raise ValidationError(f"eta must lie in [0, 1], got {eta}")
    return eta


def make_state(cfg, d: int, rng) -> np.ndarray:
    d_b = _int(cfg, "d_b", 1)
    kind = cfg["state"]
    if kind not in STATE_KINDS:
        raise ValidationError(f"unknown state spec {kind!r}")
    dim = d * d_b
    if kind == "plus":
        zero_b = np.zeros((d_b, d_b), dtype=complex)
        zero_b[0, 0] = 1
        return tensor([ket_to_density(np.ones(d)), zero_b])
    if kind == "pure-random":
        return random_density(dim, 1, rng)
    if kind == "mixed-random":
        rank = dim if cfg.get("rank") is None else _int(cfg, "rank", 1)
        if rank > dim:
            raise ValidationError(f"rank {rank} exceeds state dimension {dim}")
        return random_density(dim, rank, rng)
    path = cfg.get("state_file")
    if not path:
        raise ValidationError("state 'file' needs --state-file")
    try:
        if str(path).endswith(".npy"):
            rho = np.load(path)
        else:
            rho = operator_from_json(json.loads(Path(path).read_text()))
        rho = check_density(rho)
    except (OSError, ValueError) as exc:
        raise ValidationError(f"bad state file {path}: {exc}")
    if rho.shape[0] != dim:
        raise ValidationError(f"state file has dimension {rho.shape[0]}, expected {dim}")
    return rho


def _phases(cfg, d: int) -> PhaseVector:
    given = [k for k in ("theta", "eta", "phases") if cfg.get(k) is not None]
    if len(given) != 1:
        options = "theta, eta, phases" if "phases" in cfg else "theta, eta"
        raise ValidationError(f"give exactly one of: {options}")
    key = given[0]
    if key == "theta":
        p = analytic_phases(d, float(cfg["theta"]))
    elif key == "phases":
        raw = cfg["phases"]
        try:
            p = PhaseVector(tuple(json.loads(raw) if isinstance(raw, str) else raw))
        except (ValueError, TypeError) as exc:
            raise ValidationError(f"bad phases: {exc}")
        if p.d != d:
            raise ValidationError(f"phases have d={p.d}, expected {d}")
    else:
        report = solve_phases(d, _eta(cfg), seed=_int(cfg, "seed"))
        if not report.success:
            raise SolverNotFound(f"no phases found for d={d}, eta={cfg['eta']}")
        p = report.phases
    try:
        eta_from_phases(p)
    except ValueError as exc:
        raise ValidationError(str(exc))
    return p


def run_solve_phases(cfg: dict) -> dict:
    _require(cfg, "d", "eta")
    d = _int(cfg, "d", 2)
    eta = _eta(cfg)
    tol = float(cfg["tol"])
    if tol <= 0:
        raise ValidationError("tol must be positive")
    report = solve_phases(d, eta, seed=_int(cfg, "seed"), tol=tol, max_restarts=_int(cfg, "max_restarts", 1))
    return report.to_dict()


def run_convergence(cfg: dict) -> list:
    _require(cfg, "d", "n_max")
    d = _int(cfg, "d", 2)
    n_max = _int(cfg, "n_max", 1)
    phases = _phases(cfg, d)
    rng = make_rng(_int(cfg, "seed"))
    rho = make_state(cfg, d, rng)
    eta = eta_from_phases(phases)
    model = EnvironmentModel(phases, 0, d_B=_int(cfg, "d_b", 1))
    target = dephase(rho, model.basis, model.system_layout)
    rows = []
    for n in range(n_max + 1):
        model = EnvironmentModel(phases, n, d_B=model.d_B)
        after = system_state_after(rho, model)
        rows.append({
            "n": n,
            "trace_distance_to_dephased": trace_distance(after, target),
            "irreality_bits": irreality(after, model.basis, model.system_layout),
            "effective_epsilon": 1.0 - eta**n,
        })
    return rows


def run_fragments(cfg: dict) -> dict:
    _require(cfg, "d", "n")
    d = _int(cfg, "d", 2)
    n = _int(cfg, "n", 0)
    m_max = n if cfg.get("m_max") is None else _int(cfg, "m_max", 0)
    if m_max > n:
        raise ValidationError(f"m_max={m_max} exceeds n={n}")
    if cfg["backend"] not in ("dense", "structured", "auto"):
        raise ValidationError(f"unknown backend {cfg['backend']!r}")
    phases = _phases(cfg, d)
    rng = make_rng(_int(cfg, "seed"))
    rho = make_state(cfg, d, rng)
    model = EnvironmentModel(phases, n, d_B=_int(cfg, "d_b", 1))
    profile = mutual_info_profile(rho, model, m_max, backend=cfg["backend"])
    return profile


def _theta_grid(cfg) -> list:
    if cfg.get("thetas") is not None:
        raw = cfg["thetas"]
        vals = raw if isinstance(raw, list) else str(raw).split(",")
        try:
            thetas = [float(v) for v in vals]
        except ValueError:
            raise ValidationError(f"bad theta list {raw!r}")
    else:
        try:
            start, stop, count = str(cfg["grid"]).split(":")
            thetas = list(np.linspace(float(start), float(stop), int(count)))
        except ValueError:
            raise ValidationError(f"bad grid {cfg['grid']!r}, expected start:stop:count")
    if not thetas:
        raise ValidationError("theta grid is empty")
    return thetas


def run_qubit_baseline(cfg: dict) -> list:
    thetas = _theta_grid(cfg)
    count = _int(cfg, "states", 1)
    d_b = _int(cfg, "d_b", 1)
    rng = make_rng(_int(cfg, "seed"))
    states = [random_density(2 * d_b, None, rng) for _ in range(count)]
    rows = []
    for theta in thetas:
        eps_c, eps_t = compare_with_general_T(theta)
        rows.append({
            "theta": theta,
            "eps_cmaybe": eps_c,
            "eps_generalT": eps_t,
            "channel_distance": channel_mismatch(theta, states),
        })
    return rows


def rows_to_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([fmt(v) for v in row.values()])
    return buf.getvalue()


def render(command: str, result, form: str) -> str:
    if command == "fragments":
        if form == "csv":
            return result.to_csv()
        return result.to_json(indent=2) + "\n"
    if command == "solve-phases":
        if form == "json":
            return json.dumps(result, indent=2) + "\n"
        flat = dict(result, phases=json.dumps(result["phases"]))
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(flat))
        writer.writerow([v if isinstance(v, (str, bool)) else fmt(v) for v in flat.values()])
        return buf.getvalue()
    if form == "csv":
        return rows_to_csv(result)
    return json.dumps(result, indent=2) + "\n"


RUNNERS = {
    "solve-phases": run_solve_phases,
    "convergence": run_convergence,
    "fragments": run_fragments,
    "qubit-baseline": run_qubit_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "verbose")}
    try:
        cfg = resolve_config(args.command, flags)
        if cfg["format"] not in ("csv", "json"):
            raise ValidationError(f"unknown format {cfg['format']!r}")
        result = RUNNERS[args.command](cfg)
        text = render(args.command, result, cfg["format"])
    except DimensionCapError as exc:
        print(f"qmon: {exc}", file=sys.stderr)
        return EXIT_CAP
    except SolverNotFound as exc:
        print(f"qmon: {exc}", file=sys.stderr)
        return EXIT_NOT_FOUND
    except ValueError as exc:
        # ValidationError, InvalidStateError and constructor checks
        print(f"qmon: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if cfg["out"]:
        Path(cfg["out"]).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "solve-phases" and not result["success"]:
        return EXIT_NOT_FOUND
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
