"""``itobound`` command line: bounds, DRBM tables, simulations, verification.

Exit codes: 0 success, 2 invalid input, 3 internal dominance violation,
4 drift-bound violation, 5 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from itobound.bounds import LocalBoundInput, global_density_bound, local_density_bound, sharp_local_bound
from itobound.density_probe import empirical_density_at
from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    density_upper_bound,
    euler_maclaurin_error_F,
    integral_I,
    transition_density_at_zero,
)
from itobound.errors import DriftBoundViolation, ItoBoundError
from itobound.sde_sim import PRESETS, DriftModel, SimConfig, euler_maruyama, make_preset, simulate_drbm
from itobound.verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_DOMINANCE, EXIT_DRIFT, EXIT_VERIFY = 0, 2, 3, 4, 5
OUTPUT_DIR_ENV = "ITOBOUND_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _floats(text) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    if isinstance(text, list):
        return [float(v) for v in text]
    text = str(text).strip()
    if not text:
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _float(v) -> float:
    try:
        return float(v)
    except (TypeError, ValueError):
        raise UsageError(f"expected a number, got {v!r}") from None


def _int(v) -> int:
    if isinstance(v, bool):
        raise UsageError(f"expected an integer, got {v!r}")
    if isinstance(v, int):
        return v
    try:
        return int(str(v).strip())  # exact for 64-bit seeds
    except ValueError:
        pass
    try:
        f = float(v)
    except (TypeError, ValueError):
        raise UsageError(f"expected an integer, got {v!r}") from None
    if f != int(f):
        raise UsageError(f"expected an integer, got {v!r}")
    return int(f)


def _bool(v) -> bool:
    if isinstance(v, bool):
        return v
    raise UsageError(f"expected true/false, got {v!r}")


def _str(v) -> str:
    return str(v)


# Per command: key -> (coercion, default). Only these keys are accepted.
SCHEMAS: dict[str, dict[str, tuple]] = {
    "bound": {
        "mode": (_str, "local"),
        "sharp": (_bool, False),
        "d": (_int, None),
        "C": (_float, None),
        "l": (_float, None),
        "t": (_float, None),
        "x0": (_floats, None),
        "x": (_floats, None),
        "seed": (_int, DEFAULT_SEED),
    },
    "drbm": {
        "C": (_floats, None),
        "l": (_floats, None),
        "t": (_floats, None),
        "x": (_floats, None),
        "tail_tol": (_float, 1e-10),
        "seed": (_int, DEFAULT_SEED),
    },
    "simulate": {
        "process": (_str, "ito"),
        "preset": (_str, "zero"),
        "C": (_float, 1.0),
        "value": (_floats, None),
        "d": (_int, 1),
        "x0": (_floats, [0.0]),
        "center": (_floats, None),
        "l": (_float, 1.0),
        "dt": (_float, 1e-3),
        "horizon": (_float, 1.0),
        "n_paths": (_int, 1000),
        "bins": (_int, 0),
        "range": (_floats, None),
        "probe": (_floats, None),
        "epsilon": (_float, 0.05),
        "seed": (_int, DEFAULT_SEED),
    },
    "verify": {
        "suite": (_str, "all"),
        "scale": (_float, 1.0),
        "seed": (_int, DEFAULT_SEED),
    },
}

DEFAULT_FORMAT = {"bound": "json", "drbm": "csv", "simulate": "csv", "verify": "json"}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="itobound", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON configuration document (flags override it)")
        p.add_argument("--out", help=f"output file; relative paths resolve under ${OUTPUT_DIR_ENV} if set")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", help="unsigned 64-bit seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads (never changes results)")

    b = sub.add_parser("bound", help="local, sharp or global density bound")
    mode = b.add_mutually_exclusive_group()
    mode.add_argument("--local", dest="mode", action="store_const", const="local")
    mode.add_argument("--global", dest="mode", action="store_const", const="global")
    b.add_argument("--sharp", action="store_const", const=True, help="add the series-based bound")
    for name in ("d", "C", "l", "t", "x0", "x"):
        b.add_argument(f"--{name}")
    common(b)

    d = sub.add_parser("drbm", help="tabulate p_{l,t}(x, 0) over a grid")
    for name in ("C", "l", "t", "x"):
        d.add_argument(f"--{name}", help="comma-separated values")
    d.add_argument("--tail-tol", dest="tail_tol")
    common(d)

    s = sub.add_parser("simulate", help="Euler-Maruyama or reflected BM samples")
    s.add_argument("--process", choices=("ito", "drbm"))
    s.add_argument("--preset", help=f"one of {', '.join(PRESETS)}")
    s.add_argument("--value", help="constant drift vector for the constant preset (default +C)")
    s.add_argument("--n-paths", dest="n_paths")
    for name in ("C", "d", "x0", "center", "l", "dt", "horizon", "bins", "range", "probe", "epsilon"):
        s.add_argument(f"--{name}")
    common(s)

    v = sub.add_parser("verify", help="run numbered verification checks")
    v.add_argument("--suite", help=f"one of {', '.join(SUITES)}")
    v.add_argument("--scale", help="multiplier on Monte Carlo path counts")
    common(v)
    return ap


def _load_config(path: str, command: str) -> dict:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError("config document must be a JSON object")
    if "config" in doc and isinstance(doc["config"], dict):
        if doc.get("command", command) != command:
            raise UsageError(f"config document is for command {doc['command']!r}, not {command!r}")
        doc = doc["config"]
    return doc


def merge_config(command: str, args: argparse.Namespace) -> dict:
    schema = SCHEMAS[command]
    raw: dict = {}
    if args.config:
        raw.update(_load_config(args.config, command))
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise UsageError(f"unknown config keys for {command}: {', '.join(unknown)}")
    for key in schema:
        flag = getattr(args, key, None)
        if flag is not None:
            raw[key] = flag
    merged = {}
    for key, (coerce, default) in schema.items():
        merged[key] = coerce(raw[key]) if key in raw and raw[key] is not None else default
    if not 0 <= merged["seed"] < 1 << 64:
        raise UsageError(f"seed={merged['seed']} must be an unsigned 64-bit integer")
    return merged


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise UsageError(f"missing required parameter(s): {', '.join(missing)}")


# ------------------------------------------------------------- output


def _now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat().replace("+00:00", "Z")


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def render_json(command: str, cfg: dict, result: dict) -> str:
    doc = {"command": command, "generated_at": _now(), "seed": cfg["seed"], "config": cfg, "result": result}
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def render_csv(command: str, cfg: dict, header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    buf.write(f"# itobound {command}\r\n")
    buf.write(f"# generated_at: {_now()}\r\n")
    buf.write(f"# config: {json.dumps(_clean(cfg), allow_nan=False)}\r\n")
    w = csv.writer(buf)  # RFC 4180: CRLF, minimal quoting
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (repr(float(v)) if isinstance(v, (float, np.floating)) else v) for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if not path.is_absolute() and base:
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, newline="")


# ------------------------------------------------------------- commands


def cmd_bound(cfg: dict, fmt: str) -> tuple[str, int]:
    _require(cfg, "C", "t", "x0", "x")
    x0, x = cfg["x0"], cfg["x"]
    d = cfg["d"] if cfg["d"] is not None else len(x)
    if len(x0) == 1 and d > 1:
        x0 = x0 * d
    if len(x) == 1 and d > 1:
        x = x * d
    if d < 1 or len(x0) != d or len(x) != d:
        raise UsageError(f"x0 and x must have d={d} coordinates (got {len(x0)} and {len(x)})")
    code = EXIT_OK
    if cfg["mode"] == "global":
        g = global_density_bound(x0, x, cfg["t"], cfg["C"], d)
        result = {"mode": "global", "value": g.value, "crude": g.crude, "factors": list(g.factors)}
        rows = [[j, x0[j], x[j], "", "", f] for j, f in enumerate(g.factors)]
    elif cfg["mode"] == "local":
        _require(cfg, "l")
        inp = LocalBoundInput(tuple(x0), tuple(x), cfg["t"], cfg["C"], cfg["l"])
        rep = local_density_bound(inp)
        result = {"mode": "local", **rep.to_dict()}
        rows = [[j, x0[j], x[j], rep.a[j], rep.z[j], rep.factors[j]] for j in range(d)]
        if cfg["sharp"]:
            sb = sharp_local_bound(inp)
            flagged = sb.value - sb.error > rep.product
            result["sharp"] = {"value": sb.value, "error": sb.error, "densities": list(sb.densities),
                               "exceeds_closed_form": flagged}
            if flagged:
                code = EXIT_DOMINANCE
    else:
        raise UsageError(f"mode must be 'local' or 'global', got {cfg['mode']!r}")
    if fmt == "json":
        return render_json("bound", cfg, result), code
    value = result.get("value", result.get("product"))
    rows = [r + [value] for r in rows]
    return render_csv("bound", cfg, ["j", "x0_j", "x_j", "a_j", "z_j", "factor_j", "product"], rows), code


DRBM_COLUMNS = ["C", "l", "t", "x", "value", "n_terms", "tail_bound", "bound", "I", "F", "flag"]


def cmd_drbm(cfg: dict, fmt: str) -> tuple[str, int]:
    _require(cfg, "C", "l", "t", "x")
    grid = list(itertools.product(cfg["C"], cfg["l"], cfg["t"], cfg["x"]))
    if not grid:
        raise UsageError("empty grid: every one of C, l, t, x needs at least one value")
    opts = SeriesOptions(tail_tol=cfg["tail_tol"])
    rows = []
    for C, l, t, x in grid:
        p = DrbmParams(C, l, t, x)
        r = transition_density_at_zero(p, opts)
        bound = density_upper_bound(p) if C > 0 else None
        F = euler_maclaurin_error_F(p) if C > 0 else None
        # rounding allowance: at large t both sides equal the stationary value
        flag = bound is not None and r.value - r.tail_bound > bound * (1.0 + 1e-12)
        rows.append([C, l, t, x, r.value, r.n_terms, r.tail_bound, bound, integral_I(p), F, int(flag)])
    code = EXIT_DOMINANCE if any(r[-1] for r in rows) else EXIT_OK
    if fmt == "json":
        return render_json("drbm", cfg, {"columns": DRBM_COLUMNS, "rows": rows}), code
    return render_csv("drbm", cfg, DRBM_COLUMNS, rows), code


def _simulate_batch(cfg: dict, threads: int):
    d = cfg["d"]
    sim = SimConfig(dt=cfg["dt"], horizon=cfg["horizon"], n_paths=cfg["n_paths"], seed=cfg["seed"], d=d)
    if cfg["process"] == "drbm":
        if d != 1:
            raise UsageError("process drbm is one-dimensional (d=1)")
        start = cfg["x0"][0] if len(cfg["x0"]) == 1 else None
        if start is None:
            raise UsageError("process drbm needs a scalar x0")
        p = DrbmParams(cfg["C"], cfg["l"], cfg["horizon"], start)
        return simulate_drbm(p, sim, threads)
    if cfg["process"] != "ito":
        raise UsageError(f"process must be 'ito' or 'drbm', got {cfg['process']!r}")
    center = cfg["center"] if cfg["center"] is not None else cfg["x0"]
    if cfg["preset"] == "constant" and cfg["value"] is not None:
        drift = DriftModel.constant(np.broadcast_to(cfg["value"], (d,)).copy(), cfg["C"])
    else:
        drift = make_preset(cfg["preset"], cfg["C"], d, center=center)
    return euler_maruyama(cfg["x0"], drift, sim, threads)


def cmd_simulate(cfg: dict, fmt: str, threads: int) -> tuple[str, int]:
    batch = _simulate_batch(cfg, threads)
    term = batch.terminal
    d = term.shape[1]
    result: dict = {"n_paths": int(term.shape[0]), "d": d}
    if cfg["probe"] is not None:
        result["probe"] = {"x": cfg["probe"], **empirical_density_at(term, cfg["probe"], cfg["epsilon"]).to_dict()}
    if cfg["bins"] > 0:
        if cfg["range"] is not None:
            if len(cfg["range"]) != 2 or not cfg["range"][0] < cfg["range"][1]:
                raise UsageError("range must be 'lo,hi' with lo < hi")
            lo, hi = cfg["range"]
        elif cfg["process"] == "drbm":
            lo, hi = 0.0, cfg["l"]
        else:
            lo, hi = float(term[:, 0].min()), float(term[:, 0].max())
            if lo == hi:
                hi = lo + 1.0
        counts, edges = np.histogram(term[:, 0], bins=cfg["bins"], range=(lo, hi))
        width = edges[1] - edges[0]
        dens = counts / (term.shape[0] * width)
        rows = [[edges[i], edges[i + 1], int(counts[i]), dens[i]] for i in range(cfg["bins"])]
        header = ["left", "right", "count", "density"]
        result["histogram"] = {"edges": edges, "counts": counts, "density": dens}
    else:
        header = ["path"] + [f"x{j + 1}" for j in range(d)]
        rows = [[i, *term[i].tolist()] for i in range(term.shape[0])]
        result["terminal"] = term
    if fmt == "json":
        return render_json("simulate", cfg, result), EXIT_OK
    return render_csv("simulate", cfg, header, rows), EXIT_OK


def cmd_verify(cfg: dict, fmt: str, threads: int) -> tuple[str, int]:
    if cfg["suite"] not in SUITES:
        raise UsageError(f"unknown suite {cfg['suite']!r}; choose from {', '.join(SUITES)}")
    if not cfg["scale"] > 0:
        raise UsageError(f"scale={cfg['scale']} must be > 0")
    results = run_suite(cfg["suite"], scale=cfg["scale"], threads=threads, seed=cfg["seed"],
                        progress=lambda r: print(r.line(), file=sys.stderr))
    ok = all(r.passed for r in results)
    code = EXIT_OK if ok else EXIT_VERIFY
    if fmt == "json":
        return render_json("verify", cfg, {"passed": ok, "checks": [r.to_dict() for r in results]}), code
    rows = [[r.criterion, r.name, int(r.passed), r.measured, r.tolerance, round(r.seconds, 3)] for r in results]
    return render_csv("verify", cfg, ["criterion", "name", "passed", "measured", "tolerance", "seconds"], rows), code


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise UsageError(f"threads={args.threads} must be >= 1")
        cfg = merge_config(args.command, args)
        fmt = args.format or DEFAULT_FORMAT[args.command]
        if args.command == "bound":
            text, code = cmd_bound(cfg, fmt)
        elif args.command == "drbm":
            text, code = cmd_drbm(cfg, fmt)
        elif args.command == "simulate":
            text, code = cmd_simulate(cfg, fmt, args.threads)
        else:
            text, code = cmd_verify(cfg, fmt, args.threads)
    except DriftBoundViolation as exc:
        print(f"itobound: {exc}", file=sys.stderr)
        return EXIT_DRIFT
    except (UsageError, ItoBoundError, ValueError) as exc:
        print(f"itobound: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _emit(text, args.out)
    if code == EXIT_DOMINANCE:
        print("itobound: dominance check failed (series exceeds closed-form bound)", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
