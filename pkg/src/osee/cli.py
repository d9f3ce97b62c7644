"""Command-line entry point.

Subcommands map one-to-one onto the experiment drivers; every file-producing
run also writes a `<out>.run.json` manifest echoing the resolved parameters,
and `--config manifest.json` replays it byte-identically.

Exit codes: 0 success, 2 validation error, 1 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .chain import ChainSpec, DisorderSpec, build_hamiltonian, realize_disorder
from .dispersion import dispersion_symbol, dispersion_xy
from .entropy import correlation_matrix_from_cache, make_operator, osee
from .errors import NumericalError
from .evolution import spectral_decompose
from .experiments import (
    fit_log_growth,
    run_disorder_ensemble,
    run_phase_diagram,
    run_trace,
    write_ensemble_csv,
    write_ensemble_manifest,
    write_fit_json,
    write_phase_diagram_csv,
    write_trace_csv,
    _write_json,
    _write_text,
)
from .oracle import oracle_osee

BOUNDARY_BY_BC = {"open": "open", "periodic": "periodic_majorana"}


def parse_range(text: str) -> np.ndarray:
    """`x` | `start:stop:step` (inclusive) | `start:stop:logK` (K log-spaced)."""
    parts = str(text).split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"range must be 'start:stop:step' or 'start:stop:logK', got {text!r}")
    start, stop = float(parts[0]), float(parts[1])
    tail = parts[2]
    if tail.startswith("log"):
        count = int(tail[3:])
        if count < 2:
            raise ValueError(f"log range needs at least 2 points, got {count}")
        if not 0 < start < stop:
            raise ValueError(f"log range needs 0 < start < stop, got {text!r}")
        return np.geomspace(start, stop, count)
    step = float(tail)
    if step <= 0 or stop < start:
        raise ValueError(f"range needs step > 0 and stop >= start, got {text!r}")
    count = int(round((stop - start) / step)) + 1
    values = start + step * np.arange(count)
    return values[values <= stop + 1e-9 * step]


def parse_float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x != ""]


def _require_keys(doc: dict, required: set[str], optional: set[str], what: str) -> None:
    missing = required - set(doc)
    unknown = set(doc) - required - optional
    if missing:
        raise ValueError(f"{what}: missing keys {sorted(missing)}")
    if unknown:
        raise ValueError(f"{what}: unknown keys {sorted(unknown)}")


def _write_run_manifest(out: str, subcommand: str, params: dict, threads: int | None) -> None:
    doc = {
        "artifact_version": __version__,
        "subcommand": subcommand,
        "params": params,
        "out": out,
        "threads": threads,
    }
    _write_json(f"{out}.run.json", doc)


def _spec_from_params(params: dict) -> ChainSpec:
    disorder = None
    if params.get("disorder_strength", 0.0) > 0.0:
        disorder = DisorderSpec(
            target=params.get("disorder_target", "h"),
            strength=float(params["disorder_strength"]),
            seed=int(params.get("seed", 0)),
        )
    return ChainSpec(
        n=int(params["n"]),
        gamma=float(params["gamma"]),
        h=float(params["h"]),
        mu=float(params.get("mu", 0.0)),
        h_alt=float(params.get("h_alt", 0.0)),
        disorder=disorder,
        boundary=BOUNDARY_BY_BC[params.get("bc", "open")],
    )


def run_trace_command(params: dict, out: str, threads: int | None) -> int:
    _require_keys(
        params,
        required={"n", "gamma", "h", "operator"},
        optional={"mu", "h_alt", "bc", "halve", "t", "method",
                  "disorder_target", "disorder_strength", "seed", "realization"},
        what="trace params",
    )
    spec = _spec_from_params(params)
    if spec.disorder is not None:
        spec = realize_disorder(spec, int(params.get("realization", 0)))
    times = parse_range(params["t"]) if params.get("t") else None
    trace = run_trace(
        spec,
        params["operator"],
        time_grid=times,
        halve=bool(params.get("halve", False)),
        method=params.get("method", "auto"),
        threads=threads,
    )
    write_trace_csv(out, trace)
    _write_run_manifest(out, "trace", params, threads)
    return 0


def run_fit_command(params: dict, out: str | None, threads: int | None) -> int:
    _require_keys(params, required={"trace", "t_min", "t_max"}, optional=set(), what="fit params")
    rows = np.loadtxt(params["trace"], delimiter=",", skiprows=1, ndmin=2)
    fit = fit_log_growth(rows[:, 0], rows[:, 1], float(params["t_min"]), float(params["t_max"]))
    if out is None:
        print(json.dumps({"c": fit.c, "c_prime": fit.c_prime, "t_min": fit.t_min,
                          "t_max": fit.t_max, "rms_residual": fit.rms_residual},
                         indent=2, sort_keys=True))
    else:
        write_fit_json(out, fit)
        _write_run_manifest(out, "fit", params, threads)
    return 0


def run_phase_diagram_command(params: dict, out: str, threads: int | None) -> int:
    _require_keys(
        params,
        required={"n", "t", "gamma", "h"},
        optional={"operator"},
        what="phase-diagram params",
    )
    result = run_phase_diagram(
        n=int(params["n"]),
        t=float(params["t"]),
        gamma_grid=parse_range(params["gamma"]),
        h_grid=parse_range(params["h"]),
        operator=params.get("operator", "F"),
        threads=threads,
    )
    write_phase_diagram_csv(out, result)
    _write_run_manifest(out, "phase-diagram", params, threads)
    return 0


def run_disorder_command(params: dict, out: str, threads: int | None) -> int:
    _require_keys(
        params,
        required={"n", "gamma", "h", "epsilons", "r", "seed", "t"},
        optional={"mu", "h_alt", "bc", "halve", "operator", "target"},
        what="disorder params",
    )
    template = ChainSpec(
        n=int(params["n"]),
        gamma=float(params["gamma"]),
        h=float(params["h"]),
        mu=float(params.get("mu", 0.0)),
        h_alt=float(params.get("h_alt", 0.0)),
        disorder=DisorderSpec(
            target=params.get("target", "h"), strength=0.0, seed=int(params["seed"])
        ),
        boundary=BOUNDARY_BY_BC[params.get("bc", "open")],
    )
    raw = params["epsilons"]
    epsilons = [float(x) for x in raw] if isinstance(raw, (list, tuple)) else parse_float_list(raw)
    if not epsilons:
        raise ValueError("epsilons list is empty")
    results = run_disorder_ensemble(
        template,
        epsilons,
        realizations=int(params["r"]),
        master_seed=int(params["seed"]),
        time_grid=parse_range(params["t"]),
        operator=params.get("operator", "F"),
        halve=bool(params.get("halve", False)),
        threads=threads,
    )
    for res in results:
        write_ensemble_csv(f"{out}_eps{res.strength:g}.csv", res)
    write_ensemble_manifest(f"{out}.manifest.json", results)
    _write_run_manifest(out, "disorder", params, threads)
    return 0


def run_dispersion_command(params: dict, out: str | None, threads: int | None) -> int:
    _require_keys(
        params,
        required={"gamma", "h"},
        optional={"mu", "h_alt", "grid", "json"},
        what="dispersion params",
    )
    gamma, h = float(params["gamma"]), float(params["h"])
    mu, h_alt = float(params.get("mu", 0.0)), float(params.get("h_alt", 0.0))
    grid = int(params.get("grid", 8192))
    if mu == 0.0 and h_alt == 0.0:
        profile = dispersion_xy(gamma, h, grid=grid)
    else:
        spec = ChainSpec(n=16, gamma=gamma, h=h, mu=mu, h_alt=h_alt, boundary="periodic_majorana")
        profile = dispersion_symbol(spec, grid=grid)
    block = {
        "points": [
            {"phi": p.phi, "band": p.band, "degenerate": p.degenerate}
            for p in profile.stationary_points
        ],
        "m": profile.m,
        "c_predicted": profile.c_predicted,
        "cusp_detected": "cusp_detected" in profile.diagnostics,
        "degenerate_band": "degenerate_band" in profile.diagnostics,
    }
    if out is not None:
        header = "phi," + ",".join(f"eps_band{b}" for b in range(len(profile.bands)))
        lines = [header]
        for i, phi in enumerate(profile.phi_grid):
            vals = ",".join(repr(float(band[i])) for band in profile.bands)
            lines.append(f"{repr(float(phi))},{vals}")
        _write_text(out, "\n".join(lines) + "\n")
        _write_run_manifest(out, "dispersion", params, threads)
    json_path = params.get("json")
    if json_path:
        _write_json(json_path, block)
    if out is None and not json_path:
        print(json.dumps(block, indent=2, sort_keys=True))
    return 0


def run_oracle_command(params: dict, out: str | None, threads: int | None) -> int:
    _require_keys(
        params,
        required={"n", "gamma", "h", "operator", "t"},
        optional={"mu", "h_alt", "compare"},
        what="oracle params",
    )
    spec = _spec_from_params({**params, "bc": "open"})
    t = float(params["t"])
    s_oracle = oracle_osee(spec, params["operator"], t)
    print(f"S_oracle = {s_oracle!r}")
    if params.get("compare", False):
        cache = spectral_decompose(build_hamiltonian(spec))
        op = make_operator(params["operator"], spec.n)
        s_fermionic = osee(correlation_matrix_from_cache(op, cache, t))
        print(f"S_fermionic = {s_fermionic!r}")
        print(f"diff = {abs(s_oracle - s_fermionic):.3e}")
    return 0


_RUNNERS = {
    "trace": run_trace_command,
    "fit": run_fit_command,
    "phase-diagram": run_phase_diagram_command,
    "disorder": run_disorder_command,
    "dispersion": run_dispersion_command,
    "oracle": run_oracle_command,
}

_NEEDS_OUT = {"trace", "phase-diagram", "disorder"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="osee", description="Operator space entanglement entropy experiments."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="replay a .run.json manifest")
    parser.add_argument("--out", help="output path override (with --config)")
    parser.add_argument("--threads", type=int, help="thread count override (with --config)")
    sub = parser.add_subparsers(dest="cmd")

    def add_common(p, with_spec=True):
        p.add_argument("--threads", type=int, default=None)
        if with_spec:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--gamma", type=float, required=True)
            p.add_argument("--h", type=float, required=True)
            p.add_argument("--mu", type=float, default=0.0)
            p.add_argument("--h-alt", dest="h_alt", type=float, default=0.0)

    p = sub.add_parser("trace", help="S(t) trace to CSV")
    add_common(p)
    p.add_argument("--bc", choices=("open", "periodic"), default="open")
    p.add_argument("--operator", choices=("F", "sigma_z_mid", "sigma_x_mid"), required=True)
    p.add_argument("--halve", action="store_true")
    p.add_argument("--t", help="time grid, start:stop:step or start:stop:logK")
    p.add_argument("--method", choices=("auto", "dense", "fourier"), default="auto")
    p.add_argument("--disorder-target", dest="disorder_target", choices=("h", "gamma"))
    p.add_argument("--disorder-strength", dest="disorder_strength", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--realization", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="log-growth fit of a trace CSV")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--trace", required=True)
    p.add_argument("--t-min", dest="t_min", type=float, required=True)
    p.add_argument("--t-max", dest="t_max", type=float, required=True)
    p.add_argument("--out")

    p = sub.add_parser("phase-diagram", help="S over a (gamma, h) grid at fixed t")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--gamma", required=True, help="range, e.g. 0.5 or 0.1:1.0:0.1")
    p.add_argument("--h", required=True, help="range, e.g. 0.5:1.0:0.025")
    p.add_argument("--operator", choices=("F", "sigma_z_mid", "sigma_x_mid"), default="F")
    p.add_argument("--out", required=True)

    p = sub.add_parser("disorder", help="disorder ensembles, one CSV per strength")
    add_common(p)
    p.add_argument("--bc", choices=("open", "periodic"), default="open")
    p.add_argument("--target", choices=("h", "gamma"), default="h")
    p.add_argument("--epsilons", required=True, help="comma list, e.g. 0.2,0.5,1.0")
    p.add_argument("--r", type=int, required=True, help="realizations per strength")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--operator", choices=("F", "sigma_z_mid", "sigma_x_mid"), default="F")
    p.add_argument("--halve", action="store_true")
    p.add_argument("--out", required=True, help="output prefix")

    p = sub.add_parser("dispersion", help="band structure and stationary points")
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--h-alt", dest="h_alt", type=float, default=0.0)
    p.add_argument("--grid", type=int, default=8192)
    p.add_argument("--out", help="CSV path; omit to print the JSON block")
    p.add_argument("--json", help="stationary-point JSON path")

    p = sub.add_parser("oracle", help="exact small-n OSEE (n <= 8)")
    add_common(p)
    p.add_argument("--operator", choices=("F", "sigma_z_mid", "sigma_x_mid"), required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--compare", action="store_true")
    return parser


_PARAM_KEYS = {
    "trace": ["n", "gamma", "h", "mu", "h_alt", "bc", "operator", "halve", "t",
              "method", "disorder_target", "disorder_strength", "seed", "realization"],
    "fit": ["trace", "t_min", "t_max"],
    "phase-diagram": ["n", "t", "gamma", "h", "operator"],
    "disorder": ["n", "gamma", "h", "mu", "h_alt", "bc", "target", "epsilons",
                 "r", "seed", "t", "operator", "halve"],
    "dispersion": ["gamma", "h", "mu", "h_alt", "grid", "json"],
    "oracle": ["n", "gamma", "h", "mu", "h_alt", "operator", "t", "compare"],
}


def _params_from_args(cmd: str, args: argparse.Namespace) -> dict:
    params = {}
    for key in _PARAM_KEYS[cmd]:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = value
    return params


def _run_config(path: str, out_override: str | None, threads_override: int | None) -> int:
    with open(path) as f:
        doc = json.load(f)
    _require_keys(
        doc,
        required={"subcommand", "params", "out"},
        optional={"artifact_version", "threads"},
        what="config",
    )
    cmd = doc["subcommand"]
    if cmd not in _RUNNERS:
        raise ValueError(f"unknown subcommand {cmd!r} in config")
    out = out_override if out_override is not None else doc["out"]
    threads = threads_override if threads_override is not None else doc.get("threads")
    return _RUNNERS[cmd](doc["params"], out, threads)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            return _run_config(args.config, args.out, args.threads)
        if not args.cmd:
            parser.print_usage(sys.stderr)
            return 2
        out = getattr(args, "out", None)
        if out is None and args.cmd in _NEEDS_OUT:
            raise ValueError(f"{args.cmd} requires --out")
        return _RUNNERS[args.cmd](_params_from_args(args.cmd, args), out, args.threads)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
