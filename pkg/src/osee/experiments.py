"""Experiment drivers: S(t) traces, log-growth fits, phase diagrams, disorder
ensembles, plateau detection, and the CSV/JSON emitters behind the CLI."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from ._threads import parallel_map
from .chain import ChainSpec, build_hamiltonian, realize_disorder
from .dispersion import dispersion_symbol
from .entropy import (
    correlation_matrix,
    correlation_matrix_from_cache,
    finite_index_bound,
    make_operator,
    osee,
)
from .errors import NumericalError
from .evolution import fourier_applicable, propagator_fourier, spectral_decompose

DEFAULT_T_MIN = 10.0
DEFAULT_T_CAP = 100.0
DEFAULT_TRACE_POINTS = 64

SATURATION_SLOPE = 0.05       # nats per e-fold; clean growth is >= 1/6
DIVERGENCE_GAP = 0.2          # nats


@dataclass
class TraceResult:
    spec: ChainSpec
    operator: str
    times: np.ndarray
    entropy: np.ndarray
    halved: bool


@dataclass
class FitResult:
    c: float
    c_prime: float
    t_min: float
    t_max: float
    rms_residual: float
    n_points: int


@dataclass
class EnsembleResult:
    template: ChainSpec
    strength: float
    realizations: int
    master_seed: int
    times: np.ndarray
    mean_entropy: np.ndarray
    stderr_entropy: np.ndarray


@dataclass
class PhaseDiagramResult:
    t: float
    n: int
    gamma_grid: np.ndarray
    h_grid: np.ndarray
    S: np.ndarray  # shape (len(gamma_grid), len(h_grid))


@dataclass
class PlateauResult:
    saturated: bool
    plateau: float
    slope: float


def log_times(t_min: float, t_max: float, count: int) -> np.ndarray:
    if not (0 < t_min < t_max):
        raise ValueError(f"need 0 < t_min < t_max, got [{t_min}, {t_max}]")
    return np.geomspace(t_min, t_max, count)


def _validate_halve(spec: ChainSpec, operator: str, halve: bool) -> None:
    if not halve:
        return
    op = make_operator(operator, spec.n)
    if spec.boundary != "periodic_majorana" or not op.extensive:
        raise ValueError(
            "halve applies only to infinite-index operators on periodic_majorana chains"
        )


def run_trace(
    spec: ChainSpec,
    operator: str,
    time_grid=None,
    halve: bool = False,
    method: str = "auto",
    threads: int | None = None,
) -> TraceResult:
    """S(t) on a time grid (logarithmic by default, within the fit window)."""
    _validate_halve(spec, operator, halve)
    if time_grid is None:
        t_min, t_max = fit_window(spec)
        time_grid = log_times(t_min, t_max, DEFAULT_TRACE_POINTS)
    times = np.asarray(time_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    if np.any(np.diff(times) <= 0):
        raise ValueError("time grid must be strictly increasing")
    if times[0] < 0:
        raise ValueError("times must be >= 0")

    op = make_operator(operator, spec.n)
    if method not in ("auto", "dense", "fourier"):
        raise ValueError(f"unknown method {method!r}")
    if method == "fourier" and not fourier_applicable(spec):
        raise ValueError("fourier method not applicable to this spec")
    if method == "fourier" or (method == "auto" and fourier_applicable(spec)):

        def entropy_at(t: float) -> float:
            return osee(correlation_matrix(op, propagator_fourier(spec, t)), halve=halve)

    else:
        cache = spectral_decompose(build_hamiltonian(spec))

        def entropy_at(t: float) -> float:
            return osee(correlation_matrix_from_cache(op, cache, t), halve=halve)

    entropy = np.array(parallel_map(entropy_at, times, threads))
    bound = finite_index_bound(op) / (2.0 if halve else 1.0)
    if entropy.max() > bound + 1e-9:
        raise NumericalError(
            f"entropy {entropy.max():.6f} exceeds index bound {bound:.6f}"
        )
    return TraceResult(spec=spec, operator=operator, times=times, entropy=entropy, halved=halve)


def fit_log_growth(times, entropy, t_min: float, t_max: float) -> FitResult:
    """Least-squares S = c ln t + c' over the window [t_min, t_max]."""
    times = np.asarray(times, dtype=float)
    entropy = np.asarray(entropy, dtype=float)
    if not t_min < t_max:
        raise ValueError(f"need t_min < t_max, got [{t_min}, {t_max}]")
    mask = (times >= t_min) & (times <= t_max) & (times > 0)
    if int(mask.sum()) < 8:
        raise ValueError(
            f"fit window [{t_min}, {t_max}] selects {int(mask.sum())} points, need >= 8"
        )
    x = np.log(times[mask])
    y = entropy[mask]
    c, c_prime = np.polyfit(x, y, 1)
    resid = y - (c * x + c_prime)
    return FitResult(
        c=float(c),
        c_prime=float(c_prime),
        t_min=float(t_min),
        t_max=float(t_max),
        rms_residual=float(np.sqrt(np.mean(resid**2))),
        n_points=int(mask.sum()),
    )


def fit_window(spec: ChainSpec, cap: float = DEFAULT_T_CAP) -> tuple[float, float]:
    """[t_min, t_max] inside which the log growth is finite-size clean.

    t_max = 0.4 n / v_max keeps the fastest quasiparticle wavefronts (group
    velocity v_max = max |d eps/d phi|) from wrapping or reflecting into the
    cut region before the end of the window.
    """
    if spec.disorder is not None or spec.site_fields is not None:
        raise ValueError("fit_window requires a clean, translation-invariant spec")
    profile = dispersion_symbol(spec)
    dphi = profile.phi_grid[1] - profile.phi_grid[0]
    v_max = max(
        float(np.abs(np.gradient(band, dphi)).max()) for band in profile.bands
    )
    t_max = min(cap, 0.4 * spec.n / v_max)
    if t_max <= DEFAULT_T_MIN:
        raise ValueError(
            f"fit window collapsed (t_max = {t_max:.2f} <= t_min = {DEFAULT_T_MIN});"
            " increase n"
        )
    return (DEFAULT_T_MIN, t_max)


def run_phase_diagram(
    n: int,
    t: float,
    gamma_grid,
    h_grid,
    operator: str = "F",
    threads: int | None = None,
) -> PhaseDiagramResult:
    """S at fixed t over a (gamma, h) grid, open boundaries."""
    gamma_grid = np.asarray(gamma_grid, dtype=float)
    h_grid = np.asarray(h_grid, dtype=float)
    cells = [(i, j) for i in range(gamma_grid.size) for j in range(h_grid.size)]

    def entropy_at(cell: tuple[int, int]) -> float:
        i, j = cell
        spec = ChainSpec(n=n, gamma=float(gamma_grid[i]), h=float(h_grid[j]))
        op = make_operator(operator, n)
        cache = spectral_decompose(build_hamiltonian(spec))
        return osee(correlation_matrix_from_cache(op, cache, t))

    values = parallel_map(entropy_at, cells, threads)
    S = np.empty((gamma_grid.size, h_grid.size))
    for (i, j), s in zip(cells, values):
        S[i, j] = s
    if not np.all(np.isfinite(S)):
        raise NumericalError("phase diagram contains non-finite entries")
    return PhaseDiagramResult(t=t, n=n, gamma_grid=gamma_grid, h_grid=h_grid, S=S)


def run_disorder_ensemble(
    template: ChainSpec,
    epsilons,
    realizations: int,
    master_seed: int,
    time_grid,
    operator: str = "F",
    halve: bool = False,
    threads: int | None = None,
) -> list[EnsembleResult]:
    """Mean and stderr of S(t) over seeded disorder realizations, per strength.

    Realization r of every strength draws from the stream keyed by
    (master_seed, r), so ensembles at different strengths share random
    numbers and results never depend on evaluation order.
    """
    if template.disorder is None:
        raise ValueError("template must carry a disorder target")
    times = np.asarray(time_grid, dtype=float)
    results = []
    for eps in epsilons:
        spec = dataclasses.replace(
            template,
            disorder=dataclasses.replace(
                template.disorder, strength=float(eps), seed=master_seed
            ),
            site_fields=None,
        )

        def trace_for(r: int) -> np.ndarray:
            realized = realize_disorder(spec, r)
            return run_trace(
                realized, operator, times, halve=halve, method="dense", threads=1
            ).entropy

        samples = np.vstack(parallel_map(trace_for, range(realizations), threads))
        mean = samples.mean(axis=0)
        if realizations > 1:
            stderr = samples.std(axis=0, ddof=1) / np.sqrt(realizations)
        else:
            stderr = np.zeros_like(mean)
        results.append(
            EnsembleResult(
                template=spec,
                strength=float(eps),
                realizations=realizations,
                master_seed=master_seed,
                times=times,
                mean_entropy=mean,
                stderr_entropy=stderr,
            )
        )
    return results


def detect_plateau(times, entropy, window_fraction: float = 1.0 / 3.0) -> PlateauResult:
    """Saturation test on the trailing window_fraction of the log-time grid."""
    times = np.asarray(times, dtype=float)
    entropy = np.asarray(entropy, dtype=float)
    pos = times > 0
    times, entropy = times[pos], entropy[pos]
    if times.size < 4 or times[-1] / times[0] < 10.0:
        raise ValueError("plateau detection needs at least a decade of positive times")
    if not 0 < window_fraction <= 1:
        raise ValueError(f"window_fraction must be in (0, 1], got {window_fraction}")
    log_t = np.log(times)
    cut = log_t[-1] - window_fraction * (log_t[-1] - log_t[0])
    window = log_t >= cut
    if int(window.sum()) < 2:
        raise ValueError("plateau window selects fewer than 2 points")
    slope = float(np.polyfit(log_t[window], entropy[window], 1)[0])
    return PlateauResult(
        saturated=slope < SATURATION_SLOPE,
        plateau=float(entropy[window].mean()),
        slope=slope,
    )


def divergence_time(times, entropy, reference_entropy, gap: float = DIVERGENCE_GAP) -> float:
    """First time at which |S - S_reference| exceeds `gap` nats (inf if never)."""
    times = np.asarray(times, dtype=float)
    delta = np.abs(np.asarray(entropy) - np.asarray(reference_entropy))
    exceeded = np.flatnonzero(delta > gap)
    if exceeded.size == 0:
        return float("inf")
    return float(times[exceeded[0]])


def _fmt(x: float) -> str:
    return repr(float(x))


def write_trace_csv(path, trace: TraceResult) -> None:
    lines = ["t,S"]
    lines += [f"{_fmt(t)},{_fmt(s)}" for t, s in zip(trace.times, trace.entropy)]
    _write_text(path, "\n".join(lines) + "\n")


def write_ensemble_csv(path, result: EnsembleResult) -> None:
    lines = ["t,mean_S,stderr_S"]
    lines += [
        f"{_fmt(t)},{_fmt(m)},{_fmt(s)}"
        for t, m, s in zip(result.times, result.mean_entropy, result.stderr_entropy)
    ]
    _write_text(path, "\n".join(lines) + "\n")


def write_ensemble_manifest(path, results: list[EnsembleResult]) -> None:
    if not results:
        raise ValueError("no ensembles to describe")
    head = results[0]
    doc = {
        "spec": head.template.to_json_dict(),
        "R": head.realizations,
        "master_seed": head.master_seed,
        "epsilons": [r.strength for r in results],
    }
    _write_json(path, doc)


def write_phase_diagram_csv(path, result: PhaseDiagramResult) -> None:
    lines = ["gamma,h,S"]
    for i, g in enumerate(result.gamma_grid):
        for j, h in enumerate(result.h_grid):
            lines.append(f"{_fmt(g)},{_fmt(h)},{_fmt(result.S[i, j])}")
    _write_text(path, "\n".join(lines) + "\n")


def write_fit_json(path, fit: FitResult) -> None:
    doc = {
        "c": fit.c,
        "c_prime": fit.c_prime,
        "t_min": fit.t_min,
        "t_max": fit.t_max,
        "rms_residual": fit.rms_residual,
    }
    _write_json(path, doc)


def _write_text(path, text: str) -> None:
    with open(path, "w", newline="") as f:
        f.write(text)


def _write_json(path, doc: dict) -> None:
    with open(path, "w", newline="") as f:
        json.dump(doc, f, indent=2, sort_keys=True)
        f.write("\n")
