"""Readers for the osee CLI file formats, failing loudly on any mismatch.

These are the only coupling to the simulation package: the documented CSV
headers and JSON key sets. Anything unexpected raises SchemaError with the
offending path and what was found.
"""

from __future__ import annotations

import json

import numpy as np

TRACE_HEADER = "t,S"
ENSEMBLE_HEADER = "t,mean_S,stderr_S"
PHASE_HEADER = "gamma,h,S"
FIT_KEYS = {"c", "c_prime", "t_min", "t_max", "rms_residual"}
MANIFEST_KEYS = {"spec", "R", "master_seed", "epsilons"}
POINT_KEYS = {"phi", "band", "degenerate"}


class SchemaError(ValueError):
    """An input file does not match the documented osee output format."""


def _read_lines(path) -> list[str]:
    try:
        with open(path) as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if not lines:
        raise SchemaError(f"{path}: empty file")
    return lines


def _read_columns(path, header: str) -> np.ndarray:
    lines = _read_lines(path)
    if lines[0] != header:
        raise SchemaError(f"{path}: expected header {header!r}, got {lines[0]!r}")
    ncols = header.count(",") + 1
    try:
        rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric row ({exc})") from exc
    if rows.size == 0 or rows.shape[1] != ncols:
        raise SchemaError(f"{path}: expected {ncols} numeric columns")
    return rows


def read_trace_csv(path) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_columns(path, TRACE_HEADER)
    return rows[:, 0], rows[:, 1]


def read_ensemble_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rows = _read_columns(path, ENSEMBLE_HEADER)
    return rows[:, 0], rows[:, 1], rows[:, 2]


def read_phase_csv(path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Phase-diagram CSV as (gamma_grid, h_grid, S[gamma, h])."""
    rows = _read_columns(path, PHASE_HEADER)
    gamma = np.unique(rows[:, 0])
    h = np.unique(rows[:, 1])
    if gamma.size * h.size != rows.shape[0]:
        raise SchemaError(f"{path}: rows do not form a full (gamma, h) grid")
    S = np.full((gamma.size, h.size), np.nan)
    gi = np.searchsorted(gamma, rows[:, 0])
    hi = np.searchsorted(h, rows[:, 1])
    S[gi, hi] = rows[:, 2]
    if np.any(np.isnan(S)):
        raise SchemaError(f"{path}: duplicate or missing grid cells")
    return gamma, h, S


def read_dispersion_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Dispersion CSV as (phi, bands) with bands shaped (n_bands, len(phi))."""
    lines = _read_lines(path)
    cols = lines[0].split(",")
    expected = ["phi"] + [f"eps_band{b}" for b in range(len(cols) - 1)]
    if cols != expected or len(cols) < 2:
        raise SchemaError(f"{path}: expected header 'phi,eps_band0[,...]', got {lines[0]!r}")
    try:
        rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric row ({exc})") from exc
    if rows.size == 0 or rows.shape[1] != len(cols):
        raise SchemaError(f"{path}: ragged rows")
    return rows[:, 0], rows[:, 1:].T


def _load_json(path) -> dict:
    try:
        with open(path) as f:
            doc = json.load(f)
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a JSON object")
    return doc


def read_fit_json(path) -> dict:
    doc = _load_json(path)
    if set(doc) != FIT_KEYS:
        raise SchemaError(f"{path}: expected keys {sorted(FIT_KEYS)}, got {sorted(doc)}")
    return doc


def read_points_json(path) -> dict:
    doc = _load_json(path)
    missing = {"points", "m", "c_predicted"} - set(doc)
    if missing:
        raise SchemaError(f"{path}: missing keys {sorted(missing)}")
    for p in doc["points"]:
        if not isinstance(p, dict) or set(p) != POINT_KEYS:
            raise SchemaError(f"{path}: stationary point entries need keys {sorted(POINT_KEYS)}")
    return doc


def read_ensemble_manifest(path) -> dict:
    doc = _load_json(path)
    if set(doc) != MANIFEST_KEYS:
        raise SchemaError(f"{path}: expected keys {sorted(MANIFEST_KEYS)}, got {sorted(doc)}")
    if not doc["epsilons"]:
        raise SchemaError(f"{path}: empty epsilons list")
    return doc


def ensemble_csv_paths(manifest_path) -> list[tuple[float, str]]:
    """Derive the per-strength CSV paths next to a disorder manifest.

    The CLI writes `<prefix>.manifest.json` and `<prefix>_eps{e:g}.csv`.
    """
    text = str(manifest_path)
    suffix = ".manifest.json"
    if not text.endswith(suffix):
        raise SchemaError(f"{manifest_path}: expected a path ending in {suffix!r}")
    prefix = text[: -len(suffix)]
    doc = read_ensemble_manifest(manifest_path)
    return [(float(e), f"{prefix}_eps{float(e):g}.csv") for e in doc["epsilons"]]
