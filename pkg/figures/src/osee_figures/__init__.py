"""Publication-style figures from osee CLI output files."""

from .render import KINDS, FigureRecipe, render
from .schema import (
    SchemaError,
    ensemble_csv_paths,
    read_dispersion_csv,
    read_ensemble_csv,
    read_ensemble_manifest,
    read_fit_json,
    read_phase_csv,
    read_points_json,
    read_trace_csv,
)

__version__ = "0.1.0"

__all__ = [
    "FigureRecipe",
    "KINDS",
    "SchemaError",
    "ensemble_csv_paths",
    "read_dispersion_csv",
    "read_ensemble_csv",
    "read_ensemble_manifest",
    "read_fit_json",
    "read_phase_csv",
    "read_points_json",
    "read_trace_csv",
    "render",
]
