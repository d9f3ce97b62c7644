"""Operator space entanglement entropy (OSEE) in quadratic spin chains."""

from .chain import ChainSpec, DisorderSpec, MajoranaHamiltonian, SiteFields, build_hamiltonian, realize_disorder, site_couplings
from .dispersion import DispersionProfile, StationaryPoint, critical_field, dispersion_symbol, dispersion_xy, find_stationary_points
from .entropy import (
    CorrelationMatrix,
    OperatorSpec,
    binary_entropy,
    correlation_matrix,
    correlation_matrix_from_cache,
    finite_index_bound,
    make_operator,
    osee,
)
from .errors import NumericalError
from .evolution import Propagator, SpectralCache, make_propagator_factory, propagator_dense, propagator_fourier, spectral_decompose
from .experiments import (
    EnsembleResult,
    FitResult,
    PhaseDiagramResult,
    PlateauResult,
    TraceResult,
    detect_plateau,
    divergence_time,
    fit_log_growth,
    fit_window,
    log_times,
    run_disorder_ensemble,
    run_phase_diagram,
    run_trace,
    write_ensemble_csv,
    write_ensemble_manifest,
    write_fit_json,
    write_phase_diagram_csv,
    write_trace_csv,
)
from .oracle import DenseOperator, oracle_hamiltonian, oracle_osee

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "CorrelationMatrix",
    "DenseOperator",
    "DisorderSpec",
    "DispersionProfile",
    "EnsembleResult",
    "FitResult",
    "MajoranaHamiltonian",
    "NumericalError",
    "OperatorSpec",
    "PhaseDiagramResult",
    "PlateauResult",
    "Propagator",
    "SiteFields",
    "SpectralCache",
    "StationaryPoint",
    "TraceResult",
    "binary_entropy",
    "build_hamiltonian",
    "correlation_matrix",
    "correlation_matrix_from_cache",
    "critical_field",
    "detect_plateau",
    "dispersion_symbol",
    "dispersion_xy",
    "divergence_time",
    "find_stationary_points",
    "finite_index_bound",
    "fit_log_growth",
    "fit_window",
    "log_times",
    "make_operator",
    "make_propagator_factory",
    "oracle_hamiltonian",
    "oracle_osee",
    "osee",
    "propagator_dense",
    "propagator_fourier",
    "realize_disorder",
    "run_disorder_ensemble",
    "run_phase_diagram",
    "run_trace",
    "site_couplings",
    "spectral_decompose",
    "write_ensemble_csv",
    "write_ensemble_manifest",
    "write_fit_json",
    "write_phase_diagram_csv",
    "write_trace_csv",
]
