"""Operator occupation vectors, correlation matrices, and the OSEE.

A Pauli-string operator corresponds to a Fock basis state of 2n adjoint
fermions; its occupations nu_p together with the propagator give the
correlation matrix restricted to the first n modes (= first n/2 spins), whose
eigenvalues determine the operator space entanglement entropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .evolution import Propagator, SpectralCache, propagator_rows

OPERATOR_LABELS = ("F", "sigma_z_mid", "sigma_x_mid", "custom")

EIGENVALUE_CLAMP_TOL = 1e-9
EIGENVALUE_ABORT_TOL = 1e-6


@dataclass(frozen=True)
class OperatorSpec:
    """Initial product operator as a Majorana occupation bit-vector nu."""

    n: int
    nu: np.ndarray
    label: str

    def __post_init__(self):
        if self.label not in OPERATOR_LABELS:
            raise ValueError(f"label must be one of {OPERATOR_LABELS}, got {self.label!r}")
        nu = np.asarray(self.nu)
        if nu.shape != (2 * self.n,):
            raise ValueError(f"nu must have length 2n = {2 * self.n}, got {nu.shape}")
        if not np.isin(nu, (0, 1)).all():
            raise ValueError("nu entries must be 0 or 1")

    @property
    def index(self) -> int:
        """Majorana index K = sum nu; OSEE is bounded by K ln 2."""
        return int(np.sum(self.nu))

    @property
    def extensive(self) -> bool:
        """True when K grows with n (infinite-index operator)."""
        return self.label in ("F", "sigma_x_mid")


def _nu(n: int, occupied: np.ndarray) -> np.ndarray:
    nu = np.zeros(2 * n, dtype=np.uint8)
    nu[occupied] = 1
    nu.setflags(write=False)
    return nu


def operator_F(n: int) -> OperatorSpec:
    """F = w_1 ... w_n, the half-filled adjoint Fermi sea (K = n)."""
    return OperatorSpec(n=n, nu=_nu(n, np.arange(n)), label="F")


def operator_sigma_x_mid(n: int) -> OperatorSpec:
    """sigma^x at the cut site n/2, proportional to F w_n (K = n - 1)."""
    return OperatorSpec(n=n, nu=_nu(n, np.arange(n - 1)), label="sigma_x_mid")


def operator_sigma_z_mid(n: int) -> OperatorSpec:
    """sigma^z at the cut site n/2, proportional to w_{n-1} w_n (K = 2)."""
    return OperatorSpec(n=n, nu=_nu(n, np.array([n - 2, n - 1])), label="sigma_z_mid")


def operator_custom(n: int, nu) -> OperatorSpec:
    nu = np.asarray(nu)
    if nu.shape != (2 * n,):
        raise ValueError(f"nu must have length 2n = {2 * n}, got {nu.shape}")
    return OperatorSpec(n=n, nu=_nu(n, np.flatnonzero(nu)), label="custom")


def make_operator(label: str, n: int) -> OperatorSpec:
    factories = {
        "F": operator_F,
        "sigma_x_mid": operator_sigma_x_mid,
        "sigma_z_mid": operator_sigma_z_mid,
    }
    if label not in factories:
        raise ValueError(f"unknown operator label {label!r}")
    return factories[label](n)


@dataclass
class CorrelationMatrix:
    """Symmetric n x n matrix Gamma_jl = <A| w^dag_j(t) w_l(t) |A>, j,l <= n."""

    gamma_mat: np.ndarray

    _eigenvalues: np.ndarray | None = None

    def eigenvalues(self) -> np.ndarray:
        """Spectrum clamped to [0, 1]; values beyond the abort tolerance are a
        numerical failure rather than something to clamp silently."""
        if self._eigenvalues is None:
            ev = np.linalg.eigvalsh(self.gamma_mat)
            if ev.min() < -EIGENVALUE_ABORT_TOL or ev.max() > 1.0 + EIGENVALUE_ABORT_TOL:
                raise NumericalError(
                    f"correlation spectrum escapes [0,1]: [{ev.min():.3e}, {ev.max():.3e}]"
                )
            self._eigenvalues = np.clip(ev, 0.0, 1.0)
        return self._eigenvalues


def _gamma_from_rows(B: np.ndarray) -> CorrelationMatrix:
    gamma = B.T @ B
    gamma = (gamma + gamma.T) / 2.0
    return CorrelationMatrix(gamma_mat=gamma)


def correlation_matrix(op: OperatorSpec, phi: Propagator) -> CorrelationMatrix:
    """Gamma = [Phi^T diag(nu) Phi] restricted to the first n rows/columns."""
    if op.n != phi.n:
        raise ValueError(f"operator n = {op.n} does not match propagator n = {phi.n}")
    n = op.n
    return _gamma_from_rows(phi.phi[np.asarray(op.nu) == 1][:, :n])


def correlation_matrix_from_cache(op: OperatorSpec, cache: SpectralCache, t: float) -> CorrelationMatrix:
    """Same Gamma as correlation_matrix, built from only the occupied rows of
    Phi(t); avoids the full 2n x 2n propagator when K < 2n."""
    if op.n != cache.n:
        raise ValueError(f"operator n = {op.n} does not match cache n = {cache.n}")
    occupied = np.flatnonzero(np.asarray(op.nu) == 1)
    B = propagator_rows(cache, t, occupied)[:, : op.n]
    return _gamma_from_rows(B)


def binary_entropy(x: np.ndarray) -> np.ndarray:
    """H2(x) = -x ln x - (1-x) ln(1-x) with the convention 0 ln 0 = 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    interior = (x > 0.0) & (x < 1.0)
    xi = x[interior]
    out[interior] = -xi * np.log(xi) - (1.0 - xi) * np.log1p(-xi)
    return out


def osee(corr: CorrelationMatrix, halve: bool = False) -> float:
    """OSEE in nats, S = sum_j H2(gamma_j).

    `halve` divides by two and is meant only for infinite-index operators
    under periodic Majorana boundaries, where the cut boundary doubles.
    """
    s = float(np.sum(binary_entropy(corr.eigenvalues())))
    return s / 2.0 if halve else s


def finite_index_bound(op: OperatorSpec) -> float:
    """Rigorous bound S(t) <= K ln 2, valid for any quadratic Hamiltonian."""
    return op.index * np.log(2.0)
