"""Brute-force Hilbert-space reference for small chains.

Builds the spin Hamiltonian from explicit Pauli tensor products, evolves
operators with the dense unitary, and computes the operator Schmidt entropy
across the center cut directly. Everything here is deliberately independent
of the fermionic pipeline so the two can validate each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import ChainSpec, site_couplings

ORACLE_MAX_SPINS = 8

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class DenseOperator:
    """Operator on the full 2^n-dimensional spin Hilbert space."""

    n_spins: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = 2**self.n_spins
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"matrix must be {dim} x {dim} for n_spins = {self.n_spins}")

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.matrix))


def _kron_all(ops) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


def _site(n: int, j: int, op: np.ndarray) -> np.ndarray:
    # j is 1-based
    return _kron_all([op if l == j else IDENTITY_2 for l in range(1, n + 1)])


def majorana_matrices(n: int) -> list[np.ndarray]:
    """w_1 .. w_2n as dense matrices: w_{2j-1} = Z..Z X_j, w_{2j} = Z..Z Y_j."""
    out = []
    for j in range(1, n + 1):
        string = [PAULI_Z] * (j - 1)
        tail = [IDENTITY_2] * (n - j)
        out.append(_kron_all(string + [PAULI_X] + tail))
        out.append(_kron_all(string + [PAULI_Y] + tail))
    return out


def _check_oracle_size(n: int) -> None:
    if n > ORACLE_MAX_SPINS:
        raise ValueError(f"oracle supports n <= {ORACLE_MAX_SPINS} spins, got {n}")


def oracle_hamiltonian(spec: ChainSpec) -> DenseOperator:
    """Spin Hamiltonian assembled term by term from Pauli products.

    Open boundary only; periodic Majorana wrapping has no clean spin-space
    counterpart and stays out of scope here.
    """
    _check_oracle_size(spec.n)
    if spec.boundary != "open":
        raise ValueError("oracle_hamiltonian supports open boundaries only")
    n = spec.n
    fields = site_couplings(spec)
    H = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(1, n):
        g = fields.gamma[j - 1]
        H += (1.0 + g) / 2.0 * (_site(n, j, PAULI_X) @ _site(n, j + 1, PAULI_X))
        H += (1.0 - g) / 2.0 * (_site(n, j, PAULI_Y) @ _site(n, j + 1, PAULI_Y))
    for j in range(1, n + 1):
        H += fields.h[j - 1] * _site(n, j, PAULI_Z)
    if spec.mu != 0.0:
        for j in range(1, n - 1):
            H += spec.mu * (
                _site(n, j, PAULI_Y) @ _site(n, j + 1, PAULI_Z) @ _site(n, j + 2, PAULI_Y)
            )
    return DenseOperator(n_spins=n, matrix=H)


def initial_operator(n: int, label: str) -> DenseOperator:
    """Dense matrix for one of the named product operators."""
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    if label == "F":
        ws = majorana_matrices(n)
        mat = ws[0]
        for w in ws[1:n]:
            mat = mat @ w
    elif label == "sigma_z_mid":
        mat = _site(n, n // 2, PAULI_Z)
    elif label == "sigma_x_mid":
        mat = _site(n, n // 2, PAULI_X)
    else:
        raise ValueError(f"unknown operator label {label!r}")
    return DenseOperator(n_spins=n, matrix=mat)


def evolve_operator(H: DenseOperator, op: DenseOperator, t: float) -> DenseOperator:
    """Heisenberg picture, A(t) = U^dag A U with U = e^{-iHt}."""
    if H.n_spins != op.n_spins:
        raise ValueError("Hamiltonian and operator sizes differ")
    w, V = np.linalg.eigh(H.matrix)
    U = (V * np.exp(-1j * w * t)) @ V.conj().T
    return DenseOperator(n_spins=op.n_spins, matrix=U.conj().T @ op.matrix @ U)


def schmidt_entropy(op: DenseOperator) -> float:
    """Operator Schmidt entropy across the center cut, in nats.

    The operator is regrouped into a (left product basis) x (right product
    basis) coefficient matrix; its singular values are basis-independent for
    any HS-orthonormal product basis, so the matrix-unit regrouping used here
    gives the same spectrum as normalized Pauli strings.
    """
    n = op.n_spins
    if n % 2 != 0:
        raise ValueError(f"n must be even, got {n}")
    dL = 2 ** (n // 2)
    dR = 2 ** (n - n // 2)
    M = op.matrix.reshape(dL, dR, dL, dR).transpose(0, 2, 1, 3).reshape(dL * dL, dR * dR)
    s = np.linalg.svd(M, compute_uv=False)
    p = s**2
    p = p / p.sum()
    p = p[p > 1e-16]
    return float(-np.sum(p * np.log(p)))


def oracle_osee(spec: ChainSpec, operator_label: str, t: float) -> float:
    """OSEE of the evolved operator, straight from the Hilbert-space matrices."""
    _check_oracle_size(spec.n)
    H = oracle_hamiltonian(spec)
    A0 = initial_operator(spec.n, operator_label)
    return schmidt_entropy(evolve_operator(H, A0, t))
