"""Quasiparticle dispersion relations and stationary-point counting.

The logarithmic-growth prefactor conjecture reads c = m/6 with m the number
of nondegenerate stationary points of the dispersion; a triple-degenerate
point contributes 1/12 instead of 1/6.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .chain import ChainSpec, build_hamiltonian

DEFAULT_GRID = 8192
DEFAULT_TOL_PHI = 1e-10
DEFAULT_TOL_DEG = 1e-6
MERGE_TOL = 1e-8

# Slope magnitude above which a refined sign change of eps' is a cusp
# (non-smooth band touching zero), not a stationary point.
CUSP_SLOPE_TOL = 1e-3
_CUSP_STEP = 1e-5
# Small enough that a quartic band contributes O(1e-8) to the second
# difference (well under tol_deg), large enough to keep roundoff ~1e-8.
_CURVATURE_STEP = 1e-4

# Band with total variation below this is flat; every point is stationary.
_FLAT_BAND_TOL = 1e-12


@dataclass(frozen=True)
class StationaryPoint:
    phi: float
    band: int
    degenerate: bool


@dataclass
class DispersionProfile:
    """Sampled band structure with classified stationary points.

    `phi_grid` is in lattice momentum units; for a two-site unit cell it
    covers the reduced zone [0, pi) and there are two bands.
    """

    phi_grid: np.ndarray
    bands: list[np.ndarray]
    stationary_points: list[StationaryPoint]
    m: int | None
    c_predicted: float | None
    diagnostics: frozenset[str] = field(default_factory=frozenset)


def critical_field(gamma: float) -> float:
    """h_c = |1 - gamma^2|, boundary between the m=4 and m=2 regions."""
    return abs(1.0 - gamma * gamma)


def eps_xy(gamma: float, h: float, phi) -> np.ndarray:
    """eps(phi) = 2 sqrt((h - cos phi)^2 + gamma^2 sin^2 phi)."""
    phi = np.asarray(phi, dtype=float)
    return 2.0 * np.sqrt((h - np.cos(phi)) ** 2 + (gamma * np.sin(phi)) ** 2)


def _deps_xy(gamma: float, h: float, phi: float) -> float:
    # d(eps^2)/dphi = 8 sin(phi) (h - (1-gamma^2) cos(phi)); eps >= 0, so the
    # sign of eps' matches this wherever eps > 0.
    e = float(eps_xy(gamma, h, phi))
    num = 8.0 * np.sin(phi) * (h - (1.0 - gamma * gamma) * np.cos(phi))
    if e < 1e-15:
        return num
    return num / (2.0 * e)


def _count_and_predict(points: list[StationaryPoint]) -> tuple[int, float]:
    m = sum(1 for p in points if not p.degenerate)
    c = m / 6.0 + sum(1 for p in points if p.degenerate) / 12.0
    return m, c


def find_stationary_points(
    band: Callable[[float], float],
    dband: Callable[[float], float] | None = None,
    period: float = 2.0 * np.pi,
    grid: int = DEFAULT_GRID,
    tol_phi: float = DEFAULT_TOL_PHI,
    tol_deg: float = DEFAULT_TOL_DEG,
    band_index: int = 0,
) -> tuple[list[StationaryPoint], set[str]]:
    """Locate zeros of eps' over one period of a single band.

    Sign changes of the derivative between adjacent grid points are refined
    by bisection; refined points where the one-sided slopes stay large are
    cusps and are excluded (flagged via `cusp_detected`). |eps''| < tol_deg
    flags a degenerate stationary point. Assumes the grid is fine enough
    that eps' changes sign at most once per interval.
    """
    if grid < 64:
        raise ValueError(f"grid must be >= 64, got {grid}")
    if dband is None:
        step = 0.5 * period / grid

        def dband(phi: float) -> float:
            return (band(phi + step) - band(phi - step)) / (2.0 * step)

    phis = np.arange(grid) * (period / grid)
    samples = np.array([band(p) for p in phis])
    diagnostics: set[str] = set()
    if samples.max() - samples.min() < _FLAT_BAND_TOL * max(1.0, abs(samples.max())):
        return [], {"degenerate_band"}

    derivs = np.array([dband(p) for p in phis])
    candidates: list[float] = []
    for i in range(grid):
        d0, d1 = derivs[i], derivs[(i + 1) % grid]
        if d0 == 0.0:
            candidates.append(phis[i])
        elif d0 * d1 < 0.0:
            lo, hi = phis[i], phis[i] + period / grid
            flo = d0
            while hi - lo > tol_phi:
                mid = 0.5 * (lo + hi)
                fm = dband(mid)
                if fm == 0.0:
                    lo = hi = mid
                elif flo * fm < 0.0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            candidates.append(0.5 * (lo + hi))

    points: list[StationaryPoint] = []
    for phi in sorted(c % period for c in candidates):
        if points and min(abs(phi - points[-1].phi), period - abs(phi - points[-1].phi)) < MERGE_TOL:
            continue
        if points and min(abs(phi - points[0].phi), period - abs(phi - points[0].phi)) < MERGE_TOL:
            continue
        d_right = (band(phi + _CUSP_STEP) - band(phi)) / _CUSP_STEP
        d_left = (band(phi) - band(phi - _CUSP_STEP)) / _CUSP_STEP
        if min(abs(d_right), abs(d_left)) > CUSP_SLOPE_TOL:
            diagnostics.add("cusp_detected")
            continue
        curv = (
            band(phi + _CURVATURE_STEP) - 2.0 * band(phi) + band(phi - _CURVATURE_STEP)
        ) / _CURVATURE_STEP**2
        points.append(StationaryPoint(phi=phi, band=band_index, degenerate=abs(curv) < tol_deg))
    return points, diagnostics


def dispersion_xy(gamma: float, h: float, grid: int = DEFAULT_GRID) -> DispersionProfile:
    """Closed-form single-band dispersion of the clean XY chain."""
    if grid < 64:
        raise ValueError(f"grid must be >= 64, got {grid}")
    phis = np.arange(grid) * (2.0 * np.pi / grid)
    points, diags = find_stationary_points(
        band=lambda p: float(eps_xy(gamma, h, p)),
        dband=lambda p: _deps_xy(gamma, h, p),
        grid=grid,
    )
    if "degenerate_band" in diags:
        m, c = None, None
    else:
        m, c = _count_and_predict(points)
    return DispersionProfile(
        phi_grid=phis,
        bands=[eps_xy(gamma, h, phis)],
        stationary_points=points,
        m=m,
        c_predicted=c,
        diagnostics=frozenset(diags),
    )


def _symbol_blocks(spec: ChainSpec) -> tuple[dict[int, np.ndarray], int]:
    """Banded blocks M_d of the Hermitian symbol M(theta) = sum_d M_d e^{i d theta}.

    Extracted from a small periodic reference chain so the symbol stays in
    lockstep with build_hamiltonian. Returns (blocks, spins_per_cell).
    """
    if spec.disorder is not None or spec.site_fields is not None:
        raise ValueError("dispersion_symbol requires a translation-invariant spec")
    cell = 2 if spec.h_alt != 0.0 else 1
    reach = 2 if spec.mu != 0.0 else 1  # coupling range in spins
    d_max = -(-reach // cell)  # range in cells
    n_ref = max(8, 2 * cell * (2 * d_max + 1))
    ref = dataclasses.replace(spec, n=n_ref, boundary="periodic_majorana")
    A = build_hamiltonian(ref).A
    w = 2 * cell  # Majorana modes per cell
    blocks: dict[int, np.ndarray] = {}
    for d in range(-d_max, d_max + 1):
        cols = (np.arange(w) + d * w) % (2 * n_ref)
        block = 4j * A[np.ix_(np.arange(w), cols)]
        if np.any(block != 0.0) or d == 0:
            blocks[d] = block
    return blocks, cell


def _symbol_at(blocks: dict[int, np.ndarray], theta: float) -> np.ndarray:
    w = next(iter(blocks.values())).shape[0]
    M = np.zeros((w, w), dtype=complex)
    for d, B in blocks.items():
        M += B * np.exp(1j * d * theta)
    return M


def dispersion_symbol(spec: ChainSpec, grid: int = DEFAULT_GRID) -> DispersionProfile:
    """Band structure from the Fourier symbol of the quadratic couplings.

    Handles the clean XY chain (with or without the next-nearest-neighbor
    term) and the period-2 alternating field. The non-negative eigenvalues
    of the 2x2 (or 4x4) symbol are the bands; stationary points are counted
    over one full period of every band.
    """
    if grid < 64:
        raise ValueError(f"grid must be >= 64, got {grid}")
    blocks, cell = _symbol_blocks(spec)
    nbands = cell
    dblocks = {d: 1j * d * B for d, B in blocks.items()}

    def bands_at(theta: float) -> np.ndarray:
        ev = np.linalg.eigvalsh(_symbol_at(blocks, theta))
        return np.maximum(ev[nbands:], 0.0)

    def dband_at(theta: float, b: int) -> float:
        ev, vec = np.linalg.eigh(_symbol_at(blocks, theta))
        v = vec[:, nbands + b]
        return float(np.real(v.conj() @ _symbol_at(dblocks, theta) @ v))

    # Lattice momentum phi; cell momentum theta = cell * phi. One period of
    # theta is the reduced zone [0, 2*pi/cell) in phi.
    period_phi = 2.0 * np.pi / cell
    phis = np.arange(grid) * (period_phi / grid)
    sampled = np.array([bands_at(cell * p) for p in phis])

    points: list[StationaryPoint] = []
    diagnostics: set[str] = set()
    for b in range(nbands):
        pts, diags = find_stationary_points(
            band=lambda p, b=b: float(bands_at(cell * p)[b]),
            dband=lambda p, b=b: cell * dband_at(cell * p, b),
            period=period_phi,
            grid=grid,
            band_index=b,
        )
        points.extend(pts)
        diagnostics |= diags
    if "degenerate_band" in diagnostics:
        m, c = None, None
    else:
        m, c = _count_and_predict(points)
    return DispersionProfile(
        phi_grid=phis,
        bands=[sampled[:, b] for b in range(nbands)],
        stationary_points=points,
        m=m,
        c_predicted=c,
        diagnostics=frozenset(diagnostics),
    )
