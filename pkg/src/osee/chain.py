"""Quadratic Majorana Hamiltonians for XY-type spin-1/2 chains.

The spin Hamiltonian is encoded as H = w . (iA) w in terms of 2n Majorana
operators, where A is a real antisymmetric 2n x 2n matrix.  Storing A (rather
than the purely imaginary Hermitian matrix iA) keeps everything real and makes
the time-evolution matrix exp(4tA) orthogonal by construction.

Couplings handled here: XY anisotropy gamma, transverse field h, the
three-site sigma^y sigma^z sigma^y term (strength mu), a period-2 alternating
field h', and uniform random disorder on either gamma or h.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

BOUNDARIES = ("open", "periodic_majorana")
DISORDER_TARGETS = ("gamma", "h")


@dataclass(frozen=True)
class DisorderSpec:
    """Uniform disorder eps_j in [-strength, strength] on one coupling."""

    target: str            # "gamma" or "h"
    strength: float
    seed: int

    def __post_init__(self):
        if self.target not in DISORDER_TARGETS:
            raise ValueError(f"disorder target must be one of {DISORDER_TARGETS}, got {self.target!r}")
        if not self.strength >= 0:
            raise ValueError(f"disorder strength must be >= 0, got {self.strength}")


@dataclass(frozen=True)
class SiteFields:
    """Realized per-site couplings; fixes a single disorder realization."""

    gamma: np.ndarray
    h: np.ndarray


@dataclass(frozen=True)
class ChainSpec:
    """Full physical description of one chain instance.

    n is the number of spins (even, >= 2); the entanglement cut sits at spin
    n/2.  `site_fields`, when present, pins the per-site couplings and takes
    precedence over drawing fresh disorder.
    """

    n: int
    gamma: float
    h: float
    mu: float = 0.0
    h_alt: float = 0.0
    disorder: Optional[DisorderSpec] = None
    boundary: str = "open"
    site_fields: Optional[SiteFields] = None

    def __post_init__(self):
        if self.n < 2 or self.n % 2 != 0:
            raise ValueError(f"n must be an even integer >= 2, got {self.n}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if self.site_fields is not None:
            if len(self.site_fields.gamma) != self.n or len(self.site_fields.h) != self.n:
                raise ValueError("site_fields arrays must have length n")

    @property
    def clean(self) -> bool:
        """True when translation-invariant with unit cell 1 (no disorder, no h')."""
        return self.disorder is None and self.site_fields is None and self.h_alt == 0.0

    def to_json_dict(self) -> dict:
        d = {
            "n": self.n,
            "gamma": self.gamma,
            "h": self.h,
            "mu": self.mu,
            "h_alt": self.h_alt,
            "boundary": self.boundary,
        }
        if self.disorder is not None:
            d["disorder"] = {
                "target": self.disorder.target,
                "strength": self.disorder.strength,
                "seed": self.disorder.seed,
            }
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "ChainSpec":
        known = {"n", "gamma", "h", "mu", "h_alt", "disorder", "boundary"}
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown ChainSpec keys: {sorted(unknown)}")
        dis = None
        if d.get("disorder") is not None:
            dd = d["disorder"]
            unknown = set(dd) - {"target", "strength", "seed"}
            if unknown:
                raise ValueError(f"unknown disorder keys: {sorted(unknown)}")
            dis = DisorderSpec(target=dd["target"], strength=float(dd["strength"]), seed=int(dd["seed"]))
        return cls(
            n=int(d["n"]),
            gamma=float(d["gamma"]),
            h=float(d["h"]),
            mu=float(d.get("mu", 0.0)),
            h_alt=float(d.get("h_alt", 0.0)),
            disorder=dis,
            boundary=d.get("boundary", "open"),
        )


@dataclass(frozen=True)
class MajoranaHamiltonian:
    """Real antisymmetric matrix A with H = i w.A.w, plus realized couplings."""

    n: int
    A: np.ndarray
    site_fields: SiteFields


def site_couplings(spec: ChainSpec) -> SiteFields:
    """Per-site (gamma_j, h_j), j = 1..n, with alternating field and disorder.

    The alternating field enters as h_j = h + (-1)^j h' with j starting at 1.
    Disorder adds eps_j drawn uniformly from [-strength, strength]; a spec with
    disorder but no fixed realization uses realization index 0.
    """
    if spec.site_fields is not None:
        return spec.site_fields
    j = np.arange(1, spec.n + 1)
    gamma = np.full(spec.n, float(spec.gamma))
    h = spec.h + ((-1.0) ** j) * spec.h_alt
    if spec.disorder is not None and spec.disorder.strength > 0:
        eps = _disorder_draw(spec.disorder, spec.n, 0)
        if spec.disorder.target == "gamma":
            gamma = gamma + eps
        else:
            h = h + eps
    gamma.setflags(write=False)
    h.setflags(write=False)
    return SiteFields(gamma=gamma, h=h)


def _disorder_draw(disorder: DisorderSpec, n: int, realization_index: int) -> np.ndarray:
    """Counter-based per-realization stream: child SeedSequence of the master
    seed keyed by the realization index, so draws are independent of execution
    order and thread count."""
    ss = np.random.SeedSequence(entropy=disorder.seed, spawn_key=(realization_index,))
    rng = np.random.default_rng(ss)
    return rng.uniform(-disorder.strength, disorder.strength, size=n)


def realize_disorder(spec: ChainSpec, realization_index: int) -> ChainSpec:
    """Fix one disorder realization, returning a spec with pinned site fields."""
    if spec.disorder is None:
        raise ValueError("realize_disorder requires a spec with disorder set")
    eps = _disorder_draw(spec.disorder, spec.n, realization_index)
    j = np.arange(1, spec.n + 1)
    gamma = np.full(spec.n, float(spec.gamma))
    h = spec.h + ((-1.0) ** j) * spec.h_alt
    if spec.disorder.target == "gamma":
        gamma = gamma + eps
    else:
        h = h + eps
    gamma.setflags(write=False)
    h.setflags(write=False)
    return replace(spec, site_fields=SiteFields(gamma=gamma, h=h))


def build_hamiltonian(spec: ChainSpec) -> MajoranaHamiltonian:
    """Assemble the real antisymmetric matrix A for the given chain.

    Upper-diagonal entries (1-based Majorana indices, site j):

        A[2j-1, 2j]   = -h_j / 2          transverse field
        A[2j,   2j+1] = -(1 + gamma_j)/4  sigma^x sigma^x
        A[2j-1, 2j+2] = +(1 - gamma_j)/4  sigma^y sigma^y
        A[2j-1, 2j+4] = +mu / 2           sigma^y sigma^z sigma^y

    and the lower triangle by antisymmetry.  With periodic_majorana boundaries
    all couplings wrap mod 2n; open chains restrict two-site terms to
    j <= n-1 and the three-site term to j <= n-2.  The mu sign is fixed so
    that mu = 0.4 yields the six-stationary-point band (verified against the
    exact Hilbert-space oracle and the Fourier symbol in the test suite).
    """
    fields = site_couplings(spec)
    n = spec.n
    N = 2 * n
    A = np.zeros((N, N))
    periodic = spec.boundary == "periodic_majorana"

    def add(p: int, q: int, v: float) -> None:
        # 1-based indices, wrapped mod 2n; mirror entry keeps A exactly antisymmetric
        p = (p - 1) % N
        q = (q - 1) % N
        A[p, q] += v
        A[q, p] -= v

    for j in range(1, (n + 1) if periodic else n):
        add(2 * j, 2 * j + 1, -(1.0 + fields.gamma[j - 1]) / 4.0)
        add(2 * j - 1, 2 * j + 2, (1.0 - fields.gamma[j - 1]) / 4.0)
    for j in range(1, n + 1):
        add(2 * j - 1, 2 * j, -fields.h[j - 1] / 2.0)
    if spec.mu != 0.0:
        for j in range(1, (n + 1) if periodic else (n - 1)):
            add(2 * j - 1, 2 * j + 4, spec.mu / 2.0)

    A.setflags(write=False)
    return MajoranaHamiltonian(n=n, A=A, site_fields=fields)
