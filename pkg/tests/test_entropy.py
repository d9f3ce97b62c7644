import numpy as np
import pytest

from osee import ChainSpec, NumericalError, build_hamiltonian, spectral_decompose
from osee.entropy import (
    CorrelationMatrix,
    binary_entropy,
    correlation_matrix,
    correlation_matrix_from_cache,
    finite_index_bound,
    make_operator,
    operator_custom,
    osee,
)
from osee.evolution import propagator_dense


def test_operator_constructors():
    n = 8
    f = make_operator("F", n)
    assert f.index == n and f.extensive
    assert np.array_equal(np.flatnonzero(f.nu), np.arange(n))

    sx = make_operator("sigma_x_mid", n)
    assert sx.index == n - 1 and sx.extensive
    assert np.array_equal(np.flatnonzero(sx.nu), np.arange(n - 1))

    sz = make_operator("sigma_z_mid", n)
    assert sz.index == 2 and not sz.extensive
    assert np.array_equal(np.flatnonzero(sz.nu), [n - 2, n - 1])

    custom = operator_custom(n, [1, 0, 0, 1] + [0] * 12)
    assert custom.index == 2 and custom.label == "custom"

    with pytest.raises(ValueError):
        make_operator("bogus", n)


def test_finite_index_bound():
    assert finite_index_bound(make_operator("sigma_z_mid", 64)) == pytest.approx(2 * np.log(2))
    assert finite_index_bound(make_operator("F", 64)) == pytest.approx(64 * np.log(2))


def test_binary_entropy():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(np.log(2), abs=1e-15)
    x = np.linspace(0.01, 0.99, 23)
    assert np.allclose(binary_entropy(x), binary_entropy(1 - x), atol=1e-14)


def test_correlation_matrix_properties():
    rng = np.random.default_rng(3)
    for _ in range(4):
        g, h = rng.uniform(0, 2, 2)
        spec = ChainSpec(n=12, gamma=g, h=h)
        cache = spectral_decompose(build_hamiltonian(spec))
        op = make_operator("F", 12)
        corr = correlation_matrix(op, propagator_dense(cache, 1.7))
        assert corr.gamma_mat.shape == (12, 12)
        assert np.array_equal(corr.gamma_mat, corr.gamma_mat.T)
        ev = corr.eigenvalues()
        assert ev.min() >= 0.0 and ev.max() <= 1.0


def test_correlation_from_cache_matches_full_propagator():
    spec = ChainSpec(n=10, gamma=0.4, h=0.9, mu=0.1)
    cache = spectral_decompose(build_hamiltonian(spec))
    for label in ("F", "sigma_z_mid", "sigma_x_mid"):
        op = make_operator(label, 10)
        a = correlation_matrix(op, propagator_dense(cache, 2.2)).gamma_mat
        b = correlation_matrix_from_cache(op, cache, 2.2).gamma_mat
        assert np.abs(a - b).max() < 1e-12


def test_size_mismatch_rejected():
    spec = ChainSpec(n=8, gamma=0.5, h=0.2)
    cache = spectral_decompose(build_hamiltonian(spec))
    op = make_operator("F", 10)
    with pytest.raises(ValueError):
        correlation_matrix(op, propagator_dense(cache, 1.0))
    with pytest.raises(ValueError):
        correlation_matrix_from_cache(op, cache, 1.0)


def test_entropy_zero_at_t0():
    spec = ChainSpec(n=16, gamma=0.7, h=0.3)
    cache = spectral_decompose(build_hamiltonian(spec))
    for label in ("F", "sigma_z_mid", "sigma_x_mid"):
        op = make_operator(label, 16)
        assert osee(correlation_matrix_from_cache(op, cache, 0.0)) == 0.0


def test_halve_halves():
    spec = ChainSpec(n=16, gamma=0.7, h=0.3, boundary="periodic_majorana")
    cache = spectral_decompose(build_hamiltonian(spec))
    corr = correlation_matrix_from_cache(make_operator("F", 16), cache, 3.0)
    assert osee(corr, halve=True) == pytest.approx(osee(corr) / 2.0, abs=1e-15)


def test_spectrum_escape_raises():
    bad = CorrelationMatrix(gamma_mat=np.diag([0.5, 1.1]))
    with pytest.raises(NumericalError):
        bad.eigenvalues()
    ok = CorrelationMatrix(gamma_mat=np.diag([0.5, 1.0 + 5e-7]))
    assert ok.eigenvalues().max() == 1.0  # inside abort tolerance: clamped


def test_sigma_z_bound_holds_on_a_scan():
    spec = ChainSpec(n=32, gamma=1.0, h=1.0)
    cache = spectral_decompose(build_hamiltonian(spec))
    op = make_operator("sigma_z_mid", 32)
    bound = finite_index_bound(op)
    for t in np.linspace(0, 40, 17):
        s = osee(correlation_matrix_from_cache(op, cache, float(t)))
        assert 0.0 <= s <= bound + 1e-9


def test_operator_validation():
    with pytest.raises(ValueError):
        operator_custom(6, [1, 0, 0])  # wrong length
