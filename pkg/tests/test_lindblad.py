import numpy as np
import pytest
import scipy.linalg

from eprsim import (
    DensityMatrix,
    FockBasis,
    LindbladModel,
    NopaParams,
    TruncationWarning,
    annihilation_op,
    build_superoperator,
    compose,
    effective_N_M,
    evolve,
    expectation,
    mean_phonon,
    purity,
    steady_state,
    tmss_fock,
    vacuum_state,
)
from eprsim.metrics import fidelity
from eprsim.states import TmssSpec


def half_model(eps, heating=0.0):
    n_p, m_p = effective_N_M(NopaParams(eps, 1.0))
    return LindbladModel(gamma=1.0, n_param=n_p, m_param=m_p, heating_rate=heating)


def random_density(basis, rng):
    d = basis.dimension
    m = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = m @ m.conj().T
    return DensityMatrix(basis, rho / np.trace(rho))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"gamma": 0.0, "n_param": 1.0, "m_param": 0.0},
        {"gamma": -1.0, "n_param": 1.0, "m_param": 0.0},
        {"gamma": 1.0, "n_param": -0.1, "m_param": 0.0},
        {"gamma": 1.0, "n_param": 1.0, "m_param": 1.5},  # M > sqrt(N(N+1))
        {"gamma": 1.0, "n_param": 1.0, "m_param": -0.5},
        {"gamma": 1.0, "n_param": 1.0, "m_param": 1.0, "heating_rate": -0.01},
    ],
)
def test_model_validation(kwargs):
    with pytest.raises(ValueError):
        LindbladModel(**kwargs)


def test_maximal_correlation_allowed():
    # M = sqrt(N(N+1)) exactly (pure two-mode squeezed bath) must pass.
    n = 16.0 / 9.0
    LindbladModel(gamma=1.0, n_param=n, m_param=np.sqrt(n * (n + 1.0)))


def test_superoperator_matrix_matches_apply(rng):
    basis = FockBasis(4, 2)
    sup = build_superoperator(half_model(0.4, heating=0.05), basis)
    rho = random_density(basis, rng)
    via_apply = sup.apply(rho.elements)
    via_matrix = (sup.matrix @ rho.elements.reshape(-1)).reshape(rho.elements.shape)
    assert np.max(np.abs(via_apply - via_matrix)) < 1e-12


def test_generator_preserves_trace_and_hermiticity(rng):
    basis = FockBasis(4, 2)
    sup = build_superoperator(half_model(0.3), basis)
    rho = random_density(basis, rng)
    out = sup.apply(rho.elements)
    assert abs(np.trace(out)) < 1e-12
    assert np.max(np.abs(out - out.conj().T)) < 1e-12


def test_single_mode_basis_rejected():
    with pytest.raises(ValueError):
        build_superoperator(half_model(0.3), FockBasis(8, 1))


def test_uncorrelated_bath_gives_thermal_product():
    """With M = 0 the steady state is a thermal state in each mode."""
    n_p = 0.25
    model = LindbladModel(gamma=1.0, n_param=n_p, m_param=0.0)
    basis = FockBasis(14, 2)
    rho = steady_state(model, basis)
    pops = np.real(np.diag(rho.elements)).reshape(14, 14)
    m = np.arange(14)
    geom = (n_p / (n_p + 1.0)) ** m / (n_p + 1.0)
    assert np.allclose(pops, np.outer(geom, geom), atol=1e-8)
    assert mean_phonon(rho, 0) == pytest.approx(n_p, abs=1e-6)
    assert purity(rho) == pytest.approx(1.0 / (2.0 * n_p + 1.0) ** 2, abs=1e-6)


def test_steady_state_moments_and_fidelity():
    model = half_model(0.2)
    basis = FockBasis(12, 2)
    rho = steady_state(model, basis)
    rho.validate()
    assert mean_phonon(rho, 0) == pytest.approx(model.n_param, abs=1e-6)
    assert mean_phonon(rho, 1) == pytest.approx(model.n_param, abs=1e-6)
    pair = compose(annihilation_op(basis, 0), annihilation_op(basis, 1))
    corr = expectation(rho, pair)
    assert corr.real == pytest.approx(-model.m_param, abs=1e-6)
    assert abs(corr.imag) < 1e-8
    r = np.arcsinh(np.sqrt(model.n_param))
    assert fidelity(rho, tmss_fock(TmssSpec(r), basis)) > 0.99999
    assert purity(rho) > 0.9999


def test_steady_state_agrees_with_long_time_integration():
    """Inverse iteration and brute-force integration give the same state."""
    model = half_model(0.25)
    basis = FockBasis(8, 2)
    direct = steady_state(model, basis)
    times = np.array([0.0, 30.0])
    integrated = evolve(vacuum_state(basis).density_matrix(), model, times).states[-1]
    assert np.max(np.abs(direct.elements - integrated.elements)) < 1e-8


def test_steady_state_is_unique_zero_mode():
    """The full generator has exactly one vanishing singular value."""
    basis = FockBasis(4, 2)
    sup = build_superoperator(half_model(0.3), basis)
    sv = scipy.linalg.svdvals(sup.matrix.toarray())
    assert sv[-1] < 1e-12 * sv[0]
    assert sv[-2] > 1e-6 * sv[0]


def test_steady_state_with_heating():
    """Extra heating mixes the state exactly as the moment equations say."""
    gamma, h = 1.0, 0.15
    model = half_model(0.2, heating=h)
    # heating widens the number distribution, so this needs more headroom
    # than the h = 0 cases to hit the 1e-6 oracle tolerance
    basis = FockBasis(16, 2)
    rho = steady_state(model, basis)
    n_expected = (gamma * model.n_param + h) / (gamma + h)
    assert mean_phonon(rho, 0) == pytest.approx(n_expected, abs=1e-6)
    pair = compose(annihilation_op(basis, 0), annihilation_op(basis, 1))
    corr_expected = -gamma * model.m_param / (gamma + h)
    assert expectation(rho, pair).real == pytest.approx(corr_expected, abs=1e-6)
    # heating destroys purity
    assert purity(rho) < 0.99


def test_steady_state_truncation_warning():
    model = half_model(0.6)  # N is about 3.5: far too hot for n_max = 8
    with pytest.warns(TruncationWarning):
        steady_state(model, FockBasis(8, 2))


def test_evolve_relaxation_matches_closed_form():
    model = half_model(0.3)
    basis = FockBasis(14, 2)
    times = np.linspace(0.0, 3.0, 7)
    result = evolve(vacuum_state(basis).density_matrix(), model, times)
    decay = 1.0 - np.exp(-2.0 * times)
    assert np.allclose(result.n1, model.n_param * decay, atol=1e-7)
    assert np.allclose(result.n2, model.n_param * decay, atol=1e-7)
    assert np.allclose(result.b1b2.real, -model.m_param * decay, atol=1e-7)
    assert np.max(np.abs(result.b1b2.imag)) < 1e-9


def test_evolve_output_states_are_physical():
    model = half_model(0.3)
    basis = FockBasis(10, 2)
    result = evolve(vacuum_state(basis).density_matrix(), model, np.array([0.0, 1.5]))
    final = result.states[-1]
    final.validate()
    assert final.trace().real == pytest.approx(1.0, abs=1e-9)


def test_evolve_time_grid_validation():
    model = half_model(0.2)
    basis = FockBasis(6, 2)
    rho0 = vacuum_state(basis).density_matrix()
    with pytest.raises(ValueError):
        evolve(rho0, model, np.array([0.0, 1.0, 0.5]))
    with pytest.raises(ValueError):
        evolve(rho0, model, np.array([2.0, 2.0]))


def test_evolve_basis_consistency():
    model = half_model(0.2)
    rho0 = vacuum_state(FockBasis(6, 1)).density_matrix()
    with pytest.raises(ValueError):
        evolve(rho0, model, np.array([0.0, 1.0]))


def test_purity_range(rng):
    basis = FockBasis(5, 2)
    pure = vacuum_state(basis).density_matrix()
    assert purity(pure) == pytest.approx(1.0, abs=1e-12)
    mixed = random_density(basis, rng)
    assert 0.0 < purity(mixed) < 1.0
