"""Gaussian ground states: entropies, negativity, symplectic spectra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fkchain.classical import ChainSpec, vacuum_solution
from fkchain.errors import OverlappingBlocks
from fkchain.gaussian import (
    GaussianState,
    block_entropy,
    correlation_profile,
    entropy_of_spectrum,
    ground_state,
    log_negativity,
    participation_functions,
    reduce_state,
    symplectic_eigenvalues,
    toy_two_oscillator,
)
from fkchain.modes import ModeBasis, diagonalize, fluctuation_modes


def random_stable_chain(seed, n):
    rng = np.random.default_rng(seed)
    # Gershgorin: diag > 2*max(off) keeps the matrix positive definite
    diag = rng.uniform(2.2, 5.0, size=n)
    off = rng.uniform(0.1, 1.0, size=n - 1)
    B = np.diag(diag)
    B[np.arange(n - 1), np.arange(1, n)] = -off
    B[np.arange(1, n), np.arange(n - 1)] = -off
    return diagonalize(B)


def brute_symplectic(G, H):
    """Independent oracle: |eigenvalues| of i J Sigma with
    Sigma = diag(G, H) and J the standard symplectic form."""
    n = G.shape[0]
    J = np.block([[np.zeros((n, n)), np.eye(n)],
                  [-np.eye(n), np.zeros((n, n))]])
    Sigma = np.block([[G, np.zeros((n, n))], [np.zeros((n, n)), H]])
    ev = np.linalg.eigvals(J @ Sigma)
    lam = np.sort(np.abs(ev.imag))[::2]  # each value appears twice
    return np.maximum(lam, 0.5)  # pipeline clamps roundoff below the vacuum floor


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(3, 8),
       block=st.integers(1, 4))
def test_small_system_matches_brute_force_oracle(seed, n, block):
    basis = random_stable_chain(seed, n)
    state = ground_state(basis)
    idx = np.arange(min(block, n - 1))
    sub = reduce_state(state, idx)
    lam = symplectic_eigenvalues(sub)
    lam_oracle = brute_symplectic(sub.G, sub.H)
    assert np.max(np.abs(np.sort(lam) - lam_oracle)) < 1e-10


def test_global_state_is_pure():
    spec = ChainSpec(N=60, g=7.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    lam = symplectic_eigenvalues(state)
    assert np.max(np.abs(lam - 0.5)) < 1e-8


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_reduced_spectra_respect_vacuum_floor(seed):
    basis = random_stable_chain(seed, 30)
    state = ground_state(basis)
    for block in (np.arange(5), np.arange(10, 25), np.array([0, 7, 29])):
        lam = symplectic_eigenvalues(reduce_state(state, block))
        assert np.all(lam >= 0.5 - 1e-9)


def test_entropy_symmetric_under_complement():
    spec = ChainSpec(N=64, g=20.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    for cut in (5, 17, 32, 50):
        a = np.arange(cut)
        b = np.arange(cut, spec.N)
        assert block_entropy(state, a) == pytest.approx(
            block_entropy(state, b), abs=1e-8)


def test_entropy_of_known_eigenvalue():
    # lambda = 3/2: S = 2 ln 2 - 1 ln 1 = 2 ln 2
    assert entropy_of_spectrum([1.5]) == pytest.approx(2 * math.log(2), abs=1e-12)
    assert entropy_of_spectrum([0.5]) == 0.0


def test_toy_two_oscillator_matches_pipeline():
    omega1, omega2 = 0.3, 2.1
    lam_toy, e_toy = toy_two_oscillator(omega1, omega2)
    alpha = omega2 / omega1
    assert lam_toy == pytest.approx(
        0.25 * math.sqrt(2 + alpha + 1 / alpha), abs=1e-14)
    eta = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)
    basis = ModeBasis(eta=eta, omega_sq=np.array([omega1**2, omega2**2]))
    state = ground_state(basis)
    lam = symplectic_eigenvalues(reduce_state(state, [0]))
    assert abs(lam[0] - lam_toy) < 1e-10
    assert abs(block_entropy(state, [0]) + block_entropy(state, [1]) - e_toy) < 1e-10


def test_negativity_vanishes_for_uncoupled_blocks():
    # two decoupled halves: product ground state has no entanglement
    half = random_stable_chain(5, 6)
    eta = np.zeros((12, 12))
    eta[:6, :6] = half.eta
    eta[6:, 6:] = half.eta
    omega_sq = np.concatenate([half.omega_sq, half.omega_sq])
    basis = ModeBasis(eta=eta, omega_sq=omega_sq)
    state = ground_state(basis)
    assert log_negativity(state, np.arange(6), np.arange(6, 12)) < 1e-12


def test_negativity_positive_for_adjacent_blocks():
    spec = ChainSpec(N=40, g=10.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    assert log_negativity(state, np.arange(0, 20), np.arange(20, 40)) > 0.1


def test_negativity_rejects_overlap():
    spec = ChainSpec(N=20, g=3.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    with pytest.raises(OverlappingBlocks):
        log_negativity(state, np.arange(0, 8), np.arange(5, 12))


def test_participation_weights_normalized():
    import warnings
    spec = ChainSpec(N=50, g=8.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = participation_functions(state, np.arange(10, 30))
    assert data.weights.shape == (20, 20)
    assert np.max(np.abs(data.weights.sum(axis=1) - 1.0)) < 1e-8
    assert np.all(np.diff(data.lams) <= 1e-12)  # descending


def test_correlation_profile_shape_and_reference():
    spec = ChainSpec(N=30, g=4.0)
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    xi, nu = correlation_profile(state, 10)
    assert xi.shape == nu.shape == (20,)
    assert xi[0] == state.G[10, 10]
    assert nu[0] == state.H[10, 10]


def test_entropy_grows_then_saturates_in_massive_vacuum():
    spec = ChainSpec(N=100, g=4.0, boundary="periodic")
    state = ground_state(fluctuation_modes(spec, vacuum_solution(spec)))
    mid = 50
    es = [block_entropy(state, np.arange(mid - l // 2, mid + (l + 1) // 2))
          for l in (2, 6, 20, 40)]
    assert es[1] > es[0]
    assert abs(es[3] - es[2]) < 0.2 * abs(es[1] - es[0]) + 1e-6
