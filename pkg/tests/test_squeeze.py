"""External-mode squeezing: symplecticity, purity, distillation bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fkchain import squeeze as sq
from fkchain.classical import ChainSpec, double_soliton_for_separation, held_single_soliton
from fkchain.errors import InvalidPartition
from fkchain.gaussian import block_entropy, entropy_of_spectrum, symplectic_eigenvalues
from fkchain.modes import fluctuation_modes


@pytest.fixture(scope="module")
def held_system():
    spec = ChainSpec(N=120, g=50.0)
    sol = held_single_soliton(spec, H=0.5, gtol=1e-7)
    basis = fluctuation_modes(spec, sol)
    return spec, basis


@settings(max_examples=50, deadline=None)
@given(r=st.floats(-3.0, 3.0))
def test_squeeze_matrix_is_symplectic(r):
    S = sq.squeeze_symplectic_matrix(r)
    J = np.block([[np.zeros((2, 2)), np.eye(2)],
                  [-np.eye(2), np.zeros((2, 2))]])
    assert np.max(np.abs(S @ J @ S.T - J)) < 1e-12


def test_inserted_entropy_matches_thermal_spectrum():
    # reduced single mode of a two-mode squeezed vacuum has lambda = cosh(2r)/2
    for r in (0.3, 0.99, 2.0):
        assert sq.inserted_entropy(r) == pytest.approx(
            entropy_of_spectrum([0.5 * math.cosh(2 * r)]), abs=1e-12)
    assert sq.inserted_entropy(0.0) == 0.0


def test_external_mode_defaults_to_softest_frequency(held_system):
    _, basis = held_system
    system = sq.append_external_mode(basis)
    assert system.n_modes == basis.N + 1
    assert system.omega[system.q_index] == pytest.approx(basis.omega[0])


def test_purity_survives_squeezing(held_system):
    spec, basis = held_system
    system = sq.two_mode_squeeze(sq.append_external_mode(basis), 0.99, mode=0)
    lam = symplectic_eigenvalues(system.site_state())
    assert np.max(np.abs(lam - 0.5)) < 1e-8


def test_squeeze_entangles_external_mode(held_system):
    spec, basis = held_system
    plain = sq.append_external_mode(basis)
    squeezed = sq.two_mode_squeeze(plain, 0.99, mode=0)
    q = [spec.N]
    assert block_entropy(plain.site_state(), q) < 1e-10
    e_q = block_entropy(squeezed.site_state(), q)
    assert e_q == pytest.approx(sq.inserted_entropy(0.99), abs=1e-8)


def test_hashing_bound_requires_partition(held_system):
    spec, basis = held_system
    state = sq.two_mode_squeeze(sq.append_external_mode(basis), 1.0).site_state()
    with pytest.raises(InvalidPartition):
        sq.hashing_lower_bound(state, np.arange(10), np.arange(10, 50), [spec.N])


def test_hashing_bound_nonnegative_and_below_entropy(held_system):
    spec, basis = held_system
    state = sq.two_mode_squeeze(sq.append_external_mode(basis), 0.99).site_state()
    a = np.arange(30, 90)
    b = np.setdiff1d(np.arange(spec.N), a)
    bound = sq.hashing_lower_bound(state, a, b, [spec.N])
    assert 0.0 <= bound <= block_entropy(state, a) + 1e-12


def test_collective_modes_localize_one_per_soliton():
    spec = ChainSpec(N=400, g=500.0)
    sol = double_soliton_for_separation(spec, 190.0)
    basis = fluctuation_modes(spec, sol)
    plus, minus = sq.collective_pm_modes(basis)
    assert abs(plus @ plus - 1.0) < 1e-10
    assert abs(minus @ minus - 1.0) < 1e-10
    assert abs(plus @ minus) < 1e-8
    mid = spec.N // 2
    left = np.sum(plus[:mid] ** 2)
    right = np.sum(plus[mid:] ** 2)
    assert max(left, right) > 0.95  # each collective mode sits on one soliton
    left_m = np.sum(minus[:mid] ** 2)
    assert (left > right) != (left_m > np.sum(minus[mid:] ** 2))


def test_pm_squeeze_preserves_purity_and_inserts_entropy():
    spec = ChainSpec(N=400, g=500.0)
    sol = double_soliton_for_separation(spec, 190.0)
    basis = fluctuation_modes(spec, sol)
    system = sq.pm_squeeze(sq.append_external_mode(basis), 1.2, modes=(0, 1))
    state = system.site_state()
    lam = symplectic_eigenvalues(state)
    assert np.max(np.abs(lam - 0.5)) < 1e-7
    c1, c2 = sol.centers
    l = 60
    a1 = np.arange(int(c1) - l // 2, int(c1) + l // 2)
    a2 = np.arange(int(c2) - l // 2, int(c2) + l // 2)
    bound = sq.double_soliton_squeeze_bound(state, a1, a2)
    base = sq.double_soliton_squeeze_bound(
        sq.append_external_mode(basis).site_state(), a1, a2)
    assert bound > base  # squeezing strengthens the shared-pair correlation


def test_double_soliton_bound_rejects_overlap(held_system):
    spec, basis = held_system
    state = sq.append_external_mode(basis).site_state()
    with pytest.raises(InvalidPartition):
        sq.double_soliton_squeeze_bound(state, np.arange(0, 20), np.arange(10, 30))
