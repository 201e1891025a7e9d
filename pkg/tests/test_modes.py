"""Fluctuation spectra: closed-form vacuum check, classification, stability."""

import numpy as np
import pytest

from fkchain.classical import (
    ChainSpec,
    ClassicalSolution,
    continuum_soliton,
    held_single_soliton,
    sample_and_relax,
    vacuum_solution,
)
from fkchain.errors import Unstable
from fkchain.modes import (
    classify_modes,
    diagonalize,
    fluctuation_modes,
    g_max_scan,
    n_internal,
    spectrum_rows,
    stability_matrix,
    vacuum_spectrum,
)


@pytest.mark.parametrize("g", [1e2, 1e4])
@pytest.mark.parametrize("boundary", ["periodic", "free"])
def test_vacuum_spectrum_matches_closed_form(g, boundary):
    spec = ChainSpec(N=200, g=g, boundary=boundary)
    basis = fluctuation_modes(spec, vacuum_solution(spec))
    expected = np.sort(vacuum_spectrum(spec) ** 2)
    assert np.max(np.abs(np.sort(basis.omega_sq) - expected)) < 1e-10


def test_eigenvectors_are_orthonormal():
    spec = ChainSpec(N=150, g=50.0)
    sol = held_single_soliton(spec, H=0.5, gtol=1e-7)
    basis = fluctuation_modes(spec, sol)
    gram = basis.eta.T @ basis.eta
    assert np.max(np.abs(gram - np.eye(spec.N))) < 1e-10


def test_eigenpairs_solve_the_stability_problem():
    spec = ChainSpec(N=80, g=12.0)
    sol = held_single_soliton(spec, H=0.5, gtol=1e-7)
    B = stability_matrix(spec, sol)
    basis = fluctuation_modes(spec, sol)
    resid = B @ basis.eta - basis.eta * basis.omega_sq
    assert np.max(np.abs(resid)) < 1e-9


def test_saddle_configuration_raises():
    spec = ChainSpec(N=1000, g=1e4)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sol = continuum_soliton(spec)  # sampled profile is a lattice saddle here
    with pytest.raises(Unstable):
        fluctuation_modes(spec, sol)


def test_diagonalize_clamps_tiny_negative_eigenvalues():
    B = np.diag([1.0, 2.0, 3.0]).astype(float)
    B[0, 0] = -5e-10  # within the clamp band
    basis = diagonalize(B, zero_mode_tol=0.0)
    assert basis.omega_sq[0] == 0.0


def test_kink_has_internal_modes():
    spec = ChainSpec(N=80, g=1.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        seed = continuum_soliton(spec)
    sol = sample_and_relax(spec, seed.phi)
    basis = fluctuation_modes(spec, sol)
    assert n_internal(basis) >= 1
    cls = classify_modes(basis)
    assert set(cls.internal.tolist()) | set(cls.phonon.tolist()) == set(range(spec.N))
    # internal modes are localized around the kink core
    core = np.arange(spec.N // 2 - 5, spec.N // 2 + 5)
    w = basis.eta[:, cls.internal[0]] ** 2
    assert w[core].sum() > 0.8


def test_internal_mode_disappears_at_huge_coupling():
    g_max = g_max_scan(300, g_lo=1e3, g_hi=1e7)
    assert 1e3 < g_max < 1e7
    spec = ChainSpec(N=300, g=g_max * 3.0)
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sol = continuum_soliton(spec)
    try:
        basis = fluctuation_modes(spec, sol)
    except Unstable:
        return  # beyond the stability scale entirely
    assert n_internal(basis) == 0


def test_bound_mode_survival_scale_grows_with_chain_length():
    g_max_500 = g_max_scan(500)
    g_max_1000 = g_max_scan(1000)
    assert g_max_500 < g_max_1000
    assert 1.3e5 / 1.5 <= g_max_1000 <= 1.3e5 * 1.5


def test_spectrum_rows_schema():
    spec = ChainSpec(N=40, g=5.0)
    basis = fluctuation_modes(spec, vacuum_solution(spec))
    rows = spectrum_rows(basis)
    assert len(rows) == spec.N
    assert set(rows[0]) == {"index", "omega_sq", "omega", "class"}
    assert [r["index"] for r in rows] == list(range(spec.N))
    assert all(r["class"] in ("internal", "phonon") for r in rows)
    assert all(r["omega"] == pytest.approx(r["omega_sq"] ** 0.5) for r in rows)
