"""Classical backgrounds: energies, relaxation, elliptic profiles, records."""

import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fkchain.classical import (
    ChainSpec,
    FiniteSGParams,
    H_from_k,
    bifurcation_points,
    double_soliton,
    double_soliton_for_separation,
    dump_solution,
    energy_gradient,
    finite_single_soliton,
    held_single_soliton,
    k_from_H,
    load_solution,
    physical_window_H,
    sample_and_relax,
    total_energy,
    vacuum_solution,
)
from fkchain.elliptic import complete_K, jacobi_sn_cn_dn
from fkchain.errors import DomainError


def brute_energy(spec, phi, edge_field=0.0):
    e = 0.0
    for n in range(spec.N):
        e += 1.0 - math.cos(phi[n])
    for n in range(spec.N - 1):
        e += 0.5 * spec.g * (phi[n + 1] - phi[n]) ** 2
    if spec.boundary == "periodic":
        e += 0.5 * spec.g * (phi[0] - phi[-1]) ** 2
    e -= edge_field * (phi[-1] - phi[0])
    return e


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(-10, 10), min_size=3, max_size=12),
    g=st.floats(0.1, 100),
    periodic=st.booleans(),
)
def test_total_energy_matches_brute_force(vals, g, periodic):
    spec = ChainSpec(N=len(vals), g=g,
                     boundary="periodic" if periodic else "free")
    phi = np.array(vals)
    assert total_energy(spec, phi) == pytest.approx(
        brute_energy(spec, phi), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("boundary", ["free", "periodic"])
def test_gradient_matches_finite_difference(boundary):
    rng = np.random.default_rng(7)
    spec = ChainSpec(N=9, g=3.0, boundary=boundary)
    phi = rng.normal(size=9)
    h_field = 0.7 if boundary == "free" else 0.0
    grad = energy_gradient(spec, phi, edge_field=h_field)
    eps = 1e-6
    for i in range(9):
        d = np.zeros(9)
        d[i] = eps
        num = (brute_energy(spec, phi + d, h_field)
               - brute_energy(spec, phi - d, h_field)) / (2 * eps)
        assert grad[i] == pytest.approx(num, abs=1e-6)


def test_vacuum_is_zero_energy():
    spec = ChainSpec(N=50, g=10.0)
    sol = vacuum_solution(spec)
    assert sol.energy == 0.0
    assert np.all(sol.phi == 0.0)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_relaxation_descends_monotonically(seed):
    # sample_and_relax raises NotConverged if any accepted step raised the
    # energy; here we additionally check the endpoint is below the seed.
    rng = np.random.default_rng(seed)
    spec = ChainSpec(N=24, g=2.0)
    phi0 = 0.4 * rng.normal(size=24)
    sol = sample_and_relax(spec, phi0, gtol=1e-9)
    assert sol.energy <= brute_energy(spec, phi0) + 1e-12
    assert np.max(np.abs(energy_gradient(spec, sol.phi))) < 1e-9


def test_bifurcation_points_satisfy_defining_equation():
    L = 8.0
    ks = bifurcation_points(L, 3)
    for sigma, k in enumerate(ks, start=1):
        if k < 1.0:
            assert sigma * complete_K(k) == pytest.approx(L, abs=1e-8)
    assert all(b < a for a, b in zip(ks, ks[1:]))


def test_bifurcation_points_saturate_at_unresolvable_modulus():
    # K(k) cannot exceed ~18.3 in double precision, so very long systems
    # report the first moduli as exactly 1.
    ks = bifurcation_points(40.0, 2)
    assert ks[0] == 1.0


def test_field_modulus_inversion_round_trip():
    L = 8.0
    for sigma in (1, 2):
        lo, hi = physical_window_H(L, sigma)
        for H in np.linspace(lo * 1.05, hi * 0.95, 5):
            k = k_from_H(L, sigma, H)
            assert H_from_k(L, sigma, k) == pytest.approx(H, abs=1e-9)


def test_wall_slope_relation_residual():
    # The modulus-field link comes from the dn value at the wall:
    # dn(L/k, k) = k H for odd sigma, sqrt(1-k^2)/(k H) for even sigma.
    L = 8.0
    for sigma in (1, 2):
        lo, hi = physical_window_H(L, sigma)
        H = 0.5 * (lo + hi)
        k = k_from_H(L, sigma, H)
        _, _, dn = jacobi_sn_cn_dn(L / k, k)
        expected = k * H if sigma % 2 == 1 else math.sqrt(1 - k * k) / (k * H)
        assert dn == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("sigma", [1, 2])
def test_profile_endpoint_slope_matches_field(sigma):
    from fkchain.classical import finite_sg_profile

    L = 8.0
    lo, hi = physical_window_H(L, sigma)
    H = 0.5 * (lo + hi)
    params = FiniteSGParams.from_k(L, sigma, k_from_H(L, sigma, H))
    profile = finite_sg_profile(params)
    eps = 1e-6
    slope = (profile(L) - profile(L - eps)) / eps
    assert slope == pytest.approx(2.0 * H, abs=1e-5)
    # and the profile solves phi'' = sin(phi) in the interior
    for x in (-3.0, 0.7, 4.2):
        h = 1e-4
        d2 = (profile(x + h) - 2 * profile(x) + profile(x - h)) / h**2
        assert d2 == pytest.approx(math.sin(profile(x)), abs=1e-5)


def test_held_single_soliton_is_centered():
    spec = ChainSpec(N=300, g=200.0)
    sol = held_single_soliton(spec, H=0.5, gtol=1e-7)
    assert sol.sector == "single_soliton"
    assert len(sol.centers) == 1
    assert sol.centers[0] == pytest.approx((spec.N - 1) / 2, abs=1.0)
    # 2*pi winding across the soliton core (the total difference additionally
    # carries the wall boundary layers of the holding field)
    c = int(sol.centers[0])
    w = 3 * int(spec.josephson_length)
    assert sol.phi[c + w] - sol.phi[c - w] == pytest.approx(2 * math.pi, rel=0.1)


def test_double_soliton_for_separation_hits_target():
    spec = ChainSpec(N=400, g=500.0)
    sol = double_soliton_for_separation(spec, 180.0)
    assert len(sol.centers) == 2
    assert sol.centers[1] - sol.centers[0] == pytest.approx(180.0, rel=5e-3)


def test_double_soliton_centers_are_symmetric():
    spec = ChainSpec(N=500, g=800.0)
    sol = double_soliton_for_separation(spec, 230.0)
    mid = (spec.N - 1) / 2
    assert sol.centers[0] - mid == pytest.approx(mid - sol.centers[1], abs=2.0)


def test_finite_single_soliton_winds_once():
    spec = ChainSpec(N=300, g=150.0)
    sol = finite_single_soliton(spec)
    assert sol.sector == "single_soliton"
    assert len(sol.centers) == 1
    c = int(sol.centers[0])
    w = 3 * int(spec.josephson_length)
    assert sol.phi[c + w] - sol.phi[c - w] == pytest.approx(2 * math.pi, rel=0.15)


def test_solution_record_round_trip_is_bit_exact():
    spec = ChainSpec(N=120, g=77.5)
    sol = held_single_soliton(spec, H=0.4, gtol=1e-7)
    text = dump_solution(spec, sol)
    spec2, sol2 = load_solution(text)
    assert spec2 == spec
    assert sol2.sector == sol.sector
    assert sol2.energy == sol.energy  # exact, not approximate
    assert np.array_equal(sol2.phi, sol.phi)
    assert sol2.centers == list(sol.centers)
    # serialization is deterministic
    assert dump_solution(spec2, sol2) == text


def test_bad_chain_spec_rejected():
    with pytest.raises(DomainError):
        ChainSpec(N=1, g=1.0)
    with pytest.raises(DomainError):
        ChainSpec(N=10, g=-1.0)
    with pytest.raises(DomainError):
        ChainSpec(N=10, g=1.0, boundary="nailed")
