"""Gaussian ground-state correlations and entanglement measures.

The ground state of the quadratic fluctuation Hamiltonian is Gaussian and is
fully described by the position and momentum correlation matrices

    G = <phi phi> = eta diag(1/(2 omega)) eta^T
    H = <pi pi>   = eta diag(omega/2)     eta^T

(the phi-pi cross correlations vanish identically).  Block entropies come from
the symplectic spectrum of the reduced (G_A, H_A) pair, the logarithmic
negativity from a momentum sign flip on one block, and the participation
functions resolve each symplectic mode on the lattice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidPartition,
    NotPositiveDefinite,
    OverlappingBlocks,
    ZeroMode,
)
from .modes import ModeBasis

LAMBDA_CLAMP_TOL = 5e-8   # symplectic eigenvalues in [1/2 - tol, 1/2) snap to 1/2
ZERO_FREQ_TOL = 1e-12     # building G needs 1/omega; reject near-zero modes
DEGENERACY_TOL = 1e-10


class DegenerateSpectrum(UserWarning):
    """Symplectic eigenvalues too close; participation profiles are non-unique."""


@dataclass
class GaussianState:
    """Position (G) and momentum (H) correlation matrices of a Gaussian state
    with no position-momentum cross correlations."""

    G: np.ndarray
    H: np.ndarray

    @property
    def N(self) -> int:
        return self.G.shape[0]


def ground_state(basis: ModeBasis) -> GaussianState:
    """Ground-state correlations from the fluctuation eigenpairs."""
    omega = basis.omega
    if np.any(omega <= ZERO_FREQ_TOL):
        raise ZeroMode("a mode frequency is at or below the zero tolerance")
    eta = basis.eta
    G = (eta / (2.0 * omega)) @ eta.T
    H = (eta * (omega / 2.0)) @ eta.T
    return GaussianState(G=0.5 * (G + G.T), H=0.5 * (H + H.T))


def _check_block(N: int, indices) -> np.ndarray:
    idx = np.asarray(indices, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise InvalidPartition("block must be a nonempty 1-d index list")
    if len(set(idx.tolist())) != idx.size:
        raise InvalidPartition("block indices must be distinct")
    if idx.min() < 0 or idx.max() >= N:
        raise InvalidPartition(f"block indices must lie in [0, {N - 1}]")
    return idx


def reduce_state(state: GaussianState, indices) -> GaussianState:
    """Restriction of the state to a sub-block of sites."""
    idx = _check_block(state.N, indices)
    return GaussianState(G=state.G[np.ix_(idx, idx)], H=state.H[np.ix_(idx, idx)])


def _sym_sqrt(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Square root and inverse square root of a symmetric positive matrix."""
    w, v = np.linalg.eigh(0.5 * (M + M.T))
    if w[0] <= 0:
        raise NotPositiveDefinite(f"correlation matrix has eigenvalue {w[0]:.3e} <= 0")
    s = np.sqrt(w)
    return (v * s) @ v.T, (v / s) @ v.T


def _raw_symplectic(G: np.ndarray, H: np.ndarray) -> np.ndarray:
    """Unclamped symplectic spectrum of a (G, H) pair via the symmetric
    product R H R, R = G^(1/2); ascending."""
    R, _ = _sym_sqrt(G)
    M = R @ H @ R
    w = np.linalg.eigh(0.5 * (M + M.T))[0]
    if w[0] <= 0:
        raise NotPositiveDefinite("symplectic spectrum is not positive")
    return np.sqrt(w)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """Symplectic spectrum of a physical state, ascending.

    Values within a small tolerance below the vacuum floor 1/2 are clamped to
    1/2; anything further below is rejected as unphysical.
    """
    lam = _raw_symplectic(state.G, state.H)
    if lam[0] < 0.5 - LAMBDA_CLAMP_TOL:
        raise NotPositiveDefinite(f"symplectic eigenvalue {float(lam[0])!r} below 1/2")
    lam[lam < 0.5] = 0.5
    return lam


def entropy_of_spectrum(lams) -> float:
    """Von Neumann entropy (nats) of a Gaussian state with the given symplectic
    eigenvalues: sum of (l+1/2)ln(l+1/2) - (l-1/2)ln(l-1/2)."""
    arr = np.atleast_1d(np.asarray(lams, dtype=float)).copy()
    if np.any(arr < 0.5 - LAMBDA_CLAMP_TOL):
        raise DomainError("symplectic eigenvalue below 1/2")
    arr[arr < 0.5] = 0.5
    total = 0.0
    for lam in arr:
        p, m = lam + 0.5, lam - 0.5
        total += p * math.log(p) - (m * math.log(m) if m > 0 else 0.0)
    return total


def block_entropy(state: GaussianState, indices) -> float:
    """Entanglement entropy of a block of sites with the rest of the system."""
    return entropy_of_spectrum(symplectic_eigenvalues(reduce_state(state, indices)))


def log_negativity(state: GaussianState, indices_a, indices_b) -> float:
    """Logarithmic negativity between two disjoint blocks.

    Partial transposition on block B flips the sign of its momenta, i.e. the
    A-B off-diagonal blocks of H change sign.  Negativity collects the
    symplectic eigenvalues pushed below 1/2: sum of max(0, -ln(2 lambda)).
    """
    idx_a = _check_block(state.N, indices_a)
    idx_b = _check_block(state.N, indices_b)
    if set(idx_a.tolist()) & set(idx_b.tolist()):
        raise OverlappingBlocks("blocks A and B share sites")
    idx = np.concatenate([idx_a, idx_b])
    G = state.G[np.ix_(idx, idx)]
    H = state.H[np.ix_(idx, idx)].copy()
    s = np.ones(idx.size)
    s[idx_a.size:] = -1.0
    H *= np.outer(s, s)
    lam = _raw_symplectic(G, H)
    neg = -np.log(2.0 * lam)
    return float(np.sum(neg[neg > 0.0]))


@dataclass
class ParticipationData:
    """Per-symplectic-mode site weights of a reduced block state.

    weights[j] is the site profile z_j = u_j * v_j of mode j, ordered by
    descending entropy contribution; each profile sums to 1.
    """

    lams: np.ndarray
    weights: np.ndarray


def participation_functions(state: GaussianState, indices) -> ParticipationData:
    """Resolve the symplectic modes of a block on the lattice.

    With R = G_A^(1/2) and w_j the orthonormal eigenvectors of R H_A R, the
    pair u_j = R^(-1) w_j, v_j = R w_j satisfies u_j . v_j = 1, so the
    componentwise product z_j = u_j * v_j is a normalized site weight for
    mode j.  Warns when eigenvalue gaps fall below 1e-10 (the profiles are
    then basis dependent).
    """
    sub = reduce_state(state, indices)
    R, Rinv = _sym_sqrt(sub.G)
    M = R @ sub.H @ R
    w, vec = np.linalg.eigh(0.5 * (M + M.T))
    if w[0] <= 0:
        raise NotPositiveDefinite("symplectic spectrum is not positive")
    lam = np.sqrt(w)
    if lam.size > 1 and float(np.min(np.diff(lam))) < DEGENERACY_TOL:
        warnings.warn(
            "near-degenerate symplectic eigenvalues; participation profiles "
            "are not unique",
            DegenerateSpectrum,
            stacklevel=2,
        )
    order = np.argsort(lam)[::-1]
    lam = lam[order]
    vec = vec[:, order]
    u = Rinv @ vec
    piv = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[piv, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    u *= signs
    v = (R @ vec) * signs
    weights = (u * v).T  # row j: site profile of mode j
    return ParticipationData(lams=lam, weights=weights)


def correlation_profile(state: GaussianState, ref: int) -> tuple[np.ndarray, np.ndarray]:
    """Correlation lengths xi[n] = <phi_ref phi_(ref+n)> and
    nu[n] = <pi_ref pi_(ref+n)> for n = 0 .. N-1-ref."""
    if not 0 <= ref < state.N:
        raise DomainError(f"site {ref} outside [0, {state.N - 1}]")
    return state.G[ref, ref:].copy(), state.H[ref, ref:].copy()


def toy_two_oscillator(omega1: float, omega2: float) -> tuple[float, float]:
    """Closed-form entanglement of two sites sharing a symmetric mode omega1
    and an antisymmetric mode omega2.

    The single-site symplectic eigenvalue is
    lambda = (1/4) sqrt(2 + alpha + 1/alpha) with alpha = omega2/omega1;
    returns (lambda, E_S) where E_S = 2 S(lambda) counts both reduced
    single-site spectra.
    """
    if not 0 < omega1 <= omega2:
        raise DomainError(f"need 0 < omega1 <= omega2, got ({omega1}, {omega2})")
    alpha = omega2 / omega1
    lam = 0.25 * math.sqrt(2.0 + alpha + 1.0 / alpha)
    return lam, 2.0 * entropy_of_spectrum([lam])
