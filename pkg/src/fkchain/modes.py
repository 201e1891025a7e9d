"""Linear fluctuation modes around a classical configuration.

The quadratic expansion of the energy around a static configuration phi0 gives
a symmetric tridiagonal stability matrix B; its eigenpairs (omega_l^2, eta_l)
are the normal modes used to build the quantum ground state.  Modes with
omega^2 below the bottom of the phonon band (omega^2 = 1) are localized on the
solitons and dominate the entanglement between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .classical import (
    ChainSpec,
    ClassicalSolution,
    bifurcation_points,
    continuum_soliton,
    finite_single_soliton,
    held_single_soliton,
)
from .errors import DomainError, FKChainError, NoRoot, NotConverged, Unstable, ZeroMode

TOL_BAND = 1e-6       # classification margin below the band edge omega^2 = 1
ZERO_MODE_TOL = 1e-12
CLAMP_NEG = -1e-9     # eigenvalues in [CLAMP_NEG, 0) are clamped to 0
DEGENERACY_TOL = 1e-10


@dataclass
class ModeBasis:
    """Eigenpairs of a stability matrix, ascending in omega^2.

    eta has the orthonormal eigenvectors as columns; omega_sq holds the raw
    (clamped) eigenvalues and omega their square roots.
    """

    omega_sq: np.ndarray
    eta: np.ndarray

    @property
    def omega(self) -> np.ndarray:
        return np.sqrt(self.omega_sq)

    @property
    def N(self) -> int:
        return self.eta.shape[0]


@dataclass
class ModeClassification:
    """Indices of bound (internal) modes and extended (phonon) modes."""

    internal: np.ndarray
    phonon: np.ndarray


def stability_matrix(spec: ChainSpec, solution: ClassicalSolution) -> np.ndarray:
    """Symmetric matrix of second derivatives of the energy at the configuration.

    Diagonal 2g + cos(phi0), off-diagonal -g on nearest neighbours; periodic
    chains get corner elements, free chains lose one bond at each end so the
    end diagonals are g + cos(phi0).
    """
    phi = solution.phi
    if phi.shape != (spec.N,):
        raise DomainError("solution does not match chain size")
    n = spec.N
    B = np.zeros((n, n))
    idx = np.arange(n)
    B[idx, idx] = 2.0 * spec.g + np.cos(phi)
    B[idx[:-1], idx[:-1] + 1] = -spec.g
    B[idx[:-1] + 1, idx[:-1]] = -spec.g
    if spec.boundary == "periodic":
        B[0, -1] += -spec.g
        B[-1, 0] += -spec.g
    else:
        B[0, 0] = spec.g + math.cos(phi[0])
        B[-1, -1] = spec.g + math.cos(phi[-1])
    return B


def vacuum_spectrum(spec: ChainSpec) -> np.ndarray:
    """Closed-form phonon frequencies of the vacuum, ascending.

    omega_l = sqrt(1 + 2g(1 - cos q_l)) with q_l = 2*pi*l/N on the periodic
    chain and q_l = pi*l/N on the free chain, l = 0..N-1.
    """
    l = np.arange(spec.N)
    if spec.boundary == "periodic":
        q = 2.0 * math.pi * l / spec.N
    else:
        q = math.pi * l / spec.N
    w = np.sqrt(1.0 + 2.0 * spec.g * (1.0 - np.cos(q)))
    return np.sort(w)


def _fix_signs(v: np.ndarray) -> np.ndarray:
    """Scale each column so its largest-magnitude entry is positive."""
    piv = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[piv, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def _order_degenerate(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Within near-degenerate eigenvalue groups, put mirror-symmetric vectors
    before antisymmetric ones; stabilizes downstream collective-mode builds."""
    n = w.size
    start = 0
    while start < n - 1:
        stop = start + 1
        scale = max(1.0, abs(w[start]))
        while stop < n and abs(w[stop] - w[start]) < DEGENERACY_TOL * scale:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            sym = np.array([float(col @ col[::-1]) for col in block.T])
            order = np.argsort(-sym, kind="stable")
            v[:, start:stop] = block[:, order]
        start = stop
    return v


def diagonalize(B: np.ndarray, zero_mode_tol: float = ZERO_MODE_TOL) -> ModeBasis:
    """Full eigen-decomposition of a symmetric stability matrix.

    Eigenvalues in [-1e-9, 0) are clamped to 0; anything lower raises
    Unstable.  ZeroMode is raised when an omega^2 sits within zero_mode_tol of
    zero after clamping, since the ground-state variances diverge there.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DomainError("stability matrix must be square")
    if not np.allclose(B, B.T, atol=1e-12 * max(1.0, float(np.abs(B).max()))):
        raise DomainError("stability matrix must be symmetric")
    w, v = np.linalg.eigh(B)
    if w[0] < CLAMP_NEG:
        raise Unstable(f"configuration is a saddle: omega^2 = {w[0]:.3e}")
    w = np.where((w < 0) & (w >= CLAMP_NEG), 0.0, w)
    if np.any(np.abs(w) < zero_mode_tol):
        raise ZeroMode("omega^2 within tolerance of zero; ground state undefined")
    v = _order_degenerate(w, v)
    v = _fix_signs(v)
    return ModeBasis(omega_sq=w, eta=v)


def fluctuation_modes(spec: ChainSpec, solution: ClassicalSolution) -> ModeBasis:
    """Stability matrix and its eigen-decomposition in one step."""
    return diagonalize(stability_matrix(spec, solution))


def classify_modes(basis: ModeBasis, tol_band: float = TOL_BAND) -> ModeClassification:
    """Split mode indices at the phonon band edge omega^2 = 1.

    Internal (soliton-bound) modes satisfy omega^2 < 1 - tol_band; everything
    else is a phonon.
    """
    w2 = basis.omega_sq
    internal = np.nonzero(w2 < 1.0 - tol_band)[0]
    phonon = np.nonzero(w2 >= 1.0 - tol_band)[0]
    return ModeClassification(internal=internal, phonon=phonon)


def n_internal(basis: ModeBasis, tol_band: float = TOL_BAND) -> int:
    return int(np.sum(basis.omega_sq < 1.0 - tol_band))


def _single_soliton_has_internal(N: int, g: float) -> bool:
    spec = ChainSpec(N=N, g=g, boundary="free")
    L = 0.5 * N / math.sqrt(g)
    try:
        k1 = bifurcation_points(L, 1)[0]
    except NoRoot:
        return False  # the single-soliton branch does not exist at this coupling
    try:
        k2 = bifurcation_points(L, 2)[1]
    except NoRoot:
        k2 = 0.0
    # Probe several moduli across the single-soliton interval; an individual
    # seed can relax onto a saddle, stall, or collapse into a multi-soliton
    # array, so one stable single-centered solution with a sub-band mode is
    # enough.  At wide chains both interval endpoints round to k = 1 and any
    # moderate holding field works.
    for q in (0.5, 0.25, 0.75, 0.9, 0.98):
        k = k2 + q * (k1 - k2)
        for gtol in (1e-7, 1e-5):
            try:
                if k >= 1.0:
                    sol = held_single_soliton(spec, H=0.5, gtol=gtol)
                else:
                    sol = finite_single_soliton(spec, k=k, gtol=gtol)
                if len(sol.centers) != 1:
                    break
                basis = fluctuation_modes(spec, sol)
            except NotConverged:
                continue
            except FKChainError:
                break
            if n_internal(basis) >= 1:
                return True
            break
    return False


def g_max_scan(N: int, g_lo: float = 1e3, g_hi: float = 1e7, refinements: int = 30) -> float:
    """Largest coupling at which the single-soliton sector still has a bound
    mode below the phonon band; bisection on a log grid."""
    if N < 100:
        raise DomainError(f"need N >= 100, got {N}")
    if not _single_soliton_has_internal(N, g_lo):
        raise DomainError(f"no internal mode even at g = {g_lo:g}")
    if _single_soliton_has_internal(N, g_hi):
        raise DomainError(f"internal mode persists at g = {g_hi:g}; raise g_hi")
    lo, hi = math.log(g_lo), math.log(g_hi)
    for _ in range(refinements):
        mid = 0.5 * (lo + hi)
        if _single_soliton_has_internal(N, math.exp(mid)):
            lo = mid
        else:
            hi = mid
    return math.exp(lo)


def spectrum_rows(basis: ModeBasis, tol_band: float = TOL_BAND) -> list[dict]:
    """Flat records (index, omega_sq, omega, class) for CSV export."""
    cls = classify_modes(basis, tol_band)
    kinds = np.empty(basis.N, dtype=object)
    kinds[cls.internal] = "internal"
    kinds[cls.phonon] = "phonon"
    return [
        {
            "index": l,
            "omega_sq": float(basis.omega_sq[l]),
            "omega": float(basis.omega[l]),
            "class": str(kinds[l]),
        }
        for l in range(basis.N)
    ]
