"""Two-mode squeezing on internal modes and hashing entanglement bounds.

An auxiliary oscillator Q is appended to the chain's normal modes; a squeeze
with parameter r entangles Q with a chosen internal mode (or a collective
pair of internal modes on a double soliton).  Entropy differences between
blocks then give lower bounds on the distillable entanglement via the hashing
inequality.

All transformations act separately on the position and momentum sectors, so
the covariance pair (G, H) stays cross-correlation free throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DomainError,
    InvalidPartition,
    NotGroundForm,
    TooFewInternalModes,
)
from .gaussian import (
    GaussianState,
    block_entropy,
    entropy_of_spectrum,
    _check_block,
)
from .modes import ModeBasis, n_internal

GROUND_FORM_TOL = 1e-10


@dataclass
class ExtendedSystem:
    """Chain normal modes plus one uncoupled external oscillator Q.

    Gt and Ht are the correlation matrices in the normal-mode frame (Q last);
    eta rotates positions back to site coordinates, phi = eta . phi_tilde.
    """

    eta: np.ndarray
    Gt: np.ndarray
    Ht: np.ndarray
    omega: np.ndarray   # chain mode frequencies plus omega_Q, same order as Gt

    @property
    def n_modes(self) -> int:
        return self.Gt.shape[0]

    @property
    def q_index(self) -> int:
        return self.n_modes - 1

    def site_state(self) -> GaussianState:
        """Correlations in site coordinates (Q keeps its own coordinate, last)."""
        G = self.eta @ self.Gt @ self.eta.T
        H = self.eta @ self.Ht @ self.eta.T
        return GaussianState(G=0.5 * (G + G.T), H=0.5 * (H + H.T))


def append_external_mode(basis: ModeBasis, omega_q: float | None = None) -> ExtendedSystem:
    """Extend the chain ground state by an uncoupled oscillator Q in its own
    ground state: G_QQ = 1/(2 omega_Q), H_QQ = omega_Q/2.

    omega_Q defaults to the lowest chain frequency so that a squeeze at r = 0
    mixes two identical vacua and inserts no entanglement.
    """
    if omega_q is None:
        omega_q = float(basis.omega[0])
    if omega_q <= 0:
        raise DomainError(f"need omega_Q > 0, got {omega_q}")
    omega = np.concatenate([basis.omega, [omega_q]])
    n = omega.size
    eta = np.zeros((n, n))
    eta[:-1, :-1] = basis.eta
    eta[-1, -1] = 1.0
    return ExtendedSystem(
        eta=eta,
        Gt=np.diag(1.0 / (2.0 * omega)),
        Ht=np.diag(omega / 2.0),
        omega=omega,
    )


def _require_ground_form(system: ExtendedSystem) -> None:
    for M in (system.Gt, system.Ht):
        off = M - np.diag(np.diag(M))
        if float(np.max(np.abs(off))) > GROUND_FORM_TOL * max(1.0, float(np.abs(M).max())):
            raise NotGroundForm("system is not in normal-mode-diagonal ground form")


def _apply_pair_maps(system: ExtendedSystem, i: int, j: int,
                     s_phi: np.ndarray, s_pi: np.ndarray) -> ExtendedSystem:
    """Congruence update of (Gt, Ht) by 2x2 maps acting on modes (i, j)."""
    J = np.array([[0.0, 1.0], [1.0, 0.0]])
    if not np.allclose(s_phi @ s_pi.T, np.eye(2), atol=1e-12):
        raise DomainError("pair map is not symplectic")
    del J
    n = system.n_modes
    Sx = np.eye(n)
    Sp = np.eye(n)
    Sx[np.ix_([i, j], [i, j])] = s_phi
    Sp[np.ix_([i, j], [i, j])] = s_pi
    return ExtendedSystem(
        eta=system.eta,
        Gt=Sx @ system.Gt @ Sx.T,
        Ht=Sp @ system.Ht @ Sp.T,
        omega=system.omega,
    )


def two_mode_squeeze(system: ExtendedSystem, r: float, mode: int = 0) -> ExtendedSystem:
    """Squeeze the chain normal mode `mode` against Q with parameter r.

    The map on positions and momenta of the pair (phi_mode, x_Q) is

        phi' = (e^{+r} phi + e^{-r} x_Q)/sqrt2,  x_Q' = (e^{+r} phi - e^{-r} x_Q)/sqrt2
        pi'  = (e^{-r} pi  + e^{+r} p_Q)/sqrt2,  p_Q' = (e^{-r} pi  - e^{+r} p_Q)/sqrt2

    which is symplectic (S_phi S_pi^T = 1), so the global state stays pure.
    """
    _require_ground_form(system)
    if r < 0:
        raise DomainError(f"need r >= 0, got {r}")
    if not 0 <= mode < system.q_index:
        raise DomainError(f"mode index {mode} outside chain modes")
    ep, em = math.exp(r), math.exp(-r)
    s_phi = np.array([[ep, em], [ep, -em]]) / math.sqrt(2.0)
    s_pi = np.array([[em, ep], [em, -ep]]) / math.sqrt(2.0)
    return _apply_pair_maps(system, mode, system.q_index, s_phi, s_pi)


def inserted_entropy(r: float) -> float:
    """Entropy a two-mode squeeze of strength r inserts between its two arms:
    cosh^2(r) ln cosh^2(r) - sinh^2(r) ln sinh^2(r)."""
    if r < 0:
        raise DomainError(f"need r >= 0, got {r}")
    if r == 0:
        return 0.0
    c2, s2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    return c2 * math.log(c2) - s2 * math.log(s2)


def collective_pm_modes(basis: ModeBasis) -> tuple[np.ndarray, np.ndarray]:
    """Collective site-space vectors (eta1 +- eta2)/sqrt2 of the two lowest modes.

    For near-degenerate omega1 and omega2 (well separated solitons) each
    vector localizes on one soliton.
    """
    if n_internal(basis) < 2:
        raise TooFewInternalModes("need at least two bound modes")
    e1, e2 = basis.eta[:, 0], basis.eta[:, 1]
    return (e1 + e2) / math.sqrt(2.0), (e1 - e2) / math.sqrt(2.0)


def pm_squeeze(system: ExtendedSystem, r: float, modes: tuple[int, int] = (0, 1)) -> ExtendedSystem:
    """Two-mode squeeze of the collective (+,-) combinations of two chain modes.

    In the dimensionless quadratures x_l = sqrt(omega_l) phi_l the squeeze is
    the standard exp(r(a+^dag a-^dag - a+ a-)) map on the 45-degree rotated
    pair; rotating back gives symmetric maps on (x_1, x_2) and (p_1, p_2)
    that are then unscaled to the (phi, pi) variables.
    """
    _require_ground_form(system)
    i, j = modes
    if i == j or not (0 <= i < system.q_index and 0 <= j < system.q_index):
        raise DomainError(f"invalid mode pair {modes}")
    ch, sh = math.cosh(r), math.sinh(r)
    rot = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    t_x = np.array([[ch, sh], [sh, ch]])
    t_p = np.array([[ch, -sh], [-sh, ch]])
    m_x = rot.T @ t_x @ rot
    m_p = rot.T @ t_p @ rot
    d = np.diag(np.sqrt(system.omega[[i, j]]))
    d_inv = np.diag(1.0 / np.sqrt(system.omega[[i, j]]))
    s_phi = d_inv @ m_x @ d
    s_pi = d @ m_p @ d_inv
    return _apply_pair_maps(system, i, j, s_phi, s_pi)


def _partition_check(n: int, *blocks) -> list[np.ndarray]:
    idx = [_check_block(n, b) for b in blocks]
    combined = np.concatenate(idx)
    if len(set(combined.tolist())) != combined.size or combined.size != n:
        raise InvalidPartition("blocks must partition all modes")
    return idx


def hashing_lower_bound(state: GaussianState, block_a, block_b, block_q) -> float:
    """Hashing-inequality lower bound on the distillable entanglement between
    block A and the external mode(s) Q:

        E_D(A, Q) >= max{0, E_S(A) - E_S(Q), E_S(A) - E_S(B)}

    using purity of the global state (E_S(A u B) = E_S(Q), E_S(A u Q) = E_S(B)).
    """
    _partition_check(state.N, block_a, block_b, block_q)
    e_a = block_entropy(state, block_a)
    e_b = block_entropy(state, block_b)
    e_q = block_entropy(state, block_q)
    return max(0.0, e_a - e_q, e_a - e_b)


def double_soliton_squeeze_bound(state: GaussianState, block_a1, block_a2) -> float:
    """Hashing bound between two blocks of a (squeezed) pure state:
    E_D(A1, A2) >= E_S(A1) - E_S(A1 u A2)."""
    idx1 = _check_block(state.N, block_a1)
    idx2 = _check_block(state.N, block_a2)
    if set(idx1.tolist()) & set(idx2.tolist()):
        raise InvalidPartition("blocks A1 and A2 overlap")
    e1 = block_entropy(state, idx1)
    e12 = block_entropy(state, np.concatenate([idx1, idx2]))
    return e1 - e12


def squeeze_symplectic_matrix(r: float) -> np.ndarray:
    """Explicit 4x4 matrix of the mode-Q squeeze in (phi, x_Q, pi, p_Q) order;
    satisfies S J S^T = J."""
    ep, em = math.exp(r), math.exp(-r)
    s_phi = np.array([[ep, em], [ep, -em]]) / math.sqrt(2.0)
    s_pi = np.array([[em, ep], [em, -ep]]) / math.sqrt(2.0)
    S = np.zeros((4, 4))
    S[:2, :2] = s_phi
    S[2:, 2:] = s_pi
    return S
