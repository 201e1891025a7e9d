"""Classical background configurations of the Frenkel-Kontorova chain.

Builds and relaxes the static configurations the quantum analysis runs on:
the trivial vacuum, the sampled continuum sine-Gordon soliton, finite-system
single/double solitons obtained from Jacobi elliptic profiles, and
weak-coupling kinks found by energy minimization.

Dimensionless units: particle mass 1, substrate period 2*pi, substrate
amplitude 2.  The continuum length unit (Josephson length) is sqrt(g)
lattice spacings.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.linalg import solve_banded, eigvals_banded

from .elliptic import complete_K, jacobi_am, jacobi_sn_cn_dn
from .errors import (
    DomainError,
    NoCenters,
    NoRoot,
    NoStableConfiguration,
    NotConverged,
    Unstable,
)

A_S = 2.0 * math.pi  # substrate period
EPS_S = 2.0          # substrate amplitude
G_CONTINUUM = 16.0   # coupling above which the continuum limit is reasonable

SECTORS = ("vacuum", "single_soliton", "double_soliton", "kink")


@dataclass(frozen=True)
class ChainSpec:
    """Discrete chain definition: N particles coupled with strength g."""

    N: int
    g: float
    boundary: str = "free"

    def __post_init__(self) -> None:
        if self.N < 2:
            raise DomainError(f"need N >= 2, got {self.N}")
        if self.g <= 0:
            raise DomainError(f"need g > 0, got {self.g}")
        if self.boundary not in ("free", "periodic"):
            raise DomainError(f"boundary must be 'free' or 'periodic', got {self.boundary!r}")

    @property
    def josephson_length(self) -> float:
        """Continuum length unit in lattice spacings."""
        return math.sqrt(self.g)

    @property
    def half_length(self) -> float:
        """Half-length of the chain in Josephson-length units."""
        return self.N / (2.0 * math.sqrt(self.g))


@dataclass
class ClassicalSolution:
    """A static configuration with its sector tag and classical energy."""

    phi: np.ndarray
    sector: str
    energy: float
    centers: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.phi = np.asarray(self.phi, dtype=float)
        if self.sector not in SECTORS:
            raise DomainError(f"unknown sector {self.sector!r}")


def substrate_potential(phi):
    """On-site potential 1 - cos(phi); range [0, 2]."""
    return 1.0 - np.cos(phi)


def total_energy(spec: ChainSpec, phi: np.ndarray) -> float:
    """Static energy: sum of substrate terms plus (g/2) sum of squared bond stretches."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (spec.N,):
        raise DomainError(f"phi must have length {spec.N}, got shape {phi.shape}")
    e = float(np.sum(substrate_potential(phi)))
    d = np.diff(phi)
    e += 0.5 * spec.g * float(np.dot(d, d))
    if spec.boundary == "periodic":
        e += 0.5 * spec.g * (phi[0] - phi[-1]) ** 2
    return e


def energy_gradient(spec: ChainSpec, phi: np.ndarray, edge_field: float = 0.0) -> np.ndarray:
    """Gradient of total_energy, optionally with the boundary flux term.

    edge_field h adds -h*(phi[N-1] - phi[0]) to the energy (free boundary
    only), the discrete form of the magnetic-field boundary condition
    dphi/dx = 2H with h = 2*H*sqrt(g).  It is what holds finite-system
    multi-soliton configurations in place during relaxation.
    """
    phi = np.asarray(phi, dtype=float)
    grad = np.sin(phi).astype(float)
    if spec.boundary == "periodic":
        grad += spec.g * (2.0 * phi - np.roll(phi, 1) - np.roll(phi, -1))
        if edge_field != 0.0:
            raise DomainError("edge_field requires free boundary")
    else:
        grad[1:-1] += spec.g * (2.0 * phi[1:-1] - phi[:-2] - phi[2:])
        grad[0] += spec.g * (phi[0] - phi[1])
        grad[-1] += spec.g * (phi[-1] - phi[-2])
        grad[0] += edge_field
        grad[-1] -= edge_field
    return grad


def _hessian_banded(spec: ChainSpec, phi: np.ndarray) -> np.ndarray:
    """Upper banded (2, N) storage of the free-boundary energy Hessian."""
    n = spec.N
    ab = np.zeros((2, n))
    ab[0, 1:] = -spec.g
    ab[1, :] = 2.0 * spec.g + np.cos(phi)
    ab[1, 0] = spec.g + math.cos(phi[0])
    ab[1, -1] = spec.g + math.cos(phi[-1])
    return ab


def vacuum_solution(spec: ChainSpec) -> ClassicalSolution:
    """All particles at substrate minima: phi = 0, energy 0."""
    return ClassicalSolution(phi=np.zeros(spec.N), sector="vacuum", energy=0.0)


def continuum_soliton_profile(x, g: float, X: float = 0.0, sigma: int = 1):
    """Continuum sine-Gordon kink 4*atan(exp(-sigma*(x - X)/sqrt(g)))."""
    return 4.0 * np.arctan(np.exp(-sigma * (np.asarray(x, dtype=float) - X) / math.sqrt(g)))


def continuum_soliton(spec: ChainSpec, X: float | None = None, sigma: int = 1) -> ClassicalSolution:
    """Continuum soliton sampled at unit spacing, center X (chain middle by default).

    For sigma = +1 the profile interpolates from 2*pi on the left to 0 on the
    right; the winding magnitude across the chain is 2*pi.
    """
    if sigma not in (1, -1):
        raise DomainError("sigma must be +1 or -1")
    if spec.g <= G_CONTINUUM:
        warnings.warn(
            f"g = {spec.g} is at or below the continuum threshold ~{G_CONTINUUM:g}; "
            "the sampled profile is only a seed for relaxation",
            stacklevel=2,
        )
    if X is None:
        X = (spec.N - 1) / 2.0
    n = np.arange(spec.N, dtype=float)
    phi = continuum_soliton_profile(n, spec.g, X=X, sigma=sigma)
    sector = "single_soliton" if spec.g > G_CONTINUUM else "kink"
    sol = ClassicalSolution(phi=phi, sector=sector, energy=total_energy(spec, phi))
    sol.centers = soliton_centers(sol)
    return sol


def sample_double_continuum(spec: ChainSpec, X1: float, X2: float) -> np.ndarray:
    """Two superposed same-charge continuum kinks; a seed for relaxation only."""
    n = np.arange(spec.N, dtype=float)
    return continuum_soliton_profile(n, spec.g, X=X1, sigma=-1) + continuum_soliton_profile(
        n, spec.g, X=X2, sigma=-1
    )


# --- finite sine-Gordon solutions (Josephson junction geometry) -------------

def bifurcation_points(L: float, sigma_max: int) -> list[float]:
    """Moduli k_sigma solving sigma*K(k) = L, a strictly decreasing sequence.

    k_sigma bounds the stability interval I_sigma = (k_{sigma+1}, k_sigma] of
    the sigma-soliton finite-system solution.

    Roots with 1 - k below double-precision resolution (K(k) diverges only
    logarithmically, so this happens already for modest L / sigma) are
    reported as exactly 1.0.
    """
    if L <= 0:
        raise DomainError(f"need L > 0, got {L}")
    k_hi = 1.0 - 1e-15
    K_hi = complete_K(k_hi)
    out = []
    for sigma in range(1, sigma_max + 1):
        target = L / sigma
        if target <= math.pi / 2.0:
            raise NoRoot(
                f"sigma*K(0) = {sigma * math.pi / 2.0:g} already exceeds L = {L:g}; "
                f"no bifurcation point for sigma = {sigma}"
            )
        if target >= K_hi:
            out.append(1.0)
            continue
        out.append(optimize.brentq(lambda k: complete_K(k) - target, 0.0, k_hi, xtol=1e-13))
    return out


def stability_window_H(L: float, sigma: int) -> tuple[float, float]:
    """Stability window of the external field H for the sigma-soliton solution.

    H_sigma solves (sigma+1) K(1/H_sigma) = H_sigma L, reading the argument of
    K in the parameter convention m = 1/H (i.e. modulus sqrt(1/H)); that
    reading reproduces the published window endpoints.  The window is
    (0, H_0) for sigma = 0 and (sqrt(H_{sigma-1}^2 - 1), H_sigma) for
    sigma >= 1.
    """
    if L <= 0:
        raise DomainError(f"need L > 0, got {L}")
    if sigma < 0:
        raise DomainError(f"need sigma >= 0, got {sigma}")

    def h_upper(s: int) -> float:
        # root of (s+1) K(sqrt(1/H)) - H*L in H >= 1
        def f(H: float) -> float:
            return (s + 1) * complete_K(math.sqrt(1.0 / H)) - H * L

        lo = 1.0 + 1e-15
        if f(lo) < 0:
            raise NoRoot(f"no stability endpoint H_{s} for L = {L:g}")
        hi = 2.0
        while f(hi) > 0:
            hi *= 2.0
            if hi > 1e6:
                raise NoRoot(f"H_{s} search diverged for L = {L:g}")
        return optimize.brentq(f, lo, hi, xtol=1e-13)

    if sigma == 0:
        return 0.0, h_upper(0)
    h_prev = h_upper(sigma - 1)
    return math.sqrt(h_prev * h_prev - 1.0), h_upper(sigma)


def H_from_k(L: float, sigma: int, k: float) -> float:
    """Boundary field H = phi'(+-L)/2 of the sigma-soliton profile with modulus k.

    Follows from dn(L/k, k) = k*H for odd sigma and
    dn(L/k, k) = sqrt(1 - k^2)/(k*H) for even sigma; the even relation carries
    sqrt(1 - k^2) (not 1 - k^2) so that the profile slope at the edges equals
    2H exactly.
    """
    if not 0.0 < k < 1.0:
        raise DomainError(f"need 0 < k < 1, got {k}")
    _, _, dn = jacobi_sn_cn_dn(L / k, k)
    if sigma % 2 == 1:
        return dn / k
    return math.sqrt(1.0 - k * k) / (k * dn)


def physical_window_H(L: float, sigma: int) -> tuple[float, float]:
    """Range of boundary-slope fields H_from_k(L, sigma, k) over k in I_sigma."""
    if sigma < 1:
        raise DomainError("physical_window_H is defined for sigma >= 1")
    ks = bifurcation_points(L, sigma + 1)
    k_hi = ks[sigma - 1]            # k_sigma (interval upper end, inclusive)
    k_lo = ks[sigma]                # k_{sigma+1} (open lower end)
    a = H_from_k(L, sigma, k_lo + 1e-12)
    b = H_from_k(L, sigma, k_hi)
    return (a, b) if a <= b else (b, a)


def k_from_H(L: float, sigma: int, H: float) -> float:
    """Invert H_from_k on the stability interval I_sigma to 1e-10 in k."""
    if sigma < 1:
        raise DomainError("k_from_H requires sigma >= 1")
    ks = bifurcation_points(L, sigma + 1)
    k_hi, k_lo = ks[sigma - 1], ks[sigma]
    lo, hi = k_lo + 1e-12, k_hi

    def f(k: float) -> float:
        return H_from_k(L, sigma, k) - H

    flo, fhi = f(lo), f(hi)
    if flo * fhi > 0:
        raise NoRoot(
            f"H = {H:g} outside the physical window {physical_window_H(L, sigma)} "
            f"for L = {L:g}, sigma = {sigma}"
        )
    return optimize.brentq(f, lo, hi, xtol=1e-12)


@dataclass(frozen=True)
class FiniteSGParams:
    """Finite sine-Gordon solution parameters: half-length L (in Josephson
    lengths), topological index sigma, elliptic modulus k in I_sigma, boundary
    field H = phi'(+-L)/2, and center offset x0."""

    L: float
    sigma: int
    k: float
    H: float
    x0: float = 0.0

    def __post_init__(self) -> None:
        if self.L <= 0 or self.sigma < 0 or not 0.0 < self.k < 1.0:
            raise DomainError("invalid finite-SG parameters")

    @classmethod
    def from_k(cls, L: float, sigma: int, k: float, x0: float = 0.0) -> "FiniteSGParams":
        # Below the sigma-th bifurcation modulus the window holds more than
        # sigma solitons and the sigma-soliton branch does not exist.  Above
        # the (sigma-1)-th point the branch continues (the virtual neighbours
        # move outside the window), so only the lower edge is enforced.
        if sigma >= 1:
            try:
                ks = bifurcation_points(L, sigma + 1)
            except NoRoot:
                ks = None  # no (sigma+1)-soliton branch: no lower edge
            if ks is not None and not k > ks[sigma] * (1.0 - 1e-12):
                raise DomainError(
                    f"k = {k:g} at or below the bifurcation modulus "
                    f"{ks[sigma]:.6g} for sigma = {sigma}"
                )
        return cls(L=L, sigma=sigma, k=k, H=H_from_k(L, sigma, k), x0=x0)


def finite_sg_profile(params: FiniteSGParams):
    """Continuous sigma-soliton profile on x in [-L, L].

    Returns a callable f(x) with f'' = sin(f) and f'(+-L) = 2H.  Even sigma
    uses phi(x) = pi*(sigma-1) + 2*am(x/k + K(k), k), odd sigma uses
    phi(x) = pi*sigma + 2*am(x/k, k).
    """
    k = params.k
    K = complete_K(k)
    L = params.L

    def profile(x: float) -> float:
        if abs(x) > L + 1e-12:
            raise DomainError(f"x = {x:g} outside [-L, L] = [-{L:g}, {L:g}]")
        u = (x - params.x0) / k
        if params.sigma % 2 == 0:
            return math.pi * (params.sigma - 1) + 2.0 * jacobi_am(u + K, k)
        return math.pi * params.sigma + 2.0 * jacobi_am(u, k)

    return profile


def sample_finite_sg(spec: ChainSpec, params: FiniteSGParams) -> np.ndarray:
    """Sample the finite-SG profile onto the chain, one site per lattice spacing.

    The junction [-L, L] is laid over the chain with the Josephson length
    equal to sqrt(g) lattice spacings, centered on the chain middle.  The
    chain must be long enough to hold it (N >= 2*L*sqrt(g))."""
    lam = spec.josephson_length
    if spec.N < 2.0 * params.L * lam - 1e-9:
        raise DomainError(
            f"chain of {spec.N} sites cannot hold a junction of {2 * params.L:g} "
            f"Josephson lengths at g = {spec.g:g} ({2 * params.L * lam:.1f} sites)"
        )
    profile = finite_sg_profile(params)
    mid = (spec.N - 1) / 2.0
    x = (np.arange(spec.N) - mid) / lam
    x = np.clip(x, -params.L, params.L)
    return np.array([profile(xi) for xi in x])


# --- relaxation --------------------------------------------------------------

def sample_and_relax(
    spec: ChainSpec,
    initial: np.ndarray,
    edge_field: float = 0.0,
    gtol: float = 1e-10,
    max_iter: int = 1_000_000,
    check_stability: bool = True,
    symmetrize: bool = False,
) -> ClassicalSolution:
    """Descend from `initial` to a local minimum of the configuration energy.

    Quasi-Newton descent followed by banded-Newton polish; every accepted step
    decreases the energy.  Raises NotConverged if the gradient infinity-norm
    stays above gtol, and Unstable if the relaxed configuration has a
    fluctuation eigenvalue below -1e-9.

    With symmetrize=True each iterate is projected onto the mirror-symmetric
    subspace phi(n) + phi(N-1-n) = const (the constant is read off the seed,
    rounded to the nearest multiple of 2*pi).  The energy is invariant under
    the mirror map, so symmetric stationary points stay stationary; the
    projection keeps the descent from sliding soliton centers sideways.
    """
    phi0 = np.asarray(initial, dtype=float)
    if phi0.shape != (spec.N,):
        raise DomainError(f"initial must have length {spec.N}")

    if symmetrize:
        two_pi = 2.0 * math.pi
        const = two_pi * round(float(np.mean(phi0 + phi0[::-1])) / two_pi)

        def project(p):
            return 0.5 * (p + const - p[::-1])
    else:
        def project(p):
            return p

    def fun(p):
        e = total_energy(spec, p)
        if edge_field != 0.0:
            e -= edge_field * (p[-1] - p[0])
        return e

    def jac(p):
        return energy_gradient(spec, p, edge_field=edge_field)

    phi0 = project(phi0)
    energies = [fun(phi0)]
    res = optimize.minimize(
        fun,
        phi0,
        jac=jac,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "ftol": 1e-18, "gtol": min(gtol, 1e-9), "maxcor": 30},
    )
    phi = project(res.x)
    energies.append(fun(phi))

    if spec.boundary == "free":
        # Newton polish: the Hessian is banded, so each step is O(N).
        for _ in range(200):
            grad = jac(phi)
            if float(np.max(np.abs(grad))) < gtol:
                break
            ab = _hessian_banded(spec, phi)
            d = _tridiag_solve(ab, grad)
            trial = project(phi - d)
            e_trial = fun(trial)
            if e_trial <= energies[-1] + 1e-15 * max(1.0, abs(energies[-1])):
                phi = trial
                energies.append(e_trial)
            else:
                # damped fallback
                alpha, improved = 0.5, False
                while alpha > 1e-6:
                    trial = project(phi - alpha * d)
                    e_trial = fun(trial)
                    if e_trial < energies[-1]:
                        phi, improved = trial, True
                        energies.append(e_trial)
                        break
                    alpha *= 0.5
                if not improved:
                    break

    grad_norm = float(np.max(np.abs(jac(phi))))
    if grad_norm > gtol:
        raise NotConverged(
            f"relaxation stalled at gradient infinity-norm {grad_norm:.3e} (> {gtol:g})"
        )
    if not all(b >= a - 1e-12 * max(1.0, abs(a)) for a, b in zip(energies[1:], energies)):
        raise NotConverged("descent log is not monotone")

    if check_stability and spec.boundary == "free":
        ab = _hessian_banded(spec, phi)
        w_min = float(eigvals_banded(ab, select="i", select_range=(0, 0))[0])
        if w_min < -1e-9:
            raise Unstable(f"relaxed configuration has omega^2 = {w_min:.3e} < 0")

    sector, centers = _classify(spec, phi)
    return ClassicalSolution(
        phi=phi, sector=sector, energy=total_energy(spec, phi), centers=centers
    )


def _tridiag_solve(ab_upper: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve the symmetric tridiagonal system given in upper banded storage."""
    n = ab_upper.shape[1]
    full = np.zeros((3, n))
    full[0, 1:] = ab_upper[0, 1:]
    full[1, :] = ab_upper[1, :]
    full[2, :-1] = ab_upper[0, 1:]
    return solve_banded((1, 1), full, rhs, check_finite=False)


def _classify(spec: ChainSpec, phi: np.ndarray) -> tuple[str, list[float]]:
    try:
        centers = _find_centers(phi)
    except NoCenters:
        return "vacuum", []
    if len(centers) == 0:
        return "vacuum", []
    if len(centers) == 1:
        return ("single_soliton" if spec.g > G_CONTINUUM else "kink"), centers
    if len(centers) == 2:
        return "double_soliton", centers
    return ("single_soliton" if spec.g > G_CONTINUUM else "kink"), centers


def _find_centers(phi: np.ndarray) -> list[float]:
    lo = math.floor(float(np.min(phi)) / math.pi)
    hi = math.ceil(float(np.max(phi)) / math.pi)
    centers: list[float] = []
    for m in range(lo, hi + 1):
        if m % 2 == 0:
            continue
        target = m * math.pi
        d = phi - target
        sign_change = np.where(d[:-1] * d[1:] < 0)[0]
        for n in sign_change:
            t = d[n] / (d[n] - d[n + 1])
            centers.append(float(n + t))
        exact = np.where(d == 0.0)[0]
        centers.extend(float(n) for n in exact)
    if not centers:
        raise NoCenters("no odd-pi crossing in configuration")
    return sorted(centers)


def soliton_centers(solution: ClassicalSolution) -> list[float]:
    """Sub-lattice soliton positions: interpolated crossings of odd multiples of pi."""
    if solution.sector == "vacuum":
        raise NoCenters("vacuum configuration has no soliton centers")
    return _find_centers(solution.phi)


# --- high-level constructors --------------------------------------------------

def finite_single_soliton(spec: ChainSpec, k: float | None = None, relax: bool = True,
                          gtol: float = 1e-8) -> ClassicalSolution:
    """Finite-system single soliton: sample the sigma = 1 elliptic profile over
    the whole chain (L = N/(2*sqrt(g))) and relax it under the boundary field."""
    L = spec.half_length
    if k is None:
        ks = bifurcation_points(L, 2)
        k = 0.5 * (ks[0] + ks[1])  # middle of I_1
    params = FiniteSGParams.from_k(L, 1, k)
    phi0 = sample_finite_sg(spec, params)
    h = 2.0 * params.H * spec.josephson_length
    if not relax:
        sol = ClassicalSolution(phi=phi0, sector="single_soliton",
                                energy=total_energy(spec, phi0))
        sol.centers = soliton_centers(sol)
        return sol
    return sample_and_relax(spec, phi0, edge_field=h, gtol=gtol, symmetrize=True)


def held_soliton_seed(spec: ChainSpec, H: float) -> np.ndarray:
    """Approximate field-held single-soliton profile, built without elliptic
    calls: the central soliton plus the two boundary layers that carry wall
    slope 2H (tails of virtual solitons a distance arcsech(H) beyond the
    walls).  Valid for any half-length; exact in the limit L >> 1."""
    if not 0.0 < H < 1.0:
        raise DomainError(f"need 0 < H < 1 for the boundary-layer seed, got {H}")
    lam = spec.josephson_length
    L = spec.half_length
    x = (np.arange(spec.N) - (spec.N - 1) / 2.0) / lam
    a = math.log((1.0 + math.sqrt(1.0 - H * H)) / H)

    def tail(y):
        return 4.0 * np.arctan(np.exp(np.clip(y, -40.0, 40.0)))

    return tail(x) + tail(x - L - a) - tail(-x - L - a)


def held_single_soliton(spec: ChainSpec, H: float = 0.5,
                        gtol: float = 1e-10) -> ClassicalSolution:
    """Single soliton held at the chain center by the boundary field of
    strength H (slope phi' = 2H at the walls); stable for every coupling at
    which the soft center-of-mass frequency is resolvable."""
    h = 2.0 * H * spec.josephson_length
    seed = held_soliton_seed(spec, H)
    return sample_and_relax(spec, seed, edge_field=h, gtol=gtol, symmetrize=True)


def double_soliton(spec: ChainSpec, k: float, relax: bool = True,
                   gtol: float = 1e-8) -> ClassicalSolution:
    """Finite-system double soliton for modulus k in I_2, junction spanning the chain."""
    L = spec.half_length
    params = FiniteSGParams.from_k(L, 2, k)
    phi0 = sample_finite_sg(spec, params)
    h = 2.0 * params.H * spec.josephson_length
    if not relax:
        sol = ClassicalSolution(phi=phi0, sector="double_soliton",
                                energy=total_energy(spec, phi0))
        sol.centers = soliton_centers(sol)
        return sol
    return sample_and_relax(spec, phi0, edge_field=h, gtol=gtol, symmetrize=True)


def double_soliton_for_separation(spec: ChainSpec, d_target: float,
                                  rtol: float = 5e-3, gtol: float = 1e-8) -> ClassicalSolution:
    """Double soliton whose relaxed center separation is d_target lattice sites.

    Bisects the modulus within the stability interval I_2; the separation is
    a monotone function of k."""
    L = spec.half_length
    ks = bifurcation_points(L, 3)
    k_lo, k_hi = ks[2] * (1 + 1e-9) + 1e-12, ks[1]

    def sep(k: float) -> tuple[float, ClassicalSolution] | None:
        try:
            sol = double_soliton(spec, k, gtol=gtol)
        except (Unstable, NotConverged):
            return None
        if len(sol.centers) != 2:
            return None
        return sol.centers[1] - sol.centers[0], sol

    # Map the stable part of the interval first; moduli near either edge can
    # collapse during relaxation, so the bracket is built from surviving points.
    grid = [k_lo + t * (k_hi - k_lo) for t in
            (0.0, 0.05, 0.15, 0.3, 0.5, 0.7, 0.85, 0.95, 0.99,
             0.999, 0.9999, 0.99999, 1.0)]
    points = [(k, r) for k in grid if (r := sep(k)) is not None]
    if not points:
        raise NoStableConfiguration(
            f"no stable double soliton found for N = {spec.N}, g = {spec.g:g}"
        )
    best_k, (best_d, best_sol) = min(points, key=lambda p: abs(p[1][0] - d_target))
    bracket = None
    for (ka, ra), (kb, rb) in zip(points, points[1:]):
        if (ra[0] - d_target) * (rb[0] - d_target) <= 0:
            bracket = (ka, ra, kb, rb)
            break
    if bracket is None:
        if abs(best_d - d_target) <= rtol * d_target:
            return best_sol
        reach = sorted(r[0] for _, r in points)
        raise NoRoot(
            f"d = {d_target:g} outside reachable separations "
            f"[{reach[0]:.1f}, {reach[-1]:.1f}] (N = {spec.N}, g = {spec.g:g})"
        )
    lo, _, hi, _ = bracket
    d_at = {lo: bracket[1][0], hi: bracket[3][0]}
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        r = sep(mid)
        if r is None:
            # stay on the half adjacent to the better endpoint
            if abs(d_at[lo] - d_target) < abs(d_at[hi] - d_target):
                hi = mid
                d_at[hi] = d_at[lo]
            else:
                lo = mid
                d_at[lo] = d_at[hi]
            continue
        d_mid, sol_mid = r
        if abs(d_mid - d_target) < abs(best_d - d_target):
            best_d, best_sol = d_mid, sol_mid
        if abs(d_mid - d_target) <= rtol * d_target:
            return sol_mid
        increasing = d_at[hi] >= d_at[lo]
        if (d_mid < d_target) == increasing:
            lo = mid
        else:
            hi = mid
        d_at[lo if (d_mid < d_target) == increasing else hi] = d_mid
        if hi - lo < 1e-12:
            break
    return best_sol


# --- persistence --------------------------------------------------------------

RECORD_VERSION = 1


def dump_solution(spec: ChainSpec, solution: ClassicalSolution) -> str:
    """Versioned text record; round-trips bit-exactly via repr()."""
    buf = io.StringIO()
    buf.write(f"fkchain-solution v{RECORD_VERSION}\n")
    buf.write(f"N={spec.N}\n")
    buf.write(f"g={spec.g!r}\n")
    buf.write(f"boundary={spec.boundary}\n")
    buf.write(f"sector={solution.sector}\n")
    buf.write(f"energy={solution.energy!r}\n")
    buf.write("centers=" + ",".join(repr(c) for c in solution.centers) + "\n")
    for v in solution.phi:
        buf.write(f"{float(v)!r}\n")
    return buf.getvalue()


def load_solution(text: str) -> tuple[ChainSpec, ClassicalSolution]:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("fkchain-solution v"):
        raise DomainError("not an fkchain solution record")
    version = int(lines[0].rsplit("v", 1)[1])
    if version != RECORD_VERSION:
        raise DomainError(f"unsupported record version {version}")
    header: dict[str, str] = {}
    i = 1
    while "=" in lines[i]:
        key, _, val = lines[i].partition("=")
        header[key] = val
        i += 1
        if key == "centers":
            break
    spec = ChainSpec(N=int(header["N"]), g=float(header["g"]), boundary=header["boundary"])
    phi = np.array([float(s) for s in lines[i : i + spec.N]])
    centers = [float(s) for s in header["centers"].split(",") if s]
    return spec, ClassicalSolution(
        phi=phi, sector=header["sector"], energy=float(header["energy"]), centers=centers
    )


def save_solution(path, spec: ChainSpec, solution: ClassicalSolution) -> None:
    with open(path, "w") as fh:
        fh.write(dump_solution(spec, solution))


def load_solution_file(path) -> tuple[ChainSpec, ClassicalSolution]:
    with open(path) as fh:
        return load_solution(fh.read())
