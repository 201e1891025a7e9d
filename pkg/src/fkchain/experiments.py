"""Scenario runner: figure-level sweeps over chain configurations.

Each scenario builds classical backgrounds, quantizes fluctuations, measures
Gaussian-state entanglement quantities over a sweep grid, and returns a
tabular report.  Scenario points are independent jobs executed on a thread
pool; the pipeline is deterministic, so reports are reproducible bit-exactly
from their embedded configuration.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .classical import (
    ChainSpec,
    ClassicalSolution,
    double_soliton,
    double_soliton_for_separation,
    finite_single_soliton,
    held_single_soliton,
    load_solution_file,
    sample_and_relax,
    vacuum_solution,
)
from .errors import (
    ConfigError,
    FitWindowTooSmall,
    NoRoot,
    NoStableConfiguration,
    NotConverged,
    Unstable,
)
from .gaussian import (
    GaussianState,
    block_entropy,
    correlation_profile,
    ground_state,
    log_negativity,
    toy_two_oscillator,
)
from .modes import ModeBasis, fluctuation_modes, n_internal
from . import squeeze as sq

SCHEMA_VERSION = "1"

SCENARIOS = (
    "entropy_profile",
    "sliding_blocks",
    "ln_vs_separation",
    "alpha_fit",
    "beta_fit",
    "max_entropy_sweep",
    "correlation_compare",
    "weak_coupling_profile",
    "squeeze_single",
    "squeeze_double",
    "wkb_check",
    "noncritical_oscillation",
)

SECTORS = ("vacuum", "single_soliton", "held_single", "double_soliton",
           "double_separation", "kink", "kink_pair")

# Negativity below this is numerically indistinguishable from zero.
LN_FLOOR = 1e-13


# --- configuration -----------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one scenario run."""
    scenario: str
    chain: ChainSpec
    sector: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)
    seed_solution_path: str | None = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        kind = self.sector.get("kind", "vacuum")
        if kind not in SECTORS:
            raise ConfigError(f"unknown sector kind {kind!r}")
        grid = self.sweep.get("grid")
        if grid is not None:
            g = list(grid)
            if any(b <= a for a, b in zip(g, g[1:])):
                raise ConfigError("sweep grid must be strictly increasing")

    def canonical_json(self) -> str:
        payload = {
            "scenario": self.scenario,
            "chain": {"N": self.chain.N, "g": self.chain.g,
                      "boundary": self.chain.boundary},
            "sector": self.sector,
            "sweep": self.sweep,
            "seed_solution_path": self.seed_solution_path,
            "params": self.params,
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


@dataclass
class EntanglementReport:
    scenario: str
    rows: list          # list of (sweep_value, quantity, value) triples
    fits: dict
    config_hash: str
    elapsed_seconds: float
    schema_version: str = SCHEMA_VERSION

    def values(self, quantity: str) -> np.ndarray:
        return np.array([v for _, q, v in self.rows if q == quantity])

    def sweep_values(self, quantity: str) -> np.ndarray:
        return np.array([s for s, q, _ in self.rows if q == quantity])

    def to_json(self, config: ExperimentConfig | None = None) -> str:
        doc = {
            "schema_version": self.schema_version,
            "scenario": self.scenario,
            "rows": [list(r) for r in self.rows],
            "fits": self.fits,
            "config_hash": self.config_hash,
            "elapsed_seconds": self.elapsed_seconds,
        }
        if config is not None:
            doc["config"] = json.loads(config.canonical_json())
        return json.dumps(doc, indent=1, sort_keys=True)

    def to_csv(self, sweep_param: str) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["sweep_param", "value", "quantity", "config_hash"])
        for s, q, v in self.rows:
            w.writerow([repr(float(s)), repr(float(v)), q, self.config_hash])
        return buf.getvalue()


# --- grids and shared helpers ------------------------------------------------

def default_g_grid(g_lo: float = 50.0, g_hi: float = 1e5) -> list[float]:
    """Logarithmic grid, 10 points per decade."""
    n = int(round(10 * math.log10(g_hi / g_lo))) + 1
    return list(np.logspace(math.log10(g_lo), math.log10(g_hi), n))


def default_l_grid(g: float, N: int) -> list[int]:
    """Linear block-size grid with step max(1, sqrt(g)/25)."""
    step = max(1, int(round(math.sqrt(g) / 25.0)))
    return list(range(2, N - 1, step))


def chain_for_g(g: float, n_cap: int = 1000) -> ChainSpec:
    """Chain whose continuum half-length is 8 (junction-spanning rule),
    capped at n_cap sites."""
    return ChainSpec(N=min(n_cap, max(8, int(round(16.0 * math.sqrt(g))))),
                     g=g, boundary="free")


def solve_sector(chain: ChainSpec, sector: dict,
                 seed_solution_path: str | None = None) -> ClassicalSolution:
    """Construct the classical background named by the sector tag."""
    if seed_solution_path:
        spec, sol = load_solution_file(seed_solution_path)
        if spec != chain:
            raise ConfigError("persisted solution chain does not match config")
        return sol
    kind = sector.get("kind", "vacuum")
    if kind == "vacuum":
        return vacuum_solution(chain)
    if kind == "single_soliton":
        return finite_single_soliton(chain, k=sector.get("k"))
    if kind == "held_single":
        return held_single_soliton(chain, H=float(sector.get("H", 0.5)),
                                   gtol=float(sector.get("gtol", 1e-7)))
    if kind == "double_soliton":
        k = sector.get("k")
        if k is None:
            raise ConfigError("double_soliton sector needs a modulus k")
        return double_soliton(chain, float(k))
    if kind == "double_separation":
        d = sector.get("d_sol")
        if d is None:
            raise ConfigError("double_separation sector needs d_sol")
        return double_soliton_for_separation(chain, float(d))
    if kind == "kink":
        lam = math.sqrt(chain.g)
        x = np.arange(chain.N, dtype=float) - (chain.N - 1) / 2.0
        seed = 4.0 * np.arctan(np.exp(np.clip(x / lam, -40, 40)))
        return sample_and_relax(chain, seed)
    if kind == "kink_pair":
        lam = math.sqrt(chain.g)
        d = float(sector.get("d_sol", chain.N / 6.0))
        x = np.arange(chain.N, dtype=float) - (chain.N - 1) / 2.0
        z1 = np.clip((x - d / 2) / lam, -40, 40)
        z2 = np.clip((x + d / 2) / lam, -40, 40)
        seed = 4.0 * np.arctan(np.exp(z1)) + 4.0 * np.arctan(np.exp(z2))
        return sample_and_relax(chain, seed, symmetrize=True)
    raise ConfigError(f"unknown sector kind {kind!r}")


def _quantized(chain: ChainSpec, sector: dict,
               seed_solution_path: str | None = None
               ) -> tuple[ClassicalSolution, ModeBasis, GaussianState]:
    sol = solve_sector(chain, sector, seed_solution_path)
    basis = fluctuation_modes(chain, sol)
    return sol, basis, ground_state(basis)


def centered_block(center: float, l: int) -> np.ndarray:
    start = int(round(center - l / 2.0))
    return np.arange(start, start + l)


def _block_in_range(block: np.ndarray, N: int) -> bool:
    return block[0] >= 0 and block[-1] < N


def block_anchor(sol: ClassicalSolution, chain: ChainSpec) -> float:
    """Soliton center when there is one, chain center otherwise."""
    cs = sol.centers
    if len(cs) == 1:
        return float(cs[0])
    return (chain.N - 1) / 2.0


def entropy_vs_block_size(chain: ChainSpec, state: GaussianState,
                          anchor: float, l_grid, threads: int = 1):
    """Rows (l, E_S(l)) for blocks of size l centered at anchor."""
    ls = [l for l in l_grid
          if _block_in_range(centered_block(anchor, l), chain.N)]

    def job(l):
        return float(block_entropy(state, centered_block(anchor, l)))

    return list(zip(ls, _map(job, ls, threads)))


def _map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def argmax_entropy_block(chain: ChainSpec, state: GaussianState,
                         anchor: float, l_grid=None, threads: int = 1) -> int:
    grid = l_grid if l_grid is not None else default_l_grid(chain.g, chain.N)
    rows = entropy_vs_block_size(chain, state, anchor, grid, threads)
    ls, es = zip(*rows)
    return int(ls[int(np.argmax(es))])


_BLOCK_SIZE_CACHE: dict[tuple, int] = {}


def cached_block_size(chain: ChainSpec, sector: dict, threads: int = 1) -> int:
    """Entropy-maximizing block size, computed once per (chain, sector)."""
    key = (chain.N, chain.g, chain.boundary, json.dumps(sector, sort_keys=True))
    if key not in _BLOCK_SIZE_CACHE:
        sol, _, state = _quantized(chain, sector)
        _BLOCK_SIZE_CACHE[key] = argmax_entropy_block(
            chain, state, block_anchor(sol, chain), threads=threads)
    return _BLOCK_SIZE_CACHE[key]


def _finish(config: ExperimentConfig, rows, fits, t0) -> EntanglementReport:
    return EntanglementReport(
        scenario=config.scenario,
        rows=rows,
        fits=fits,
        config_hash=config.config_hash(),
        elapsed_seconds=time.monotonic() - t0,
    )


# --- scenarios ---------------------------------------------------------------

def run_entropy_profile(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Block entropy as a function of block size, blocks centered on the
    soliton core (soliton sectors) or the chain center (vacuum)."""
    t0 = time.monotonic()
    chain = config.chain
    sol, _, state = _quantized(chain, config.sector, config.seed_solution_path)
    grid = config.sweep.get("grid") or default_l_grid(chain.g, chain.N)
    grid = [int(l) for l in grid]
    anchor = block_anchor(sol, chain)
    pairs = entropy_vs_block_size(chain, state, anchor, grid, threads)
    rows = [(float(l), "entropy", e) for l, e in pairs]
    ls, es = zip(*pairs)
    i = int(np.argmax(es))
    fits = {"argmax_l": float(ls[i]), "max_entropy": float(es[i]),
            "interior_maximum": bool(0 < i < len(ls) - 1
                                     and es[i] > es[-1] + 1e-9)}
    return _finish(config, rows, fits, t0)


def run_alpha_fit(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Entropy-growth prefactor from the two smallest block sizes:
    alpha = [E_S(4) - E_S(2)] / ln 2."""
    t0 = time.monotonic()
    chain = config.chain
    sol, _, state = _quantized(chain, config.sector, config.seed_solution_path)
    anchor = block_anchor(sol, chain)
    e2 = float(block_entropy(state, centered_block(anchor, 2)))
    e4 = float(block_entropy(state, centered_block(anchor, 4)))
    alpha = (e4 - e2) / math.log(2.0)
    rows = [(2.0, "entropy", e2), (4.0, "entropy", e4)]
    return _finish(config, rows, {"alpha": alpha}, t0)


def run_max_entropy_sweep(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Sweep g; per point report max_l E_S, argmax l, and the lowest mode
    frequency for the junction-spanning field-held soliton."""
    t0 = time.monotonic()
    grid = config.sweep.get("grid") or default_g_grid()
    H = float(config.sector.get("H", 0.5))
    n_cap = int(config.params.get("n_cap", 1000))

    def job(g):
        chain = chain_for_g(float(g), n_cap)
        sol, basis, state = _quantized(chain, {"kind": "held_single", "H": H})
        anchor = block_anchor(sol, chain)
        pairs = entropy_vs_block_size(chain, state, anchor,
                                      default_l_grid(chain.g, chain.N))
        ls, es = zip(*pairs)
        i = int(np.argmax(es))
        return float(es[i]), float(ls[i]), float(basis.omega[0])

    results = _map(job, list(grid), threads)
    rows = []
    for g, (emax, largm, om1) in zip(grid, results):
        rows += [(float(g), "max_entropy", emax),
                 (float(g), "argmax_l", largm),
                 (float(g), "omega1", om1)]
    es = np.array([r[0] for r in results])
    oms = np.array([r[2] for r in results])
    i_e, i_o = int(np.argmax(es)), int(np.argmin(oms))
    d_om = np.diff(oms)
    sign_changes = int(np.sum(np.diff(np.sign(d_om[d_om != 0])) != 0))
    fits = {"g_at_max_entropy": float(grid[i_e]),
            "g_at_min_omega1": float(grid[i_o]),
            "co_located": bool(abs(i_e - i_o) <= 1),
            "omega1_sign_changes": sign_changes}
    return _finish(config, rows, fits, t0)


def run_sliding_blocks(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Slide a fixed block pair (size l, gap d) along a double-soliton chain;
    n is the mean of the block centers relative to the chain center."""
    t0 = time.monotonic()
    chain = config.chain
    l = int(config.params.get("l", 56))
    d = float(config.params.get("d", chain.N / 4))
    sol, basis, state = _quantized(chain, config.sector, config.seed_solution_path)
    half_span = (l + d) / 2.0
    mid = (chain.N - 1) / 2.0
    grid = config.sweep.get("grid")
    if grid is None:
        reach = int(mid - half_span + l / 2.0)
        step = max(1, reach // 20)
        grid = list(range(-reach, reach + 1, step))

    def job(n):
        # Blocks sliding past a wall are truncated (down to half size) rather
        # than dropped, so the sweep can probe the boundary layer.
        c1, c2 = mid + n - half_span, mid + n + half_span
        A1 = np.arange(max(0, int(round(c1 - l / 2.0))),
                       min(chain.N, int(round(c1 - l / 2.0)) + l))
        A2 = np.arange(max(0, int(round(c2 - l / 2.0))),
                       min(chain.N, int(round(c2 - l / 2.0)) + l))
        if len(A1) < l // 2 or len(A2) < l // 2 or A1[-1] >= A2[0]:
            return None
        return float(log_negativity(state, A1, A2))

    vals = _map(job, list(grid), threads)
    rows = [(float(n), "log_negativity", v)
            for n, v in zip(grid, vals) if v is not None]
    ns = np.array([r[0] for r in rows])
    vs = np.array([r[2] for r in rows])
    fits = {"argmax_n": float(ns[int(np.argmax(vs))])}
    interior = (vs[1:-1] >= vs[:-2]) & (vs[1:-1] >= vs[2:])
    local = [(ns[i + 1], vs[i + 1]) for i in np.flatnonzero(interior)]
    side = [p for p in local if abs(p[0] - fits["argmax_n"]) > l]
    neg = [p for p in side if p[0] < fits["argmax_n"]]
    pos = [p for p in side if p[0] > fits["argmax_n"]]
    if neg:
        fits["secondary_max_left"] = float(max(neg, key=lambda p: p[1])[0])
    if pos:
        fits["secondary_max_right"] = float(max(pos, key=lambda p: p[1])[0])
    return _finish(config, rows, fits, t0)


def _ln_separation_rows(chain: ChainSpec, d_grid, l: int, threads: int):
    def job(d):
        try:
            sol = double_soliton_for_separation(chain, float(d))
        except (NoStableConfiguration, NoRoot, Unstable, NotConverged):
            return None
        basis = fluctuation_modes(chain, sol)
        state = ground_state(basis)
        c1, c2 = sol.centers
        A1, A2 = centered_block(c1, l), centered_block(c2, l)
        if not (_block_in_range(A1, chain.N) and _block_in_range(A2, chain.N)
                and A1[-1] < A2[0]):
            return None
        ln = float(log_negativity(state, A1, A2))
        return (float(c2 - c1), ln, float(basis.omega[0]), float(basis.omega[1]))

    return [r for r in _map(job, list(d_grid), threads) if r is not None]


def _default_d_grid(chain: ChainSpec) -> list[float]:
    lo = chain.N / 3.0 + chain.N / 100.0
    hi = 0.44 * chain.N
    return list(np.linspace(lo, hi, 12))


def run_ln_vs_separation(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Log negativity between the two soliton cores as a function of their
    separation; block size maximizes single-core entropy (cached per chain)."""
    t0 = time.monotonic()
    chain = config.chain
    l = int(config.params.get("l", 0)) or cached_block_size(
        chain, {"kind": "double_separation",
                "d_sol": config.sector.get("d_sol", chain.N / 2.8)}, threads)
    d_grid = config.sweep.get("grid") or _default_d_grid(chain)
    data = _ln_separation_rows(chain, d_grid, l, threads)
    if not data:
        raise NoStableConfiguration("no stable separation in the sweep grid")
    rows = []
    for d, ln, o1, o2 in data:
        x = d / l
        rows += [(x, "log_negativity", ln), (x, "omega1", o1), (x, "omega2", o2)]
    fits = {"l": l, "n_points": len(data)}
    lns = np.array([r[1] for r in data])
    fits["has_strict_increase"] = bool(np.any(np.diff(lns) > 0))
    window = config.params.get("fit_window")  # (x_lo, x_hi) in d/l
    if window is not None:
        xs = np.array([r[0] / l for r in data])
        m = (xs >= window[0]) & (xs <= window[1]) & (lns > LN_FLOOR)
        if np.sum(m) >= 4:
            fits["beta"] = float(-np.polyfit(xs[m], np.log(lns[m]), 1)[0])
    return _finish(config, rows, fits, t0)


def run_beta_fit(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Exponential decay coefficient of log negativity with block distance,
    fitted over the largest available d/l half of the sweep."""
    t0 = time.monotonic()
    chain = config.chain
    kind = config.sector.get("kind", "double_separation")
    if kind == "vacuum":
        l = int(config.params.get("l", 0)) or max(8, int(round(math.sqrt(chain.g) / 4)))
        sol, _, state = _quantized(chain, {"kind": "vacuum"})
        data = []
        for d in range(1, 3 * l):
            A1 = np.arange(0, l)
            A2 = np.arange(l + d, 2 * l + d)
            if A2[-1] >= chain.N:
                break
            ln = float(log_negativity(state, A1, A2))
            if ln > LN_FLOOR:
                data.append((d / l, ln))
    else:
        l = int(config.params.get("l", 0)) or cached_block_size(
            chain, {"kind": "double_separation", "d_sol": chain.N / 2.8}, threads)
        d_grid = config.sweep.get("grid") or _default_d_grid(chain)
        data = [(d / l, ln) for d, ln, _, _ in
                _ln_separation_rows(chain, d_grid, l, threads) if ln > LN_FLOOR]
    if len(data) < 4:
        raise FitWindowTooSmall(f"{len(data)} usable points, need >= 4")
    xs = np.array([p[0] for p in data])
    ys = np.log([p[1] for p in data])
    half = xs >= np.median(xs)
    if np.sum(half) < 4:
        half = np.argsort(xs) >= len(xs) - 4
    coeffs = np.polyfit(xs[half], ys[half], 1)
    resid = float(np.sqrt(np.mean((np.polyval(coeffs, xs[half]) - ys[half]) ** 2)))
    rows = [(float(x), "log_negativity", float(math.exp(y)))
            for x, y in zip(xs, ys)]
    fits = {"beta": float(-coeffs[0]), "l": l, "rms_residual": resid,
            "exponential_breakdown": bool(resid > 0.5)}
    return _finish(config, rows, fits, t0)


def run_wkb_check(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Relative frequency gap of the two lowest double-soliton modes versus
    separation, against the tunneling estimate exp(-d/sqrt(g))."""
    t0 = time.monotonic()
    chain = config.chain
    l = int(config.params.get("l", 0)) or cached_block_size(
        chain, {"kind": "double_separation", "d_sol": chain.N / 2.8}, threads)
    d_grid = config.sweep.get("grid") or _default_d_grid(chain)
    data = _ln_separation_rows(chain, d_grid, l, threads)
    if len(data) < 4:
        raise FitWindowTooSmall(f"{len(data)} usable points, need >= 4")
    lam = math.sqrt(chain.g)
    rows, xs, ys = [], [], []
    toy_excess = []
    for d, ln, o1, o2 in data:
        gap = (o2 - o1) / o1
        rows += [(d, "gap_ratio", gap),
                 (d, "predicted", math.exp(-d / lam)),
                 (d, "log_negativity", ln)]
        xs.append(d / lam)
        ys.append(math.log(gap))
        lam_toy, e_toy = toy_two_oscillator(o1, o2)
        toy_excess.append(e_toy - ln)
    slope = float(np.polyfit(xs, ys, 1)[0])
    fits = {"slope": slope, "l": l,
            "toy_model_exceeds_pipeline": bool(min(toy_excess) > 0)}
    return _finish(config, rows, fits, t0)


def run_correlation_compare(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Field-correlation profiles from the chain center, vacuum versus
    soliton background, at one coupling."""
    t0 = time.monotonic()
    chain = config.chain
    _, _, st_vac = _quantized(chain, {"kind": "vacuum"})
    sector = config.sector if config.sector.get("kind", "vacuum") != "vacuum" \
        else {"kind": "single_soliton"}
    sol, _, st_sol = _quantized(chain, sector, config.seed_solution_path)
    ref = int(round(block_anchor(sol, chain)))
    xi_v, _ = correlation_profile(st_vac, ref)
    xi_s, _ = correlation_profile(st_sol, ref)
    ns = np.arange(len(xi_v), dtype=float)
    rows = []
    for n, v, s in zip(ns, xi_v, xi_s):
        rows += [(float(n), "xi_vacuum", float(v)),
                 (float(n), "xi_soliton", float(s))]
    core = (ns > 0) & (ns < math.sqrt(chain.g))
    far = ns >= 3 * math.sqrt(chain.g)
    fits = {}
    if np.any(core):
        fits["core_soliton_excess"] = bool(
            np.all(np.abs(xi_s[core]) >= np.abs(xi_v[core]) - 1e-12))
    if np.sum(far) >= 4:
        m = far & (np.abs(xi_v) > 1e-14) & (np.abs(xi_s) > 1e-14)
        if np.sum(m) >= 4:
            lv = np.polyfit(np.log(ns[m]), np.log(np.abs(xi_v[m])), 1)[0]
            ls_ = np.polyfit(np.log(ns[m]), np.log(np.abs(xi_s[m])), 1)[0]
            fits["far_log_slope_vacuum"] = float(lv)
            fits["far_log_slope_soliton"] = float(ls_)
    return _finish(config, rows, fits, t0)


def run_weak_coupling_profile(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Kink-sector entropy profile at weak coupling plus internal-mode count
    and the kink-kink negativity probe."""
    t0 = time.monotonic()
    chain = config.chain
    sector = config.sector if config.sector.get("kind", "vacuum") != "vacuum" \
        else {"kind": "kink"}
    sol, basis, state = _quantized(chain, sector, config.seed_solution_path)
    grid = config.sweep.get("grid") or default_l_grid(chain.g, chain.N)
    grid = [int(l) for l in grid]
    anchor = block_anchor(sol, chain)
    pairs = entropy_vs_block_size(chain, state, anchor, grid, threads)
    rows = [(float(l), "entropy", e) for l, e in pairs]
    ls, es = zip(*pairs)
    i = int(np.argmax(es))
    fits = {"interior_maximum": bool(0 < i < len(ls) - 1
                                     and es[i] > es[-1] + 1e-9),
            "n_internal": int(n_internal(basis))}
    pair_d = config.params.get("pair_separation")
    if pair_d is not None:
        psol = solve_sector(chain, {"kind": "kink_pair", "d_sol": float(pair_d)})
        pbasis = fluctuation_modes(chain, psol)
        pstate = ground_state(pbasis)
        c1, c2 = psol.centers
        l = int(ls[i])
        A1, A2 = centered_block(c1, l), centered_block(c2, l)
        fits["pair_log_negativity"] = float(log_negativity(pstate, A1, A2))
    return _finish(config, rows, fits, t0)


def run_noncritical_oscillation(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Log negativity versus separation deep in the noncritical regime;
    checks co-location of the negativity maximum with the softest mode and
    the rank correlation of the mode-frequency ratio with the negativity."""
    t0 = time.monotonic()
    chain = config.chain
    l = int(config.params.get("l", 0)) or cached_block_size(
        chain, {"kind": "double_separation", "d_sol": chain.N / 2.8}, threads)
    d_grid = config.sweep.get("grid") or list(np.linspace(
        chain.N / 3.0 + chain.N / 100.0, chain.N / 2.0 - chain.N / 70.0, 16))
    data = _ln_separation_rows(chain, d_grid, l, threads)
    if len(data) < 4:
        raise FitWindowTooSmall(f"{len(data)} usable points, need >= 4")
    rows = []
    for d, ln, o1, o2 in data:
        rows += [(d, "log_negativity", ln), (d, "omega1", o1), (d, "omega2", o2)]
    lns = np.array([r[1] for r in data])
    o1s = np.array([r[2] for r in data])
    ratio = np.array([r[3] / r[2] for r in data])
    i_ln, i_om = int(np.argmax(lns)), int(np.argmin(o1s))
    ok = lns > LN_FLOOR
    rho = float(stats.spearmanr(np.log(lns[ok]), ratio[ok]).statistic) \
        if np.sum(ok) >= 4 else float("nan")
    fits = {"l": l,
            "argmax_index": i_ln, "argmin_omega1_index": i_om,
            "co_located": bool(abs(i_ln - i_om) <= 1),
            "has_strict_increase": bool(np.any(np.diff(lns) > 0)),
            "ratio_ln_rank_correlation": abs(rho)}
    return _finish(config, rows, fits, t0)


def run_squeeze_single(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Distillable-entanglement lower bound between a block around the
    soliton and an external mode squeezed against the internal mode."""
    t0 = time.monotonic()
    chain = config.chain
    r = float(config.params.get("r", 0.99))
    sector = config.sector if config.sector.get("kind", "vacuum") != "vacuum" \
        else {"kind": "held_single", "H": 0.5}
    sol, basis, _ = _quantized(chain, sector, config.seed_solution_path)
    system = sq.two_mode_squeeze(sq.append_external_mode(basis), r, mode=0)
    state = system.site_state()
    q = [chain.N]
    anchor = block_anchor(sol, chain)
    e_ins = sq.inserted_entropy(r)
    grid = config.sweep.get("grid") or list(range(50, chain.N - 50, 25))

    def job(l):
        A = centered_block(anchor, int(l))
        if not _block_in_range(A, chain.N):
            return None
        B = np.setdiff1d(np.arange(chain.N), A)
        return float(sq.hashing_lower_bound(state, A, B, q))

    vals = _map(job, list(grid), threads)
    rows = [(float(l), "hashing_bound", v)
            for l, v in zip(grid, vals) if v is not None]
    fits = {"inserted_entropy": e_ins, "r": r}
    return _finish(config, rows, fits, t0)


def run_squeeze_double(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    """Distillable-entanglement lower bound between the two soliton cores
    after squeezing the (+,-) collective pair of internal modes."""
    t0 = time.monotonic()
    chain = config.chain
    r = float(config.params.get("r", 2.0))
    sector = config.sector if config.sector.get("kind", "vacuum") != "vacuum" \
        else {"kind": "double_separation", "d_sol": chain.N / 2.0}
    sol, basis, _ = _quantized(chain, sector, config.seed_solution_path)
    system = sq.pm_squeeze(sq.append_external_mode(basis), r, modes=(0, 1))
    state = system.site_state()
    c1, c2 = sol.centers
    sep = c2 - c1
    e_ins = sq.inserted_entropy(r)
    grid = config.sweep.get("grid") or [l for l in range(50, int(sep), 20)]

    def job(l):
        A1, A2 = centered_block(c1, int(l)), centered_block(c2, int(l))
        if not (_block_in_range(A1, chain.N) and _block_in_range(A2, chain.N)
                and A1[-1] < A2[0]):
            return None
        return float(sq.double_soliton_squeeze_bound(state, A1, A2))

    vals = _map(job, list(grid), threads)
    rows = [(float(l), "squeeze_bound", v)
            for l, v in zip(grid, vals) if v is not None]
    fits = {"inserted_entropy": e_ins, "r": r, "separation": float(sep)}
    if rows:
        fits["max_bound"] = max(r[2] for r in rows)
        fits["reaches_inserted"] = bool(fits["max_bound"] >= e_ins)
    return _finish(config, rows, fits, t0)


_RUNNERS = {
    "entropy_profile": run_entropy_profile,
    "sliding_blocks": run_sliding_blocks,
    "ln_vs_separation": run_ln_vs_separation,
    "alpha_fit": run_alpha_fit,
    "beta_fit": run_beta_fit,
    "max_entropy_sweep": run_max_entropy_sweep,
    "correlation_compare": run_correlation_compare,
    "weak_coupling_profile": run_weak_coupling_profile,
    "squeeze_single": run_squeeze_single,
    "squeeze_double": run_squeeze_double,
    "wkb_check": run_wkb_check,
    "noncritical_oscillation": run_noncritical_oscillation,
}


def run_experiment(config: ExperimentConfig, threads: int = 1) -> EntanglementReport:
    return _RUNNERS[config.scenario](config, threads=threads)


def config_from_dict(doc: dict) -> ExperimentConfig:
    try:
        chain = ChainSpec(N=int(doc["chain"]["N"]), g=float(doc["chain"]["g"]),
                          boundary=doc["chain"].get("boundary", "free"))
        return ExperimentConfig(
            scenario=doc["scenario"],
            chain=chain,
            sector=dict(doc.get("sector", {})),
            sweep=dict(doc.get("sweep", {})),
            seed_solution_path=doc.get("seed_solution_path"),
            params=dict(doc.get("params", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad experiment config: {exc}") from exc
