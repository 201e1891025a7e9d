"""Soliton entanglement toolkit for the Frenkel-Kontorova chain.

Classical soliton backgrounds, linear fluctuation modes, Gaussian ground-state
entanglement measures, and two-mode-squeezing entanglement bounds.
"""

from .classical import (
    ChainSpec,
    ClassicalSolution,
    FiniteSGParams,
    bifurcation_points,
    continuum_soliton,
    double_soliton,
    double_soliton_for_separation,
    finite_sg_profile,
    finite_single_soliton,
    held_single_soliton,
    held_soliton_seed,
    k_from_H,
    H_from_k,
    load_solution,
    load_solution_file,
    dump_solution,
    sample_and_relax,
    sample_finite_sg,
    save_solution,
    soliton_centers,
    stability_window_H,
    substrate_potential,
    total_energy,
    vacuum_solution,
)
from .elliptic import complete_K, jacobi_am, jacobi_sn_cn_dn
from .errors import (
    ConfigError,
    DivergentIntegral,
    DomainError,
    FKChainError,
    InvalidPartition,
    NoCenters,
    NoRoot,
    NoStableConfiguration,
    NotConverged,
    NotGroundForm,
    NotPositiveDefinite,
    OverlappingBlocks,
    TooFewInternalModes,
    Unstable,
    ZeroMode,
)
from .gaussian import (
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
from .modes import (
    ModeBasis,
    ModeClassification,
    classify_modes,
    diagonalize,
    fluctuation_modes,
    g_max_scan,
    n_internal,
    stability_matrix,
    vacuum_spectrum,
)
from .squeeze import (
    ExtendedSystem,
    append_external_mode,
    collective_pm_modes,
    double_soliton_squeeze_bound,
    hashing_lower_bound,
    inserted_entropy,
    pm_squeeze,
    two_mode_squeeze,
)

__version__ = "1.0.0"
