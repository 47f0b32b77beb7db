"""Quantum discord of Bell-diagonal states under local phase damping, and
the conditions under which it freezes."""
from .channels import (
    Markovian,
    RandomTelegraph,
    apply_local_dephasing,
    apply_local_dephasing_extended,
    coherence_factor,
    dephase_qubit,
    dephase_subsystem,
    evolve_spectrum,
    parse_schedule,
    q_of_t,
)
from .discord import (
    Branch,
    c_max_branch,
    classical_correlation_analytic,
    convexity_gap,
    convexity_terms,
    correlation_curves,
    discord_analytic,
    discord_bruteforce,
    discord_curve,
    discord_rate,
    mixing_reformulation_check,
    mutual_information,
    optimize_measurement,
)
from .errors import (
    ConvergenceError,
    DimensionError,
    DiscordFreezeError,
    InvalidProbabilityError,
    NotApplicableError,
    NotFrozenError,
    NotHermitianError,
    SpecParseError,
    UnphysicalStateError,
    UnsupportedRegimeError,
)
from .freezing import (
    Condition,
    Direction,
    FreezeReport,
    analyze,
    boundary_curves,
    check_condition,
    frozen_value,
    nonmarkovian_transitions,
    refreeze_threshold,
    sample_surface,
    sudden_change_rate,
    transition_q,
)
from .kernels import BACKEND
from .qmath import (
    binary_entropy,
    hermitian_eigenvalues,
    kron,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from .states import (
    BellDiagonal,
    ExtendedBellDiagonal,
    Spectrum,
    c_from_lambdas,
    extended_eigensystem,
    lambdas_from_c,
    parse_state,
    standard_equivalent,
    to_density_matrix,
)

__version__ = "0.1.0"
