"""Skew loops in flat quotients R^n/G: tantrix tests, cone certificates and loop synthesis."""

from .cone import (
    ConeCertificate,
    OracleVerdict,
    Verdict,
    brute_force_membership,
    certificate_is_sound,
    cone_membership,
    fullness_rank,
    hull_cone_commutation_check,
    interior_margin,
)
from .core import (
    DEFAULT_TOL,
    DimensionError,
    FullnessError,
    HomotopyClass,
    ImmersionError,
    InputError,
    Lattice,
    RankError,
    SampledArc,
    SampledLoop,
    SkewLoopError,
    ToleranceConfig,
    ZeroVectorError,
    orthonormal_complement_pair,
    resample_uniform,
)
from .lp import LpProblem, LpSolution, LpStatus, solve_lp
from .synthesis import (
    DensityProfile,
    HelixSpec,
    NotFoundError,
    NotRealizableError,
    find_lattice_class,
    helix_arc,
    helix_loop_for_class,
    integrate_loop,
    realize_skew_loop,
    solve_density,
)
from .tantrix import SkewVerdict, TantrixSamples, avoids_antipodes, compute_tantrix, is_embedded, is_skew
from .torus import EmbeddednessError, HemisphereError, NotALoopError, homotopy_class_of, reduce_mod_lattice, region_contains_direction

__version__ = "0.1.0"
