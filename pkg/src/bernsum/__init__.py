"""Geometry of multivariate Bernoulli distributions with a prescribed sum law."""

from .indexing import (
    BinaryIndexer,
    index_to_vector,
    level_element,
    level_indices,
    level_rank,
    level_weight,
    vector_to_index,
)
from .pmf import (
    JointPmf,
    SparseJointPmf,
    SumPmf,
    cross_moment,
    entropy,
    sum_map,
)
from .polytope import (
    ExtremalIndex,
    LabelMap,
    PolytopeDescriptor,
    convex_min_pmf,
    decompose,
    describe,
    entropy_bounds,
    exchangeable_pmf,
    extremal_by_index,
    extremal_enumerate,
    extremal_indices,
    flat_weights,
    generalized_extremals,
    membership,
    moment_bounds,
)
from .feasibility import (
    BasisLimitError,
    ConstraintSystem,
    InfeasibleError,
    MeanVector,
    NecessaryConditions,
    constrained_moment_bounds,
    constrained_vertices,
    constraint_system,
    feasible_point,
    necessary_conditions,
)
from .measure import (
    LogMeasure,
    density_l,
    dirichlet_pdf,
    dist_sup,
    dist_tv,
    maximal_pmf,
    normalizing_constant,
    polytope_measure,
    simplex_hausdorff,
)
from .sampling import (
    EstimateReport,
    NeighborhoodSpec,
    RngStream,
    estimate_neighborhood_measure,
    estimate_tv_neighborhood_bound,
    hit_and_run,
    region_volume,
    sample_dirichlet,
    sample_Fd_uniform,
    sample_polytope_uniform,
    sample_uniform_simplex,
)
from .binomial import (
    BinomialCurvePoint,
    bin_vs_mode,
    binomial_pmf,
    curve_argmax,
    curve_log_measure,
    curve_point,
    poisson_binomial_pmf,
)

__version__ = "0.1.0"
