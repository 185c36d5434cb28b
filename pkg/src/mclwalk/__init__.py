"""Bipartite random-walk centrality for dense-feature few-shot classification."""
from .affinity import (
    DEFAULT_SCALES,
    TransitionPair,
    assemble_dense,
    build_transitions,
    column_softmax,
    cosine_affinity,
    episode_transitions,
)
from .centrality import (
    CentralityPair,
    Method,
    RawCentrality,
    SolverConfig,
    eigen_approx,
    katz_block_inverse,
    katz_closed_form,
    single_mode_normalize,
    solve_centrality,
    stationary_linear,
    stationary_power,
)
from .classifier import ClassDistribution, class_mass, classify_katz, classify_mcl, predict
from .errors import (
    ConvergenceError,
    DegenerateInputError,
    DimensionError,
    FormatError,
    IllConditionedWarning,
    MCLError,
    NumericalError,
    ParameterError,
    ValidationError,
)
from .features import Episode, FeatureMatrix, average_prototype, build_episode, flatten_support
from .pooling import (
    PooledFeatures,
    centrality_pool_episode,
    global_average_pool,
    pool_query,
    pool_support,
)
from .walker import (
    WalkStats,
    estimate_class_distribution,
    estimate_katz_accessibility,
    simulate,
    walk_trace,
)

__version__ = "0.1.0"
