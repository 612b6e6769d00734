"""General SIC-POVMs: construction, index of coincidence and entropic bounds."""
from ._kernels import BACKEND
from .bounds import (
    BoundReport,
    check_bound_suite,
    check_pair_suite,
    ic_bloch,
    ic_exact,
    max_prob_bound,
    max_prob_lemma,
    min_entropy_bound,
    pair_bounds,
    pair_fbar,
    pair_g,
    renyi_bound,
    renyi_collision_bound,
    tsallis_bound,
    tsallis_inefficiency_bound,
)
from .entropy import (
    alpha_log,
    binary_tsallis,
    distort,
    index_of_coincidence,
    renyi,
    shannon,
    symmetrized_renyi,
    symmetrized_tsallis,
    tsallis,
)
from .linalg import (
    INF,
    BlochVector,
    DensityMatrix,
    GeneratorBasis,
    HermitianOperator,
    bloch_from_density,
    density_from_bloch,
    gell_mann_basis,
    hs_inner,
    purity,
    random_density,
    random_pure_state,
    schatten_norm,
)
from .sic import (
    DualBasis,
    GeneralSicPovm,
    Povm,
    ProbabilityDistribution,
    depolarize_sic,
    dual_basis,
    probabilities,
    rank_one_sic,
    reconstruct,
    validate_general_sic,
    wh_orbit,
)

__version__ = "0.1.0"
