"""kpos: spectral certificates for k-positive maps on matrix algebras.

Submodules
----------
spectral
    Singular values, Ky Fan quantities, frames and projectors.
maps
    Coefficient-frame map decompositions and Choi operators.
certificates
    k-positivity certificates and non-k-positivity witnesses.
oracle
    Variational k-block-positivity checker.
states
    Schmidt decompositions, rho_mu families, Schmidt-number witnesses.
multipartite
    Sep-norm, positivity on separable elements, the F0 example.
serialization
    JSON encodings.
"""

from ._config import (
    InapplicableError,
    NormalizationError,
    OrthogonalityError,
    ProjectorError,
    ShapeError,
    Tolerances,
    ValidationError,
    get_tolerances,
    tolerances,
)
from .certificates import (
    Certificate,
    Verdict,
    Witness,
    certify_k_positive,
    certify_not_k_positive,
    positivity_window,
)
from .maps import (
    ChoiOperator,
    MapDecomposition,
    Term,
    apply_map,
    choi_map,
    choi_of_map,
    compose_with_transpose,
    dual_map,
    make_generalized_choi,
    make_rank_m_family,
    map_of_choi,
    reduction_map,
)
from .multipartite import (
    ProductProjector,
    SepNormResult,
    certify_sep_positive,
    generalized_choi_operator,
    make_F0,
    make_multipartite_example,
    product_block_positivity,
    sep_inner_product,
    sep_norm,
    sep_positive_not_positive_window,
)
from .oracle import OracleResult, exhaustive_check_2x2, is_k_block_positive, min_block_eigenvalue
from .spectral import (
    compressed_projector_norm,
    frame_to_projector,
    frame_to_vector,
    ky_fan_norm,
    ky_fan_overlap,
    projector_overlap_norm,
    singular_values,
)
from .states import (
    StateFamilyRhoMu,
    classify_rho_mu,
    make_rho_mu,
    schmidt_decompose,
    sn_lower_bound,
    witness_expectation,
)

__version__ = "0.1.0"
