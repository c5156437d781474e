"""rieszlab: finite-dimensional checks for biorthogonal vector systems.

Families phi_n = T e_n and their canonical duals psi_n = (T^-1)* e_n,
the frame operators and sesquilinear forms they generate, and the
non-self-adjoint Hamiltonians and ladder operators obtained by
similarity, all realized as dense truncations with residual reports.
"""

from .config import RunConfig, default_checks, parse_config
from .errors import (
    DimensionMismatch,
    InconsistentPrefix,
    IndexTooLarge,
    NotPositive,
    NotSelfAdjoint,
    NumericallySingular,
    OracleMismatch,
    ParseError,
    RieszlabError,
    WrongAlphaKind,
)
from .forms import (
    FormEvaluation,
    TailDiagnostic,
    frame_bounds,
    omega,
    omega_mixed,
    quasi_basis_residual,
    tail_diagnostic,
    tail_weights,
    verify_representation,
)
from .hermite import (
    HermiteModel,
    build_X,
    build_example_system,
    build_model,
    hermite_function,
    quadrature_inner_product,
    verify_K_psi,
)
from .linalg import (
    KetVector,
    LinearMap,
    PolarFactors,
    adjoint,
    basis_vector,
    from_diagonal,
    hermitian_eig,
    identity,
    inner,
    invert,
    operator_sqrt,
    polar_decompose,
)
from .operators import (
    AlphaSequence,
    OperatorSet,
    adjoint_relation_check,
    build_operator_set,
    ccr_check,
    diag_hamiltonian,
    domain_mapping_check,
    eigen_check,
    ladder_check,
    ladder_operators,
    product_identity_check,
    sum_form_hamiltonian,
    transform,
    validate_alpha,
)
from .reporting import CheckReport, make_report
from .suite import emit_report, run_suite
from .systems import (
    BiorthogonalSystem,
    ConstructingPair,
    FrameOperators,
    build_frame_operators,
    build_system,
    check_biorthogonality,
    frame_operator,
    normalize_pair,
    reconstruct_onb,
    system_from_families,
    verify_K_relations,
    verify_clause_i3,
)

__version__ = "0.1.0"
