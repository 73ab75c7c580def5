"""Certification and Bloch-ball dynamics for quadratic operators on the qubit algebra."""

from .pauli import (
    HERMITICITY_ATOL,
    ID2,
    ID4,
    POSITIVITY_EIG_TOL,
    SIGMA,
    NonHermitianInput,
    PauliCoeffs,
    cross_product,
    jacobi_eigh,
    jacobi_eigvalsh_batch,
    min_eigenvalue_hermitian,
    pauli_compose,
    pauli_decompose,
    positivity_2x2,
    state_eval,
    tensor_product,
)
from .core import (
    DEFAULT_SAMPLES,
    PositivityReport,
    PreservationReport,
    as_coeff_tensor,
    b_norm_sup,
    beta_matrix,
    choi_matrix_from_tensor,
    delta_apply,
    delta_sigma_images,
    dual_pair_apply,
    haar_unital_check,
    sampled_positivity_check,
    state_preservation_check,
    tensor_is_symmetric,
)
from .epsilon import (
    CP_THRESHOLD,
    POSITIVITY_THRESHOLD,
    PRESERVATION_THRESHOLD,
    CpReport,
    NonRealInput,
    SpectrumB,
    b_matrix,
    build_coeff_tensor,
    choi_matrix,
    classify_epsilon,
    cp_check,
    delta_eps_apply,
    positivity_check,
    spectrum_closed_form,
)
from .ks import (
    KS_DEFAULT_SAMPLES,
    KS_DEFAULT_TOL,
    KSAuxiliaries,
    KSNecessaryReport,
    KSWitness,
    ks_auxiliaries,
    ks_defect,
    ks_global_check,
    ks_necessary_check,
)
from .dynamics import (
    BallInvarianceReport,
    DomainError,
    FixedPointReport,
    Trajectory,
    ball_invariance_check,
    fixed_points,
    iterate,
    v_apply,
    v_eps_apply,
)
from .files import load_tensor_file, save_tensor_file, write_trajectory_csv
from .sampling import fibonacci_sphere

__version__ = "0.1.0"
