"""Norm bounds for radial Toeplitz operators on the Fock space and Gaussian
time-frequency localization operators."""

from .audit import AuditReport
from .concentration import (
    jensen_chain,
    kernel_concentration,
    lemma1_audit,
    lemma1_lhs,
    lemma2_audit,
    monomial_concentration,
    sparse_disc_audit,
    sparse_disc_construct,
    translated_monomial_concentration,
)
from .geometry import (
    AngularProfile,
    Annuli,
    DiscUnion,
    IntervalUnion,
    angular_profile_of,
    disc,
    measure,
    radii_to_t,
    translate,
)
from .specfun import ConvergenceError, log_factorial, reg_lower_gamma, truncated_exp_sum
from .symbols import (
    EigenvalueSequence,
    StepRadialSymbol,
    eigenvalue_sequence,
    l1_norm,
    radial_eigenvalue,
    sup_norm,
    theorem1_audit,
    theorem1_bound,
    toeplitz_norm,
)
from .timefreq import (
    HermiteBasis,
    LocalizationMatrix,
    bargmann_transform,
    hermite_eval,
    localization_matrix,
    localization_norm_bound,
    m1_finite_combination_check,
    stft_hermite,
)

__version__ = "0.1.0"
