"""Bergman kernel density of the punctured unit disc with the Poincare metric."""

from .asymptotics import (
    Bump,
    DecayFit,
    annulus_residual,
    annulus_residual_log,
    bump_profile,
    compact_coefficient_check,
    decay_fit,
    predicted_decay_rate,
    shrinking_annulus_residual,
    shrinking_annulus_residual_log,
)
from .exceptions import (
    AccuracyCap,
    BumpNotSeparated,
    DomainError,
    FitDegenerate,
    InvalidStabilizer,
    PrecisionLoss,
    TruncationFailure,
)
from .gaussian import (
    BoundScanReport,
    RescaledPoint,
    ScanReport,
    b_p,
    cor37_scan,
    delta_p,
    f_p,
    gauss0,
    gauss1,
    gauss_sup_scan,
    gaussian_sum_Gp,
    gaussian_sum_from_log,
    lemma_a_scan,
    nu,
    prop36_scan,
    psi_p,
    scaled_f_p,
    sup_scan,
    varphi,
)
from .kernel import (
    DensityValue,
    Method,
    PuncturedPoint,
    SeriesConfig,
    basis_norm_sq,
    density,
    density_closed_form,
    density_excess,
    density_gaussian,
    density_series,
    kernel_offdiag,
    kernel_weighted_modulus,
    mode_coefficient,
)
from .numerics import LogMagnitude, log_gamma, logsum_accumulate, signed_log_pow
from .orbifold import StabilizerSpec, orbifold_local_density, orbifold_sup_prediction
from .quadrature import (
    QuadConfig,
    QuadScheme,
    basis_norm_quadrature,
    monomial_inner_product,
    reproduce_basis,
)

__version__ = "0.1.0"
