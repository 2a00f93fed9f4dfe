"""Momentum-profile boundary value problem: exact coefficient algebra,
adaptive integration, parameter shooting, and the m = 1 certificate."""

from .certificate import CertificateM1, Claim, certify_m1
from .coeffs import (
    CoeffSet,
    KahlerClassIndex,
    LNConstants,
    ProfilePoly,
    admissible_C_max,
    coeffs_from_C,
    compute_LN,
    hcsck_coeffs,
    lambda_at,
)
from .integrate import (
    DEFAULT_CONFIG,
    IntegratorConfig,
    NonexistenceReport,
    ProfileCurve,
    ScanPoint,
    ScanResult,
    ShootResult,
    Trajectory,
    defect_scan,
    hcsck_nonexistence,
    integrate_v,
    reconstruct_curve,
    residual_check,
    shoot,
)

__all__ = [
    "CertificateM1",
    "Claim",
    "CoeffSet",
    "DEFAULT_CONFIG",
    "IntegratorConfig",
    "KahlerClassIndex",
    "LNConstants",
    "NonexistenceReport",
    "ProfileCurve",
    "ProfilePoly",
    "ScanPoint",
    "ScanResult",
    "ShootResult",
    "Trajectory",
    "admissible_C_max",
    "certify_m1",
    "coeffs_from_C",
    "compute_LN",
    "defect_scan",
    "hcsck_coeffs",
    "hcsck_nonexistence",
    "integrate_v",
    "lambda_at",
    "reconstruct_curve",
    "residual_check",
    "shoot",
]
