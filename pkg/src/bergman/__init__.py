"""Bergman orthonormal polynomials for weights |v|^2 prod |(z - a)/(1 - conj(a) z)|^m on the unit disk."""

from .asymptotics import (
    ConvergenceReport,
    TauEstimate,
    alpha_decay_report,
    alpha_structure_report,
    branch_ratio_report,
    bs_zero_report,
    exp_weight_identity_residual,
    faber_report,
    gamma_report,
    kernel_consistency_report,
    oracle_basis,
    rational_v_residue,
    rational_v_residue_report,
    rk0_point_report,
    strong_asymptotics_report,
    tau_estimate,
)
from .estimator import BergmanPolynomials
from .faber import LaurentCoeffs, faber_poly, faber_weighted_norm, laurent_coeffs
from .kernel import (
    KernelConvergenceError,
    KernelL,
    UnsupportedWeightError,
    kernel_Kw,
    kernel_L,
    kh_origin,
    kh_series,
    make_kernel,
)
from .orthosystem import (
    OrthoBasis,
    QuadratureResolutionError,
    analytic_orthonormalize,
    bergman_orthonormalize,
    gram_residual,
    monic_norm_extremality,
    szego_monic,
)
from .polynomial import PolynomialC, horner
from .quadrature import CircleRule, DiskRule, build_disk_rule, integrate_circle, integrate_disk, suggest_orders
from .representation import (
    AlphaCrossCheckError,
    AlphaTable,
    HSeries,
    RecursionCorruptionError,
    Qn_eval,
    alpha_table,
    eval_Hn,
    hg_recursion,
    theorem1_eval,
)
from .weightspec import (
    BlaschkeSingularity,
    CriticalRadii,
    DomainError,
    ExpPolynomial,
    PolyZerosOutside,
    PowerProduct,
    SingularPointError,
    WeightSpec,
    critical_radii,
    eval_outer,
    eval_q_qstar,
    eval_vstar,
    eval_weight,
    load_weight,
    parse_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaCrossCheckError",
    "AlphaTable",
    "BergmanPolynomials",
    "BlaschkeSingularity",
    "CircleRule",
    "ConvergenceReport",
    "CriticalRadii",
    "DiskRule",
    "DomainError",
    "ExpPolynomial",
    "HSeries",
    "KernelConvergenceError",
    "KernelL",
    "LaurentCoeffs",
    "OrthoBasis",
    "PolyZerosOutside",
    "PolynomialC",
    "PowerProduct",
    "Qn_eval",
    "QuadratureResolutionError",
    "RecursionCorruptionError",
    "SingularPointError",
    "TauEstimate",
    "UnsupportedWeightError",
    "WeightSpec",
    "alpha_decay_report",
    "alpha_structure_report",
    "alpha_table",
    "analytic_orthonormalize",
    "bergman_orthonormalize",
    "branch_ratio_report",
    "bs_zero_report",
    "build_disk_rule",
    "critical_radii",
    "eval_Hn",
    "eval_outer",
    "eval_q_qstar",
    "eval_vstar",
    "eval_weight",
    "exp_weight_identity_residual",
    "faber_poly",
    "faber_report",
    "faber_weighted_norm",
    "gamma_report",
    "gram_residual",
    "hg_recursion",
    "horner",
    "integrate_circle",
    "integrate_disk",
    "kernel_Kw",
    "kernel_L",
    "kernel_consistency_report",
    "kh_origin",
    "kh_series",
    "laurent_coeffs",
    "load_weight",
    "make_kernel",
    "monic_norm_extremality",
    "oracle_basis",
    "parse_weight",
    "rational_v_residue",
    "rational_v_residue_report",
    "rk0_point_report",
    "strong_asymptotics_report",
    "suggest_orders",
    "szego_monic",
    "tau_estimate",
    "theorem1_eval",
]
