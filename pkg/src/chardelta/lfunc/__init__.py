"""L-functions, functional equations and the dual-sum transforms."""

from .charsum import character_sum_C, character_sum_C_brute
from .cuspidal import (
    AFEValue,
    L_value,
    afe_L_value,
    afe_weight,
    form_twist,
    smoothed_dirichlet_series,
    verify_cuspform_fe,
    verify_twisted_fe,
)
from .direct import S_abs_bound, S_direct
from .dirichlet import FEReport, completed_dirichlet_L, dirichlet_L, hurwitz_zeta, verify_dirichlet_fe
from .dual import DualReport, n_dual_transform, r_dual_transform, verify_r_dual
from .integrals import J_integral, JReport, NuIntegralReport, calibrate_J_constant, nu_integral
from .trivial import T_N_estimate, TEstimate

__all__ = [
    "AFEValue",
    "DualReport",
    "FEReport",
    "JReport",
    "L_value",
    "NuIntegralReport",
    "S_abs_bound",
    "S_direct",
    "TEstimate",
    "T_N_estimate",
    "J_integral",
    "afe_L_value",
    "afe_weight",
    "calibrate_J_constant",
    "character_sum_C",
    "character_sum_C_brute",
    "completed_dirichlet_L",
    "dirichlet_L",
    "form_twist",
    "hurwitz_zeta",
    "n_dual_transform",
    "nu_integral",
    "r_dual_transform",
    "smoothed_dirichlet_series",
    "verify_cuspform_fe",
    "verify_dirichlet_fe",
    "verify_r_dual",
    "verify_twisted_fe",
]
