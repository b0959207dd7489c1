from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

from app.services.interval import PI, Interval


@dataclass(frozen=True)
class Constant:
    name: str
    text: str
    value: Interval
    citation: str


CONSTANTS: Dict[str, Constant] = {}


def _c(name: str, text: str, citation: str) -> Interval:
    value = Interval.from_str(text)
    CONSTANTS[name] = Constant(name=name, text=text, value=value, citation=citation)
    return value


TWO_PI = PI * 2
FOUR_PI_SQ = TWO_PI.pow_int(2)
SQRT2 = Interval(2.0).sqrt()
SQRT3 = Interval(3.0).sqrt()
LOG3 = Interval(3.0).log()
E_FIFTH = Interval.from_str("0.2").exp()

# tube packing
HAZE_COEFF = _c("haze_coeff", "3.3957", "def:h-function")
G_COEFF = _c("g_coeff", "6.7914", "lem:magid-constants")
AREA_COEFF = _c("area_coeff", "1.69785", "thm:max-tube-area")
INJ_COEFF = _c("injectivity_coeff", "1.361", "thm:max-tube-injectivity")
INJ_LIMIT = _c("injectivity_limit", "0.96237", "eq:injectivity-limit")
LIN_SLOPE = _c("linear_slope", "1.1227", "eq:max-tube-injectivity-linear")
LIN_OFFSET = _c("linear_offset", "0.1604", "eq:max-tube-injectivity-linear")
LIN_CHECK_Z = _c("linear_check_z", "0.99995", "thm:max-tube-injectivity")
LIN_CHECK_VALUE = _c("linear_check_value", "0.9623", "thm:max-tube-injectivity")

# F and the length controls
F_NUM = _c("f_numerator", "10.667", "def:f-function")
F_SLOPE = _c("f_slope", "20.977", "def:f-function")
F_ELL_MAX = _c("f_ell_max", "0.5085", "def:f-function")

# cone deformations
CONE_COMPONENT = _c("cone_component", "0.0996", "thm:cone-def-exists")
CONE_TOTAL = _c("cone_total", "0.15601", "thm:cone-def-exists")
MEYERHOFF_K = _c("meyerhoff_k", "0.34932", "lem:meyerhoff")
MAGID_Z_MIN = _c("magid_z_min", "0.6622", "lem:magid-length-general")

# short geodesics
SHORT_ELL = _c("short_ell", "0.0735", "thm:short-stays-short")
SHORT_M_INTERCEPT = _c("short_m_intercept", "0.0996", "thm:short-stays-short")
SHORT_M_SLOPE = _c("short_m_slope", "0.352", "thm:short-stays-short")
AREA_SLACK = _c("area_slack", "0.00001", "lem:area-bound-capped")
UP_L2 = _c("upward_l2", "128", "thm:short-stays-short-upward")
UP_M = _c("upward_m", "0.056", "thm:short-stays-short-upward")
UP_SHIFT = _c("upward_shift", "14.7", "thm:short-stays-short-upward")
UP_M_COEFF = _c("upward_m_coeff", "1.656", "thm:short-stays-short-upward")
HOLD_ELL = _c("hold_ell", "0.735", "thm:hold-short-geodesics")
HOLD_TOTAL = _c("hold_total", "0.14", "thm:hold-short-geodesics")

# systole threshold and cosmetic surgery
SYS_SHIFT = _c("sysmin_shift", "16.03", "def:systole-l")
SYS_UPPER_SHIFT = _c("sysmin_upper_shift", "58", "lem:s-function-props")
COSMETIC_FLOOR = _c("cosmetic_floor", "10.1", "thm:cosmetic-one-cusp")
UNIQUE_Z = _c("unique_shortest_z", "0.8568", "thm:unique-shortest")
AGOL_CAP = 104

# bilipschitz
BILIP_EXP = _c("bilip_exponent", "7.193", "thm:bilip")
BILIP_B = _c("bilip_b", "17.11", "thm:bilip")
BILIP_DELTA_MAX = _c("bilip_delta_max", "0.938", "thm:bilip")
BILIP_L_NUM = _c("bilip_l_numerator", "107.6", "lem:l-bound-implies-ell-bound")
BILIP_L_SHIFT = _c("bilip_l_shift", "14.41", "lem:l-bound-implies-ell-bound")
BILIP_FILL_NUM = _c("bilip_fill_numerator", "45.20", "cor:effective-bb-special-up")
BIS_TINY = _c("bilip_bis_tiny", "3.324", "thm:bilip-bis")
BIS_MEDIUM = _c("bilip_bis_medium", "3.498", "thm:bilip-bis")
BIS_TINY_DELTA = _c("bilip_bis_tiny_delta", "0.012", "thm:bilip-bis")
BIS_MEDIUM_DELTA = _c("bilip_bis_medium_delta", "0.106", "thm:bilip-bis")

# boundary term and pointwise norm
PUISEUX_C_STANDARD = _c("puiseux_c_standard", "1.046", "lem:puiseux")
PUISEUX_C_TIGHT = _c("puiseux_c_tight", "1.001", "lem:puiseux")
PUISEUX_R_STANDARD = _c("puiseux_r_standard", "0.469", "lem:puiseux")
PUISEUX_R_TIGHT = _c("puiseux_r_tight", "0.053", "lem:puiseux")
BOUNDARY_C_938 = _c("boundary_c_938", "7.935", "thm:boundary-delta")
BOUNDARY_C_106 = _c("boundary_c_106", "15.616", "prop:boundary-medium-delta")
BOUNDARY_C_012 = _c("boundary_c_012", "16.432", "prop:boundary-tiny-delta")
BOUNDARY_SIMPLE_CAP = _c("boundary_simple_cap", "12.355", "prop:boundary-bound")
BOUNDARY_SIMPLE_ELL = _c("boundary_simple_ell", "0.075", "prop:boundary-bound")
POINTWISE_STANDARD = _c("pointwise_standard", "0.1822", "prop:pointwise-bound")
POINTWISE_TIGHT = _c("pointwise_tight", "0.08419", "eq:pointwise-bound-bis")

# thick parts and Margulis numbers
THIN_COEFF = _c("thin_coeff", "7.256", "thm:effective-dist-log3")
SHIFT_LOG3 = _c("shift_log3", "0.1475", "thm:effective-dist-log3")
SHIFT_SMALL = _c("shift_small", "0.0424", "thm:effective-dist-tubes")
SMALL_EPS_MAX = _c("small_eps_max", "0.3", "thm:effective-dist-tubes")
G_THICK_LOG3 = _c("g_thick_log3", "496.1", "eq:thick-stays-thick-log3")
G_THICK_SMALL = _c("g_thick_small", "471.5", "eq:thick-stays-thick")
G_THICK_MAX = _c("g_thick_max", "0.00005610", "lem:gj-behavior")
MARGULIS_CAP = _c("margulis_cap", "0.962", "thm:margulis-filling")
MARGULIS_SHIFT = _c("margulis_shift", "11.7", "thm:margulis-filling")
TOPOLOGY_SLOPE = _c("topology_slope", "0.261", "lem:delta-tube-embeds")
TOPOLOGY_DELTA_MAX = _c("topology_delta_max", "0.9623", "lem:delta-tube-embeds")
DELTA_CUT_LO = _c("delta_cut_lo", "0.556369", "lem:delta-tube-embeds")
DELTA_CUT_HI = _c("delta_cut_hi", "0.556370", "lem:delta-tube-embeds")
ENDPOINT_COEFF = _c("endpoint_coeff", "6771", "thm:bilip-endpoints")
ENDPOINT_EXP = _c("endpoint_exponent", "11.35", "thm:bilip-endpoints")
ENDPOINT_SLOPE = _c("endpoint_cosh_slope", "0.6", "thm:bilip-endpoints")
ENDPOINT_RATIO = _c("endpoint_ratio", "1.2", "thm:bilip-endpoints")
ENDPOINT_J_CAP = _c("endpoint_j_cap", "1.0005", "thm:bilip-endpoints")
CONE_MARGULIS_SMALL = _c("cone_margulis_small", "0.2408", "thm:margulis-cone-mfld")
CONE_MARGULIS_MEDIUM = _c("cone_margulis_medium", "0.29", "thm:margulis-cone-mfld")
CONE_MARGULIS_LARGE = _c("cone_margulis_large", "0.9536", "thm:margulis-cone-med-const")
SYS_FOR_SMALL = _c("sys_for_small", "0.000000293", "thm:margulis-cone-mfld")
SYS_FOR_MEDIUM = _c("sys_for_medium", "0.0000000273", "thm:margulis-cone-mfld")
TOTAL_FOR_LARGE = _c("total_for_large", "0.0000556", "thm:margulis-cone-med-const")
VOL_FOR_SMALL = _c("vol_for_small", "36.12", "thm:margulis-drilling")
VOL_FOR_MEDIUM = _c("vol_for_medium", "52.78", "thm:margulis-drilling")
