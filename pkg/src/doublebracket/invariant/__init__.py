"""Weight tables and the state-sum invariants."""

from .core import (
    HLinearityError, InvariantResult, alexander_state_poly, bracket, crossing_factor, default_scheme, half_to_t,
    double_bracket, double_bracket_h, jones_in_t, jones_poly, normalizer, reference_sum, w_poly, wh_poly,
)
from .engine import WeightLawError, crossing_order, double_sum
from .weights import GEOMETRY_LABEL, WeightError, WeightScheme, load_weight_scheme

__all__ = [
    "GEOMETRY_LABEL", "HLinearityError", "InvariantResult", "WeightError", "WeightLawError",
    "WeightScheme", "alexander_state_poly", "bracket", "crossing_factor", "half_to_t", "crossing_order",
    "default_scheme", "double_bracket", "double_bracket_h", "double_sum", "jones_in_t",
    "jones_poly", "load_weight_scheme", "normalizer", "reference_sum", "w_poly", "wh_poly",
]
