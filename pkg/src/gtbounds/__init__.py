"""Upper bounds on Grothendieck's constant via completely correlation preserving functions."""
from .bound_pipeline import BoundReport, check_workflow_conditions, compute_upper_bound, krivine_reference
from .concepts import ConceptSpec, alpha_coeffs, h_series
from .power_series import TruncatedSeries, abs_series, evaluate, invert_series, solve_unit_level

__version__ = "0.1.0"

__all__ = [
    "BoundReport", "ConceptSpec", "TruncatedSeries", "abs_series", "alpha_coeffs", "check_workflow_conditions",
    "compute_upper_bound", "evaluate", "h_series", "invert_series", "krivine_reference", "solve_unit_level",
]
