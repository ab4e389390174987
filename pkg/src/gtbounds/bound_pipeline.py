"""Upper bounds on the real Grothendieck constant from a concept function.

Steps, for a concept b with correlation series h (normalized so h(0) = 0):

1. Hermite coefficients alpha_n of b give h(rho) = sum alpha_n rho^n.
2. h must be a homeomorphism of [-1, 1]; checked numerically as h' > 0.
3. Invert: g = h^{-1} = sum beta_n y^n.
4. Majorant f(y) = sum |beta_n| y^n.
5. Solve f(r) = 1; then K_G <= 1/r.

Everything is done on an order-N truncation.  Dropping non-negative terms
of f can only raise the root, so 1/r_N <= 1/r_infinity: the reported number
is the bound of the truncated problem, and the sequence r_N is returned so
convergence can be judged.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .concepts import AlphaSequence, ConceptSpec, alpha_coeffs, h_series
from .errors import NonInvertibleSeriesError, NoRootError
from .power_series import (DegenerateRootWarning, TruncatedSeries, abs_series, evaluate,
                           invert_series, solve_unit_level)

REPORT_SCHEMA_VERSION = "1"

TAIL_NOTE = (
    "Bound computed from the order-N truncation of the absolute majorant. "
    "Truncation lowers the majorant, so 1/r_N never exceeds the limiting bound; "
    "it is certified only in the limit N -> infinity or with an external tail majorant. "
    "Summability of |beta_n| is estimated from partial sums, not proved."
)


def krivine_reference() -> float:
    """pi / (2 ln(1 + sqrt 2))."""
    return math.pi / (2 * math.log1p(math.sqrt(2)))


def krivine_radius() -> float:
    """2 ln(1 + sqrt 2) / pi, the root of sinh(pi r / 2) = 1."""
    return 2 * math.asinh(1.0) / math.pi


def krivine_functions():
    """Closed forms (h, f, g, r) for the sign concept: arcsin map, sinh majorant, sin inverse."""
    def h(x):
        if abs(x) > 1 + 1e-12:
            raise ValueError(f"arcsin map needs |x| <= 1, got {x}")
        return 2 / math.pi * math.asin(min(1.0, max(-1.0, x)))

    def f(x):
        return math.sinh(math.pi / 2 * x)

    def g(x):
        return math.sin(math.pi / 2 * x)

    return h, f, g, krivine_radius()


class WorkflowConditionError(ValueError):
    def __init__(self, message, check=None):
        super().__init__(message)
        self.check = check


@dataclass
class WorkflowCheck:
    flags: dict
    diagnostics: dict

    @property
    def inversion_ready(self) -> bool:
        f = self.flags
        return f["H_zero_at_0"] and f["H_monotone_numeric"] and f["RA_beta_real"] and f["alpha1_nonzero"]


def _default_order(concept: ConceptSpec) -> int:
    return 41 if concept.kind == "sign" else 60


def _growth_rate(series: TruncatedSeries) -> float:
    """Largest |c_n|^(1/n) over the upper half of the effective coefficients."""
    cs = series.effective_coeffs()
    N = len(cs) - 1
    rates = [abs(c) ** (1.0 / n) for n, c in enumerate(cs) if n >= max(2, N // 2) and c != 0]
    return max(rates) if rates else 0.0


def check_workflow_conditions(concept: ConceptSpec, N: int | None = None, grid: int = 100,
                              _h: TruncatedSeries | None = None) -> WorkflowCheck:
    """Evaluate the workflow assumptions on the order-N data.  Never raises for failed conditions."""
    N = N or _default_order(concept)
    if N < 3:
        raise ValueError("N must be >= 3")
    h = _h or h_series(concept, N)
    eff = h.effective_coeffs()
    xs = np.linspace(-1, 1, grid + 2)[1:-1]
    dh = h.derivative()
    slopes = [evaluate(dh, float(x)) for x in xs]
    flags = {
        "H_zero_at_0": eff[0] == 0,
        "H_monotone_numeric": min(slopes) > 0,
        "RA_beta_real": True,
        "alpha1_nonzero": eff[1] != 0,
    }
    diag = {"min_slope_on_grid": min(slopes), "alpha1": eff[1], "order": N}
    if flags["alpha1_nonzero"] and flags["H_zero_at_0"]:
        beta = invert_series(h)
        absb = [abs(c) for c in beta.effective_coeffs()]
        diag["l1_partial_sums"] = list(np.cumsum(absb))
        diag["beta_growth_rate"] = _growth_rate(beta)
        flags["RA_l1_plausible"] = diag["beta_growth_rate"] < 1.0
    else:
        diag["inversion"] = "skipped: linear coefficient vanishes" if not flags["alpha1_nonzero"] \
            else "skipped: nonzero constant term"
        flags["RA_l1_plausible"] = False
    return WorkflowCheck(flags, diag)


@dataclass
class BoundReport:
    concept: ConceptSpec
    order: int
    alpha: AlphaSequence
    inverted_object: str
    beta: TruncatedSeries
    l1_partial: float
    roots: list  # [(n, r_n or None)]
    r_star: float | None
    bound: float | None
    condition_flags: dict
    status: str  # "ok" | "l1_divergence_suspected" | "no_bound"
    tail_note: str = TAIL_NOTE
    diagnostics: dict = field(default_factory=dict)

    @property
    def majorant(self) -> TruncatedSeries:
        return abs_series(self.beta)

    def root_trace(self) -> list[tuple[int, float, float]]:
        return [(n, r, 1 / r) for n, r in self.roots if r is not None]

    def to_dict(self) -> dict:
        beta_eff = self.beta.effective_coeffs()
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "status": self.status,
            "concept": self.concept.to_dict(),
            "order": self.order,
            "inverted_object": self.inverted_object,
            "alpha": self.alpha.to_dict(),
            "beta": beta_eff,
            "beta_series": self.beta.to_dict(),
            "l1_partial": self.l1_partial,
            "roots": [[n, r] for n, r in self.roots],
            "r_star": self.r_star,
            "bound": self.bound,
            "krivine_reference": krivine_reference(),
            "condition_flags": dict(self.condition_flags),
            "diagnostics": self.diagnostics,
            "tail_note": self.tail_note,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def roots_csv(self) -> str:
        lines = ["N,r_N,bound_N"]
        lines += [f"{n},{r!r},{b!r}" for n, r, b in self.root_trace()]
        return "\n".join(lines) + "\n"


def compute_upper_bound(concept: ConceptSpec, N: int | None = None, tol: float = 1e-10,
                        first_order: int = 1) -> BoundReport:
    """Run the full workflow at truncation order N.

    Raises :class:`WorkflowConditionError` when (H) or the inversion
    precondition fails, :class:`DegenerateConceptError` for almost-constant
    concepts.  A failure of f(1) >= 1 is reported with status "no_bound".
    """
    N = N or _default_order(concept)
    if N < 5:
        raise ValueError("N must be >= 5")
    alphas = alpha_coeffs(concept, N)
    h = h_series(concept, N, alphas)
    check = check_workflow_conditions(concept, N, _h=h)
    if not check.inversion_ready:
        failed = [k for k in ("H_zero_at_0", "H_monotone_numeric", "RA_beta_real", "alpha1_nonzero")
                  if not check.flags[k]]
        raise WorkflowConditionError(f"workflow conditions fail: {', '.join(failed)}", check)
    beta = invert_series(h)
    f = abs_series(beta)
    l1 = math.fsum(abs(c) for c in beta.effective_coeffs())

    roots = []
    for n in range(first_order, N + 1):
        fn = f.truncate(n)
        if evaluate(fn, 1.0) < 1:
            roots.append((n, None))
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateRootWarning)
            roots.append((n, solve_unit_level(fn, tol)))

    flags = dict(check.flags)
    r_star = roots[-1][1]
    flags["PI1_satisfied"] = r_star is not None and r_star < 1
    diagnostics = dict(check.diagnostics)
    diagnostics.pop("l1_partial_sums", None)
    got = [r for _, r in roots if r is not None]
    diagnostics["roots_non_increasing"] = all(a >= b for a, b in zip(got, got[1:]))
    if not flags["PI1_satisfied"]:
        diagnostics["f_at_1"] = evaluate(f, 1.0)
        return BoundReport(concept, N, alphas, _inverted_label(alphas), beta, l1, roots,
                           None, None, flags, "no_bound", diagnostics=diagnostics)
    diagnostics["residual"] = evaluate(f, r_star) - 1
    status = "ok" if flags["RA_l1_plausible"] else "l1_divergence_suspected"
    return BoundReport(concept, N, alphas, _inverted_label(alphas), beta, l1, roots,
                       r_star, 1 / r_star, flags, status, diagnostics=diagnostics)


def _inverted_label(alphas: AlphaSequence) -> str:
    return "h" if alphas.alpha0 == 0 else "pearson_normalized_h"


__all__ = [
    "BoundReport", "WorkflowCheck", "WorkflowConditionError", "check_workflow_conditions",
    "compute_upper_bound", "krivine_functions", "krivine_radius", "krivine_reference",
    "NoRootError", "NonInvertibleSeriesError",
]
