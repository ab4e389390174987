"""Truncated power series: inversion, absolute majorant, evaluation, f(r) = 1.

A :class:`TruncatedSeries` represents

    s(x) = out_scale * sum_{n=0}^{N} c_n (in_scale * x)^n

The two scale factors let transcendental constants (such as 2/pi for the sign
concept) stay outside the coefficient list, so coefficients can be exact
rationals while evaluation happens in floating point.  Inverting
``out * C(in * x)`` gives ``(1/in) * C^{-1}(x / out)``, so scales swap and the
coefficient list is inverted on its own.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb

from .bell_poly import SymbolicPolynomial, bell_by_powers, bell_ordinary, bell_symbolic
from .errors import NonInvertibleSeriesError, NoRootError

EXACT_ORDER_CAP = 40
NUMERIC_ORDER_CAP = 200


class DegenerateRootWarning(UserWarning):
    pass


def _as_fraction(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    return Fraction(v)


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple
    kind: str = "float"  # "rational" | "float"
    parity_hint: str | None = None  # "odd" | "even" | None
    in_scale: float = 1.0
    out_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rational", "float"):
            raise ValueError(f"unknown scalar kind {self.kind!r}")
        if not self.coeffs:
            raise ValueError("series needs at least the constant coefficient")
        if self.kind == "rational":
            cs = tuple(_as_fraction(c) for c in self.coeffs)
        else:
            cs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if self.parity_hint not in (None, "odd", "even"):
            raise ValueError(f"bad parity hint {self.parity_hint!r}")
        if self.parity_hint is not None:
            skip = 0 if self.parity_hint == "odd" else 1
            if any(c != 0 for c in cs[skip::2]):
                raise ValueError(f"coefficients contradict parity hint {self.parity_hint!r}")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def truncate(self, order: int) -> "TruncatedSeries":
        return replace(self, coeffs=self.coeffs[: order + 1])

    def effective_coeffs(self) -> list[float]:
        """Float coefficients of s(x) with both scales folded in."""
        return [
            float(c) * self.out_scale * self.in_scale**n if c != 0 else 0.0
            for n, c in enumerate(self.coeffs)
        ]

    def derivative(self) -> "TruncatedSeries":
        cs = [n * c for n, c in enumerate(self.coeffs)][1:] or [0]
        parity = {"odd": "even", "even": "odd"}.get(self.parity_hint)
        return replace(self, coeffs=tuple(cs), parity_hint=parity,
                       out_scale=self.out_scale * self.in_scale)

    def __call__(self, x):
        return evaluate(self, x)

    # serialization --------------------------------------------------------
    def to_dict(self) -> dict:
        if self.kind == "rational":
            coeffs = [f"{c.numerator}/{c.denominator}" for c in self.coeffs]
        else:
            coeffs = list(self.coeffs)
        out = {"order": self.order, "kind": self.kind, "coeffs": coeffs}
        if self.parity_hint:
            out["parity_hint"] = self.parity_hint
        if self.in_scale != 1.0:
            out["in_scale"] = self.in_scale
        if self.out_scale != 1.0:
            out["out_scale"] = self.out_scale
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "TruncatedSeries":
        coeffs = list(d["coeffs"])
        order = int(d.get("order", len(coeffs) - 1))
        if order + 1 > len(coeffs):
            coeffs += [0] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs[: order + 1]), kind=d.get("kind", "float"),
                   parity_hint=d.get("parity_hint"),
                   in_scale=float(d.get("in_scale", 1.0)),
                   out_scale=float(d.get("out_scale", 1.0)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TruncatedSeries":
        return cls.from_dict(json.loads(text))


def _inverse_parity(s: TruncatedSeries) -> str | None:
    # inverse of an odd series is odd; nothing useful for the others
    return "odd" if s.parity_hint == "odd" else None


def invert_series(alpha: TruncatedSeries, order: int | None = None, method: str = "powers") -> TruncatedSeries:
    """Compositional inverse via the Bell-polynomial formula.

    With s(x) = sum_{n>=1} a_n x^n and a_1 != 0, the inverse has b_1 = 1/a_1 and

        b_n = (1/n) sum_{k=1}^{n-1} (-1)^k C(n-1+k, k) a_1^{-(n+k)} B°_{n-1,k}(a_2, ..., a_{n-k+1})

    ``method="powers"`` obtains every B°_{n-1,k} at once as coefficients of
    powers of a_2 t + a_3 t^2 + ...; ``method="enumerate"`` sums over the
    partitions P(n-1, k) directly.  Rational input gives exact output.
    """
    N = alpha.order if order is None else order
    if N < 1:
        raise ValueError("order must be >= 1")
    if N > alpha.order:
        raise ValueError(f"requested order {N} exceeds the series order {alpha.order}")
    cap = EXACT_ORDER_CAP if (alpha.kind == "rational" and method == "enumerate") else NUMERIC_ORDER_CAP
    if N > cap:
        raise ValueError(f"order {N} exceeds the cap {cap} for this mode")
    a = alpha.coeffs
    if a[0] != 0:
        raise NonInvertibleSeriesError("series has a nonzero constant term")
    a1 = a[1]
    if a1 == 0:
        raise NonInvertibleSeriesError("linear coefficient vanishes; series is not locally invertible")

    exact = alpha.kind == "rational"
    one = Fraction(1) if exact else 1.0
    shifted = list(a[2 : N + 1]) + [a1 * 0]  # x_i = a_{i+1}
    if method == "powers":
        table = bell_by_powers(shifted, N - 1) if N >= 2 else None

        def bell(n, k):
            return table[k][n]
    elif method == "enumerate":
        def bell(n, k):
            return bell_ordinary(n, k, shifted[: n + 1 - k], max_n=max(N, 64))
    else:
        raise ValueError(f"unknown method {method!r}")

    inv_a1 = one / a1
    beta = [a1 * 0, inv_a1]
    for n in range(2, N + 1):
        terms = []
        for k in range(1, n):
            B = bell(n - 1, k)
            if B == 0:
                continue
            terms.append((-1) ** k * comb(n - 1 + k, k) * inv_a1 ** (n + k) * B)
        if exact:
            total = sum(terms, Fraction(0))
        else:
            total = math.fsum(terms)
        beta.append(total / n)

    return TruncatedSeries(tuple(beta), kind=alpha.kind, parity_hint=_inverse_parity(alpha),
                           in_scale=1.0 / alpha.out_scale, out_scale=1.0 / alpha.in_scale)


def symbolic_inverse(order: int) -> dict[int, SymbolicPolynomial]:
    """Polynomials P_n(a_1, ..., a_order) with b_n * a_1^(2n-1) = P_n, 2 <= n <= order.

    Built from the same Bell formula, multiplied through by a_1^(2n-1), which
    leaves a_1^(n-1-k) in front of each B°_{n-1,k}.
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    if order > EXACT_ORDER_CAP:
        raise ValueError(f"symbolic inversion capped at order {EXACT_ORDER_CAP}")
    out = {}
    for n in range(2, order + 1):
        acc = SymbolicPolynomial(order)
        for k in range(1, n):
            bs = bell_symbolic(n - 1, k)
            lifted = {}
            for nu, c in bs.terms.items():
                exp = [0] * order
                exp[0] = n - 1 - k
                for i, m in enumerate(nu):
                    exp[i + 1] += m  # x_{i+1} -> a_{i+2}
                lifted[tuple(exp)] = c * (-1) ** k * comb(n - 1 + k, k)
            acc = acc + SymbolicPolynomial(order, lifted)
        out[n] = acc * Fraction(1, n)
    return out


def abs_series(s: TruncatedSeries) -> TruncatedSeries:
    """Replace every coefficient by its absolute value (scales must be positive)."""
    if s.in_scale < 0 or s.out_scale < 0:
        raise ValueError("absolute majorant needs non-negative scale factors")
    return replace(s, coeffs=tuple(abs(c) for c in s.coeffs))


def evaluate(s: TruncatedSeries, x):
    """Evaluate the truncation at ``x`` with ``|x| <= 1``.

    Exact for rational series with unit scales and rational ``x``; otherwise
    the terms are summed with ``math.fsum``.
    """
    if abs(x) > 1:
        raise ValueError(f"|x| = {abs(x)} > 1: series only certified on the closed unit disc")
    if s.kind == "rational" and isinstance(x, (int, Fraction)) and s.in_scale == 1.0 and s.out_scale == 1.0:
        acc = Fraction(0)
        for c in reversed(s.coeffs):
            acc = acc * x + c
        return acc
    x = float(x)
    y = x * s.in_scale
    terms = []
    p = 1.0
    for c in s.coeffs:
        if c != 0:
            terms.append(float(c) * p)
        p *= y
    return s.out_scale * math.fsum(terms)


def solve_unit_level(f: TruncatedSeries, tol: float = 1e-12) -> float:
    """Root r in (0, 1] of f(r) = 1 for a non-negative-coefficient series.

    f is non-decreasing on [0, 1], so with f(0) < 1 <= f(1) the root is unique.
    Newton steps are kept inside a shrinking bracket.
    """
    cs = f.effective_coeffs()
    if any(c < 0 for c in cs):
        raise ValueError("solve_unit_level needs non-negative coefficients")
    f0 = evaluate(f, 0.0)
    if f0 >= 1:
        raise ValueError(f"f(0) = {f0} >= 1, no root in (0, 1)")
    f1 = evaluate(f, 1.0)
    if f1 < 1 - tol:
        raise NoRootError(f"f(1) = {f1!r} < 1: condition PI(1) fails", value_at_one=f1)
    if f1 <= 1 + tol:
        warnings.warn("root sits at the boundary r = 1", DegenerateRootWarning, stacklevel=2)
        return 1.0
    df = f.derivative()
    lo, hi = 0.0, 1.0
    r = 0.5
    for _ in range(200):
        val = evaluate(f, r) - 1
        if abs(val) <= min(tol, 1e-15):
            break
        if val > 0:
            hi = r
        else:
            lo = r
        slope = evaluate(df, r)
        step = r - val / slope if slope > 0 else None
        r = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo < 1e-16:
            break
    if abs(evaluate(f, r) - 1) > tol:
        raise NoRootError(f"root solve stalled at r={r}, residual {evaluate(f, r) - 1}")
    return r
