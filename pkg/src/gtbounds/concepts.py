"""Concept functions b: R -> {-1, 1} and their Hermite data.

For a concept b and rho-correlated standard normals X, Y,

    E[b(X) b(Y)] = sum_{n>=0} alpha_n rho^n,   alpha_n = <b, H_n>^2

with H_n the orthonormal probabilists' Hermite polynomials.  alpha_0 is the
squared mean of b(X).  When alpha_0 > 0 the pipeline works with the Pearson
correlation of b(X), b(Y) instead, i.e. with (h - alpha_0) / (1 - alpha_0),
which vanishes at 0 and equals 1 at 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import ConvergenceError, DegenerateConceptError
from .power_series import TruncatedSeries, evaluate
from .special_fn import double_factorial, hermite_orthonormal_all, norm_cdf, norm_cdf_inv, norm_pdf

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class ConceptSpec:
    """A ±1-valued step function of one real variable.

    kind "sign": b = sign, with sign(0) = 1.
    kind "threshold": b_p = 2·1[x >= Phi^{-1}(p)] - 1.
    kind "tabulated": value ``values[i]`` on [breakpoints[i-1], breakpoints[i]),
    with the outer pieces unbounded.
    """

    kind: str = "sign"
    p: float | None = None
    breakpoints: tuple[float, ...] = ()
    values: tuple[int, ...] = ()
    coefficient_source: str = "closed_form"  # or "quadrature"

    def __post_init__(self):
        if self.kind not in ("sign", "threshold", "tabulated"):
            raise ValueError(f"unknown concept kind {self.kind!r}")
        if self.coefficient_source not in ("closed_form", "quadrature"):
            raise ValueError(f"unknown coefficient source {self.coefficient_source!r}")
        if self.kind == "threshold":
            if self.p is None or not 0 < self.p < 1:
                raise ValueError("threshold concept needs 0 < p < 1")
        if self.kind == "tabulated":
            bps = tuple(float(t) for t in self.breakpoints)
            if list(bps) != sorted(bps) or len(set(bps)) != len(bps):
                raise ValueError("breakpoints must be strictly increasing")
            if len(self.values) != len(bps) + 1:
                raise ValueError("need one value per piece (len(breakpoints) + 1)")
            if any(v not in (-1, 1) for v in self.values):
                raise ValueError("concept values must be +1 or -1")
            object.__setattr__(self, "breakpoints", bps)
            object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    @classmethod
    def parse(cls, text: str) -> "ConceptSpec":
        """'sign', 'threshold:0.3' (CLI spelling)."""
        if text == "sign":
            return cls("sign")
        if text.startswith("threshold:"):
            return cls("threshold", p=float(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse concept {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "threshold":
            return f"threshold:{self.p}"
        if self.kind == "tabulated":
            return f"tabulated:{list(self.breakpoints)}:{list(self.values)}"
        return "sign"

    def steps(self) -> tuple[tuple[float, ...], tuple[int, ...]]:
        """(breakpoints, values) describing b as a step function."""
        if self.kind == "sign":
            return (0.0,), (-1, 1)
        if self.kind == "threshold":
            return (norm_cdf_inv(self.p),), (-1, 1)
        return self.breakpoints, self.values

    def __call__(self, x):
        bps, vals = self.steps()
        idx = np.searchsorted(np.asarray(bps), x, side="right")
        return np.asarray(vals)[idx]

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "coefficient_source": self.coefficient_source}
        if self.p is not None:
            d["p"] = self.p
        if self.kind == "tabulated":
            d["breakpoints"] = list(self.breakpoints)
            d["values"] = list(self.values)
        return d


@dataclass(frozen=True)
class AlphaSequence:
    """alpha_1..alpha_N (index 0 of ``alpha`` is alpha_1) plus alpha_0.

    ``ratios`` holds alpha_n / alpha_1 as exact Fractions when they are
    rational (sign concept); ``None`` otherwise.
    """

    alpha: tuple[float, ...]
    alpha0: float
    concept: ConceptSpec
    ratios: tuple[Fraction, ...] | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.alpha)

    def total(self) -> float:
        return self.alpha0 + math.fsum(self.alpha)

    def to_dict(self) -> dict:
        d = {
            "concept": self.concept.to_dict(),
            "order": self.order,
            "alpha0": self.alpha0,
            "alpha": list(self.alpha),
            "parseval_partial_sum": self.total(),
            "provenance": dict(self.provenance),
        }
        if self.ratios is not None:
            d["ratios_to_alpha1"] = [f"{r.numerator}/{r.denominator}" for r in self.ratios]
        return d


def sign_ratios(N: int) -> tuple[Fraction, ...]:
    """alpha_n / alpha_1 for sign: 0 for even n, ((n-2)!!)^2 / n! for odd n."""
    out = []
    for n in range(1, N + 1):
        if n % 2 == 0:
            out.append(Fraction(0))
        else:
            out.append(Fraction(double_factorial(n - 2) ** 2, math.factorial(n)))
    return tuple(out)


def _jump_coefficients(bps, vals, N):
    """<b, H_n> for n = 0..N of a step function, in closed form.

    Uses d/dx [H_{n-1}(x) phi(x)] = -sqrt(n) H_n(x) phi(x), so each jump of
    size J at t contributes J H_{n-1}(t) phi(t) / sqrt(n).
    """
    coef = np.zeros(N + 1)
    edges = [-math.inf, *bps, math.inf]
    coef[0] = math.fsum(v * (norm_cdf(edges[i + 1]) - norm_cdf(edges[i])) for i, v in enumerate(vals))
    if N == 0:
        return coef
    H = hermite_orthonormal_all(N - 1, np.asarray(bps, dtype=float))  # (N, m)
    jumps = np.array([vals[i + 1] - vals[i] for i in range(len(bps))], dtype=float)
    dens = np.array([norm_pdf(t) for t in bps])
    weights = jumps * dens
    n = np.arange(1, N + 1)
    for j in range(N):  # fixed summation order per coefficient
        coef[j + 1] = math.fsum(H[j] * weights) / math.sqrt(n[j])
    return coef


def _quadrature_coefficients(bps, vals, N, tol=1e-10, start_nodes=512, max_nodes=16384):
    """<b, H_n> by Gauss-Legendre quadrature of H_n phi on each piece.

    The outer pieces are cut at |x| = 2 sqrt(N) + 12, beyond which H_n^2 phi is
    negligible for n <= N.  Nodes double until all coefficients move less
    than ``tol``.
    """
    L = 2 * math.sqrt(N + 1) + 12
    edges = [-L, *[min(max(t, -L), L) for t in bps], L]
    prev = None
    nodes = start_nodes
    while nodes <= max_nodes:
        x, w = np.polynomial.legendre.leggauss(nodes)
        coef = np.zeros(N + 1)
        for i, v in enumerate(vals):
            a, b = edges[i], edges[i + 1]
            if b <= a:
                continue
            xs = 0.5 * (b - a) * x + 0.5 * (a + b)
            ws = 0.5 * (b - a) * w * np.exp(-0.5 * xs * xs) / math.sqrt(2 * math.pi)
            H = hermite_orthonormal_all(N, xs)
            coef += v * (H @ ws)
        if prev is not None:
            resid = float(np.max(np.abs(coef - prev)))
            if resid < tol:
                return coef
        prev = coef
        nodes *= 2
    raise ConvergenceError(f"Hermite quadrature did not stabilise (residual {resid:.3g})", partial=prev)


def alpha_coeffs(concept: ConceptSpec, N: int) -> AlphaSequence:
    """Squared Hermite-Fourier coefficients alpha_0..alpha_N of ``concept``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    # b_{1/2} is sign: Phi^{-1}(1/2) = 0 exactly, so take the exact rational route
    is_sign = concept.kind == "sign" or (concept.kind == "threshold" and concept.p == 0.5)
    if is_sign and concept.coefficient_source == "closed_form":
        ratios = sign_ratios(N)
        a1 = 2 / math.pi
        return AlphaSequence(tuple(a1 * float(r) for r in ratios), 0.0, concept, ratios,
                             {"method": "closed form (2/pi)((n-2)!!)^2/n!"})
    bps, vals = concept.steps()
    if concept.coefficient_source == "quadrature":
        coef = _quadrature_coefficients(bps, vals, N)
        method = "Gauss-Legendre quadrature per piece"
    elif concept.kind == "threshold":
        return _threshold_alphas(concept, N)
    else:
        coef = _jump_coefficients(bps, vals, N)
        method = "closed form via Hermite antiderivatives at breakpoints"
    sq = coef**2
    return AlphaSequence(tuple(float(v) for v in sq[1:]), float(sq[0]), concept, None, {"method": method})


def _threshold_alphas(concept: ConceptSpec, N: int) -> AlphaSequence:
    # alpha_n = 4p(1-p)/c(p) * H_{n-1}(t)^2 / n, alpha_0 = (2p-1)^2
    p = concept.p
    t = norm_cdf_inv(p)
    H = hermite_orthonormal_all(N - 1, t)
    scale = 4 * p * (1 - p) / c_of_p(p)
    alpha = tuple(float(scale * H[n - 1] ** 2 / n) for n in range(1, N + 1))
    return AlphaSequence(alpha, (2 * p - 1) ** 2, concept, None,
                         {"method": "tetrachoric closed form", "threshold": t})


def h_series(concept: ConceptSpec, N: int, alphas: AlphaSequence | None = None) -> TruncatedSeries:
    """The correlation series of ``concept``, normalized to vanish at 0.

    For alpha_0 = 0 this is sum alpha_n rho^n itself; otherwise it is
    (h - alpha_0) / (1 - alpha_0).
    """
    alphas = alphas or alpha_coeffs(concept, N)
    if alphas.ratios is not None and alphas.alpha0 == 0:
        parity = "odd" if all(r == 0 for r in alphas.ratios[1::2]) else None
        return TruncatedSeries((Fraction(0),) + alphas.ratios, kind="rational",
                               parity_hint=parity, out_scale=alphas.alpha[0])
    denom = 1.0 - alphas.alpha0
    if denom <= DEGENERACY_TOL:
        raise DegenerateConceptError(f"1 - alpha_0 = {denom:.3g}: concept output is almost constant")
    coeffs = (0.0,) + tuple(a / denom for a in alphas.alpha)
    return TruncatedSeries(coeffs, kind="float")


def c_of_p(p: float) -> float:
    """c(p) = p(1-p) / phi(Phi^{-1}(p))^2 = 2 pi p (1-p) exp(Phi^{-1}(p)^2)."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    t = norm_cdf_inv(p)
    return 2 * math.pi * p * (1 - p) * math.exp(t * t)


def c_partial_sum(p: float, N: int) -> float:
    """sum_{n=0}^{N} H_n(Phi^{-1}(p))^2 / (n + 1), which tends to c(p)."""
    t = norm_cdf_inv(p)
    prev, cur = 0.0, 1.0
    terms = []
    for n in range(N + 1):
        terms.append(cur * cur / (n + 1))
        prev, cur = cur, (t * cur - math.sqrt(n) * prev) / math.sqrt(n + 1)
    return math.fsum(terms)


def _psi_tail(t: float, rho: float, N: int) -> float:
    """Estimated sum_{n>N} H_{n-1}(t)^2 rho^n / n, for 0 < rho <= 1.

    Averaged over oscillations H_m(t)^2 ~ exp(t^2/2) / sqrt(2 pi m).
    """
    amp = math.exp(t * t / 2) / math.sqrt(2 * math.pi)
    if rho == 1:
        # sum_{n>N} n^{-3/2}(1 + 1/(2n)) by the midpoint rule, error O(N^{-5/2})
        return amp * (2 / math.sqrt(N + 0.5) + (N + 0.5) ** -1.5 / 3)
    total, n, pw = [], N + 1, rho ** (N + 1)
    while pw > 1e-20 and n < N + 10_000_000:
        total.append(pw / (n * math.sqrt(n - 1)))
        n += 1
        pw *= rho
    return amp * math.fsum(total)


def psi_eval(p: float, rho: float, N: int, tail: str = "asymptotic") -> float:
    """psi(p, p; rho) = (1/c(p)) sum_{n=1}^{N} H_{n-1}(t)^2 rho^n / n (+ tail estimate)."""
    if abs(rho) > 1:
        raise ValueError("|rho| must be <= 1")
    t = norm_cdf_inv(p)
    prev, cur = 0.0, 1.0
    terms = []
    pw = 1.0
    for n in range(1, N + 1):
        pw *= rho
        terms.append(cur * cur * pw / n)
        prev, cur = cur, (t * cur - math.sqrt(n - 1) * prev) / math.sqrt(n)
    s = math.fsum(terms)
    if tail == "asymptotic" and rho > 0:
        s += _psi_tail(t, rho, N)
    elif tail not in ("asymptotic", "none"):
        raise ValueError(f"unknown tail mode {tail!r}")
    return s / c_of_p(p)


def h_p_eval(p: float, rho: float, N: int, tail: str = "asymptotic") -> float:
    """E[b_p(X) b_p(Y)] = (2p-1)^2 + 4p(1-p) psi(p, p; rho)."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    return (2 * p - 1) ** 2 + 4 * p * (1 - p) * psi_eval(p, rho, N, tail)


def h_eval(concept: ConceptSpec, rho: float, N: int = 201) -> float:
    """Un-normalized E[b(X) b(Y)] from the truncated Hermite expansion."""
    a = alpha_coeffs(concept, N)
    s = TruncatedSeries((a.alpha0,) + a.alpha, kind="float")
    return evaluate(s, rho)
