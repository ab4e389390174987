"""Hypergeometric series, Hermite polynomials, normal quantiles and the
closed-form correlation identities built from them."""
from __future__ import annotations

import math
from fractions import Fraction
from statistics import NormalDist

from .errors import ConvergenceError

MAX_TERMS = 2_000_000
EPS = 1e-16

_STD_NORMAL = NormalDist()


def _is_nonpositive_int(c: float) -> bool:
    return c <= 0 and float(c).is_integer()


def gamma(x: float) -> float:
    return math.gamma(x)


def half_integer_gamma(two_x: int) -> tuple[Fraction, int]:
    """Gamma(two_x / 2) as ``(q, e)`` meaning ``q * sqrt(pi)**e`` with q rational.

    Integer arguments give e = 0, half-integers e = 1.
    """
    if two_x <= 0:
        raise ValueError("argument must be positive")
    if two_x % 2 == 0:
        return Fraction(math.factorial(two_x // 2 - 1)), 0
    q = Fraction(1)
    m = two_x  # Gamma(m/2) = (m/2 - 1) Gamma(m/2 - 1)
    while m > 1:
        m -= 2
        q *= Fraction(m, 2)
    return q, 1


def _pfq(upper, lower, z, max_terms):
    """Plain sum of the pFq series with a ratio-based tail estimate."""
    total = 1.0
    term = 1.0
    comp = 0.0  # Kahan compensation
    n = 0
    while n < max_terms:
        num = 1.0
        for a in upper:
            num *= a + n
        den = float(n + 1)
        for c in lower:
            den *= c + n
        ratio = num / den * z
        term *= ratio
        n += 1
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if term == 0.0:
            return total
        # terms eventually shrink geometrically with ratio -> z; bound the tail
        q = abs(ratio)
        if q < 1:
            tail = abs(term) * q / (1 - q)
            if tail <= EPS * abs(total):
                return total
    raise ConvergenceError(
        f"series did not converge in {max_terms} terms", partial=total, iterations=n
    )


def hyp2f1(a: float, b: float, c: float, z: float, max_terms: int = MAX_TERMS) -> float:
    """Gauss hypergeometric 2F1(a, b; c; z) for real ``|z| <= 1``.

    At z = 1 Gauss' summation theorem is used; it needs c - a - b > 0.
    """
    if _is_nonpositive_int(c):
        raise ValueError(f"c = {c} is a non-positive integer")
    if abs(z) > 1:
        raise ValueError(f"|z| = {abs(z)} > 1 is outside the disc of convergence")
    if z == 0:
        return 1.0
    if z == 1:
        if c - a - b <= 0:
            raise ValueError("2F1 diverges at z = 1 unless c - a - b > 0")
        return math.gamma(c) * math.gamma(c - a - b) / (math.gamma(c - a) * math.gamma(c - b))
    if z == -1 and c - a - b <= -1:
        raise ValueError("2F1 diverges at z = -1 for these parameters")
    return _pfq((a, b), (c,), z, max_terms)


def hyp3f2(a1: float, a2: float, a3: float, b1: float, b2: float, z: float,
           max_terms: int = MAX_TERMS) -> float:
    """3F2(a1, a2, a3; b1, b2; z) for ``|z| < 1``."""
    for b in (b1, b2):
        if _is_nonpositive_int(b):
            raise ValueError(f"lower parameter {b} is a non-positive integer")
    if abs(z) >= 1:
        raise ValueError("hyp3f2 is only evaluated on |z| < 1")
    if z == 0:
        return 1.0
    return _pfq((a1, a2, a3), (b1, b2), z, max_terms)


def hermite_orthonormal(n: int, x: float) -> float:
    """H_n(x) = He_n(x) / sqrt(n!), orthonormal for the standard Gaussian.

    Recurrence: H_{k+1} = (x H_k - sqrt(k) H_{k-1}) / sqrt(k+1).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = 0.0, 1.0
    for k in range(n):
        prev, cur = cur, (x * cur - math.sqrt(k) * prev) / math.sqrt(k + 1)
    return cur


def hermite_orthonormal_all(n_max: int, x):
    """Array of H_0..H_{n_max} at ``x`` (scalar or numpy array), shape (n_max+1, ...)."""
    import numpy as np

    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = x
    for k in range(1, n_max):
        out[k + 1] = (x * out[k] - math.sqrt(k) * out[k - 1]) / math.sqrt(k + 1)
    return out


def norm_cdf(x: float) -> float:
    if x < 0:
        return 0.5 * math.erfc(-x / math.sqrt(2))
    return 1.0 - 0.5 * math.erfc(x / math.sqrt(2))


def norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)


def norm_cdf_inv(p: float) -> float:
    """Standard normal quantile: AS241 (via ``statistics``) plus one Newton step."""
    if not 0 < p < 1:
        raise ValueError(f"p = {p} must lie strictly inside (0, 1)")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        return -_lower_quantile(1.0 - p)
    return _lower_quantile(p)


def _lower_quantile(p: float) -> float:
    # p < 1/2, so the quantile is negative and erfc evaluates the CDF without cancellation
    x = _STD_NORMAL.inv_cdf(p)
    resid = 0.5 * math.erfc(-x / math.sqrt(2)) - p
    dens = norm_pdf(x)
    if dens > 0:
        x -= resid / dens
    return x


# --- closed forms --------------------------------------------------------

def grothendieck_h(rho: float) -> float:
    """(2/pi) arcsin(rho) = E[sign(X) sign(Y)] for rho-correlated standard normals."""
    if abs(rho) > 1:
        raise ValueError("|rho| must be <= 1")
    return 2.0 / math.pi * math.asin(rho)


def grothendieck_h_2f1(rho: float) -> float:
    """Same value through (2/pi) rho 2F1(1/2, 1/2; 3/2; rho^2)."""
    if abs(rho) == 1:
        return math.copysign(1.0, rho)
    return 2.0 / math.pi * rho * hyp2f1(0.5, 0.5, 1.5, rho * rho)


def haagerup_h(t: float) -> float:
    """(pi/4) t 2F1(1/2, 1/2; 2; t^2) for a correlation magnitude t in [0, 1]."""
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    return math.pi / 4 * t * hyp2f1(0.5, 0.5, 2.0, t * t)


def haagerup_h_complex(z: complex) -> complex:
    """Haagerup's function at a complex correlation: phase of z times haagerup_h(|z|)."""
    t = abs(z)
    if t > 1 + 1e-15:
        raise ValueError("|z| must be <= 1")
    t = min(t, 1.0)
    if t == 0:
        return 0j
    return (z / t) * haagerup_h(t)


def c_minus(d: int, m: int) -> float:
    lg = math.lgamma
    return 2 / math.sqrt(math.pi) * math.exp(
        2 * lg((d + 1) / 2) + lg((m + 2) / 2) - lg(d / 2) - lg((m + d + 1) / 2)
    )


def c_plus(d: int, m: int) -> float:
    lg = math.lgamma
    return 1 / math.sqrt(math.pi) * math.exp(lg(d / 2) + lg((m + 1) / 2) - lg((m + d) / 2))


def c_d(d: int) -> float:
    """c_d = (2/d) Gamma((d+1)/2)^2 / Gamma(d/2)^2 = 1 / 2F1(1/2, 1/2; (2+d)/2; 1)."""
    return 2.0 / d * math.exp(2 * (math.lgamma((d + 1) / 2) - math.lgamma(d / 2)))


def moment_closed_form(d: int, m: int, rho: float) -> float:
    """E[<X/|X|, Y/|Y|>^m] for (X, Y) ~ N_2d(0, [[I, rho I], [rho I, I]]), |rho| < 1."""
    if d < 1 or m < 1:
        raise ValueError("need d >= 1 and m >= 1")
    if not -1 < rho < 1:
        raise ValueError("moment formula holds on the open interval |rho| < 1")
    z = rho * rho
    pref = (1 - z) ** (d / 2)
    if m % 2:
        val = c_minus(d, m) * pref * rho * hyp3f2(
            (d + 1) / 2, (d + 1) / 2, (m + 2) / 2, 1.5, (m + d + 1) / 2, z
        )
    else:
        val = c_plus(d, m) * pref * hyp3f2(d / 2, d / 2, (m + 1) / 2, 0.5, (m + d) / 2, z)
    if not -1 - 1e-9 <= val <= 1 + 1e-9:
        raise ConvergenceError(f"moment value {val} left [-1, 1]", partial=val)
    return min(1.0, max(-1.0, val))


def corollary_moment(d: int, rho: float) -> float:
    """m = 1 moment in its 2F1 form: c_d rho 2F1(1/2, 1/2; (2+d)/2; rho^2)."""
    if abs(rho) == 1:
        return math.copysign(1.0, rho)
    return c_d(d) * rho * hyp2f1(0.5, 0.5, (2 + d) / 2, rho * rho)


def double_factorial(n: int) -> int:
    if n < -1:
        raise ValueError("double factorial defined for n >= -1")
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out
