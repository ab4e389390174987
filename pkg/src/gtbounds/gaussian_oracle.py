"""Monte Carlo estimates of the Gaussian expectations behind the closed forms.

Samples are drawn in fixed-size chunks; chunk ``i`` uses the generator seeded
by ``SeedSequence([seed, i])`` and chunk statistics are merged in chunk
order, so an estimate depends only on (seed, n, parameters), never on how
many workers produced the chunks.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

CHUNK = 1 << 17
THREADS_ENV = "GTBOUNDS_THREADS"


@dataclass(frozen=True)
class McEstimate:
    mean: float | complex
    std_error: float
    n_samples: int
    seed: int
    std_error_imag: float | None = None

    def z_score(self, target) -> float:
        """Largest componentwise |mean - target| / std_error (0/0 counts as 0)."""
        def z(diff, se):
            if se < 1e-12:  # degenerate (deterministic) estimator
                return 0.0 if abs(diff) < 1e-9 else math.inf
            return abs(diff) / se

        if isinstance(self.mean, complex) or isinstance(target, complex):
            d = complex(self.mean) - complex(target)
            return max(z(d.real, self.std_error), z(d.imag, self.std_error_imag or 0.0))
        return z(self.mean - target, self.std_error)

    def agrees(self, target, n_sigma: float = 4.0) -> bool:
        return self.z_score(target) <= n_sigma

    def to_dict(self, closed_form=None) -> dict:
        m = self.mean
        d = {"n": self.n_samples, "seed": self.seed}
        if isinstance(m, complex):
            d.update(mean=[m.real, m.imag], std_error=[self.std_error, self.std_error_imag])
        else:
            d.update(mean=m, std_error=self.std_error)
        if closed_form is not None:
            d["closed_form"] = [closed_form.real, closed_form.imag] if isinstance(closed_form, complex) else closed_form
            d["z_score"] = self.z_score(closed_form)
        return d


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _chunk_rng(seed: int, i: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, i]))


def _merge(stats):
    """Chan et al. pairwise merge of (count, mean, M2) in the given order."""
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        if nb == 0:
            continue
        tot = n + nb
        delta = mb - mean
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _run(sampler: Callable[[np.random.Generator, int], np.ndarray], n: int, seed: int,
         workers: int | None, complex_valued: bool = False) -> McEstimate:
    n = int(n)
    if n < 2:
        raise ValueError("need at least 2 samples")
    sizes = [CHUNK] * (n // CHUNK) + ([n % CHUNK] if n % CHUNK else [])

    def one(i):
        vals = sampler(_chunk_rng(seed, i), sizes[i])
        if complex_valued:
            parts = (vals.real, vals.imag)
        else:
            parts = (vals,)
        out = []
        for v in parts:
            mu = float(np.mean(v))
            out.append((v.size, mu, float(np.sum((v - mu) ** 2))))
        return out

    workers = workers or _default_workers()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(one, range(len(sizes))))
    else:
        results = [one(i) for i in range(len(sizes))]

    comps = []
    for c in range(2 if complex_valued else 1):
        cnt, mean, m2 = _merge([r[c] for r in results])
        se = math.sqrt(m2 / (cnt - 1) / cnt)
        comps.append((mean, se))
    if complex_valued:
        (mr, sr), (mi, si) = comps
        return McEstimate(complex(mr, mi), sr, n, seed, si)
    return McEstimate(comps[0][0], comps[0][1], n, seed)


def _sign(x):
    # sign(0) := 1
    return np.where(x >= 0, 1.0, -1.0)


def sample_corr_pairs(d: int, rho: float, n: int, seed: int):
    """(X, Y) with X, Y in R^d and covariance [[I, rho I], [rho I, I]]; arrays of shape (n, d)."""
    if abs(rho) > 1 or d < 1:
        raise ValueError("need |rho| <= 1 and d >= 1")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    return _pairs(rng, d, rho, n)


def _pairs(rng, d, rho, n):
    X = rng.standard_normal((n, d))
    if rho == 1:
        return X, X.copy()
    if rho == -1:
        return X, -X
    Y = rho * X + math.sqrt(1 - rho * rho) * rng.standard_normal((n, d))
    return X, Y


def mc_sign_identity(rho: float, n: int = 1_000_000, seed: int = 0, workers: int | None = None) -> McEstimate:
    """E[sign(X) sign(Y)] for rho-correlated standard normals."""
    def s(rng, k):
        X, Y = _pairs(rng, 1, rho, k)
        return (_sign(X) * _sign(Y))[:, 0]
    return _run(s, n, seed, workers)


def mc_threshold(p: float, rho: float, n: int = 1_000_000, seed: int = 0, workers: int | None = None) -> McEstimate:
    """E[b_p(X) b_p(Y)] with b_p = 2·1[x >= Phi^{-1}(p)] - 1."""
    from .special_fn import norm_cdf_inv

    t = norm_cdf_inv(p)

    def s(rng, k):
        X, Y = _pairs(rng, 1, rho, k)
        return (_sign(X - t) * _sign(Y - t))[:, 0]
    return _run(s, n, seed, workers)


def mc_orthant(rho: float, n: int = 1_000_000, seed: int = 0, workers: int | None = None) -> McEstimate:
    """P(X <= 0, Y <= 0): the bivariate Gaussian copula at (1/2, 1/2)."""
    def s(rng, k):
        X, Y = _pairs(rng, 1, rho, k)
        return ((X[:, 0] <= 0) & (Y[:, 0] <= 0)).astype(float)
    return _run(s, n, seed, workers)


def mc_moment(d: int, m: int, rho: float, n: int = 1_000_000, seed: int = 0,
              workers: int | None = None) -> McEstimate:
    """E[<X/|X|, Y/|Y|>^m]; for d = 1 the normalized vectors are the signs."""
    if d < 1 or m < 1:
        raise ValueError("need d >= 1 and m >= 1")
    if not -1 < rho < 1:
        raise ValueError("need |rho| < 1")

    def s(rng, k):
        X, Y = _pairs(rng, d, rho, k)
        if d == 1:
            ip = _sign(X[:, 0]) * _sign(Y[:, 0])
        else:
            ip = np.einsum("ij,ij->i", X, Y) / (np.linalg.norm(X, axis=1) * np.linalg.norm(Y, axis=1))
        return ip**m
    return _run(s, n, seed, workers)


def _csign(z):
    mag = np.abs(z)
    return np.where(mag > 0, z / np.where(mag > 0, mag, 1.0), 1.0 + 0j)


def complex_pairs(rng, z: complex, n: int):
    """Proper complex normal pairs (Z, W) with E|Z|^2 = E|W|^2 = 1 and E[Z conj(W)] = z.

    Z = (G1 + i G2)/sqrt(2); W = conj(z) Z + sqrt(1 - |z|^2) Z'.
    """
    g = rng.standard_normal((n, 4)) / math.sqrt(2)
    Z = g[:, 0] + 1j * g[:, 1]
    Zp = g[:, 2] + 1j * g[:, 3]
    s = math.sqrt(max(0.0, 1 - abs(z) ** 2))
    W = np.conj(z) * Z + s * Zp
    return Z, W


def mc_haagerup(z: complex, n: int = 1_000_000, seed: int = 0, workers: int | None = None) -> McEstimate:
    """E[sign(Z) conj(sign(W))] with sign(w) = w/|w| and E[Z conj(W)] = z."""
    z = complex(z)
    if abs(z) > 1 + 1e-15:
        raise ValueError("|z| must be <= 1")

    def s(rng, k):
        Z, W = complex_pairs(rng, z, k)
        return _csign(Z) * np.conj(_csign(W))
    return _run(s, n, seed, workers, complex_valued=True)
