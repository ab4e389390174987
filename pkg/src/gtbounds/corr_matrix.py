"""Correlation matrices, Schur products, entrywise maps and the trace form of
Grothendieck's inequality."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .power_series import TruncatedSeries, evaluate

PSD_TOL = 1e-8
HERMITIAN_TOL = 1e-12


def psd_tol(k: int) -> float:
    """Size-scaled eigenvalue tolerance used by every PSD check."""
    return PSD_TOL * max(1, k)


@dataclass(frozen=True)
class PSDCheck:
    ok: bool
    min_eigenvalue: float

    def __bool__(self):
        return self.ok


def is_psd(A, tol: float | None = None) -> PSDCheck:
    """Minimum eigenvalue test on the Hermitian part of ``A``.

    ``tol`` is a per-unit-size tolerance; the threshold is ``tol * max(1, k)``.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("need a square matrix")
    if np.max(np.abs(A - A.conj().T), initial=0.0) > HERMITIAN_TOL * max(1.0, np.max(np.abs(A), initial=0.0)):
        raise ValueError("matrix is not Hermitian")
    k = A.shape[0]
    lam = float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0]) if k else 0.0
    thr = (PSD_TOL if tol is None else tol) * max(1, k)
    return PSDCheck(lam >= -thr, lam)


@dataclass(frozen=True)
class CorrelationMatrix:
    entries: np.ndarray
    psd_tolerance: float = PSD_TOL

    def __post_init__(self):
        M = np.array(self.entries)
        if not np.iscomplexobj(M):
            M = M.astype(float)
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)
        problems = correlation_problems(M, self.psd_tolerance)
        if problems:
            raise ValueError("not a correlation matrix: " + "; ".join(problems))

    @property
    def field_tag(self) -> str:
        return "C" if np.iscomplexobj(self.entries) else "R"

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def blocks(self, m: int):
        """Split into (A, Z, B) with A of size m."""
        S = self.entries
        return S[:m, :m], S[:m, m:], S[m:, m:]


def correlation_problems(M, tol: float = PSD_TOL) -> list[str]:
    """Reasons ``M`` fails to be a correlation matrix (empty list if it is one)."""
    M = np.asarray(M)
    out = []
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return ["not square"]
    k = M.shape[0]
    if np.max(np.abs(M - M.conj().T), initial=0.0) > HERMITIAN_TOL:
        return ["not Hermitian"]
    if np.max(np.abs(np.diag(M) - 1), initial=0.0) > 1e-12:
        out.append("diagonal differs from 1")
    chk = is_psd(M, tol)
    if not chk.ok:
        out.append(f"min eigenvalue {chk.min_eigenvalue:.3g} < -{tol * max(1, k):.3g}")
    if np.max(np.abs(M), initial=0.0) > 1 + 1e-12:
        out.append("entry of modulus > 1")
    return out


def is_correlation(M, tol: float = PSD_TOL) -> bool:
    return not correlation_problems(M, tol)


def schur_product(A, B) -> np.ndarray:
    A, B = np.asarray(A), np.asarray(B)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    return A * B


def entrywise_apply(f, A) -> np.ndarray:
    """f[A]: apply a scalar function (or a TruncatedSeries) to every entry."""
    A = np.asarray(A)
    if isinstance(f, TruncatedSeries):
        if np.max(np.abs(A), initial=0.0) > 1 + 1e-12:
            raise ValueError("series-backed maps need entries in [-1, 1]")
        clipped = np.clip(A.real, -1, 1) if not np.iscomplexobj(A) else A
        return np.vectorize(lambda x: evaluate(f, x), otypes=[float])(clipped)
    out = np.vectorize(f, otypes=[complex if np.iscomplexobj(A) else float])(A)
    return out


def random_correlation(k: int, rank_d: int, seed: int | np.random.Generator | None = None,
                       field: str = "R") -> np.ndarray:
    """Gram matrix of ``k`` independent uniform unit vectors in dimension ``rank_d``."""
    if rank_d < 1 or k < 1:
        raise ValueError("need k >= 1 and rank_d >= 1")
    rng = np.random.default_rng(seed)
    if field == "R":
        U = rng.standard_normal((k, rank_d))
    else:
        U = rng.standard_normal((k, rank_d)) + 1j * rng.standard_normal((k, rank_d))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    G = U @ U.conj().T
    np.fill_diagonal(G, 1.0)
    return 0.5 * (G + G.conj().T)


def block_J(A) -> np.ndarray:
    """J(A) = 1/2 [[0, A], [A*, 0]]."""
    A = np.asarray(A)
    m, n = A.shape
    dtype = complex if np.iscomplexobj(A) else float
    J = np.zeros((m + n, m + n), dtype=dtype)
    J[:m, m:] = A / 2
    J[m:, :m] = A.conj().T / 2
    return J


def trace_pair(B, Sigma):
    """tr(B* Sigma)."""
    B, Sigma = np.asarray(B), np.asarray(Sigma)
    if B.shape != Sigma.shape:
        raise ValueError(f"shape mismatch {B.shape} vs {Sigma.shape}")
    val = np.sum(B.conj() * Sigma)
    return val if np.iscomplexobj(val) else float(val)


@dataclass(frozen=True)
class NormResult:
    value: float
    p: np.ndarray
    q: np.ndarray
    exact: bool

    def __float__(self):
        return self.value


EXACT_CAP = 22


def norm_inf1(A, mode: str = "exact", seed: int = 0, starts: int = 32) -> NormResult:
    """||A||_{inf,1} = max over unimodular p, q of |sum a_ij p_i q_j|.

    Real exact mode enumerates signs p in {±1}^m with p_1 = +1 (the smaller
    side is enumerated) and uses max_q |p^T A q| = sum_j |(A^T p)_j|.  The
    heuristic (and any complex input) runs alternating maximization from
    random starts and returns a lower bound.
    """
    A = np.asarray(A)
    m, n = A.shape
    if np.iscomplexobj(A) or mode == "heuristic":
        return _norm_alternating(A, seed, starts)
    if mode != "exact":
        raise ValueError(f"unknown mode {mode!r}")
    if m + n > EXACT_CAP:
        raise ValueError(f"exact mode capped at m + n <= {EXACT_CAP}")
    transposed = n < m
    M = A.T if transposed else A
    rows = M.shape[0]
    patterns = list(itertools.product((1.0, -1.0), repeat=rows - 1))
    signs = np.array(patterns, dtype=float).reshape(len(patterns), rows - 1)
    P = np.hstack([np.ones((signs.shape[0], 1)), signs])
    vals = np.abs(P @ M).sum(axis=1)
    best = int(np.argmax(vals))
    p = P[best]
    q = np.where(p @ M >= 0, 1.0, -1.0)
    if transposed:
        p, q = q, p
    return NormResult(float(vals[best]), p, q, True)


def _phase(v):
    if np.iscomplexobj(v):
        mag = np.abs(v)
        return np.where(mag > 0, v / np.where(mag > 0, mag, 1), 1.0)
    return np.where(v >= 0, 1.0, -1.0)


def _norm_alternating(A, seed, starts):
    rng = np.random.default_rng(seed)
    m, n = A.shape
    cplx = np.iscomplexobj(A)
    best = (-1.0, None, None)
    for _ in range(starts):
        if cplx:
            q = np.exp(2j * np.pi * rng.random(n))
        else:
            q = rng.choice([-1.0, 1.0], size=n)
        val_prev = -np.inf
        for _ in range(200):
            p = _phase((A @ q).conj()) if cplx else _phase(A @ q)
            q = _phase((p @ A).conj()) if cplx else _phase(p @ A)
            val = abs(p @ A @ q)
            if val <= val_prev + 1e-14:
                break
            val_prev = val
        if val > best[0]:
            best = (float(val), p, q)
    return NormResult(best[0], best[1], best[2], False)


def gt_instance(m: int, n: int, seed, rank: int | None = None, sweeps: int = 200):
    """A random m x n matrix A and a correlation matrix Sigma of size m + n
    chosen to make tr(J(A) Sigma) large.

    Sigma is the Gram matrix of unit vectors u_1..u_m, v_1..v_n found by
    alternating maximization of sum a_ij <u_i, v_j>, which equals
    tr(J(A) Sigma).  Returns (A, Sigma).
    """
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, n))
    d = rank or (m + n)
    V = rng.standard_normal((n, d))
    V /= np.linalg.norm(V, axis=1, keepdims=True)
    U = A @ V
    for _ in range(sweeps):
        U = A @ V
        U /= np.maximum(np.linalg.norm(U, axis=1, keepdims=True), 1e-300)
        V = A.T @ U
        V /= np.maximum(np.linalg.norm(V, axis=1, keepdims=True), 1e-300)
    W = np.vstack([U, V])
    S = W @ W.T
    np.fill_diagonal(S, 1.0)
    return A, 0.5 * (S + S.T)


@dataclass
class ProbeReport:
    trials: int
    sizes: list
    seed: int
    worst_min_eigenvalue: float
    violations: int
    violating_instance: np.ndarray | None = None
    violating_image: np.ndarray | None = None

    def to_dict(self) -> dict:
        d = {
            "trials": self.trials,
            "sizes": list(self.sizes),
            "seed": self.seed,
            "worst_min_eigenvalue": self.worst_min_eigenvalue,
            "violations": self.violations,
        }
        if self.violating_instance is not None:
            d["violating_instance"] = matrix_to_json(self.violating_instance)
        return d


def ccp_probe(f, sizes: Sequence[int], trials: int, seed: int, rank: str | int = "random",
              tol: float = PSD_TOL) -> ProbeReport:
    """Apply ``f`` entrywise to random correlation matrices and look for failures.

    A failure is a negative eigenvalue beyond the size-scaled tolerance or a
    diagonal entry that moved away from 1.  Each (size, trial) pair draws from
    its own child seed, so results do not depend on iteration order.
    """
    root = np.random.SeedSequence(seed)
    sizes = list(sizes)
    children = root.spawn(len(sizes) * trials)
    worst = np.inf
    violations = 0
    first_bad = None
    for si, k in enumerate(sizes):
        for t in range(trials):
            rng = np.random.default_rng(children[si * trials + t])
            d = int(rng.integers(1, k + 1)) if rank == "random" else int(rank)
            S = random_correlation(k, d, rng)
            img = entrywise_apply(f, S)
            img = 0.5 * (img + img.conj().T)
            lam = float(np.linalg.eigvalsh(img)[0])
            bad = lam < -tol * k or np.max(np.abs(np.diag(img) - 1)) > 1e-9
            if bad:
                violations += 1
                if first_bad is None:
                    first_bad = (S, img)
            if lam < worst:
                worst = lam
    inst, img = first_bad if first_bad else (None, None)
    return ProbeReport(trials, sizes, seed, float(worst), violations, inst, img)


@dataclass
class BlockTransformResult:
    matrix: np.ndarray
    valid: bool
    min_eigenvalue: float
    problems: list


def block_transform(Sigma, m: int, h: Callable, f: Callable, g: Callable | None, r: float,
                    tol: float = PSD_TOL) -> BlockTransformResult:
    """Sigma_b(r) = [[h(f(r A)), r Z], [r Z*, h(f(r B))]] for Sigma = [[A, Z], [Z*, B]].

    ``h``, ``f`` and ``g`` are scalar callables (vectorized over numpy arrays
    or not).  When ``g`` is given the off-diagonal block is computed as
    h(g(r Z)), the other route to the same matrix; the two agree when g
    inverts h on r·[-1, 1].
    """
    if not 0 < r <= 1:
        raise ValueError("r must lie in (0, 1]")
    S = np.asarray(Sigma)
    A, Z, B = S[:m, :m], S[:m, m:], S[m:, m:]

    def ap(fn, X):
        return np.vectorize(fn, otypes=[float])(X)

    def inner(fn, X, name):
        Y = ap(fn, X)
        if np.max(np.abs(Y), initial=0.0) > 1 + 1e-12:
            raise ValueError(f"{name}(r x) leaves [-1, 1], outside the domain of h")
        return Y

    top = ap(h, inner(f, r * A, "f"))
    bot = ap(h, inner(f, r * B, "f"))
    off = ap(h, inner(g, r * Z, "g")) if g is not None else r * Z
    M = np.block([[top, off], [off.conj().T, bot]])
    probs = correlation_problems(M, tol)
    lam = float(np.linalg.eigvalsh(0.5 * (M + M.conj().T))[0])
    return BlockTransformResult(M, not probs, lam, probs)


# --- matrix I/O ----------------------------------------------------------

def matrix_to_json(M) -> list:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]
    return [[float(x) for x in row] for row in M]


def matrix_from_json(data) -> np.ndarray:
    if isinstance(data, str):
        data = json.loads(data)
    arr = data
    if arr and arr[0] and isinstance(arr[0][0], list):
        return np.array([[complex(re, im) for re, im in row] for row in arr])
    return np.array(arr, dtype=float)


def matrix_to_csv(M) -> str:
    M = np.asarray(M)
    if np.iscomplexobj(M):
        raise ValueError("CSV matrix output is real-only")
    return "\n".join(",".join(repr(float(x)) for x in row) for row in M) + "\n"


def matrix_from_csv(text: str) -> np.ndarray:
    rows = [line for line in text.strip().splitlines() if line.strip()]
    return np.array([[float(x) for x in row.split(",")] for row in rows])
