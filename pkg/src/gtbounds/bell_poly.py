"""Integer partitions P(n, k) and ordinary partial Bell polynomials.

A partition of ``n`` into exactly ``k`` parts is stored as a multiplicity
vector ``nu = (nu_1, ..., nu_{n+1-k})`` where ``nu_i`` counts the parts equal
to ``i``.  The ordinary partial Bell polynomial is

    B°_{n,k}(x_1, ..., x_{n+1-k}) = sum_{nu in P(n,k)} k!/prod(nu_i!) * prod x_i^nu_i

which is also the coefficient of t^n in (x_1 t + x_2 t^2 + ...)^k.

Everything here is exact (``fractions.Fraction``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Iterator, Mapping, Sequence

MAX_N = 64

MultiIndex = tuple[int, ...]


def _check(n: int, k: int, max_n: int | None) -> None:
    if not (isinstance(n, int) and isinstance(k, int)):
        raise TypeError("n and k must be integers")
    if k < 1 or n < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got n={n}, k={k}")
    cap = MAX_N if max_n is None else max_n
    if n > cap:
        raise ValueError(f"n={n} exceeds the enumeration cap {cap}")


def _descend(i: int, length: int, k_left: int, n_left: int, prefix: list[int]) -> Iterator[MultiIndex]:
    # parts still to place all have size >= i and <= length
    if i > length:
        if k_left == 0 and n_left == 0:
            yield tuple(prefix)
        return
    top = min(k_left, n_left // i)
    for c in range(top, -1, -1):
        k_r, n_r = k_left - c, n_left - c * i
        if not (i + 1) * k_r <= n_r <= length * k_r:
            if not (k_r == 0 and n_r == 0):
                continue
        prefix.append(c)
        yield from _descend(i + 1, length, k_r, n_r, prefix)
        prefix.pop()


def partitions(n: int, k: int, max_n: int | None = None) -> list[MultiIndex]:
    """All multiplicity vectors of partitions of ``n`` into ``k`` parts.

    Output is in descending lexicographic order of ``nu``, so
    ``partitions(4, 2) == [(1, 0, 1), (0, 2, 0)]``.
    """
    _check(n, k, max_n)
    return list(_descend(1, n + 1 - k, k, n, []))


def multinomial_weight(nu: Sequence[int]) -> int:
    """k! / prod(nu_i!) with k = sum(nu)."""
    w = factorial(sum(nu))
    for c in nu:
        w //= factorial(c)
    return w


def bell_ordinary(n: int, k: int, x: Sequence, max_n: int | None = None):
    """Evaluate B°_{n,k} at ``x`` (length ``n+1-k``) by summing over P(n, k).

    Exact when the entries of ``x`` are ints or Fractions.
    """
    _check(n, k, max_n)
    if len(x) != n + 1 - k:
        raise ValueError(f"B°_{{{n},{k}}} takes {n + 1 - k} arguments, got {len(x)}")
    total = Fraction(0)
    for nu in partitions(n, k, max_n):
        term = Fraction(multinomial_weight(nu))
        for xi, c in zip(x, nu):
            if c:
                term *= xi**c
        total += term
    return total


@dataclass(frozen=True)
class SymbolicPolynomial:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` maps exponent vectors of length ``arity`` to nonzero Fractions.
    """

    arity: int
    terms: Mapping[MultiIndex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for exp, c in self.terms.items():
            if len(exp) != self.arity:
                raise ValueError(f"exponent {exp} does not have arity {self.arity}")
            c = Fraction(c)
            if c != 0:
                clean[tuple(exp)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def variable(cls, i: int, arity: int) -> "SymbolicPolynomial":
        """The monomial x_i (1-based)."""
        if not 1 <= i <= arity:
            raise ValueError(f"variable index {i} outside 1..{arity}")
        exp = [0] * arity
        exp[i - 1] = 1
        return cls(arity, {tuple(exp): Fraction(1)})

    @classmethod
    def constant(cls, c, arity: int) -> "SymbolicPolynomial":
        return cls(arity, {(0,) * arity: Fraction(c)})

    def _coerce(self, other) -> "SymbolicPolynomial":
        if isinstance(other, SymbolicPolynomial):
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return other
        return SymbolicPolynomial.constant(other, self.arity)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return SymbolicPolynomial(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolicPolynomial(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[MultiIndex, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return SymbolicPolynomial(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SymbolicPolynomial.constant(1, self.arity)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SymbolicPolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def evaluate(self, point: Sequence):
        if len(point) != self.arity:
            raise ValueError(f"expected {self.arity} values, got {len(point)}")
        total = Fraction(0)
        for exp, c in self.terms.items():
            term = c
            for xi, a in zip(point, exp):
                if a:
                    term *= xi**a
            total += term
        return total

    def to_text(self, name: str = "x") -> str:
        """Canonical text, terms sorted by descending exponent vector.

        >>> bell_symbolic(4, 2).to_text()
        '2*x1*x3 + x2^2'
        """
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = [f"{name}{i + 1}" + (f"^{a}" if a > 1 else "") for i, a in enumerate(exp) if a]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            pieces.append(("-" if c < 0 else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()


def bell_symbolic(n: int, k: int, max_n: int | None = None) -> SymbolicPolynomial:
    """B°_{n,k} as a polynomial in x_1..x_{n+1-k}."""
    _check(n, k, max_n)
    return SymbolicPolynomial(n + 1 - k, {nu: Fraction(multinomial_weight(nu)) for nu in partitions(n, k, max_n)})


def bell_by_powers(x: Sequence, n_max: int):
    """Table ``T[k][n] = B°_{n,k}(x)`` for 1 <= k <= n <= n_max.

    Uses B°_{n,k} = [t^n] (x_1 t + x_2 t^2 + ...)^k, building the k-th power by
    repeated truncated multiplication.  Works for any ring-like scalars
    (Fractions, floats, mpmath numbers, SymbolicPolynomial).
    """
    if len(x) < n_max:
        raise ValueError(f"need at least {n_max} arguments, got {len(x)}")
    zero = x[0] * 0
    base = [zero] + list(x[:n_max])  # base[j] = x_j
    table = [[zero] * (n_max + 1) for _ in range(n_max + 1)]
    power = base
    for k in range(1, n_max + 1):
        for n in range(k, n_max + 1):
            table[k][n] = power[n]
        if k == n_max:
            break
        nxt = [zero] * (n_max + 1)
        for i in range(k, n_max + 1):
            pi = power[i]
            if pi == 0:
                continue
            for j in range(1, n_max + 1 - i):
                if base[j] != 0:
                    nxt[i + j] = nxt[i + j] + pi * base[j]
        power = nxt
    return table
