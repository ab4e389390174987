import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gtbounds.bell_poly import SymbolicPolynomial
from gtbounds.concepts import ConceptSpec, h_series
from gtbounds.errors import NonInvertibleSeriesError, NoRootError
from gtbounds.power_series import (DegenerateRootWarning, TruncatedSeries, abs_series, evaluate,
                                   invert_series, solve_unit_level, symbolic_inverse)

# beta_n * a1^(2n-1), reference polynomials written out term by term
PUBLISHED = {
    2: [(-1, {2: 1})],
    3: [(-1, {1: 1, 3: 1}), (2, {2: 2})],
    4: [(-1, {1: 2, 4: 1}), (5, {1: 1, 2: 1, 3: 1}), (-5, {2: 3})],
    5: [(-1, {1: 3, 5: 1}), (6, {1: 2, 2: 1, 4: 1}), (3, {1: 2, 3: 2}), (-21, {1: 1, 2: 2, 3: 1}), (14, {2: 4})],
    6: [(-1, {1: 4, 6: 1}), (7, {1: 3, 2: 1, 5: 1}), (7, {1: 3, 3: 1, 4: 1}), (-28, {1: 2, 2: 1, 3: 2}),
        (-28, {1: 2, 2: 2, 4: 1}), (84, {1: 1, 2: 3, 3: 1}), (-42, {2: 5})],
    7: [(-1, {1: 5, 7: 1}), (8, {1: 4, 2: 1, 6: 1}), (8, {1: 4, 3: 1, 5: 1}), (4, {1: 4, 4: 2}),
        (-36, {1: 3, 2: 2, 5: 1}), (-72, {1: 3, 2: 1, 3: 1, 4: 1}), (-12, {1: 3, 3: 3}),
        (120, {1: 2, 2: 3, 4: 1}), (180, {1: 2, 2: 2, 3: 2}), (-330, {1: 1, 2: 4, 3: 1}), (132, {2: 6})],
}


def published_poly(n, arity=7):
    terms = {}
    for c, powers in PUBLISHED[n]:
        exp = [0] * arity
        for i, e in powers.items():
            exp[i - 1] = e
        terms[tuple(exp)] = Fraction(c)
    return SymbolicPolynomial(arity, terms)


@pytest.mark.parametrize("n", range(2, 8))
def test_symbolic_inverse_matches_published_identities(n):
    assert symbolic_inverse(7)[n] == published_poly(n)


@pytest.mark.parametrize("n", range(2, 8))
def test_symbolic_inverse_matches_independent_reversion(n, oracle):
    ref = {tuple(int(e) for e in k.split(",")): Fraction(v) for k, v in oracle["reversion_polynomials"][str(n)].items()}
    assert symbolic_inverse(7)[n].terms == ref


def test_beta3_text_form():
    assert symbolic_inverse(3)[3].to_text("a") == "-a1*a3 + 2*a2^2"


def test_beta2_numeric():
    a1, a2 = Fraction(3, 5), Fraction(-2, 7)
    b = invert_series(TruncatedSeries((0, a1, a2, 0), kind="rational"))
    assert b.coeffs[1] == 1 / a1
    assert b.coeffs[2] == -a2 / a1**3


def test_sign_inverse_is_sine_exactly():
    h = h_series(ConceptSpec("sign"), 41)
    g = invert_series(h)
    assert g.kind == "rational"
    assert g.in_scale == pytest.approx(math.pi / 2, rel=1e-15)
    for n in range(42):
        expected = Fraction((-1) ** (n // 2), math.factorial(n)) if n % 2 else 0
        assert g.coeffs[n] == expected


@pytest.mark.parametrize("n", range(0, 11))
def test_sine_coefficients_in_floats(n):
    g = invert_series(h_series(ConceptSpec("sign"), 25))
    got = g.effective_coeffs()[2 * n + 1]
    want = (-1) ** n * (math.pi / 2) ** (2 * n + 1) / math.factorial(2 * n + 1)
    assert got == pytest.approx(want, rel=1e-12)


def test_abs_series_gives_sinh():
    f = abs_series(invert_series(h_series(ConceptSpec("sign"), 41)))
    for x in (0.1, 0.5, 0.9, 1.0):
        assert evaluate(f, x) == pytest.approx(math.sinh(math.pi / 2 * x), rel=1e-14)
    r = 2 * math.asinh(1.0) / math.pi
    assert abs(evaluate(f, r) - 1) < 1e-12


def test_abs_series_trivial_cases():
    s = TruncatedSeries((0, 0.5, 0.25, 0.125))
    assert abs_series(s) == s
    z = TruncatedSeries((0, 0, 0))
    assert abs_series(z) == z


def test_methods_agree_exactly():
    h = h_series(ConceptSpec("sign"), 15)
    assert invert_series(h, method="powers").coeffs == invert_series(h, method="enumerate").coeffs
    s = TruncatedSeries((0, Fraction(1, 3), Fraction(-2, 5), Fraction(1, 7), 0, Fraction(5, 11)), kind="rational")
    assert invert_series(s, method="powers").coeffs == invert_series(s, method="enumerate").coeffs


def test_invert_errors():
    with pytest.raises(NonInvertibleSeriesError):
        invert_series(TruncatedSeries((0, 0, 1.0)))
    with pytest.raises(ValueError):
        invert_series(TruncatedSeries((0.1, 1.0, 0.0)))
    with pytest.raises(ValueError):
        invert_series(TruncatedSeries((0, 1.0)), order=0)
    with pytest.raises(ValueError):
        invert_series(TruncatedSeries((0, 1.0, 0.5)), method="lagrange")


# near p = 1/2 the even coefficients nearly vanish and the float Bell sums cancel
@pytest.mark.parametrize("p,rel", [("0.3", 1e-12), ("0.7", 1e-12), ("0.45", 1e-7)])
def test_float_inversion_matches_high_precision_reversion(p, rel, oracle):
    from gtbounds.concepts import alpha_coeffs

    h = h_series(ConceptSpec("threshold", p=float(p)), 25)
    beta = invert_series(h).effective_coeffs()[1:26]
    assert beta == pytest.approx(oracle["threshold"][p]["beta"], rel=rel)
    al = alpha_coeffs(ConceptSpec("threshold", p=float(p)), 20)
    assert al.alpha0 == pytest.approx(oracle["threshold"][p]["alpha"][0], rel=1e-14)
    assert list(al.alpha) == pytest.approx(oracle["threshold"][p]["alpha"][1:], rel=1e-12)


def test_evaluate_basics():
    s = TruncatedSeries((Fraction(1, 3), 2, 5), kind="rational")
    assert evaluate(s, 0) == Fraction(1, 3)
    assert evaluate(s, Fraction(1, 2)) == Fraction(1, 3) + 1 + Fraction(5, 4)
    with pytest.raises(ValueError):
        evaluate(s, 1.5)
    h = h_series(ConceptSpec("sign"), 201)
    assert abs(evaluate(h, 0.5) - 1 / 3) < 1e-6


def test_parity_hint_is_enforced():
    with pytest.raises(ValueError):
        TruncatedSeries((0, 1, 1), parity_hint="odd")
    TruncatedSeries((1, 0, 1), parity_hint="even")


def test_json_round_trip():
    s = TruncatedSeries((0, Fraction(1, 3), Fraction(-7, 2)), kind="rational", in_scale=1.5)
    d = s.to_dict()
    assert d["coeffs"] == ["0/1", "1/3", "-7/2"] and d["kind"] == "rational" and d["order"] == 2
    assert TruncatedSeries.from_json(s.to_json()) == s
    f = TruncatedSeries((0.0, 0.25, 0.125))
    assert TruncatedSeries.from_json(f.to_json()) == f


def test_solve_unit_level_examples():
    f = abs_series(invert_series(h_series(ConceptSpec("sign"), 41)))
    assert solve_unit_level(f, 1e-12) == pytest.approx(2 * math.asinh(1.0) / math.pi, abs=1e-10)
    with pytest.warns(DegenerateRootWarning):
        assert solve_unit_level(TruncatedSeries((0, 1.0))) == 1.0
    with pytest.raises(NoRootError):
        solve_unit_level(TruncatedSeries((0, 0.9)))
    with pytest.raises(ValueError):
        solve_unit_level(TruncatedSeries((0, 2.0, -0.1)))


def compose_exact(g, h):
    """Coefficients of g(h(x)) as a full polynomial, in exact arithmetic."""
    out = [Fraction(0)] * (g.order * h.order + 1)
    power = [Fraction(1)]
    for n, c in enumerate(g.coeffs):
        if n:
            nxt = [Fraction(0)] * (len(power) + h.order)
            for i, a in enumerate(power):
                for j, b in enumerate(h.coeffs):
                    nxt[i + j] += a * b
            power = nxt
        for i, a in enumerate(power):
            out[i] += c * a
    return out


small_rational = st.fractions(min_value=-1, max_value=1, max_denominator=12)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(1, 4), max_value=2, max_denominator=12),
       st.lists(small_rational, min_size=1, max_size=9))
def test_round_trip_composition(a1, rest):
    h = TruncatedSeries((0, a1, *rest), kind="rational")
    N = h.order
    g = invert_series(h)
    comp = compose_exact(g, h)
    assert comp[: N + 1] == [0, 1] + [0] * (N - 1)
    # numerically: |g(h(x)) - x| is bounded by the tail of the composed polynomial
    gf = TruncatedSeries(tuple(float(c) for c in g.coeffs))
    hf = TruncatedSeries(tuple(float(c) for c in h.coeffs))
    for i in range(20):
        x = -0.3 + 0.6 * i / 19
        y = evaluate(hf, x)
        if abs(y) > 1:
            continue
        tail = sum(abs(float(d)) * abs(x) ** m for m, d in enumerate(comp) if m > N)
        assert abs(evaluate(gf, y) - x) <= tail * (1 + 1e-9) + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=3, max_size=12))
def test_roots_non_increasing_in_order(cs):
    f = TruncatedSeries((0.0, *cs))
    assume(evaluate(f, 1.0) > 1 + 1e-9)
    start = next(n for n in range(1, f.order + 1) if evaluate(f.truncate(n), 1.0) > 1 + 1e-9)
    roots = [solve_unit_level(f.truncate(n), 1e-13) for n in range(start, f.order + 1)]
    assert all(a >= b - 1e-12 for a, b in zip(roots, roots[1:]))
