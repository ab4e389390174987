import json
import math

import pytest

from gtbounds.bound_pipeline import (WorkflowConditionError, check_workflow_conditions, compute_upper_bound,
                                     krivine_radius, krivine_reference)
from gtbounds.concepts import ConceptSpec, h_series
from gtbounds.errors import DegenerateConceptError
from gtbounds.power_series import evaluate, invert_series

EVEN = ConceptSpec("tabulated", breakpoints=(-0.6744897501960817, 0.6744897501960817), values=(1, -1, 1))


@pytest.fixture(scope="module")
def sign41():
    return compute_upper_bound(ConceptSpec("sign"), 41, 1e-10)


def test_krivine_reference(oracle):
    k = krivine_reference()
    assert k == pytest.approx(oracle["krivine_bound"], rel=1e-15)
    assert round(k, 3) == 1.782
    assert math.pi / 2 < k < math.sinh(math.pi / 2)
    assert krivine_radius() * k == pytest.approx(1.0, rel=1e-15)


def test_sign_bound_reproduces_krivine(sign41):
    assert sign41.status == "ok"
    assert abs(sign41.bound - krivine_reference()) < 1e-9
    assert sign41.r_star == pytest.approx(krivine_radius(), abs=1e-10)
    assert all(sign41.condition_flags[k] for k in
               ("H_zero_at_0", "H_monotone_numeric", "RA_beta_real", "PI1_satisfied", "RA_l1_plausible"))
    assert sign41.inverted_object == "h"


def test_report_invariants(sign41):
    assert 0 < sign41.r_star < 1
    assert sign41.bound == 1 / sign41.r_star
    assert sign41.bound >= 1
    roots = [r for _, r in sign41.roots if r is not None]
    assert all(a >= b for a, b in zip(roots, roots[1:]))
    assert sign41.diagnostics["roots_non_increasing"]
    assert math.pi / 2 < sign41.bound < math.sinh(math.pi / 2)


def test_self_consistency(sign41):
    assert abs(evaluate(sign41.majorant, sign41.r_star) - 1) <= 1e-10
    h = h_series(ConceptSpec("sign"), 41)
    g = sign41.beta
    for i in range(21):
        x = -0.3 + 0.03 * i
        # both series converge geometrically here; the truncation tail is far below 1e-12
        assert abs(evaluate(g, evaluate(h, x)) - x) < 1e-12


def test_low_order_truncation_underreports(sign41, oracle):
    # dropping non-negative majorant terms raises the root, so the bound drops
    rep5 = compute_upper_bound(ConceptSpec("sign"), 5)
    assert rep5.bound == pytest.approx(oracle["sign_bound_order5"], rel=1e-12)
    assert rep5.bound < sign41.bound
    assert rep5.bound < 1.78221


def test_report_serialization(sign41):
    d = json.loads(sign41.to_json())
    assert d["schema_version"] == "1"
    assert d["bound"] == sign41.bound
    assert d["concept"]["kind"] == "sign"
    assert "certified only in the limit" in d["tail_note"]
    assert len(d["beta"]) == 42
    csv = sign41.roots_csv().splitlines()
    assert csv[0] == "N,r_N,bound_N"
    n, r, b = csv[-1].split(",")
    assert int(n) == 41 and float(b) == sign41.bound


def test_threshold_runs_and_flags_l1_growth():
    rep = compute_upper_bound(ConceptSpec("threshold", p=0.7))
    assert rep.inverted_object == "pearson_normalized_h"
    assert rep.condition_flags["H_zero_at_0"]
    assert rep.order == 60
    assert not rep.condition_flags["RA_l1_plausible"]
    assert rep.status == "l1_divergence_suspected"
    assert rep.diagnostics["beta_growth_rate"] > 1


def test_threshold_half_matches_sign_in_floats():
    rep = compute_upper_bound(ConceptSpec("threshold", p=0.5), 41)
    assert rep.bound == pytest.approx(krivine_reference(), rel=1e-9)


def test_vanishing_linear_coefficient_is_reported():
    chk = check_workflow_conditions(EVEN, 20)
    assert not chk.flags["alpha1_nonzero"]
    assert not chk.inversion_ready
    assert "skipped" in chk.diagnostics["inversion"]
    with pytest.raises(WorkflowConditionError) as info:
        compute_upper_bound(EVEN, 20)
    assert info.value.check is not None


def test_workflow_check_sign():
    chk = check_workflow_conditions(ConceptSpec("sign"), 41)
    assert chk.inversion_ready and chk.flags["RA_l1_plausible"]
    assert chk.diagnostics["l1_partial_sums"][-1] == pytest.approx(math.sinh(math.pi / 2), rel=1e-12)
    with pytest.raises(ValueError):
        check_workflow_conditions(ConceptSpec("sign"), 2)


def test_degenerate_concept_propagates():
    with pytest.raises(DegenerateConceptError):
        compute_upper_bound(ConceptSpec("threshold", p=1e-17), 10)


def test_order_precondition():
    with pytest.raises(ValueError):
        compute_upper_bound(ConceptSpec("sign"), 4)


def test_beta_matches_direct_inversion(sign41):
    assert sign41.beta == invert_series(h_series(ConceptSpec("sign"), 41))
