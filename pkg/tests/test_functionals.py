import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracle_values as O
from conftest import model
from warped_ineq import functionals as F
from warped_ineq.geometry import DimensionError, curvatures
from warped_ineq.testfunctions import ModalTestFunction, make_bump, make_spline, zero_function

bumps = st.builds(
    lambda c, w: make_bump(c, min(w, 0.9 * c)),
    st.floats(0.2, 8.0),
    st.floats(0.05, 1.5),
)


def _recomputable(rep):
    assert rep.lhs_total == pytest.approx(math.fsum(rep.lhs.values()), rel=1e-15)
    assert rep.margin == pytest.approx(rep.lhs_total - rep.rhs_total, rel=1e-15, abs=1e-300)


# --- oracle values ----------------------------------------------------------


def test_first_order_oracle():
    rep = F.first_order_terms(model("hyperbolic", 3), make_bump(3, 1))
    ref = O.FIRST_ORDER_H3_BUMP_3_1
    assert rep.lhs["grad"] == pytest.approx(ref["grad"], rel=1e-10)
    assert -rep.lhs["lambda"] == pytest.approx(ref["lambda"], rel=1e-10)
    assert rep.rhs["hardy"] == pytest.approx(ref["denominator"] / 4, rel=1e-10)
    assert rep.rhs["psi"] == 0.0
    assert rep.denominator == pytest.approx(ref["denominator"], rel=1e-10)
    assert rep.margin > 0 and rep.passed
    _recomputable(rep)


def test_euclidean_term_identity():
    # with psi = r the hardy and psi terms combine to (N-2)^2/4 int u^2/r^2
    rep = F.first_order_terms(model("euclidean", 4), make_bump(2, 1))
    ref = O.EUCLID4_BUMP_2_1
    assert rep.lhs["lambda"] == 0.0
    assert rep.rhs["hardy"] + rep.rhs["psi"] == pytest.approx(ref["u2_over_r2"], rel=1e-10)
    assert rep.lhs["grad"] == pytest.approx(ref["grad"], rel=1e-10)
    assert rep.margin >= 0


@given(bumps, st.integers(3, 9))
def test_euclidean_term_identity_property(u, N):
    rep = F.first_order_terms(model("euclidean", N), u)
    assert rep.rhs["hardy"] + rep.rhs["psi"] == pytest.approx((N - 2) ** 2 / 4 * rep.denominator, rel=1e-9)


def test_rellich_oracle_and_coefficient():
    rep = F.rellich_terms(model("hyperbolic", 8), make_bump(2, 0.5))
    ref = O.RELLICH_H8_BUMP_2_05
    assert rep.lhs["bilap"] == pytest.approx(ref["bilap"], rel=1e-9)
    assert -rep.lhs["poincare4"] == pytest.approx((7 / 2) ** 4 * ref["u2"], rel=1e-10)
    assert rep.rhs["rellich"] == pytest.approx(ref["u2_over_r4"], rel=1e-10)
    assert rep.coefficients["rellich"] == 1.0 > 9 / 16
    assert rep.margin > 0


def test_gradient_mode_one_oracle():
    m = model("hyperbolic", 5)
    rep = F.gradient_inequality_terms(m, ModalTestFunction(((1, make_bump(2, 1)),)))
    ref = O.GRADIENT_MODE1_H5_BUMP_2_1
    assert rep.lhs["bilap"] == pytest.approx(ref["bilap"], rel=1e-9)
    assert -rep.lhs["poincare2"] == pytest.approx(4 * ref["grad2"], rel=1e-10)
    assert rep.rhs["hardy"] == pytest.approx(ref["grad2_over_r2"] / 4, rel=1e-10)
    assert rep.margin > 0


# --- structural identities ---------------------------------------------------


@pytest.mark.parametrize("N", [3, 5, 8])
def test_first_order_forms_agree_on_hyperbolic(N):
    m, u = model("hyperbolic", N), make_bump(2, 1)
    a, b = F.first_order_terms(m, u), F.first_order_poincare_terms(m, u)
    assert a.margin == pytest.approx(b.margin, rel=1e-13)


def test_modal_radial_consistency():
    m, u = model("hyperbolic", 5), make_bump(2.5, 0.8)
    g = F.gradient_inequality_terms(m, ModalTestFunction(((0, u),)))
    s = F.second_order_explicit_terms(m, u)
    assert g.lhs["bilap"] == pytest.approx(s.lhs["bilap"], rel=1e-10)
    assert g.lhs["poincare2"] == pytest.approx(s.lhs["poincare"], rel=1e-10)
    assert g.rhs["hardy"] == pytest.approx(s.rhs["hardy"], rel=1e-10)
    assert g.rhs["psi"] == pytest.approx(s.rhs["psi"], rel=1e-10)


@pytest.mark.parametrize("N", [3, 4, 5])
def test_second_order_bracket_constant(N):
    m = model("hyperbolic", N)
    r = np.linspace(0.1, 20, 100)
    k, h, lam = curvatures(m, r)
    assert np.allclose(lam + 4 * (k - h), N - 1, rtol=0, atol=1e-12)


def test_euclidean_second_order_mixed_vanishes():
    rep = F.second_order_radial_terms(model("euclidean", 5), make_bump(2, 1))
    assert rep.lhs["mixed"] == 0.0 and rep.margin >= 0


@pytest.mark.parametrize("N,beta", [(5, 0.0), (6, 0.0), (6, 1.0), (8, 3.5)])
def test_rad_lap_radial_equality(N, beta):
    rep = F.rad_lap_compare(model("hyperbolic", N), ModalTestFunction(((0, make_bump(2, 1)),)), beta)
    assert rep.margin == 0.0


def test_rad_lap_strict_for_mode_one():
    rep = F.rad_lap_compare(model("hyperbolic", 6), ModalTestFunction(((1, make_bump(2, 1)),)), 1.0)
    assert rep.margin > 10 * rep.quadrature_error


def test_rad_lap_accepts_radial_function():
    rep = F.rad_lap_compare(model("hyperbolic", 6), make_bump(2, 1), 0.0)
    assert rep.margin == 0.0


def test_weighted_hardy_coefficient():
    rep = F.weighted_hardy_check(model("hyperbolic", 9), make_bump(2, 1), 2.0)
    assert rep.coefficients["hardy"] == 9 / 4
    assert rep.margin > 0


@pytest.mark.parametrize(
    "fn,args",
    [
        (F.first_order_terms, ("hyperbolic", 3)),
        (F.second_order_radial_terms, ("hyperbolic", 4)),
        (F.rellich_terms, ("hyperbolic", 5)),
        (F.use_cor_3_terms, ("hyperbolic", 6)),
        (F.vhn_radial_hardy_terms, ("euclidean", 6)),
    ],
)
def test_zero_input(fn, args):
    rep = fn(model(*args), zero_function((1.0, 2.0)))
    assert all(v == 0 for v in rep.terms.values())
    assert rep.margin == 0 and rep.quotient is None and rep.passed


def test_zero_modal_and_line():
    assert F.gradient_inequality_terms(model("hyperbolic", 5), ModalTestFunction(((0, zero_function()),))).margin == 0
    assert F.one_dim_hardy_check(zero_function()).margin == 0
    assert F.weighted_hardy_check(model("hyperbolic", 6), zero_function(), 0.0).margin == 0


# --- errors and tagging -----------------------------------------------------


@pytest.mark.parametrize("fn", [F.rellich_terms, F.use_cor_3_terms, F.vhn_radial_hardy_terms])
def test_dimension_errors(fn):
    with pytest.raises(DimensionError, match="N >= 5"):
        fn(model("hyperbolic", 4), make_bump(2, 1))


def test_gradient_errors():
    with pytest.raises(DimensionError):
        F.gradient_inequality_terms(model("hyperbolic", 4), ModalTestFunction(((0, make_bump(2, 1)),)))
    with pytest.raises(ValueError):
        F.gradient_inequality_terms(model("hyperbolic", 5), ModalTestFunction(()))


@pytest.mark.parametrize("beta", [-0.5, 2.0, 3.0])
def test_beta_range(beta):
    with pytest.raises(F.BetaRangeError):
        F.rad_lap_compare(model("hyperbolic", 6), make_bump(2, 1), beta)
    with pytest.raises(F.BetaRangeError):
        F.weighted_hardy_check(model("hyperbolic", 6), make_bump(2, 1), beta)


def test_out_of_hypothesis_tag():
    rep = F.first_order_poincare_terms(model("euclidean", 3), make_bump(2, 1))
    assert not rep.hypothesis_ok
    assert "out-of-hypothesis" in rep.hypothesis_notes
    assert F.first_order_poincare_terms(model("hyperbolic", 3), make_bump(2, 1)).hypothesis_ok


def test_prototype_errors():
    tail = model("exp_tail", 3, A=1, b=1, a=0, R=2)
    with pytest.raises(F.SupportError):
        F.prototype_inequality_terms(tail, make_bump(2, 0.5), "proto")
    with pytest.raises(ValueError):
        F.prototype_inequality_terms(tail, make_bump(3, 0.5), "gauss")
    with pytest.raises(ValueError):
        F.prototype_inequality_terms(tail, make_bump(3, 0.5), "proto3")
    with pytest.raises(F.SupportError):
        F.first_order_terms(tail, make_bump(2, 0.5))


def test_prototype_examples():
    rep = F.prototype_inequality_terms(model("exp_tail", 3, A=1, b=1, a=0, R=1), make_bump(3, 1), "proto")
    assert rep.inequality_id == "proto_exp"
    assert rep.coefficients["poincare"] == 1.0
    rep = F.prototype_inequality_terms(model("r_exp_tail", 4, A=1, b=1, a=-1, R=1), make_bump(3, 1), "proto2")
    assert rep.coefficients == {"hardy": 1.0, "poincare": 0.0, "lower": 0.0}
    rep = F.prototype_inequality_terms(model("gauss", 4, m=1), make_bump(2, 0.5), "gauss")
    assert rep.coefficients == {"hardy": 1.0, "poincare": 9.0, "lower": 12.0}
    assert rep.margin >= -rep.slack


@pytest.mark.parametrize(
    "fam,which,N,params,u",
    [
        ("exp_tail", "proto", 4, dict(A=1.5, b=0.7, a=0.5, R=1), make_bump(3, 1)),
        ("r_exp_tail", "proto2", 5, dict(A=1.0, b=0.4, a=0.3, R=1), make_bump(3, 1)),
        ("gauss", "gauss", 3, dict(m=2), make_bump(1.0, 0.5)),
        ("gauss", "gauss", 5, dict(m=1), make_bump(1.0, 0.5)),
    ],
)
def test_prototype_rhs_equals_first_order_rhs(fam, which, N, params, u):
    # the prototype statements are the first-order one with Lambda written out;
    # the 1/psi^2 pieces cancel exactly
    m = model(fam, N, **params)
    p = F.prototype_inequality_terms(m, u, which)
    f = F.first_order_terms(m, u)
    assert p.rhs_total == pytest.approx(-f.lhs["lambda"] + f.rhs_total, rel=1e-9)


def test_report_serialisation():
    rep = F.first_order_terms(model("hyperbolic", 3), make_bump(2, 1))
    d = rep.to_dict()
    assert d["inequality_id"] == "first_order"
    assert d["margin"] == rep.margin
    assert set(d["terms"]) == {"grad", "lambda", "hardy", "psi"}


def test_catalog_covers_all_ids():
    assert set(F.CATALOG) == {
        "first_order", "first_order_poincare", "second_order_radial", "second_order_explicit",
        "rellich", "gradient", "use_cor_3", "rad_lap", "weighted_hardy", "one_dim_hardy",
        "vhn_radial_hardy", "proto_exp", "proto_rexp", "proto_gauss",
    }


# --- non-negativity properties ---------------------------------------------


@given(bumps, st.sampled_from([3, 4, 5, 8]))
def test_first_order_nonnegative(u, N):
    for fn in (F.first_order_terms, F.first_order_poincare_terms):
        rep = fn(model("hyperbolic", N), u)
        assert rep.margin >= -rep.slack


@given(bumps, st.sampled_from([3, 5]))
def test_first_order_nonnegative_gauss(u, N):
    rep = F.first_order_terms(model("gauss", N, m=1), u)
    assert rep.margin >= -rep.slack
    rep = F.first_order_poincare_terms(model("gauss", N, m=1), u)
    assert rep.hypothesis_ok and rep.margin >= -rep.slack


@given(bumps, st.sampled_from([3, 4, 6]), st.sampled_from(["hyperbolic", "euclidean"]))
def test_second_order_nonnegative(u, N, fam):
    rep = F.second_order_radial_terms(model(fam, N), u)
    assert rep.margin >= -rep.slack


@given(bumps, st.sampled_from([5, 6, 8]))
def test_fourth_order_nonnegative(u, N):
    m = model("hyperbolic", N)
    for fn in (F.rellich_terms, F.use_cor_3_terms, F.second_order_explicit_terms, F.vhn_radial_hardy_terms):
        rep = fn(m, u)
        assert rep.margin >= -rep.slack


@given(st.lists(st.tuples(st.integers(0, 3), bumps), min_size=1, max_size=3, unique_by=lambda t: t[0]))
def test_gradient_nonnegative(modes):
    rep = F.gradient_inequality_terms(model("hyperbolic", 5), ModalTestFunction(tuple(modes)))
    assert rep.margin >= -rep.slack


@given(bumps, st.sampled_from([(6, 0.0), (6, 1.5), (8, 3.0), (9, 2.0)]))
def test_weighted_hardy_nonnegative(u, nb):
    N, beta = nb
    rep = F.weighted_hardy_check(model("hyperbolic", N), u, beta)
    assert rep.margin >= -rep.slack


@given(bumps)
def test_one_dim_hardy_nonnegative(u):
    rep = F.one_dim_hardy_check(u)
    assert rep.margin >= -rep.slack


@given(st.floats(1.5, 6.0), st.floats(0.3, 0.9))
def test_spline_inputs(c, w):
    u = make_spline(c - w, c + w, power=4)
    for fn, N in ((F.first_order_terms, 3), (F.second_order_radial_terms, 4), (F.rellich_terms, 6)):
        rep = fn(model("hyperbolic", N), u)
        assert rep.margin >= -rep.slack
