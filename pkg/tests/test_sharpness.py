import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.linalg import eigh, eigh_tridiagonal

import oracle_values as O
from conftest import model
from warped_ineq import sharpness as S


def test_ground_state_examples():
    assert S.ground_state(model("euclidean", 3), 4.0) == pytest.approx(0.5, rel=1e-15)
    assert S.ground_state(model("hyperbolic", 3), 1.0) == pytest.approx(1 / math.sinh(1), rel=1e-15)
    small = S.ground_state(model("hyperbolic", 5), np.array([1e-3, 1e-4]))
    assert small[1] / small[0] == pytest.approx(10 ** 1.5, rel=1e-4)
    with pytest.raises(ValueError):
        S.ground_state(model("hyperbolic", 3), 0.0)


def test_ground_state_derivatives():
    m = model("gauss", 4, m=1)
    r = np.array([0.3, 1.0, 1.7])
    u, d1, d2 = S.ground_state_derivs(m, r)
    h = 1e-5
    f = lambda x: S.ground_state(m, x)
    assert np.allclose(d1, (f(r + h) - f(r - h)) / (2 * h), rtol=1e-7)
    assert np.allclose(d2, (f(r + h) - 2 * f(r) + f(r - h)) / h**2, rtol=1e-4)


@pytest.mark.parametrize(
    "fam,N,params,radii,tol",
    [
        ("hyperbolic", 5, {}, [0.5, 1, 2, 5], 1e-9),
        ("euclidean", 4, {}, [1.0], 1e-9),
        ("gauss", 3, {"m": 1}, [2.0], 1e-8),
    ],
)
def test_ground_state_residual_examples(fam, N, params, radii, tol):
    m = model(fam, N, **params)
    r = np.array(radii, dtype=float)
    res = S.ground_state_residual(m, r)
    u = S.ground_state(m, r)
    assert np.all(np.abs(res) <= tol * np.abs(u / r**2))


@given(
    st.sampled_from([("hyperbolic", {}), ("euclidean", {}), ("gauss", {"m": 1}), ("gauss", {"m": 2}), ("gauss", {"m": 3})]),
    st.integers(3, 10),
    st.floats(0.01, 12.0),
)
def test_ground_state_residual_property(fp, N, r):
    fam, params = fp
    if fam == "gauss":
        r = min(r, 2.0)
    m = model(fam, N, **params)
    assert abs(S.ground_state_residual(m, r)) <= 1e-8 * S.residual_scale(m, r)


def test_cutoff_examples():
    # middle branch n^-alpha (r - 1) with n^-alpha = 1e-2
    v, d = S.cutoff_phi(10, 2, 1.5)
    assert (float(v), float(d)) == pytest.approx((5e-3, 1e-2), rel=1e-15)
    v, d = S.cutoff_phi(10, 2, 20.0)
    assert (float(v), float(d)) == pytest.approx((2.5e-3, -2 * 20.0**-3), rel=1e-15)
    left = float(S.cutoff_phi(10, 2, 10.0)[0])
    right = float(S.cutoff_phi(10, 2, 10.0 + 1e-12)[0])
    assert left == pytest.approx(1e-2, rel=1e-15)
    assert right == pytest.approx(1e-2, rel=1e-10)
    assert S.cutoff_phi(10, 2, 0.5) == (0.0, 0.0)


def test_cutoff_errors():
    with pytest.raises(S.AlphaError):
        S.cutoff_phi(10, 1.0, 2.0)
    with pytest.raises(S.AlphaError):
        S.cutoff_phi(10, 1.5, 2.0, a=1.0)
    with pytest.raises(ValueError):
        S.cutoff_phi(2, 2.0, 2.0)


def test_closed_form_examples():
    c = S.closed_form_integrals(10, 2, 3)
    w = 4 * math.pi
    assert c["denom_bound"] / w == pytest.approx(1e-4 * (math.log(5) + 0.25), rel=1e-14)
    assert c["denom_bound"] / w == pytest.approx(1.859438e-4, rel=1e-6)
    assert c["grad_term"] / w == pytest.approx(2.5e-4, rel=1e-15)


def test_psi_bound_vanishes_relative_to_denominator():
    ratios = [S.closed_form_integrals(n, 2, 3) for n in (1e2, 1e4, 1e8, 1e16)]
    q = [c["psi_bound"] / c["denom_bound"] for c in ratios]
    assert all(b < a for a, b in zip(q, q[1:])) and q[-1] < 0.05


@pytest.mark.parametrize("n,alpha", sorted(O.SEQUENCE_INTEGRALS_N3))
def test_sequence_integrals_against_oracle(n, alpha):
    p = S.sequence_pieces(model("hyperbolic", 3), n, alpha)
    grad, den = O.SEQUENCE_INTEGRALS_N3[(n, alpha)]
    assert p.grad_term == pytest.approx(grad, rel=1e-10)
    assert p.denominator == pytest.approx(den, rel=1e-10)
    c = S.closed_form_integrals(n, alpha, 3)
    assert p.grad_term == pytest.approx(c["grad_term"], rel=1e-6)
    # the closed-form bound omits exactly int_1^2 phi^2/r dr = n^(-2 alpha)(ln 2 - 1/2)
    gap = 4 * math.pi * n ** (-2 * alpha) * (math.log(2) - 0.5)
    assert p.denominator - c["denom_bound"] == pytest.approx(gap, rel=1e-6)
    assert p.psi_term <= c["psi_bound"]


@pytest.mark.parametrize("N", [3, 4, 6])
def test_grad_term_independent_of_dimension(N):
    p = S.sequence_pieces(model("hyperbolic", N), 100, 2.0)
    c = S.closed_form_integrals(100, 2.0, N)
    assert p.grad_term == pytest.approx(c["grad_term"], rel=1e-6)


def test_sequence_quotient_oracle():
    q = S.sequence_quotient(model("hyperbolic", 3), 100, 2.0)
    assert q == pytest.approx(O.SEQUENCE_H3_N100_ALPHA2, rel=1e-10)


@pytest.mark.parametrize("N,n", [(3, 100), (3, 1000), (5, 100), (4, 1000)])
def test_sequence_identity(N, n):
    p = S.sequence_pieces(model("hyperbolic", N), n, 2.0)
    assert p.quotient == pytest.approx(S.sequence_identity_quotient(p, N), rel=1e-8)


def test_sequence_gauss_model():
    m = model("gauss", 3, m=1)
    with pytest.raises(S.AlphaError):
        S.sequence_pieces(m, 100, 2.0)  # a = 1 needs alpha > 2
    p = S.sequence_pieces(m, 100, 3.0)
    assert p.quotient > 0.25
    assert p.quotient == pytest.approx(S.sequence_identity_quotient(p, 3), rel=1e-8)


def test_sequence_decreasing_above_quarter():
    m = model("hyperbolic", 3)
    qs = [S.sequence_quotient(m, n) for n in (1e2, 1e3, 1e4, 1e5)]
    assert all(b < a for a, b in zip(qs, qs[1:]))
    assert min(qs) > 0.25


def test_sequence_requires_global_model():
    with pytest.raises(ValueError):
        S.sequence_pieces(model("exp_tail", 3, A=1, b=1, a=0, R=1), 100)


@pytest.mark.parametrize(
    "fam,N,params,lo,hi,k",
    [
        ("hyperbolic", 3, {}, 1e-6, 30.0, 1),
        ("hyperbolic", 5, {}, 0.01, 8.0, 2),
        ("hyperbolic", 8, {}, 1e-8, 100.0, 1),
        ("euclidean", 4, {}, 0.1, 50.0, 1),
        ("gauss", 3, {"m": 1}, 1e-4, 2.5, 3),
    ],
)
def test_ground_state_product_quotient_closed_form(fam, N, params, lo, hi, k):
    # u = u0 phi turns the first-order quotient into int phi'^2 r / int phi^2 / r,
    # which for phi = sin(w ln(r/lo)) is exactly w^2
    from warped_ineq.functionals import first_order_terms

    m = model(fam, N, **params)
    u = S.ground_state_product(m, lo, hi, k)
    rep = first_order_terms(m, u)
    q = (rep.lhs_total - rep.rhs["psi"]) / rep.denominator
    assert q == pytest.approx(0.25 + (k * math.pi / math.log(hi / lo)) ** 2, rel=1e-9)


def test_ground_state_product_shape():
    m = model("hyperbolic", 5)
    u = S.ground_state_product(m, 0.5, 4.0, 2)
    assert u.kind == "ground_state_product"
    assert np.all(u.value(np.array([0.1, 0.5, 4.0, 9.0])) == 0.0)
    r = np.array([0.7, 1.3, 2.9])
    h = 1e-5
    assert np.allclose(u.deriv1(r), (u.value(r + h) - u.value(r - h)) / (2 * h), rtol=1e-7)
    assert np.allclose(u.deriv2(r), (u.value(r + h) - 2 * u.value(r) + u.value(r - h)) / h**2, rtol=1e-4)
    # midpoint of the log-span is a node for k = 2
    assert abs(u.value(math.sqrt(0.5 * 4.0))) < 1e-14
    with pytest.raises(ValueError):
        S.ground_state_product(m, 0.0, 1.0)
    with pytest.raises(ValueError):
        S.ground_state_product(m, 1.0, 2.0, k=0)


def test_fit_synthetic():
    ns = [1e2, 1e3, 1e4, 1e5, 1e6]
    samples = [(n, 0.25 + 2 / (math.log(n / 2) + 0.25)) for n in ns]
    res = S.fit_limit(samples, 2.0)
    assert res.fitted_limit == pytest.approx(0.25, abs=1e-12)
    assert res.coefficients[1] == pytest.approx(2.0, rel=1e-10)
    res = S.fit_limit([(n, 0.3) for n in ns], 2.0)
    assert res.fitted_limit == pytest.approx(0.3, abs=1e-14)
    assert res.coefficients[1] == pytest.approx(0.0, abs=1e-12)


def test_fit_errors():
    with pytest.raises(S.FitError):
        S.fit_limit([(1e2, 1.0), (1e3, 0.9), (1e4, 0.8)])
    with pytest.raises(S.FitError):
        S.fit_limit([(1e2, 1.0), (1e3, 0.9), (1e3, 0.8), (1e4, 0.7)])


def test_sharpness_result_invariants():
    with pytest.raises(ValueError):
        S.SharpnessResult("sequence_quotient", [], 0.25, "", 0.0)
    with pytest.raises(ValueError):
        S.SharpnessResult("sequence_quotient", [(2, 1.0), (1, 1.0)], 0.25, "", 0.0)
    with pytest.raises(S.FitError):
        S.SharpnessResult("sequence_quotient", [(1, 1.0)], float("nan"), "", 0.0)


# --- spectral ---------------------------------------------------------------


def _dense_pencil(model_, target, R, G):
    # straightforward assembly without log-space tricks, as an oracle
    prof, N = model_.profile, model_.N
    eps = R / G
    r = np.linspace(eps, R, G + 1)
    h = r[1] - r[0]
    w = prof.psi((r[:-1] + r[1:]) / 2) ** (N - 1) / h
    n = G - 1
    A = np.zeros((n, n))
    for j in range(G):
        for a in (j - 1, j):
            for b in (j - 1, j):
                if 0 <= a < n and 0 <= b < n:
                    A[a, b] += w[j] * (1 if a == b else -1)
    x = r[1:-1]
    m = h * prof.psi(x) ** (N - 1)
    if target == "cm_quotient":
        lam = -2 * (-prof.ratio2(x)) - (N - 3) * (-prof.tangential(x))
        A -= np.diag((N - 1) / 4 * lam * m)
        m = m / x**2
    return eigh(A, np.diag(m), eigvals_only=True, subset_by_index=[0, 0])[0]


@pytest.mark.parametrize("target", ["poincare_gap", "cm_quotient"])
@pytest.mark.parametrize("N", [3, 5])
def test_spectral_matches_dense_oracle(target, N):
    m = model("hyperbolic", N)
    s = S.spectral_constant_estimate(m, target, 8.0, 300)
    assert s.eigenvalue == pytest.approx(_dense_pencil(m, target, 8.0, 300), rel=1e-9)


def test_sturm_bisection_matches_lapack():
    rng = np.random.default_rng(0)
    d = rng.uniform(1, 5, 500)
    e = rng.uniform(-1, 1, 499)
    ref = eigh_tridiagonal(d, e, select="i", select_range=(0, 0), eigvals_only=True)[0]
    assert S.smallest_eigenvalue(d, e) == pytest.approx(ref, rel=1e-11, abs=1e-12)
    assert S.sturm_count(d, e, ref + 1e-9) == 1
    assert S.sturm_count(d, e, ref - 1e-9) == 0


def test_poincare_gap_exact_for_n3():
    # N = 3: v = sinh(r) u turns the problem into -v'' = (lambda - 1) v on (eps, R)
    m = model("hyperbolic", 3)
    s = S.spectral_constant_estimate(m, "poincare_gap", 20.0, 4000)
    exact = 1 + math.pi**2 / (20.0 - s.eps) ** 2
    assert s.eigenvalue == pytest.approx(exact, rel=2e-4)
    assert s.eigenvalue == pytest.approx(1.0247, abs=5e-4)


def test_poincare_gap_decreasing_in_R():
    m = model("hyperbolic", 5)
    vals = [S.spectral_constant_estimate(m, "poincare_gap", R, 2000).eigenvalue for R in (10, 20, 30)]
    assert vals[0] > vals[1] > vals[2] > 4.0 - 0.05


def test_cm_quotient_sweep():
    res = S.spectral_sweep(model("hyperbolic", 3), "cm_quotient", [10, 20, 40, 80], 1000)
    vals = [v for _, v in res.samples]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert min(vals) >= 0.25
    assert len(set(res.meta["eps"])) == 1
    # continuum value on (eps, R) for N = 3 is 1/4 + pi^2/ln(R/eps)^2 up to discretization
    eps = res.meta["eps"][0]
    for R, v in res.samples:
        assert v == pytest.approx(0.25 + math.pi**2 / math.log(R / eps) ** 2, rel=0.02)


def test_spectral_errors():
    m = model("hyperbolic", 3)
    with pytest.raises(ValueError):
        S.spectral_constant_estimate(m, "poincare_gap", 1.0, 500)
    with pytest.raises(ValueError):
        S.spectral_constant_estimate(m, "poincare_gap", 10.0, 100)
    with pytest.raises(ValueError):
        S.spectral_constant_estimate(m, "nope", 10.0, 500)
    with pytest.raises(ValueError):
        S.spectral_constant_estimate(model("euclidean", 3), "cm_quotient", 10.0, 500)
    with pytest.raises(ValueError):
        S.spectral_constant_estimate(model("exp_tail", 3, A=1, b=1, a=0, R=1), "poincare_gap", 10.0, 500)


def test_grid_shift_small():
    shift, a, b = S.grid_shift(model("hyperbolic", 3), "poincare_gap", 25.0, 2000)
    assert shift < 5e-3 and b.grid_points == 4000 and a.eps == b.eps
