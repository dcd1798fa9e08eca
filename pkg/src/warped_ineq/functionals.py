"""Term-by-term evaluation of the Poincare/Hardy/Rellich-type inequalities.

Every function returns an :class:`InequalityReport` whose ``lhs`` and ``rhs``
maps hold the signed contributions of each side, so

    margin = sum(lhs.values()) - sum(rhs.values())

Volume integrals of radial integrands are omega_N * int g psi^(N-1) dr.
Modal inputs use P_n normalised to mean square one on the sphere, so a single
n = 0 mode with coefficient u is the radial function u itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import (
    DimensionError,
    ManifoldModel,
    curvatures,
    modal_laplacian,
    radial_laplacian,
    sphere_eigenvalue,
)
from .profiles import check_con3, check_curvature_bound
from .quadrature import DEFAULT_SPEC, POLE_EPS, ZERO, QuadResult, integrate, integrate_weighted
from .testfunctions import ModalTestFunction, RadialTestFunction

# Coefficient of the 1/r^2 Hardy remainder in the first-order family.
# Module level so a test can falsify it and watch the suite fail.
HARDY_CONSTANT = 0.25

SLACK_FACTOR = 10.0


class SupportError(ValueError):
    pass


class BetaRangeError(ValueError):
    pass


@dataclass
class InequalityReport:
    inequality_id: str
    model: str
    N: Optional[int]
    lhs: dict
    rhs: dict
    coefficients: dict = field(default_factory=dict)
    denominator: Optional[float] = None
    quadrature_error: float = 0.0
    converged: bool = True
    hypothesis_ok: bool = True
    hypothesis_notes: list = field(default_factory=list)
    test_function: str = ""
    params: dict = field(default_factory=dict)

    @property
    def lhs_total(self):
        return math.fsum(self.lhs.values())

    @property
    def rhs_total(self):
        return math.fsum(self.rhs.values())

    @property
    def margin(self):
        return self.lhs_total - self.rhs_total

    @property
    def quotient(self):
        if not self.denominator:
            return None
        return self.lhs_total / self.denominator

    @property
    def slack(self):
        return SLACK_FACTOR * self.quadrature_error

    @property
    def passed(self):
        return self.margin >= -self.slack

    @property
    def terms(self):
        return {**self.lhs, **self.rhs}

    def to_dict(self):
        return {
            "inequality_id": self.inequality_id,
            "model": self.model,
            "N": self.N,
            "params": self.params,
            "test_function": self.test_function,
            "terms": self.terms,
            "coefficients": self.coefficients,
            "lhs_total": self.lhs_total,
            "rhs_total": self.rhs_total,
            "margin": self.margin,
            "quotient": self.quotient,
            "error": self.quadrature_error,
            "converged": self.converged,
            "hypothesis_ok": self.hypothesis_ok,
            "hypothesis_notes": list(self.hypothesis_notes),
            "passed": self.passed,
        }


class _Acc:
    """Collects integrals with their coefficients and error bounds."""

    def __init__(self):
        self.error = 0.0
        self.converged = True

    def __call__(self, coeff, res: QuadResult):
        self.error += abs(coeff) * res.error
        self.converged &= res.converged
        return coeff * res.value


def _support(f):
    return f.support


def _hypotheses(model, support, needs):
    notes = []
    if not needs:
        return True, notes
    lo, hi = support
    lo = max(lo, model.profile.valid_from, POLE_EPS * 1e6)
    r = np.linspace(lo, hi, 65)
    ok = True
    if "con2" in needs:
        rep = check_curvature_bound(model, r)
        if not rep.passed:
            ok = False
            notes.append(f"K_rad <= -1 fails (worst psi''/psi - 1 = {rep.worst_margin:.3g} at r={rep.worst_radius:.3g})")
    if "con3" in needs:
        rep = check_con3(model, r)
        if not rep.passed:
            ok = False
            notes.append(f"K_rad >= H_tan fails (worst {rep.worst_margin:.3g} at r={rep.worst_radius:.3g})")
    if not ok:
        notes.append("out-of-hypothesis")
    return ok, notes


def _check_support(model, u):
    lo, _ = u.support
    vf = model.profile.valid_from
    if vf > 0 and lo < vf:
        raise SupportError(f"{model.profile.name}: test function support starts at {lo:g} < R = {vf:g}")


def _vol(model, g, u, spec):
    lo, hi = u.support
    return integrate_weighted(model, g, lo, hi, spec, points=u.breakpoints)


def _report(iid, model, u, lhs, rhs, acc, coefficients, denominator, needs=(), **extra):
    ok, notes = _hypotheses(model, u.support, needs) if model is not None else (True, [])
    return InequalityReport(
        inequality_id=iid,
        model=model.name if model is not None else "line",
        N=model.N if model is not None else None,
        lhs=lhs,
        rhs=rhs,
        coefficients=coefficients,
        denominator=denominator,
        quadrature_error=acc.error,
        converged=acc.converged,
        hypothesis_ok=ok,
        hypothesis_notes=notes,
        test_function=getattr(u, "label", "") or "modal",
        params={**(model.profile.params if model is not None else {}), **extra},
    )


def _lambda(model, r):
    return curvatures(model, r)[2]


# --- first order ------------------------------------------------------------


def first_order_terms(model: ManifoldModel, u: RadialTestFunction, spec=DEFAULT_SPEC):
    """int u_r^2 - (N-1)/4 int Lambda u^2  >=  1/4 int u^2/r^2 + (N-1)(N-3)/4 int u^2/psi^2."""
    _check_support(model, u)
    N, prof, acc = model.N, model.profile, _Acc()
    c_lam = (N - 1) / 4
    c_psi = (N - 1) * (N - 3) / 4
    grad = acc(1.0, _vol(model, lambda r: u.deriv1(r) ** 2, u, spec))
    lam = acc(c_lam, _vol(model, lambda r: _lambda(model, r) * u.value(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.value(r) ** 2 / r**2, u, spec)
    hardy = acc(HARDY_CONSTANT, den)
    psi = acc(c_psi, _vol(model, lambda r: u.value(r) ** 2 * prof.inv_psi_sq(r), u, spec))
    return _report(
        "first_order",
        model,
        u,
        {"grad": grad, "lambda": -lam},
        {"hardy": hardy, "psi": psi},
        acc,
        {"lambda": c_lam, "hardy": HARDY_CONSTANT, "psi": c_psi},
        den.value,
    )


def first_order_poincare_terms(model, u, spec=DEFAULT_SPEC):
    """Same as first_order with (N-1)/4 Lambda replaced by ((N-1)/2)^2."""
    _check_support(model, u)
    N, prof, acc = model.N, model.profile, _Acc()
    c_poin = ((N - 1) / 2) ** 2
    c_psi = (N - 1) * (N - 3) / 4
    grad = acc(1.0, _vol(model, lambda r: u.deriv1(r) ** 2, u, spec))
    poin = acc(c_poin, _vol(model, lambda r: u.value(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.value(r) ** 2 / r**2, u, spec)
    hardy = acc(HARDY_CONSTANT, den)
    psi = acc(c_psi, _vol(model, lambda r: u.value(r) ** 2 * prof.inv_psi_sq(r), u, spec))
    return _report(
        "first_order_poincare",
        model,
        u,
        {"grad": grad, "poincare": -poin},
        {"hardy": hardy, "psi": psi},
        acc,
        {"poincare": c_poin, "hardy": HARDY_CONSTANT, "psi": c_psi},
        den.value,
        needs=("con2",),
    )


# --- second order, radial ---------------------------------------------------


def _bilap_radial(model, u, spec, weight=None):
    w = weight or (lambda r: 1.0)
    return _vol(model, lambda r: radial_laplacian(model, u, r) ** 2 * w(r), u, spec)


def second_order_radial_terms(model, u, spec=DEFAULT_SPEC):
    """int (Delta_r u)^2 - (N-1)/4 int [Lambda + 4(K - H)] u_r^2
    >= 1/4 int u_r^2/r^2 + (N^2-1)/4 int u_r^2/psi^2."""
    _check_support(model, u)
    N, prof, acc = model.N, model.profile, _Acc()

    def bracket(r):
        k, h, lam = curvatures(model, r)
        return lam + 4.0 * (k - h)

    c_mixed = (N - 1) / 4
    c_psi = (N * N - 1) / 4
    bilap = acc(1.0, _bilap_radial(model, u, spec))
    mixed = acc(c_mixed, _vol(model, lambda r: bracket(r) * u.deriv1(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.deriv1(r) ** 2 / r**2, u, spec)
    hardy = acc(HARDY_CONSTANT, den)
    psi = acc(c_psi, _vol(model, lambda r: u.deriv1(r) ** 2 * prof.inv_psi_sq(r), u, spec))
    return _report(
        "second_order_radial",
        model,
        u,
        {"bilap": bilap, "mixed": -mixed},
        {"hardy": hardy, "psi": psi},
        acc,
        {"mixed": c_mixed, "hardy": HARDY_CONSTANT, "psi": c_psi},
        den.value,
    )


def second_order_explicit_terms(model, u, spec=DEFAULT_SPEC):
    """Second-order statement with the bracket bounded below by N-1 (needs con2, con3)."""
    _check_support(model, u)
    N, prof, acc = model.N, model.profile, _Acc()
    c_poin = ((N - 1) / 2) ** 2
    c_psi = (N * N - 1) / 4
    bilap = acc(1.0, _bilap_radial(model, u, spec))
    poin = acc(c_poin, _vol(model, lambda r: u.deriv1(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.deriv1(r) ** 2 / r**2, u, spec)
    hardy = acc(HARDY_CONSTANT, den)
    psi = acc(c_psi, _vol(model, lambda r: u.deriv1(r) ** 2 * prof.inv_psi_sq(r), u, spec))
    return _report(
        "second_order_explicit",
        model,
        u,
        {"bilap": bilap, "poincare": -poin},
        {"hardy": hardy, "psi": psi},
        acc,
        {"poincare": c_poin, "hardy": HARDY_CONSTANT, "psi": c_psi},
        den.value,
        needs=("con2", "con3"),
    )


def rellich_terms(model, u, spec=DEFAULT_SPEC):
    """int (Delta u)^2 - ((N-1)/2)^4 int u^2 >= (N-4)^2/16 int u^2/r^4 + (N-1)^2/16 int u^2/r^2."""
    model.require_dimension(5, "rellich")
    _check_support(model, u)
    N, acc = model.N, _Acc()
    c_poin = ((N - 1) / 2) ** 4
    c_rel = (N - 4) ** 2 / 16
    c_h2 = (N - 1) ** 2 / 16
    bilap = acc(1.0, _bilap_radial(model, u, spec))
    poin = acc(c_poin, _vol(model, lambda r: u.value(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.value(r) ** 2 / r**4, u, spec)
    rel = acc(c_rel, den)
    h2 = acc(c_h2, _vol(model, lambda r: u.value(r) ** 2 / r**2, u, spec))
    return _report(
        "rellich",
        model,
        u,
        {"bilap": bilap, "poincare4": -poin},
        {"rellich": rel, "hardy2": h2},
        acc,
        {"poincare4": c_poin, "rellich": c_rel, "hardy2": c_h2},
        den.value,
        needs=("con2", "con3"),
    )


def use_cor_3_terms(model, u, spec=DEFAULT_SPEC):
    """Fourth-order Poincare bound with four remainder terms (N >= 5, con2, con3)."""
    model.require_dimension(5, "use_cor_3")
    _check_support(model, u)
    N, prof, acc = model.N, model.profile, _Acc()
    c = {
        "poincare4": ((N - 1) / 2) ** 4,
        "hardy_u": (N - 1) ** 2 / 16,
        "psi_u": (N - 1) ** 3 * (N - 3) / 16,
        "hardy_du": HARDY_CONSTANT,
        "psi_du": (N * N - 1) / 4,
    }
    bilap = acc(1.0, _bilap_radial(model, u, spec))
    poin = acc(c["poincare4"], _vol(model, lambda r: u.value(r) ** 2, u, spec))
    den = _vol(model, lambda r: u.value(r) ** 2 / r**2, u, spec)
    rhs = {
        "hardy_u": acc(c["hardy_u"], den),
        "psi_u": acc(c["psi_u"], _vol(model, lambda r: u.value(r) ** 2 * prof.inv_psi_sq(r), u, spec)),
        "hardy_du": acc(c["hardy_du"], _vol(model, lambda r: u.deriv1(r) ** 2 / r**2, u, spec)),
        "psi_du": acc(c["psi_du"], _vol(model, lambda r: u.deriv1(r) ** 2 * prof.inv_psi_sq(r), u, spec)),
    }
    return _report(
        "use_cor_3", model, u, {"bilap": bilap, "poincare4": -poin}, rhs, acc, c, den.value,
        needs=("con2", "con3"),
    )


# --- modal ------------------------------------------------------------------


def _as_modal(u):
    if isinstance(u, ModalTestFunction):
        return u
    return ModalTestFunction(((0, u),))


def _modal_support(u):
    lo = min(a.support[0] for _, a in u.modes)
    hi = max(a.support[1] for _, a in u.modes)
    return lo, hi


class _ModalView:
    # adapter giving a modal function the attributes _report expects
    def __init__(self, u):
        self.support = _modal_support(u)
        self.label = "+".join(f"{n}:{getattr(a, 'label', '')}" for n, a in u.modes)


def _grad_sq(model, n, a):
    lam = sphere_eigenvalue(n, model.N)
    prof = model.profile
    if lam == 0:
        return lambda r: a.deriv1(r) ** 2
    return lambda r: a.deriv1(r) ** 2 + lam * a.value(r) ** 2 * prof.inv_psi_sq(r)


def gradient_inequality_terms(model, u, spec=DEFAULT_SPEC):
    """int (Delta_g u)^2 - ((N-1)/2)^2 int |grad u|^2
    >= 1/4 int |grad u|^2/r^2 + (N^2-1)/4 int |grad u|^2/psi^2."""
    model.require_dimension(5, "gradient")
    u = _as_modal(u)
    if not u.modes:
        raise ValueError("modal test function needs at least one mode")
    N, prof, acc = model.N, model.profile, _Acc()
    c_poin = ((N - 1) / 2) ** 2
    c_psi = (N * N - 1) / 4
    bilap = poin = hardy = psi = 0.0
    den = 0.0
    for n, a in u.modes:
        _check_support(model, a)
        g2 = _grad_sq(model, n, a)
        bilap += acc(1.0, _vol(model, lambda r: modal_laplacian(model, a, n, r) ** 2, a, spec))
        poin += acc(c_poin, _vol(model, g2, a, spec))
        d = _vol(model, lambda r: g2(r) / r**2, a, spec)
        den += d.value
        hardy += acc(HARDY_CONSTANT, d)
        psi += acc(c_psi, _vol(model, lambda r: g2(r) * prof.inv_psi_sq(r), a, spec))
    return _report(
        "gradient",
        model,
        _ModalView(u),
        {"bilap": bilap, "poincare2": -poin},
        {"hardy": hardy, "psi": psi},
        acc,
        {"poincare2": c_poin, "hardy": HARDY_CONSTANT, "psi": c_psi},
        den,
        needs=("con2", "con3"),
    )


def _check_beta(model, beta):
    if not (0 <= beta < model.N - 4):
        raise BetaRangeError(f"need 0 <= beta < N - 4 = {model.N - 4}, got beta = {beta}")


def rad_lap_compare(model, u, beta=0.0, spec=DEFAULT_SPEC):
    """int (Delta_g u)^2 r^-beta  >=  int (Delta_r u)^2 r^-beta, equality for radial u."""
    _check_beta(model, beta)
    u = _as_modal(u)
    acc = _Acc()
    lhs = rhs = 0.0
    w = lambda r: r ** (-beta)
    for n, a in u.modes:
        _check_support(model, a)
        lhs += acc(1.0, _vol(model, lambda r: modal_laplacian(model, a, n, r) ** 2 * w(r), a, spec))
        rhs += acc(1.0, _vol(model, lambda r: radial_laplacian(model, a, r) ** 2 * w(r), a, spec))
    return _report(
        "rad_lap",
        model,
        _ModalView(u),
        {"full": lhs},
        {"radial": rhs},
        acc,
        {},
        rhs,
        needs=("con2",),
        beta=beta,
    )


def weighted_hardy_check(model, f, beta=0.0, spec=DEFAULT_SPEC):
    """int f'^2 r^-beta psi^(N-3) dr >= (N-beta-4)^2/4 int f^2 r^-beta psi^(N-5) dr."""
    _check_beta(model, beta)
    _check_support(model, f)
    N, prof, acc = model.N, model.profile, _Acc()
    lo, hi = max(f.support[0], POLE_EPS), f.support[1]
    c = (N - beta - 4) ** 2 / 4
    lhs = acc(
        1.0,
        integrate(lambda r: f.deriv1(r) ** 2 * r ** (-beta) * prof.weight(r, N - 2), lo, hi, spec),
    )
    den = integrate(lambda r: f.value(r) ** 2 * r ** (-beta) * prof.weight(r, N - 4), lo, hi, spec)
    rhs = acc(c, den)
    return _report(
        "weighted_hardy", model, f, {"grad": lhs}, {"hardy": rhs}, acc, {"hardy": c}, den.value,
        needs=("con2",), beta=beta,
    )


def one_dim_hardy_check(d, spec=DEFAULT_SPEC):
    """int_0^inf d'^2 dr >= 1/4 int_0^inf d^2/r^2 dr."""
    acc = _Acc()
    lo, hi = max(d.support[0], POLE_EPS), d.support[1]
    lhs = acc(1.0, integrate(lambda r: d.deriv1(r) ** 2, lo, hi, spec))
    den = integrate(lambda r: d.value(r) ** 2 / r**2, lo, hi, spec)
    rhs = acc(HARDY_CONSTANT, den)
    return _report(
        "one_dim_hardy", None, d, {"grad": lhs}, {"hardy": rhs}, acc, {"hardy": HARDY_CONSTANT}, den.value
    )


def vhn_radial_hardy_terms(model, u, spec=DEFAULT_SPEC):
    """int u_r^2 / r^2 >= (N-4)^2/4 int u^2 / r^4  (N >= 5)."""
    model.require_dimension(5, "vhn_radial_hardy")
    _check_support(model, u)
    acc = _Acc()
    c = (model.N - 4) ** 2 / 4
    lhs = acc(1.0, _vol(model, lambda r: u.deriv1(r) ** 2 / r**2, u, spec))
    den = _vol(model, lambda r: u.value(r) ** 2 / r**4, u, spec)
    rhs = acc(c, den)
    return _report(
        "vhn_radial_hardy", model, u, {"grad_r2": lhs}, {"rellich": rhs}, acc, {"rellich": c}, den.value,
        needs=("con2",),
    )


PROTOTYPE_FAMILY = {"proto": "exp_tail", "proto2": "r_exp_tail", "gauss": "gauss"}
PROTOTYPE_ID = {"proto": "proto_exp", "proto2": "proto_rexp", "gauss": "proto_gauss"}


def prototype_coefficients(which, N, params):
    """Coefficients of the weights 1/r^2, r^p1, r^p2 for each prototype statement."""
    if which == "proto":
        A, b, a = params["A"], params["b"], params["a"]
        return {
            "hardy": (HARDY_CONSTANT, -2.0),
            "poincare": (((N - 1) / 2) ** 2 * (a + 1) ** 2 * b**2, 2 * a),
            "lower": (2 * b * a * (a + 1) * (N - 1) / 4, a - 1),
        }
    if which == "proto2":
        A, b, a = params["A"], params["b"], params["a"]
        return {
            "hardy": ((N - 2) ** 2 / 4, -2.0),
            "poincare": ((a + 1) ** 2 * b**2 * (N - 1) ** 2 / 4, 2 * a),
            "lower": (b * (a + 1) * (N - 1) * (N - 1 + a) / 2, a - 1),
        }
    if which == "gauss":
        m = params["m"]
        return {
            "hardy": ((N - 2) ** 2 / 4, -2.0),
            "poincare": (m * m * (N - 1) ** 2, 4 * m - 2),
            "lower": (m * (N - 1) * (N - 2 + 2 * m), 2 * m - 2),
        }
    raise ValueError(f"unknown prototype {which!r}")


def prototype_inequality_terms(model, u, which, spec=DEFAULT_SPEC):
    """int u_r^2 >= sum of the prototype-specific weighted L^2 terms."""
    fam = PROTOTYPE_FAMILY.get(which)
    if fam is None:
        raise ValueError(f"unknown prototype {which!r}; expected one of {sorted(PROTOTYPE_FAMILY)}")
    if model.profile.family != fam:
        raise ValueError(f"{which} needs a {fam} model, got {model.profile.family}")
    if which == "proto" and model.profile.params["a"] < 0:
        raise ValueError("proto needs a >= 0")
    lo = u.support[0]
    if fam in ("exp_tail", "r_exp_tail") and lo < model.profile.valid_from:
        raise SupportError(
            f"support must lie outside B_R, R = {model.profile.valid_from:g}; got start {lo:g}"
        )
    if lo <= 0:
        raise SupportError("support must avoid the pole")
    acc = _Acc()
    grad = acc(1.0, _vol(model, lambda r: u.deriv1(r) ** 2, u, spec))
    coeffs = prototype_coefficients(which, model.N, model.profile.params)
    rhs = {}
    den = None
    for name, (c, p) in coeffs.items():
        res = _vol(model, lambda r, p=p: u.value(r) ** 2 * r**p, u, spec)
        if name == "hardy":
            den = res.value
        rhs[name] = acc(c, res)
    return _report(
        PROTOTYPE_ID[which], model, u, {"grad": grad}, rhs, acc, {k: v[0] for k, v in coeffs.items()}, den
    )


# id -> (callable, minimum N, input kind, takes beta, short statement)
CATALOG = {
    "first_order": (first_order_terms, 3, "radial", False,
                    "int u_r^2 - (N-1)/4 int Lambda u^2 >= 1/4 int u^2/r^2 + (N-1)(N-3)/4 int u^2/psi^2"),
    "first_order_poincare": (first_order_poincare_terms, 3, "radial", False,
                             "int u_r^2 - ((N-1)/2)^2 int u^2 >= 1/4 int u^2/r^2 + (N-1)(N-3)/4 int u^2/psi^2  [K_rad<=-1]"),
    "second_order_radial": (second_order_radial_terms, 3, "radial", False,
                            "int (D_r u)^2 - (N-1)/4 int [Lambda+4(K-H)] u_r^2 >= 1/4 int u_r^2/r^2 + (N^2-1)/4 int u_r^2/psi^2"),
    "second_order_explicit": (second_order_explicit_terms, 3, "radial", False,
                              "int (D_r u)^2 - ((N-1)/2)^2 int u_r^2 >= 1/4 int u_r^2/r^2 + (N^2-1)/4 int u_r^2/psi^2  [K_rad<=-1, K_rad>=H_tan]"),
    "rellich": (rellich_terms, 5, "radial", False,
                "int (D u)^2 - ((N-1)/2)^4 int u^2 >= (N-4)^2/16 int u^2/r^4 + (N-1)^2/16 int u^2/r^2  [N>=5]"),
    "gradient": (gradient_inequality_terms, 5, "modal", False,
                 "int (D u)^2 - ((N-1)/2)^2 int |grad u|^2 >= 1/4 int |grad u|^2/r^2 + (N^2-1)/4 int |grad u|^2/psi^2  [N>=5]"),
    "use_cor_3": (use_cor_3_terms, 5, "radial", False,
                  "int (D_r u)^2 - ((N-1)/2)^4 int u^2 >= four Hardy-type remainders  [N>=5]"),
    "rad_lap": (rad_lap_compare, 5, "modal", True,
                "int (D u)^2 r^-b >= int (D_r u)^2 r^-b, 0 <= b < N-4, equality for radial u"),
    "weighted_hardy": (weighted_hardy_check, 5, "radial", True,
                       "int f'^2 r^-b psi^(N-3) dr >= (N-b-4)^2/4 int f^2 r^-b psi^(N-5) dr"),
    "one_dim_hardy": (one_dim_hardy_check, 0, "line", False,
                      "int d'^2 dr >= 1/4 int d^2/r^2 dr on (0, inf)"),
    "vhn_radial_hardy": (vhn_radial_hardy_terms, 5, "radial", False,
                         "int u_r^2/r^2 >= (N-4)^2/4 int u^2/r^4  [N>=5]"),
    "proto_exp": (lambda m, u, spec=DEFAULT_SPEC: prototype_inequality_terms(m, u, "proto", spec), 3, "radial", False,
              "exp tail psi = A e^(b r^(a+1)), r >= R: int u_r^2 >= Poincare + Hardy + r^(a-1) terms"),
    "proto_rexp": (lambda m, u, spec=DEFAULT_SPEC: prototype_inequality_terms(m, u, "proto2", spec), 3, "radial", False,
               "tail psi = A r e^(b r^(a+1)), r >= R: int u_r^2 >= (N-2)^2/4 Hardy + r^(2a) + r^(a-1) terms"),
    "proto_gauss": (lambda m, u, spec=DEFAULT_SPEC: prototype_inequality_terms(m, u, "gauss", spec), 3, "radial", False,
                    "psi = r e^(r^(2m)): int u_r^2 >= (N-2)^2/4 Hardy + r^(4m-2) + r^(2m-2) terms"),
}
