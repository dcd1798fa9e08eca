"""Warping functions for rotationally symmetric model manifolds.

A model manifold carries the metric dr^2 + psi(r)^2 dw^2.  Everything
geometric downstream (curvatures, volume weight, Laplacians) is computed from
the :class:`WarpingProfile` built here.

Builtin families::

    euclidean    psi = r
    hyperbolic   psi = sinh r
    exp_tail     psi = A exp(b r^(a+1))        r >= R only
    r_exp_tail   psi = A r exp(b r^(a+1))      r >= R only
    gauss        psi = r exp(r^(2m))
    custom       user supplied psi, derivatives by central differences

Builtin families also carry overflow/cancellation safe closures for
psi'/psi, psi''/psi, log psi and ((psi')^2 - 1)/psi^2 so curvature and weights
stay finite far beyond where psi itself overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

FAMILIES = ("euclidean", "hyperbolic", "exp_tail", "r_exp_tail", "gauss", "custom")
TAIL_FAMILIES = ("exp_tail", "r_exp_tail")

Fn = Callable[[np.ndarray], np.ndarray]


class ProfileError(ValueError):
    """Invalid family or parameters."""


class DomainError(ValueError):
    """Evaluation below the radius where a profile is defined."""


def central_difference(f, r, order, h=None):
    """Central difference of order 1 or 2.

    Default steps: h = max(1e-5, 1e-5 r) for order 1, max(1e-4, 1e-4 r) for
    order 2.
    """
    r = np.asarray(r, dtype=float)
    if order == 1:
        h = np.maximum(1e-5, 1e-5 * np.abs(r)) if h is None else h
        return (f(r + h) - f(r - h)) / (2 * h)
    if order == 2:
        h = np.maximum(1e-4, 1e-4 * np.abs(r)) if h is None else h
        return (f(r + h) - 2 * f(r) + f(r - h)) / (h * h)
    raise ValueError(f"order must be 1 or 2, got {order}")


@dataclass(frozen=True)
class WarpingProfile:
    name: str
    family: str
    params: dict
    psi_fn: Fn
    psi_prime_fn: Fn
    psi_second_fn: Fn
    valid_from: float = 0.0
    asymptotic: Optional[tuple] = None
    analytic: bool = True
    # optional stable closures; None means derive from psi and its derivatives
    log_psi_fn: Optional[Fn] = field(default=None, repr=False)
    ratio1_fn: Optional[Fn] = field(default=None, repr=False)
    ratio2_fn: Optional[Fn] = field(default=None, repr=False)
    tangential_fn: Optional[Fn] = field(default=None, repr=False)

    @property
    def is_global(self):
        return self.valid_from == 0.0

    def _check(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(np.isnan(r)):
            raise DomainError("NaN radius")
        if self.is_global:
            if np.any(r <= 0):
                raise DomainError(f"{self.name}: radius must be > 0")
        elif np.any(r < self.valid_from):
            raise DomainError(
                f"{self.name}: defined only for r >= {self.valid_from:g}, got min r = {np.min(r):g}"
            )
        return r

    def psi(self, r):
        return self.psi_fn(self._check(r))

    def psi_prime(self, r):
        return self.psi_prime_fn(self._check(r))

    def psi_second(self, r):
        return self.psi_second_fn(self._check(r))

    def log_psi(self, r):
        r = self._check(r)
        if self.log_psi_fn is not None:
            return self.log_psi_fn(r)
        return np.log(self.psi_fn(r))

    def ratio1(self, r):
        """psi'/psi."""
        r = self._check(r)
        if self.ratio1_fn is not None:
            return self.ratio1_fn(r)
        return self.psi_prime_fn(r) / self.psi_fn(r)

    def ratio2(self, r):
        """psi''/psi."""
        r = self._check(r)
        if self.ratio2_fn is not None:
            return self.ratio2_fn(r)
        return self.psi_second_fn(r) / self.psi_fn(r)

    def tangential(self, r):
        """((psi')^2 - 1) / psi^2, i.e. minus the tangential curvature."""
        r = self._check(r)
        if self.tangential_fn is not None:
            return self.tangential_fn(r)
        q = self.ratio1(r)
        inv = np.exp(-self.log_psi(r))
        return (q - inv) * (q + inv)

    def inv_psi_sq(self, r):
        return np.exp(-2.0 * self.log_psi(r))

    def weight(self, r, N):
        """Volume density psi^(N-1)."""
        return np.exp((N - 1) * self.log_psi(r))

    def describe(self):
        return {"name": self.name, "family": self.family, "params": dict(self.params)}


def _positive(params, key):
    try:
        v = float(params[key])
    except KeyError:
        raise ProfileError(f"missing parameter {key!r}") from None
    if not v > 0:
        raise ProfileError(f"parameter {key} must be > 0, got {v}")
    return v


def _euclidean():
    one = lambda r: np.ones_like(r)
    zero = lambda r: np.zeros_like(r)
    return WarpingProfile(
        name="euclidean",
        family="euclidean",
        params={},
        psi_fn=lambda r: np.asarray(r, dtype=float) * 1.0,
        psi_prime_fn=one,
        psi_second_fn=zero,
        log_psi_fn=np.log,
        ratio1_fn=lambda r: 1.0 / r,
        ratio2_fn=zero,
        tangential_fn=zero,
    )


def _log_sinh(r):
    # log sinh r = r - log 2 + log(1 - e^{-2r}), accurate for small and large r
    return r - math.log(2.0) + np.log(-np.expm1(-2.0 * r))


def _hyperbolic():
    one = lambda r: np.ones_like(r)
    return WarpingProfile(
        name="hyperbolic",
        family="hyperbolic",
        params={},
        psi_fn=np.sinh,
        psi_prime_fn=np.cosh,
        psi_second_fn=np.sinh,
        asymptotic=(1.0, 0.0),
        log_psi_fn=_log_sinh,
        ratio1_fn=lambda r: 1.0 / np.tanh(r),
        ratio2_fn=one,
        tangential_fn=one,
    )


def _exp_tail(A, b, a, R):
    # g = b r^(a+1); psi = A e^g
    g = lambda r: b * r ** (a + 1)
    g1 = lambda r: b * (a + 1) * r**a
    g2 = lambda r: b * a * (a + 1) * r ** (a - 1)
    psi = lambda r: A * np.exp(g(r))
    return WarpingProfile(
        name=f"exp_tail(A={A:g},b={b:g},a={a:g},R={R:g})",
        family="exp_tail",
        params={"A": A, "b": b, "a": a, "R": R},
        psi_fn=psi,
        psi_prime_fn=lambda r: psi(r) * g1(r),
        psi_second_fn=lambda r: psi(r) * (g1(r) ** 2 + g2(r)),
        valid_from=R,
        asymptotic=(b * (a + 1), a) if a >= 0 else None,
        log_psi_fn=lambda r: math.log(A) + g(r),
        ratio1_fn=g1,
        ratio2_fn=lambda r: g1(r) ** 2 + g2(r),
    )


def _r_exp_family(A, b, a, R, family, name):
    # psi = A r e^g, psi' = A e^g (1 + r g'), psi'' = A e^g (2 g' + r g'^2 + r g'')
    g = lambda r: b * r ** (a + 1)
    g1 = lambda r: b * (a + 1) * r**a
    g2 = lambda r: b * a * (a + 1) * r ** (a - 1)
    ratio1 = lambda r: 1.0 / r + g1(r)
    tangential = None
    if A == 1.0 and b == 1.0:
        # gauss-type: psi' - 1 = e^g (1 + r g') - 1 evaluated without cancellation
        def tangential(r):
            eg = np.exp(-g(r))
            lo = (r * g1(r) - np.expm1(-g(r))) / r
            hi = (1.0 + r * g1(r) + eg) / r
            return lo * hi

    return WarpingProfile(
        name=name,
        family=family,
        params={"A": A, "b": b, "a": a, "R": R} if family == "r_exp_tail" else {},
        psi_fn=lambda r: A * r * np.exp(g(r)),
        psi_prime_fn=lambda r: A * np.exp(g(r)) * (1.0 + r * g1(r)),
        psi_second_fn=lambda r: A * np.exp(g(r)) * (2 * g1(r) + r * g1(r) ** 2 + r * g2(r)),
        valid_from=R,
        asymptotic=(b * (a + 1), a) if a >= 0 else None,
        log_psi_fn=lambda r: math.log(A) + np.log(r) + g(r),
        ratio1_fn=ratio1,
        ratio2_fn=lambda r: 2 * g1(r) / r + g1(r) ** 2 + g2(r),
        tangential_fn=tangential,
    )


def _tail_params(params):
    A = _positive(params, "A")
    b = _positive(params, "b")
    R = _positive(params, "R")
    try:
        a = float(params["a"])
    except KeyError:
        raise ProfileError("missing parameter 'a'") from None
    if a < -1:
        raise ProfileError(f"parameter a must be >= -1, got {a}")
    return A, b, a, R


def make_builtin_profile(family, params=None):
    """Build a profile of one of the builtin families with analytic derivatives."""
    params = dict(params or {})
    if family == "euclidean":
        _no_params(family, params)
        return _euclidean()
    if family == "hyperbolic":
        _no_params(family, params)
        return _hyperbolic()
    if family == "exp_tail":
        _known_keys(family, params, {"A", "b", "a", "R"})
        return _exp_tail(*_tail_params(params))
    if family == "r_exp_tail":
        _known_keys(family, params, {"A", "b", "a", "R"})
        A, b, a, R = _tail_params(params)
        return _r_exp_family(
            A, b, a, R, "r_exp_tail", f"r_exp_tail(A={A:g},b={b:g},a={a:g},R={R:g})"
        )
    if family == "gauss":
        _known_keys(family, params, {"m"})
        m = params.get("m", 1)
        if isinstance(m, bool) or int(m) != m or m < 1:
            raise ProfileError(f"gauss parameter m must be an integer >= 1, got {m!r}")
        m = int(m)
        prof = _r_exp_family(1.0, 1.0, 2.0 * m - 1.0, 0.0, "gauss", f"gauss(m={m})")
        return _replace(prof, params={"m": m}, asymptotic=(2.0 * m, 2.0 * m - 1.0))
    if family == "custom":
        raise ProfileError("custom profiles are built with make_custom_profile(psi)")
    raise ProfileError(f"unknown family {family!r}; expected one of {FAMILIES}")


def _replace(profile, **changes):
    from dataclasses import replace

    return replace(profile, **changes)


def _no_params(family, params):
    if params:
        raise ProfileError(f"{family} takes no parameters, got {sorted(params)}")


def _known_keys(family, params, keys):
    extra = set(params) - keys
    if extra:
        raise ProfileError(f"unknown parameters for {family}: {sorted(extra)}")


def make_custom_profile(psi, name="custom", valid_from=0.0, asymptotic=None):
    """Profile from psi alone; derivatives are central differences."""
    psi_v = lambda r: np.asarray(psi(np.asarray(r, dtype=float)), dtype=float)
    return WarpingProfile(
        name=name,
        family="custom",
        params={},
        psi_fn=psi_v,
        psi_prime_fn=lambda r: central_difference(psi_v, r, 1),
        psi_second_fn=lambda r: central_difference(psi_v, r, 2),
        valid_from=float(valid_from),
        asymptotic=asymptotic,
        analytic=False,
    )


def profile_from_json(obj):
    """Build a builtin profile from ``{"family": str, "params": {...}}``."""
    if not isinstance(obj, dict):
        raise ProfileError("profile must be a JSON object")
    extra = set(obj) - {"family", "params"}
    if extra:
        raise ProfileError(f"unknown profile keys: {sorted(extra)}")
    if "family" not in obj:
        raise ProfileError("profile needs a 'family' key")
    return make_builtin_profile(obj["family"], obj.get("params") or {})


# --- validators -------------------------------------------------------------


@dataclass
class CheckReport:
    """Outcome of a pointwise condition check over sample radii."""

    name: str
    passed: bool
    applicable: bool = True
    worst_margin: float = float("nan")
    worst_radius: float = float("nan")
    notes: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def __bool__(self):
        return self.applicable and self.passed


PSI_LIMIT_RADII = (1e-3, 1e-4, 1e-5)


def _limit_at_zero(values, radii=PSI_LIMIT_RADII):
    # Richardson/Neville extrapolation of a polynomial in r to r = 0
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    coeffs = np.polyfit(r, v, len(r) - 1)
    return float(coeffs[-1])


def validate_psi_conditions(profile, tol=1e-6):
    """Check psi(0+) = 0, psi'(0+) = 1, psi''(0+) = 0 by extrapolation to 0.

    Only the first two even derivatives are checked.
    """
    if not profile.is_global:
        raise ProfileError(
            f"{profile.name}: tail families are only defined for r >= R; "
            "conditions at the pole cannot be checked"
        )
    r = np.array(PSI_LIMIT_RADII)
    targets = {
        "psi(0)=0": (profile.psi(r), 0.0),
        "psi'(0)=1": (profile.psi_prime(r), 1.0),
        "psi''(0)=0": (profile.psi_second(r), 0.0),
    }
    rep = CheckReport(name="psi_conditions", passed=True)
    worst = 0.0
    for label, (vals, target) in targets.items():
        lim = _limit_at_zero(vals)
        err = abs(lim - target)
        ok = err <= tol * max(1.0, abs(target))
        rep.checks[label] = {"limit": lim, "error": err, "passed": ok}
        rep.passed &= ok
        worst = max(worst, err)
    rep.worst_margin = -worst
    if not profile.analytic:
        rep.notes.append("derivatives from central differences")
    return rep


CURVATURE_RTOL = 1e-12


def check_curvature_bound(model, radii):
    """K_rad <= -1, i.e. psi''/psi >= 1, at every sample radius."""
    prof = _profile_of(model)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    margin = prof.ratio2(r) - 1.0
    return _pointwise_report("con2", r, margin, CURVATURE_RTOL * np.maximum(1.0, prof.ratio2(r)))


def check_con3(model, radii):
    """K_rad >= H_tan at every sample radius."""
    prof = _profile_of(model)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    k = -prof.ratio2(r)
    h = -prof.tangential(r)
    margin = k - h
    return _pointwise_report("con3", r, margin, CURVATURE_RTOL * np.maximum(1.0, np.abs(k) + np.abs(h)))


def check_sturm(profile, radii):
    """psi'/psi >= coth r and psi >= sinh r, valid under con2 on a global model."""
    prof = _profile_of(profile)
    r = np.atleast_1d(np.asarray(radii, dtype=float))
    if not prof.is_global:
        return CheckReport(
            name="sturm",
            passed=False,
            applicable=False,
            notes=[f"{prof.name} is a tail profile; comparison needs the whole ray (0, inf)"],
        )
    pre = check_curvature_bound(prof, r)
    if not pre.passed:
        return CheckReport(
            name="sturm",
            passed=False,
            applicable=False,
            worst_margin=pre.worst_margin,
            worst_radius=pre.worst_radius,
            notes=["precondition K_rad <= -1 fails"],
        )
    coth = 1.0 / np.tanh(r)
    m_ratio = (prof.ratio1(r) - coth) / coth
    m_size = prof.log_psi(r) - _log_sinh(r)
    margin = np.minimum(m_ratio, m_size)
    rep = _pointwise_report("sturm", r, margin, CURVATURE_RTOL * 10)
    rep.checks = {
        "ratio>=coth": bool(np.all(m_ratio >= -CURVATURE_RTOL * 10)),
        "psi>=sinh": bool(np.all(m_size >= -CURVATURE_RTOL * 10)),
    }
    return rep


def _pointwise_report(name, r, margin, slack):
    margin = np.asarray(margin, dtype=float)
    if np.any(np.isnan(margin)):
        raise ValueError(f"{name}: NaN in evaluated condition")
    i = int(np.argmin(margin))
    return CheckReport(
        name=name,
        passed=bool(np.all(margin >= -slack)),
        worst_margin=float(margin[i]),
        worst_radius=float(r[i]),
    )


def _profile_of(obj):
    return obj.profile if hasattr(obj, "profile") else obj


class FitError(ValueError):
    pass


@dataclass
class AsymptoticFit:
    C: float
    a: float
    residual: float
    matches_declared: Optional[bool] = None


def estimate_asymptotic_exponent(profile, fit_window, samples=64):
    """Fit psi'/psi ~ C r^a by least squares of log(psi'/psi) on log r."""
    r_lo, r_hi = map(float, fit_window)
    if not (r_hi > r_lo > profile.valid_from and r_lo > 0):
        raise FitError(f"bad fit window {fit_window} for {profile.name}")
    samples = max(int(samples), 32)
    r = np.geomspace(r_lo, r_hi, samples)
    q = profile.ratio1(r)
    if np.any(q <= 0):
        raise FitError("psi'/psi must be positive on the fit window")
    dq = np.diff(q)
    if not (np.all(dq >= 0) or np.all(dq <= 0)):
        raise FitError("psi'/psi is not monotone on the fit window")
    x, y = np.log(r), np.log(q)
    A = np.vstack([np.ones_like(x), x]).T
    (logC, a), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([logC, a]) - y) ** 2)))
    fit = AsymptoticFit(C=float(np.exp(logC)), a=float(a), residual=resid)
    if profile.asymptotic is not None:
        C0, a0 = profile.asymptotic
        fit.matches_declared = bool(
            abs(fit.C - C0) <= 0.05 * C0 and abs(fit.a - a0) <= 0.05 * max(1.0, abs(a0))
        )
    return fit
