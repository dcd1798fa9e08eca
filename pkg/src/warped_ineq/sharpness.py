"""Optimality experiments: ground state, minimizing sequence, spectral estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import curvatures, sphere_area
from .profiles import check_curvature_bound
from .quadrature import QuadratureSpec, QuadResult, integrate, integrate_to_infinity
from .testfunctions import RadialTestFunction

EXPERIMENTS = ("sequence_quotient", "spectral_quotient", "poincare_gap")
TARGETS = ("poincare_gap", "cm_quotient")

# tighter than the library default; the numerator gets an absolute floor
SEQUENCE_SPEC = QuadratureSpec(rel_tol=1e-13, abs_tol=1e-300, max_subdivisions=20000)


class FitError(ValueError):
    pass


class AlphaError(ValueError):
    pass


class SpectralError(ArithmeticError):
    pass


@dataclass
class SharpnessResult:
    experiment_id: str
    samples: list
    fitted_limit: float
    fit_model: str
    fit_residual: float
    coefficients: tuple = ()
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.experiment_id not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment_id!r}")
        if not self.samples:
            raise ValueError("samples must be non-empty")
        params = [p for p, _ in self.samples]
        if params != sorted(params):
            raise ValueError("samples must be sorted by parameter")
        if not math.isfinite(self.fitted_limit):
            raise FitError("fitted limit is not finite")

    def to_dict(self):
        return {
            "experiment_id": self.experiment_id,
            "samples": [[p, v] for p, v in self.samples],
            "fitted_limit": self.fitted_limit,
            "fit_model": self.fit_model,
            "fit_residual": self.fit_residual,
            "coefficients": list(self.coefficients),
            **self.meta,
        }


# --- ground state -----------------------------------------------------------


def _require_positive(r):
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise ValueError("ground state is defined for r > 0")
    return r


def ground_state(model, r):
    """u0 = r^(1/2) / psi^((N-1)/2)."""
    r = _require_positive(r)
    return np.exp(0.5 * np.log(r) - 0.5 * (model.N - 1) * model.profile.log_psi(r))


def ground_state_derivs(model, r):
    """(u0, u0', u0'') from the log-derivative L = 1/(2r) - (N-1)/2 psi'/psi."""
    r = _require_positive(r)
    prof, N = model.profile, model.N
    u = ground_state(model, r)
    q1 = prof.ratio1(r)
    L = 0.5 / r - 0.5 * (N - 1) * q1
    dL = -0.5 / r**2 - 0.5 * (N - 1) * (prof.ratio2(r) - q1 * q1)
    return u, u * L, u * (L * L + dL)


def ground_state_residual(model, r):
    """-Delta_r u0 - (N-1)/4 Lambda u0 - u0/(4 r^2) - (N-1)(N-3)/4 u0/psi^2."""
    r = _require_positive(r)
    N, prof = model.N, model.profile
    u, d1, d2 = ground_state_derivs(model, r)
    lap = d2 + (N - 1) * prof.ratio1(r) * d1
    lam = curvatures(model, r)[2]
    return -lap - (N - 1) / 4 * lam * u - u / (4 * r**2) - (N - 1) * (N - 3) / 4 * u * prof.inv_psi_sq(r)


def residual_scale(model, r):
    u, _, d2 = ground_state_derivs(model, r)
    return np.abs(u) / np.asarray(r, dtype=float) ** 2 + np.abs(d2)


def ground_state_product(model, lo, hi, k=1, pieces=32):
    """u0(r) sin(k pi ln(r/lo) / ln(hi/lo)) on [lo, hi], zero outside.

    Continuous with kinks at the ends, so only first-order functionals apply.
    On hyperbolic N = 3 the first-order quotient is exactly 1/4 + (k pi / ln(hi/lo))^2,
    which makes these the sharpest cheap test inputs available.
    """
    lo, hi = float(lo), float(hi)
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    if int(k) < 1:
        raise ValueError("k must be a positive integer")
    w = int(k) * math.pi / math.log(hi / lo)

    def parts(r):
        inside = (r > lo) & (r < hi)
        rs = np.where(inside, r, lo)
        u, d1, d2 = ground_state_derivs(model, rs)
        t = w * np.log(rs / lo)
        sn, cs = np.sin(t), np.cos(t)
        p1 = w * cs / rs
        p2 = -(w / rs) ** 2 * sn - w * cs / rs**2
        return inside, u, d1, d2, sn, p1, p2

    def value(r):
        inside, u, _, _, sn, _, _ = parts(r)
        return np.where(inside, u * sn, 0.0)

    def deriv1(r):
        inside, u, d1, _, sn, p1, _ = parts(r)
        return np.where(inside, d1 * sn + u * p1, 0.0)

    def deriv2(r):
        inside, u, d1, d2, sn, p1, p2 = parts(r)
        return np.where(inside, d2 * sn + 2 * d1 * p1 + u * p2, 0.0)

    cuts = tuple(np.geomspace(lo, hi, pieces + 1)[1:-1])
    return RadialTestFunction(
        value, deriv1, deriv2, (lo, hi), "ground_state_product",
        f"u0*logsine({lo:g},{hi:g},k={int(k)})", cuts,
    )


# --- minimizing sequence ------------------------------------------------------


def _check_alpha(alpha, a=0.0):
    if not alpha > 1 + a:
        raise AlphaError(f"alpha must exceed 1 + a = {1 + a:g} for the tail integrals to converge, got {alpha:g}")


def cutoff_phi(n, alpha, r, a=0.0):
    """Piecewise cutoff and its derivative: 0 | n^-a (r-1) | n^-a | r^-a on (0,1], [1,2], [2,n], [n,inf)."""
    if n < 3:
        raise ValueError("n must be >= 3")
    _check_alpha(alpha, a)
    r = np.asarray(r, dtype=float)
    s = float(n) ** (-alpha)
    rs = np.maximum(r, 1e-300)
    val = np.select(
        [r <= 1, r <= 2, r <= n],
        [0.0, s * (r - 1), s],
        rs ** (-alpha),
    )
    der = np.select(
        [r <= 1, r <= 2, r <= n],
        [0.0, s, 0.0],
        -alpha * rs ** (-alpha - 1),
    )
    return val, der


def closed_form_integrals(n, alpha, N):
    """Closed-form denominator lower bound, exact gradient term and psi-term upper bound."""
    if n < 3:
        raise ValueError("n must be >= 3")
    _check_alpha(alpha)
    w = sphere_area(N)
    s = float(n) ** (-2 * alpha)
    denom = w * s * (math.log(n / 2) + 1 / (2 * alpha))
    grad = w * s * (1.5 + alpha / 2)
    en, e2 = math.exp(-n), math.exp(-2.0)
    psi = w * s * (
        7 / (12 * math.sinh(1.0) ** 2)
        + math.log(abs((en - 1) / (en + 1)))
        - math.log(abs((e2 - 1) / (e2 + 1)))
        + 1 / alpha
    )
    return {"denom_bound": denom, "grad_term": grad, "psi_bound": psi}


@dataclass(frozen=True)
class QuotientPieces:
    n: float
    alpha: float
    numerator: float
    denominator: float
    psi_term: float
    grad_term: float
    error: float

    @property
    def quotient(self):
        return self.numerator / self.denominator


def _scaled_phi(n, alpha):
    # n^alpha * phi_n: keeps every piece O(1) whatever n is
    def val(r):
        return np.select([r <= 1, r <= 2, r <= n], [0.0, r - 1, 1.0], (n / np.maximum(r, 1e-300)) ** alpha)

    def der(r):
        rs = np.maximum(r, 1e-300)
        return np.select([r <= 1, r <= 2, r <= n], [0.0, 1.0, 0.0], -alpha / rs * (n / rs) ** alpha)

    return val, der


def _piecewise(f, n, spec):
    return integrate(f, 1.0, 2.0, spec) + integrate(f, 2.0, n, spec) + integrate_to_infinity(f, n, spec, first_width=n)


def _noise_floor(parts, n):
    # rounding in pos - neg is ~eps (|pos| + |neg|) pointwise; integrated
    loose = SEQUENCE_SPEC.replace(rel_tol=1e-6)
    total = _piecewise(lambda r: sum(np.abs(x) for x in parts(r)), n, loose).value
    return 64 * np.finfo(float).eps * total


def sequence_pieces(model, n, alpha=2.0, spec=None):
    """All volume integrals of u0 phi_n, each times omega_N.

    Uses u0^2 psi^(N-1) = r, so no integrand ever forms u0 itself.
    """
    prof, N = model.profile, model.N
    if not prof.is_global:
        raise ValueError("the minimizing sequence needs a global model")
    if N < 3:
        raise ValueError("N >= 3 required")
    if n < 3:
        raise ValueError("n must be >= 3")
    a = prof.asymptotic[1] if prof.asymptotic else 0.0
    _check_alpha(alpha, a)
    n = float(n)
    phi, dphi = _scaled_phi(n, alpha)

    def parts(r):
        L = 0.5 / r - 0.5 * (N - 1) * prof.ratio1(r)
        p, dp = phi(r), dphi(r)
        lam = curvatures(model, r)[2]
        return r * (p * L + dp) ** 2, r * (N - 1) / 4 * lam * p * p

    def numerator(r):
        pos, neg = parts(r)
        return pos - neg

    if spec is None:
        spec = SEQUENCE_SPEC
        # the direct numerator is a difference of large terms: converge it to
        # its rounding floor rather than to a relative tolerance
        num_spec = spec.replace(abs_tol=max(spec.abs_tol, _noise_floor(parts, n)))
    else:
        num_spec = spec

    integrands = {
        "numerator": numerator,
        "denominator": lambda r: phi(r) ** 2 / r,
        "psi_term": lambda r: r * phi(r) ** 2 * prof.inv_psi_sq(r),
        "grad_term": lambda r: r * dphi(r) ** 2,
    }
    w = sphere_area(N) * n ** (-2 * alpha)
    out, err = {}, 0.0
    for key, f in integrands.items():
        res: QuadResult = _piecewise(f, n, num_spec if key == "numerator" else spec)
        if not res.converged:
            raise ArithmeticError(f"{key} integral did not converge for n = {n:g}")
        out[key] = w * res.value
        err += w * res.error
    return QuotientPieces(n=n, alpha=alpha, error=err, **out)


def sequence_quotient(model, n, alpha=2.0, spec=None):
    """Rayleigh-type quotient of u0 phi_n for the first-order statement."""
    return sequence_pieces(model, n, alpha, spec).quotient


def sequence_identity_quotient(pieces, N):
    """1/4 + [(N-1)(N-3)/4 psi + grad] / denominator."""
    return 0.25 + ((N - 1) * (N - 3) / 4 * pieces.psi_term + pieces.grad_term) / pieces.denominator


def fit_limit(samples, alpha=2.0):
    """Least squares q(n) ~ c0 + c1 / (ln(n/2) + 1/(2 alpha))."""
    samples = [(float(n), float(q)) for n, q in samples]
    if len(samples) < 4:
        raise FitError(f"need at least 4 samples, got {len(samples)}")
    ns = np.array([s[0] for s in samples])
    qs = np.array([s[1] for s in samples])
    if np.any(np.diff(ns) <= 0):
        raise FitError("sample parameters must be strictly increasing")
    if not np.all(np.isfinite(qs)):
        raise FitError("non-finite sample values")
    x = 1.0 / (np.log(ns / 2) + 1 / (2 * alpha))
    design = np.column_stack([np.ones_like(x), x])
    coef, _, rank, _ = np.linalg.lstsq(design, qs, rcond=None)
    if rank < 2:
        raise FitError("degenerate fit: sample abscissae coincide")
    resid = qs - design @ coef
    return SharpnessResult(
        experiment_id="sequence_quotient",
        samples=samples,
        fitted_limit=float(coef[0]),
        fit_model="c0 + c1/(ln(n/2)+1/(2a))",
        fit_residual=float(np.sqrt(np.mean(resid**2))),
        coefficients=(float(coef[0]), float(coef[1])),
        meta={"alpha": alpha},
    )


def sequence_sweep(model, ns, alpha=2.0, spec=None):
    samples = [(float(n), sequence_quotient(model, n, alpha, spec)) for n in sorted(ns)]
    res = fit_limit(samples, alpha)
    res.meta["model"] = model.name
    return res


# --- spectral estimates -----------------------------------------------------


@dataclass(frozen=True)
class SpectralSample:
    target: str
    R: float
    grid_points: int
    eps: float
    eigenvalue: float


def _log_forms(model, target, R, grid_points, eps):
    prof, N = model.profile, model.N
    r = np.linspace(eps, R, grid_points + 1)
    h = r[1] - r[0]
    mid = 0.5 * (r[:-1] + r[1:])
    inner = r[1:-1]
    log_w = (N - 1) * prof.log_psi(mid) - math.log(h)
    log_m = (N - 1) * prof.log_psi(inner) + math.log(h)
    shift = np.zeros_like(inner)
    if target == "cm_quotient":
        # numerator gains -(N-1)/4 Lambda psi^(N-1); mass weight psi^(N-1)/r^2
        lam = curvatures(model, inner)[2]
        shift = -(N - 1) / 4 * lam * inner**2
        log_m = log_m - 2 * np.log(inner)
    if not np.all(np.isfinite(log_m)):
        raise SpectralError("non-positive mass on the grid")
    return log_w, log_m, shift


def _reduced_tridiagonal(log_w, log_m, shift):
    """D^-1/2 (A + S) D^-1/2 for lumped mass D, assembled in log space."""
    left, right = log_w[:-1], log_w[1:]
    diag = np.exp(left - log_m) + np.exp(right - log_m) + shift
    off = -np.exp(log_w[1:-1] - 0.5 * (log_m[:-1] + log_m[1:]))
    return diag, off


def sturm_count(diag, off, x):
    """Number of eigenvalues < x via the pivots of LDL^T of T - x I."""
    count = 0
    q = 1.0
    e2 = np.concatenate([[0.0], off * off]).tolist()
    tiny = 1e-300
    for d, ee in zip(diag.tolist(), e2):
        q = d - x - (ee / q if ee else 0.0)
        if q == 0.0:
            q = -tiny
        if q < 0:
            count += 1
    return count


def smallest_eigenvalue(diag, off, rtol=1e-12, max_iter=200):
    """Bisection on the Sturm count, bracketed by Gershgorin and min(diag)."""
    a = np.abs(np.concatenate([[0.0], off]))
    b = np.abs(np.concatenate([off, [0.0]]))
    lo = float(np.min(diag - a - b))
    hi = float(np.min(diag))
    for _ in range(max_iter):
        if hi - lo <= rtol * max(abs(lo), abs(hi), 1e-300):
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if sturm_count(diag, off, mid) >= 1:
            hi = mid
        else:
            lo = mid
    raise SpectralError("bisection did not converge")


def spectral_constant_estimate(model, target, R, grid_points, eps=None):
    """Smallest generalized eigenvalue of the discretized radial pencil on [eps, R]."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {TARGETS}")
    if not R > 1:
        raise ValueError("R must exceed 1")
    if grid_points < 256:
        raise ValueError("grid_points must be >= 256")
    if not model.profile.is_global:
        raise ValueError("spectral estimates need a global model")
    eps = float(R) / grid_points if eps is None else float(eps)
    if not 0 < eps < R:
        raise ValueError("need 0 < eps < R")
    if target == "cm_quotient":
        rep = check_curvature_bound(model, np.linspace(eps, R, 64))
        if not rep.passed:
            raise ValueError(f"cm_quotient needs K_rad <= -1; fails at r = {rep.worst_radius:g}")
    log_w, log_m, shift = _log_forms(model, target, float(R), int(grid_points), eps)
    diag, off = _reduced_tridiagonal(log_w, log_m, shift)
    lam = smallest_eigenvalue(diag, off)
    return SpectralSample(target=target, R=float(R), grid_points=int(grid_points), eps=eps, eigenvalue=lam)


def grid_shift(model, target, R, grid_points, eps=None):
    """Relative eigenvalue change when grid_points doubles (eps held fixed)."""
    a = spectral_constant_estimate(model, target, R, grid_points, eps)
    b = spectral_constant_estimate(model, target, R, 2 * grid_points, a.eps)
    return abs(b.eigenvalue - a.eigenvalue) / abs(a.eigenvalue), a, b


def spectral_sweep(model, target, radii, grid_points=4000, eps=None):
    """Eigenvalues over truncation radii.

    For cm_quotient eps stays fixed (default: first R / grid_points) and the
    grid grows with R so the domains nest; the fit is c0 + c1/ln^2(R/eps),
    exact in form for N = 3 only (for N > 3 the (N-1)(N-3)/4 int u^2/psi^2
    remainder decays much more slowly in R).
    For poincare_gap the fit is c0 + c1/R^2.
    """
    radii = sorted(float(R) for R in radii)
    if len(radii) < 2:
        raise FitError("need at least 2 radii")
    out = []
    if target == "cm_quotient":
        eps = radii[0] / grid_points if eps is None else eps
        for R in radii:
            g = max(256, int(round((R - eps) / (radii[0] - eps) * grid_points)))
            out.append(spectral_constant_estimate(model, target, R, g, eps))
        x = 1.0 / np.log(np.array(radii) / eps) ** 2
        fit_model = "c0 + c1/ln(R/eps)^2"
        exp_id = "spectral_quotient"
    elif target == "poincare_gap":
        for R in radii:
            out.append(spectral_constant_estimate(model, target, R, grid_points, eps))
        x = 1.0 / np.array(radii) ** 2
        fit_model = "c0 + c1/R^2"
        exp_id = "poincare_gap"
    else:
        raise ValueError(f"unknown target {target!r}")
    vals = np.array([s.eigenvalue for s in out])
    design = np.column_stack([np.ones_like(x), x])
    coef, _, rank, _ = np.linalg.lstsq(design, vals, rcond=None)
    if rank < 2:
        raise FitError("degenerate fit")
    resid = vals - design @ coef
    return SharpnessResult(
        experiment_id=exp_id,
        samples=[(s.R, s.eigenvalue) for s in out],
        fitted_limit=float(coef[0]),
        fit_model=fit_model,
        fit_residual=float(np.sqrt(np.mean(resid**2))),
        coefficients=(float(coef[0]), float(coef[1])),
        meta={
            "model": model.name,
            "target": target,
            "eps": [s.eps for s in out],
            "grid_points": [s.grid_points for s in out],
        },
    )
