"""Adaptive Gauss-Kronrod integration of radial integrands.

The engine bisects all unconverged panels of a level at once so every
integrand call is a single vectorised evaluation over (panels, 21) nodes.
A panel is accepted when its |K21 - G10| estimate is below its length-share
of max(abs_tol, rel_tol |I|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kronrod import gauss_kronrod
from .profiles import central_difference

POLE_EPS = 1e-12
ROUNDOFF_FACTOR = 50.0


class QuadratureError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 4096
    panel_rule: str = "gk21"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 64:
            raise ValueError("max_subdivisions must be >= 64")
        if self.panel_rule not in RULES:
            raise ValueError(f"unknown panel rule {self.panel_rule!r}; have {sorted(RULES)}")

    def replace(self, **kw):
        from dataclasses import replace

        return replace(self, **kw)


# rule id -> Gauss order n of the (n, 2n+1) pair
RULES = {"gk15": 7, "gk21": 10, "gk31": 15}

DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    converged: bool = True
    panels: int = 0

    def __add__(self, other):
        return QuadResult(
            self.value + other.value,
            self.error + other.error,
            self.converged and other.converged,
            self.panels + other.panels,
        )

    def scaled(self, c):
        return QuadResult(c * self.value, abs(c) * self.error, self.converged, self.panels)


ZERO = QuadResult(0.0, 0.0, True, 0)


def _eval_panels(f, lo, hi, rule):
    x, wk, wg = gauss_kronrod(RULES[rule])
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = mid[:, None] + half[:, None] * x[None, :]
    vals = np.asarray(f(nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)]
        raise QuadratureError(f"integrand not finite at r = {bad.ravel()[:3]}")
    k = half * (vals @ wk)
    g = half * (vals @ wg)
    kabs = half * (np.abs(vals) @ np.abs(wk))
    return k, np.abs(k - g), kabs


def integrate(f, a, b, spec=None, points=()):
    """Integrate a vectorised f over [a, b] with optional interior breakpoints."""
    spec = spec or DEFAULT_SPEC
    a, b = float(a), float(b)
    if b < a:
        return integrate(f, b, a, spec, points).scaled(-1.0)
    if b == a:
        return ZERO
    cuts = sorted({a, b, *(float(p) for p in points if a < p < b)})
    lo = np.array(cuts[:-1])
    hi = np.array(cuts[1:])
    total_len = b - a

    done_val = 0.0
    done_err = 0.0
    panels = 0
    converged = True
    while lo.size:
        k, e, kabs = _eval_panels(f, lo, hi, spec.panel_rule)
        panels += lo.size
        estimate = done_val + k.sum()
        tol = max(spec.abs_tol, spec.rel_tol * abs(estimate))
        ok = e <= tol * (hi - lo) / total_len
        # roundoff floor: panels too small to split further are accepted
        tiny = (hi - lo) <= 64 * np.finfo(float).eps * np.maximum(np.abs(lo), np.abs(hi))
        # estimate already at the rounding level of the integrand values
        noise = e <= ROUNDOFF_FACTOR * np.finfo(float).eps * kabs
        ok |= tiny | noise
        done_val += k[ok].sum()
        done_err += e[ok].sum()
        lo, hi = lo[~ok], hi[~ok]
        if lo.size and panels + 2 * lo.size > spec.max_subdivisions:
            k, e, _ = _eval_panels(f, lo, hi, spec.panel_rule)
            done_val += k.sum()
            done_err += e.sum()
            converged = False
            break
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    return QuadResult(float(done_val), float(done_err), converged, panels)


def integrate_to_infinity(f, a, spec=None, max_shells=400, first_width=None):
    """Integrate a decaying integrand over [a, inf) by doubling shells.

    Shells [T, 2T] are added until a shell contributes less than 1e-16 of the
    running total; the geometric remainder estimate is added to the error.
    """
    spec = spec or DEFAULT_SPEC
    a = float(a)
    t0 = a
    t1 = a + (first_width if first_width else max(a, 1.0))
    total = ZERO
    prev = None
    for _ in range(max_shells):
        # later shells only need accuracy relative to the running total
        tol = max(spec.abs_tol, spec.rel_tol * abs(total.value))
        shell = integrate(f, t0, t1, spec.replace(abs_tol=tol) if tol > spec.abs_tol else spec)
        total = total + shell
        small = abs(shell.value) <= max(1e-16 * abs(total.value), 1e-300)
        if small and prev is not None:
            ratio = abs(shell.value) / abs(prev) if prev else 0.0
            tail = abs(shell.value) * (ratio / (1 - ratio) if ratio < 1 else 1.0)
            return QuadResult(total.value, total.error + tail, total.converged, total.panels)
        prev = shell.value
        t0, t1 = t1, 2 * t1
    raise QuadratureError(f"tail integral from {a:g} did not decay after {max_shells} shells")


def integrate_weighted(model, g, a, b, spec=None, points=(), volume=True):
    """Integrate g(r) psi(r)^(N-1) over [a, b]; times omega_N when volume=True.

    A lower limit at the pole is moved to POLE_EPS.
    """
    from .geometry import sphere_area

    prof = model.profile
    a = max(float(a), POLE_EPS) if prof.is_global else max(float(a), prof.valid_from)
    if b <= a:
        return ZERO
    N = model.N

    def integrand(r):
        return np.asarray(g(r), dtype=float) * prof.weight(r, N)

    res = integrate(integrand, a, b, spec, points)
    if not volume:
        return res
    return res.scaled(sphere_area(N))


def differentiate(f, r, order):
    """Central difference; h = max(1e-5, 1e-5 r) (order 1) or max(1e-4, 1e-4 r) (order 2)."""
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    return central_difference(f, r, order)
