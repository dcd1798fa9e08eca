"""Curvatures, radial/modal Laplacians and sphere spectral data of a model."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profiles import DomainError, ProfileError, WarpingProfile, central_difference

MIN_RADIUS = 1e-6


class DimensionError(ValueError):
    """Dimension outside the range an operation is valid for."""


@dataclass(frozen=True)
class ManifoldModel:
    N: int
    profile: WarpingProfile

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 3:
            raise DimensionError(f"model dimension must be an integer >= 3, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    @property
    def name(self):
        return f"{self.profile.name}/N={self.N}"

    def require_dimension(self, minimum, what):
        if self.N < minimum:
            raise DimensionError(f"{what} requires N >= {minimum}, got N = {self.N}")


@dataclass(frozen=True)
class CurvatureSample:
    r: float
    k_rad: float
    h_tan: float
    lambda_rad: float


@dataclass(frozen=True)
class SphereMode:
    n: int
    lambda_n: int
    c_n: int


def curvatures(model, r):
    """Vectorised (K_rad, H_tan, Lambda_rad) arrays."""
    prof = model.profile
    r = np.asarray(r, dtype=float)
    k = -prof.ratio2(r)
    h = -prof.tangential(r)
    lam = -2.0 * k - (model.N - 3) * h
    return k, h, lam


def curvature_at(model, r):
    r = float(r)
    if model.profile.is_global and r < MIN_RADIUS:
        raise DomainError(f"radius {r:g} below {MIN_RADIUS:g}: curvature quotients are 0/0 there")
    k, h, lam = curvatures(model, np.array([r]))
    return CurvatureSample(r=r, k_rad=float(k[0]), h_tan=float(h[0]), lambda_rad=float(lam[0]))


def prototype_curvature_closed_form(family, params, N, r):
    """Closed-form K, H, Lambda for the prototype warpings, written out term by term.

    Serves as an independent check of :func:`curvature_at`.
    """
    r = float(r)
    if family == "exp_tail":
        A, b, a, R = (float(params[k]) for k in ("A", "b", "a", "R"))
        _tail_radius(r, R)
        decay = 1.0 / (A**2 * math.exp(2 * b * r ** (a + 1)))
        K = -(b**2) * (a + 1) ** 2 * r ** (2 * a) - b * a * (a + 1) * r ** (a - 1)
        H = -(b**2) * (a + 1) ** 2 * r ** (2 * a) + decay
        L = (
            2 * b * a * (a + 1) * r ** (a - 1)
            + b**2 * (a + 1) ** 2 * (N - 1) * r ** (2 * a)
            - (N - 3) * decay
        )
    elif family == "r_exp_tail":
        A, b, a, R = (float(params[k]) for k in ("A", "b", "a", "R"))
        _tail_radius(r, R)
        decay = 1.0 / (A**2 * r**2 * math.exp(2 * b * r ** (a + 1)))
        K = -(b**2) * (a + 1) ** 2 * r ** (2 * a) - b * (a + 1) * (a + 2) * r ** (a - 1)
        H = -(b**2) * (a + 1) ** 2 * r ** (2 * a) - 2 * b * (a + 1) * r ** (a - 1) - 1 / r**2 + decay
        # the (a+1) factor in the r^(a-1) term is required for consistency with K and H
        L = (
            2 * b * (a + 1) * (N - 1 + a) * r ** (a - 1)
            + b**2 * (a + 1) ** 2 * (N - 1) * r ** (2 * a)
            + (N - 3) / r**2
            - (N - 3) * decay
        )
    elif family == "gauss":
        m = int(params.get("m", 1))
        decay = 1.0 / (r**2 * math.exp(2 * r ** (2 * m)))
        K = -((2 * m) ** 2) * r ** (4 * m - 2) - 2 * m * (2 * m + 1) * r ** (2 * m - 2)
        H = -((2 * m) ** 2) * r ** (4 * m - 2) - 1 / r**2 - 4 * m * r ** (2 * m - 2) + decay
        L = (
            (2 * m) ** 2 * (N - 1) * r ** (4 * m - 2)
            + 4 * m * (N - 2 + 2 * m) * r ** (2 * m - 2)
            + (N - 3) / r**2
            - (N - 3) * decay
        )
    else:
        raise ProfileError(f"no closed-form curvature for family {family!r}")
    return CurvatureSample(r=r, k_rad=K, h_tan=H, lambda_rad=L)


def _tail_radius(r, R):
    if r < R:
        raise DomainError(f"tail formula valid for r >= {R:g}, got {r:g}")


def _derivs(f, r):
    # duck-typed radial function: analytic derivatives if offered
    if hasattr(f, "deriv1") and hasattr(f, "deriv2"):
        return f.value(r), f.deriv1(r), f.deriv2(r)
    return f(r), central_difference(f, r, 1), central_difference(f, r, 2)


def radial_laplacian(model, f, r):
    """f'' + (N-1) (psi'/psi) f'."""
    r = np.asarray(r, dtype=float)
    _, d1, d2 = _derivs(f, r)
    return d2 + (model.N - 1) * model.profile.ratio1(r) * d1


def modal_laplacian(model, a, n, r):
    """Radial part of Delta_g acting on a(r) P_n(sigma): Delta_r a - lambda_n a / psi^2."""
    r = np.asarray(r, dtype=float)
    val, d1, d2 = _derivs(a, r)
    lap = d2 + (model.N - 1) * model.profile.ratio1(r) * d1
    lam = sphere_eigenvalue(n, model.N)
    if lam == 0:
        return lap
    return lap - lam * val * model.profile.inv_psi_sq(r)


def sphere_eigenvalue(n, N):
    return n * n + (N - 2) * n


def sphere_mode(n, N):
    if n < 0 or N < 3:
        raise ValueError(f"need n >= 0 and N >= 3, got n={n}, N={N}")
    if n == 0:
        c = 1
    elif n == 1:
        c = N
    else:
        c = math.comb(N + n - 1, n) - math.comb(N + n - 3, n - 2)
    return SphereMode(n=n, lambda_n=sphere_eigenvalue(n, N), c_n=c)


def sphere_area(N):
    """Measure of the unit sphere S^(N-1) in R^N."""
    if N < 2:
        raise ValueError("N must be >= 2")
    return 2.0 * math.pi ** (N / 2) / math.gamma(N / 2)
