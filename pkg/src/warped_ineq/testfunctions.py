"""Radial and modal test functions with analytic derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .profiles import central_difference

KINDS = ("bump", "spline", "ground_state_product", "custom")

# exp(-1/q) underflows to exactly 0 below this; masking avoids 0 * inf
_Q_FLOOR = 1.0 / 700.0


@dataclass(frozen=True)
class RadialTestFunction:
    value_fn: Callable
    deriv1_fn: Callable
    deriv2_fn: Callable
    support: tuple
    kind: str = "custom"
    label: str = ""
    breakpoints: tuple = field(default=())

    def __post_init__(self):
        lo, hi = self.support
        if not (0 <= lo < hi):
            raise ValueError(f"bad support {self.support}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    def value(self, r):
        return self.value_fn(np.asarray(r, dtype=float))

    def deriv1(self, r):
        return self.deriv1_fn(np.asarray(r, dtype=float))

    def deriv2(self, r):
        return self.deriv2_fn(np.asarray(r, dtype=float))

    def __call__(self, r):
        return self.value(r)

    @property
    def is_zero(self):
        return self.kind == "custom" and self.label == "zero"


def make_bump(center, half_width, amplitude=1.0, allow_pole=False):
    """amplitude * exp(-1/(1 - s^2)), s = (r - center)/half_width, on |s| < 1.

    With ``allow_pole`` the support may start exactly at r = 0.
    """
    c, w, A = float(center), float(half_width), float(amplitude)
    if not w > 0:
        raise ValueError("half-width must be > 0")
    if c - w < 0 or (c - w == 0 and not allow_pole):
        raise ValueError(f"support [{c - w:g}, {c + w:g}] must stay away from the pole")

    def parts(r):
        s = (r - c) / w
        q = 1.0 - s * s
        inside = q > _Q_FLOOR
        qs = np.where(inside, q, 1.0)
        u = np.where(inside, A * np.exp(-1.0 / qs), 0.0)
        return s, qs, inside, u

    def value(r):
        return parts(r)[3]

    def deriv1(r):
        s, q, inside, u = parts(r)
        p = -2.0 * s / q**2
        return np.where(inside, u * p / w, 0.0)

    def deriv2(r):
        s, q, inside, u = parts(r)
        p = -2.0 * s / q**2
        dp = -2.0 / q**2 - 8.0 * s * s / q**3
        return np.where(inside, u * (p * p + dp) / (w * w), 0.0)

    return RadialTestFunction(
        value, deriv1, deriv2, (c - w, c + w), "bump", f"bump(c={c:g},w={w:g},A={A:g})"
    )


def make_spline(lo, hi, amplitude=1.0, power=3):
    """Piecewise polynomial ((r-lo)(hi-r))^power, C^(power-1) at the support ends."""
    lo, hi, A = float(lo), float(hi), float(amplitude)
    if not 0 < lo < hi:
        raise ValueError("need 0 < lo < hi")
    if power < 3:
        raise ValueError("power >= 3 keeps two continuous derivatives")
    k = int(power)
    scale = A / ((hi - lo) / 2) ** (2 * k)

    def base(r):
        inside = (r > lo) & (r < hi)
        x = np.where(inside, (r - lo) * (hi - r), 0.0)
        dx = np.where(inside, lo + hi - 2 * r, 0.0)
        return inside, x, dx

    def value(r):
        inside, x, _ = base(r)
        return scale * x**k

    def deriv1(r):
        inside, x, dx = base(r)
        return scale * k * x ** (k - 1) * dx

    def deriv2(r):
        inside, x, dx = base(r)
        ddx = np.where(inside, -2.0, 0.0)
        return scale * (k * (k - 1) * x ** (k - 2) * dx * dx + k * x ** (k - 1) * ddx)

    return RadialTestFunction(
        value, deriv1, deriv2, (lo, hi), "spline", f"spline({lo:g},{hi:g},p={k})"
    )


def make_custom(value, support, label="custom", breakpoints=()):
    """Wrap a plain callable; derivatives by central differences."""
    v = lambda r: np.asarray(value(np.asarray(r, dtype=float)), dtype=float)
    return RadialTestFunction(
        v,
        lambda r: central_difference(v, r, 1),
        lambda r: central_difference(v, r, 2),
        tuple(support),
        "custom",
        label,
        tuple(breakpoints),
    )


def zero_function(support=(1.0, 2.0)):
    z = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return RadialTestFunction(z, z, z, tuple(support), "custom", "zero")


@dataclass(frozen=True)
class ModalTestFunction:
    """Finite sum of a_n(r) P_n(sigma), P_n normalised to mean square one on the sphere."""

    modes: tuple

    def __post_init__(self):
        modes = tuple((int(n), a) for n, a in self.modes)
        idx = [n for n, _ in modes]
        if len(set(idx)) != len(idx):
            raise ValueError(f"mode indices must be distinct, got {idx}")
        if any(n < 0 for n in idx):
            raise ValueError("mode indices must be >= 0")
        object.__setattr__(self, "modes", modes)

    @property
    def is_radial(self):
        return all(n == 0 for n, _ in self.modes)


def log_uniform_bumps(rng, count, support, width):
    """Bumps with centers log-uniform in [lo + w, hi - w].

    ``width`` is a number or a (min, max) pair drawn uniformly.
    """
    lo, hi = map(float, support)
    out = []
    for _ in range(int(count)):
        if np.ndim(width):
            w = float(rng.uniform(*width))
        else:
            w = float(width)
        a, b = lo + w, hi - w
        if not (a > 0 and b > a):
            raise ValueError(f"support {support} too narrow for width {w:g}")
        c = float(math.exp(rng.uniform(math.log(a), math.log(b))))
        out.append(make_bump(c, w))
    return out
