"""Independent high-precision reference values used by the test suite.

Nothing here imports warped_ineq: integrands are written out by hand in mpmath
and curvatures come from sympy differentiation. Run it to regenerate the
numbers frozen in tests/oracle_values.py.
"""

import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def bump(c, w):
    def u(r):
        s = (r - c) / w
        return mp.e ** (-1 / (1 - s * s)) if abs(s) < 1 else mp.mpf(0)

    def du(r):
        return mp.diff(u, r)

    def ddu(r):
        return mp.diff(u, r, 2)

    return u, du, ddu


def omega(N):
    return 2 * mp.pi ** (mp.mpf(N) / 2) / mp.gamma(mp.mpf(N) / 2)


def vol(f, N, psi, lo, hi):
    return omega(N) * mp.quad(lambda r: f(r) * psi(r) ** (N - 1), [lo, (lo + hi) / 2, hi])


def first_order_h3():
    u, du, _ = bump(3, 1)
    N, psi = 3, mp.sinh
    grad = vol(lambda r: du(r) ** 2, N, psi, 2, 4)
    lam = mp.mpf(N - 1) / 4 * vol(lambda r: (N - 1) * u(r) ** 2, N, psi, 2, 4)
    den = vol(lambda r: u(r) ** 2 / r**2, N, psi, 2, 4)
    return {"grad": grad, "lambda": lam, "denominator": den}


def euclid4_hardy():
    u, du, _ = bump(2, 1)
    psi = lambda r: r
    return {
        "grad": vol(lambda r: du(r) ** 2, 4, psi, 1, 3),
        "u2_over_r2": vol(lambda r: u(r) ** 2 / r**2, 4, psi, 1, 3),
    }


def rellich_h8():
    u, du, ddu = bump(2, 0.5)
    N, psi = 8, mp.sinh
    lap = lambda r: ddu(r) + (N - 1) * mp.coth(r) * du(r)
    return {
        "bilap": vol(lambda r: lap(r) ** 2, N, psi, 1.5, 2.5),
        "u2": vol(lambda r: u(r) ** 2, N, psi, 1.5, 2.5),
        "u2_over_r4": vol(lambda r: u(r) ** 2 / r**4, N, psi, 1.5, 2.5),
    }


def gradient_mode1_h5():
    u, du, ddu = bump(2, 1)
    N, psi, lam_n = 5, mp.sinh, 1 + (5 - 2)
    g2 = lambda r: du(r) ** 2 + lam_n * u(r) ** 2 / mp.sinh(r) ** 2
    mlap = lambda r: ddu(r) + (N - 1) * mp.coth(r) * du(r) - lam_n * u(r) / mp.sinh(r) ** 2
    return {
        "bilap": vol(lambda r: mlap(r) ** 2, N, psi, 1, 3),
        "grad2": vol(g2, N, psi, 1, 3),
        "grad2_over_r2": vol(lambda r: g2(r) / r**2, N, psi, 1, 3),
    }


def sequence_h3(n=100, alpha=2):
    # direct quotient of u0 phi_n with u0 = sqrt(r)/sinh(r), N = 3, Lambda = 2
    n = mp.mpf(n)
    phi = lambda r: (r - 1) / n**alpha if r <= 2 else (n ** (-alpha) if r <= n else r ** (-alpha))
    dphi = lambda r: 1 / n**alpha if r <= 2 else (0 if r <= n else -alpha * r ** (-alpha - 1))
    u0 = lambda r: mp.sqrt(r) / mp.sinh(r)
    du0 = lambda r: mp.diff(u0, r)
    w = lambda r: mp.sinh(r) ** 2
    pts = [1, 2, n, mp.inf]
    num = mp.quad(lambda r: (du0(r) * phi(r) + u0(r) * dphi(r)) ** 2 * w(r), pts)
    # (N-1)/4 * Lambda = 1/2 * 2
    num -= mp.quad(lambda r: (u0(r) * phi(r)) ** 2 * w(r), pts)
    den = mp.quad(lambda r: (u0(r) * phi(r)) ** 2 / r**2 * w(r), pts)
    return {"quotient": num / den}


def curvature_sympy():
    r = sp.symbols("r", positive=True)
    out = {}
    cases = {
        "gauss_m1": r * sp.exp(r**2),
        "exp_tail_A2_b0.5_a1": 2 * sp.exp(sp.Rational(1, 2) * r**2),
        "r_exp_tail_A1_b1_a0": r * sp.exp(r),
    }
    for name, psi in cases.items():
        K = -sp.diff(psi, r, 2) / psi
        H = -(sp.diff(psi, r) ** 2 - 1) / psi**2
        for N in (3, 5):
            L = -2 * K - (N - 3) * H
            for rv in (1.5, 3.0):
                out[(name, N, rv)] = tuple(float(sp.N(e.subs(r, rv), 30)) for e in (K, H, L))
    return out


def closed_forms():
    # grad term and denominator of the sequence, integrated exactly in mpmath (N=3, hyperbolic)
    out = {}
    for n in (10, 100):
        for alpha in (1.5, 2, 3):
            a = mp.mpf(alpha)
            nn = mp.mpf(n)
            grad = omega(3) * (
                mp.quad(lambda r: r / nn ** (2 * a), [1, 2])
                + mp.quad(lambda r: r * (a * r ** (-a - 1)) ** 2, [nn, mp.inf])
            )
            den = omega(3) * (
                mp.quad(lambda r: (r - 1) ** 2 / nn ** (2 * a) / r, [1, 2])
                + mp.quad(lambda r: 1 / nn ** (2 * a) / r, [2, nn])
                + mp.quad(lambda r: r ** (-2 * a) / r, [nn, mp.inf])
            )
            out[(n, alpha)] = (float(grad), float(den))
    return out


if __name__ == "__main__":
    for fn in (first_order_h3, euclid4_hardy, rellich_h8, gradient_mode1_h5, sequence_h3):
        print(fn.__name__, {k: mp.nstr(v, 17) for k, v in fn().items()})
    for k, v in curvature_sympy().items():
        print(k, v)
    for k, v in closed_forms().items():
        print(k, v)
