"""Gauss-Kronrod node/weight generation.

The (n, 2n+1) pair is built from scratch in extended precision: the Stieltjes
polynomial E_{n+1} is found by solving its orthogonality conditions against
P_n(x) x^k, the nodes are the roots of P_n * E_{n+1}, and weights follow from
the moment equations. Results are cached as float64 arrays.
"""

import threading
from functools import lru_cache

import mpmath
import numpy as np


def _legendre_coeffs(n):
    # ascending monomial coefficients of P_n, exact rationals via mpmath
    p0, p1 = [mpmath.mpf(1)], [mpmath.mpf(0), mpmath.mpf(1)]
    if n == 0:
        return p0
    for k in range(1, n):
        nxt = [mpmath.mpf(0)] * (k + 2)
        for i, c in enumerate(p1):
            nxt[i + 1] += mpmath.mpf(2 * k + 1) * c / (k + 1)
        for i, c in enumerate(p0):
            nxt[i] -= mpmath.mpf(k) * c / (k + 1)
        p0, p1 = p1, nxt
    return p1


def _moment(k):
    # integral of x^k over [-1, 1]
    return mpmath.mpf(0) if k % 2 else mpmath.mpf(2) / (k + 1)


def _roots(coeffs):
    # coefficients ascending; mpmath.polyroots wants descending
    desc = list(reversed(coeffs))
    while desc and desc[0] == 0:
        desc.pop(0)
    roots = mpmath.polyroots(desc, maxsteps=400, extraprec=400)
    return sorted(mpmath.re(r) for r in roots)


def _weights(nodes):
    m = len(nodes)
    vander = mpmath.matrix(m, m)
    rhs = mpmath.matrix(m, 1)
    for k in range(m):
        for j, x in enumerate(nodes):
            vander[k, j] = x**k
        rhs[k] = _moment(k)
    return list(mpmath.lu_solve(vander, rhs))


_LOCK = threading.Lock()


def gauss_kronrod(n=10, dps=60):
    # mpmath precision is process-global, so generation is serialised
    with _LOCK:
        return _gauss_kronrod(n, dps)


@lru_cache(maxsize=None)
def _gauss_kronrod(n=10, dps=60):
    """Return (kronrod_nodes, kronrod_weights, gauss_weights_on_kronrod_nodes).

    The Gauss weights are laid out on the 2n+1 Kronrod nodes with zeros at the
    nodes that are not Gauss points, so both estimates are a dot product.
    """
    with mpmath.workdps(dps):
        pn = _legendre_coeffs(n)
        # E_{n+1}(x) = x^{n+1} + sum_{j<=n} c_j x^j, orthogonal to P_n x^k, k<=n
        prod_moment = lambda k: mpmath.fsum(c * _moment(i + k) for i, c in enumerate(pn))
        a = mpmath.matrix(n + 1, n + 1)
        b = mpmath.matrix(n + 1, 1)
        for k in range(n + 1):
            for j in range(n + 1):
                a[k, j] = prod_moment(j + k)
            b[k] = -prod_moment(n + 1 + k)
        c = mpmath.lu_solve(a, b)
        en1 = [c[j] for j in range(n + 1)] + [mpmath.mpf(1)]

        gauss_nodes = _roots(pn)
        stieltjes_nodes = _roots(en1)
        if any(abs(mpmath.im(x)) > 0 for x in stieltjes_nodes):
            raise ArithmeticError("complex Kronrod node")
        nodes = sorted(gauss_nodes + stieltjes_nodes)
        kw = _weights(nodes)
        gw_only = _weights(gauss_nodes)

        gw = []
        gi = 0
        for x in nodes:
            if gi < len(gauss_nodes) and abs(x - gauss_nodes[gi]) < mpmath.mpf(10) ** (-dps // 2):
                gw.append(gw_only[gi])
                gi += 1
            else:
                gw.append(mpmath.mpf(0))
        if gi != n:
            raise ArithmeticError("Gauss nodes not embedded in Kronrod set")

        to_np = lambda xs: np.array([float(x) for x in xs])
        return to_np(nodes), to_np(kw), to_np(gw)
