"""Gaussian quadrature rules used across the kernel and Fredholm modules.

Legendre rules come from numpy; the weighted families (power weight u^b on
[0,1] for hard-edge integrands, generalized Laguerre t^a e^{-t} on [0,oo))
are built by Golub-Welsch from the monic three-term recurrence coefficients,
which keeps the package free of special-function dependencies.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "legendre",
    "panels",
    "gauss_power01",
    "gauss_laguerre",
    "golub_welsch",
    "refine_doubling",
]


def golub_welsch(alphas, betas, mu0):
    """Nodes and weights from monic recurrence p_{k+1}=(x-a_k)p_k - b_k p_{k-1}.

    ``alphas`` has length n, ``betas`` length n-1 (b_1..b_{n-1}, all > 0),
    ``mu0`` is the total mass of the weight. Standard symmetric-tridiagonal
    eigenvalue route; weights are mu0 times the squared first components.
    """
    alphas = np.asarray(alphas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    j = np.diag(alphas)
    if betas.size:
        off = np.sqrt(betas)
        j += np.diag(off, 1) + np.diag(off, -1)
    vals, vecs = np.linalg.eigh(j)
    weights = mu0 * vecs[0, :] ** 2
    return vals, weights


@lru_cache(maxsize=None)
def _legendre_base(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre(n: int, a: float, b: float):
    """n-point Gauss-Legendre rule on [a, b]."""
    x, w = _legendre_base(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def panels(a: float, b: float, width: float, n_per_panel: int = 8):
    """Composite Gauss-Legendre rule with panels no wider than ``width``."""
    if not width > 0.0:
        raise ValueError("panel width must be positive")
    m = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, m + 1)
    xs = []
    ws = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        x, w = legendre(n_per_panel, lo, hi)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


@lru_cache(maxsize=None)
def gauss_power01(n: int, beta: float):
    """Rule for integrals over [0,1] with weight u^beta, beta > -1.

    Built from the Jacobi(alpha=0, beta) recurrence on [-1,1] mapped by
    u = (1+x)/2; the map contributes a factor 2^{-beta-1} to the weights.
    """
    if not beta > -1.0:
        raise ValueError("power weight needs beta > -1")
    ab = beta  # Jacobi alpha=0 throughout
    k = np.arange(n, dtype=float)
    alphas = np.empty(n)
    alphas[0] = ab / (ab + 2.0)
    if n > 1:
        kk = k[1:]
        alphas[1:] = (ab * ab) / ((2 * kk + ab) * (2 * kk + ab + 2.0))
    betas = np.empty(max(n - 1, 0))
    if n > 1:
        betas[0] = 4.0 * (1.0 + ab) / ((ab + 2.0) ** 2 * (ab + 3.0))
    if n > 2:
        kk = k[2:]
        betas[1:] = (
            4.0 * kk * kk * (kk + ab) * (kk + ab)
            / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1.0) * (2 * kk + ab - 1.0))
        )
    mu0 = 2.0 ** (ab + 1.0) / (ab + 1.0)
    x, w = golub_welsch(alphas, betas, mu0)
    u = 0.5 * (x + 1.0)
    wu = w * 2.0 ** (-ab - 1.0)
    u.setflags(write=False)
    wu.setflags(write=False)
    return u, wu


@lru_cache(maxsize=None)
def gauss_laguerre(n: int, alpha: float = 0.0):
    """Rule for integrals over [0,oo) with weight t^alpha e^{-t}, alpha > -1."""
    if not alpha > -1.0:
        raise ValueError("Laguerre weight needs alpha > -1")
    k = np.arange(n, dtype=float)
    alphas = 2.0 * k + alpha + 1.0
    kk = k[1:]
    betas = kk * (kk + alpha)
    mu0 = math.gamma(alpha + 1.0)
    x, w = golub_welsch(alphas, betas, mu0)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def refine_doubling(evaluate, n0: int, tol: float, cap: int = 1 << 14):
    """Evaluate ``evaluate(n)`` at n, 2n, ... until successive values agree.

    Returns (value_at_finest, nodes_used, cauchy_gap). Raises
    ConvergenceError when the node count would exceed ``cap``.
    """
    n = n0
    prev = evaluate(n)
    while True:
        if 2 * n > cap:
            raise ConvergenceError(
                f"no convergence to {tol:g} by {n} nodes (last gap unresolved)"
            )
        cur = evaluate(2 * n)
        gap = abs(cur - prev)
        if gap <= tol:
            return cur, 2 * n, gap
        prev = cur
        n *= 2
