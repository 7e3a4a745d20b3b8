"""Equal-time determinantal kernels and their correlation functions.

Families: the three scaling-limit kernels (sine, Airy, hard-edge Bessel)
and the finite-N Hermite / Laguerre projection kernels whose scaled forms
converge to them. Correlation functions are principal-minor determinants
rho_m = det[K(x_j, x_k)].

The ratio kernels (u(x)v(y) - v(x)u(y))/(x - y) are evaluated by a
two-term Taylor branch
    K(m + d/2, m - d/2) = W(m) + d^2 c2(m),
    W = u'v - uv',  c2 = [u'''v - uv''' + 3(u'v'' - u''v')]/24,
whenever |x - y| < 1e-4 (1 + |x|) (for the Bessel family additionally
|x - y| < 0.01 (x + y)/2, since its natural variable is sqrt(x) and the
fixed-midpoint expansion needs d well below m near the hard edge; outside
that band the direct formula has no damaging cancellation). Continuity
across the switch is 1e-10 or better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .quadgauss import gauss_power01, legendre
from .specfun import (
    airy,
    bessel_j_triplet,
    hermite_wave_all,
    laguerre_wave_all,
)

__all__ = [
    "StaticKernel",
    "CorrelationRequest",
    "sine_kernel",
    "airy_kernel",
    "bessel_kernel",
    "hermite_kernel",
    "laguerre_kernel",
    "eval_static",
    "eval_static_grid",
    "rho_m",
    "total_mass",
]

_FAMILIES = ("sine", "airy", "bessel", "hermite_n", "laguerre_n")

# near-diagonal switch: |x-y| < _DIAG_REL * (1 + |x|)
_DIAG_REL = 1e-4


@dataclass(frozen=True)
class StaticKernel:
    """Equal-time kernel; nu for bessel/laguerre_n, n for the finite families."""

    family: str
    nu: float | None = None
    n: int | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown kernel family {self.family!r}")
        if self.family in ("bessel", "laguerre_n"):
            if self.nu is None or not self.nu > -1.0:
                raise DomainError(f"{self.family} needs nu > -1")
        if self.family in ("hermite_n", "laguerre_n"):
            if self.n is None or self.n < 1 or self.n != int(self.n):
                raise DomainError(f"{self.family} needs integer n >= 1")

    @property
    def domain_nonneg(self) -> bool:
        return self.family in ("bessel", "laguerre_n")


@dataclass(frozen=True)
class CorrelationRequest:
    kernel: StaticKernel
    points: Sequence[float]


def sine_kernel() -> StaticKernel:
    return StaticKernel("sine")


def airy_kernel() -> StaticKernel:
    return StaticKernel("airy")


def bessel_kernel(nu: float) -> StaticKernel:
    return StaticKernel("bessel", nu=nu)


def hermite_kernel(n: int) -> StaticKernel:
    return StaticKernel("hermite_n", n=n)


def laguerre_kernel(n: int, nu: float) -> StaticKernel:
    return StaticKernel("laguerre_n", nu=nu, n=n)


def _sine_pairs(x, y):
    d = x - y
    small = np.abs(d) < _DIAG_REL * (1.0 + np.abs(x))
    d2 = d * d
    series = (1.0 - d2 / 6.0 + d2 * d2 / 120.0) / np.pi
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.sin(d) / (np.pi * d)
    return np.where(small, series, direct)


def _airy_pairs(x, y):
    d = x - y
    small = np.abs(d) < _DIAG_REL * (1.0 + np.abs(x))
    out = np.empty(x.shape)
    if np.any(~small):
        xs, ys = x[~small], y[~small]
        ax, apx = airy(xs)
        ay, apy = airy(ys)
        out[~small] = (ax * apy - apx * ay) / (xs - ys)
    if np.any(small):
        m = 0.5 * (x[small] + y[small])
        dd = d[small]
        ai, aip = airy(m)
        w = aip * aip - m * ai * ai
        c2 = ai * aip / 12.0 + m * (aip * aip - m * ai * ai) / 6.0
        out[small] = w + dd * dd * c2
    return out


def _bessel_ab(nu, x):
    """A(x) = J_nu(2 sqrt x), B(x) = x A'(x) = sqrt(x) J_nu'(2 sqrt x)."""
    r = np.sqrt(x)
    jm, jn, jp = bessel_j_triplet(nu, 2.0 * r)
    with np.errstate(invalid="ignore"):
        b = r * 0.5 * (jm - jp)
    zero = x == 0.0
    if np.any(zero):
        # B ~ x^{nu/2} at the edge, divergent only below nu = 0
        b = np.where(zero, 0.0 if nu >= 0.0 else np.inf, b)
    return jn, b


def _bessel_diag(nu, x):
    r = np.sqrt(x)
    jm, jn, jp = bessel_j_triplet(nu, 2.0 * r)
    out = jn * jn - jp * jm
    zero = x == 0.0
    if np.any(zero):
        # J_{nu-1}(0) is infinite for nu < 1; the limit of the product is clean
        out = np.where(zero, 1.0 if nu == 0.0 else (0.0 if nu > 0.0 else np.inf), out)
    return out


def _bessel_pairs(nu, x, y):
    d = x - y
    m = 0.5 * (x + y)
    diag = d == 0.0
    small = (np.abs(d) < _DIAG_REL * (1.0 + np.abs(x))) & (np.abs(d) < 0.01 * m) & ~diag
    out = np.empty(x.shape)
    rest = ~(small | diag)
    if np.any(rest):
        xs, ys = x[rest], y[rest]
        ax, bx = _bessel_ab(nu, xs)
        ay, by = _bessel_ab(nu, ys)
        with np.errstate(invalid="ignore"):
            vals = (ax * by - bx * ay) / (xs - ys)
        if nu < 0.0:
            edge = (xs == 0.0) | (ys == 0.0)
            if np.any(edge):
                # K(0, y) diverges like x^{nu/2} with the sign of the
                # coefficient (nu/2) A(y) - B(y) over y
                other = np.where(xs[edge] == 0.0, ys[edge], xs[edge])
                ao, bo = _bessel_ab(nu, other)
                vals[edge] = np.inf * np.sign(0.5 * nu * ao - bo)
        out[rest] = vals
    if np.any(small):
        mm, dd = m[small], d[small]
        a, b = _bessel_ab(nu, mm)
        ap = b / mm
        # W and c2 from the ODE x A'' + A' + (1 - nu^2/(4x)) A = 0
        w = mm * ap * ap + (1.0 - nu * nu / (4.0 * mm)) * a * a
        n2 = nu * nu
        c2 = (
            ((2.0 + n2) / mm - 4.0) * ap * ap
            - (2.0 / mm) * a * ap
            + (-4.0 / mm + 2.0 * n2 / mm**2 - (n2 / 2.0 + n2 * n2 / 4.0) / mm**3) * a * a
        ) / 24.0
        out[small] = w + dd * dd * c2
    if np.any(diag):
        out[diag] = _bessel_diag(nu, x[diag])
    return out


def _hermite_scale(n: int) -> float:
    return math.sqrt(2.0 * n)


def _hermite_pairs(n, x, y):
    c = _hermite_scale(n)
    wx = hermite_wave_all(n, x / c)
    wy = hermite_wave_all(n, y / c)
    return (wx * wy).sum(axis=0) / c


def _laguerre_pairs(n, nu, x, y):
    wx = laguerre_wave_all(n, nu, x / float(n))
    wy = laguerre_wave_all(n, nu, y / float(n))
    return (wx * wy).sum(axis=0) / float(n)


def _pairs(kernel: StaticKernel, x, y):
    shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
    xb = np.broadcast_to(np.asarray(x, dtype=float), shape).ravel()
    yb = np.broadcast_to(np.asarray(y, dtype=float), shape).ravel()
    if kernel.domain_nonneg and (np.any(xb < 0.0) or np.any(yb < 0.0)):
        raise DomainError(f"{kernel.family} kernel lives on [0, oo)")
    if kernel.family == "sine":
        flat = _sine_pairs(xb, yb)
    elif kernel.family == "airy":
        flat = _airy_pairs(xb, yb)
    elif kernel.family == "bessel":
        flat = _bessel_pairs(kernel.nu, xb, yb)
    elif kernel.family == "hermite_n":
        flat = _hermite_pairs(kernel.n, xb, yb)
    else:
        flat = _laguerre_pairs(kernel.n, kernel.nu, xb, yb)
    return flat.reshape(shape)


def eval_static(kernel: StaticKernel, x: float, y: float) -> float:
    """K(x, y); symmetric, with the removable singularity at x = y handled
    by the documented Taylor branch."""
    return float(_pairs(kernel, np.float64(x), np.float64(y)))


def eval_static_grid(kernel: StaticKernel, xs, ys) -> np.ndarray:
    """Matrix K(xs[i], ys[j]); the workhorse for Fredholm discretizations."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    return _pairs(kernel, xs[:, None], ys[None, :])


def rho_m(req: CorrelationRequest) -> float:
    """Correlation function rho_m = det[K(x_j, x_k)]; exactly 0 when two
    points coincide (enforced up front, not left to rounding)."""
    pts = np.asarray(list(req.points), dtype=float)
    if pts.size < 1:
        raise DomainError("rho_m needs at least one point")
    if np.unique(pts).size < pts.size:
        return 0.0
    gram = eval_static_grid(req.kernel, pts, pts)
    if pts.size == 1:
        return float(gram[0, 0])
    return float(np.linalg.det(gram))


def _mass_rule(kernel: StaticKernel):
    """Quadrature nodes/weights covering the diagonal mass of a finite-N
    kernel; tails are below 1e-12 by the Gaussian / exponential envelopes."""
    n = kernel.n
    if kernel.family == "hermite_n":
        c = _hermite_scale(n)
        a = c * (math.sqrt(2.0 * n) + 6.0)
        return legendre(max(400, 8 * n), -a, a)
    # laguerre in the wave variable w = X/n, substituted w = u^2 so the
    # x^nu endpoint becomes u^{2nu+1}; for nu <= -0.5 that is still
    # singular and the first panel uses the exact power weight
    nu = kernel.nu
    umax = math.sqrt(4.0 * n + 20.0 * math.sqrt(n) + 50.0)
    u1, w1 = legendre(max(400, 8 * n), 1.0, umax)
    x1, wx1 = n * u1 * u1, 2.0 * n * u1 * w1
    beta = 2.0 * nu + 1.0
    npanel = max(120, int(4.0 * math.sqrt(n)) + 40)
    if beta > 0.0:
        u0, w0 = legendre(npanel, 0.0, 1.0)
        return np.concatenate([n * u0 * u0, x1]), np.concatenate([2.0 * n * u0 * w0, wx1])
    up, wp = gauss_power01(npanel, beta)
    # the u^beta factor lives in the rule's weight, so fold the remaining
    # smooth factor 2u/u^beta of the substituted integrand into the weights
    wfold = wp * 2.0 * n * up ** (1.0 - beta)
    return np.concatenate([n * up * up, x1]), np.concatenate([wfold, wx1])


def total_mass(kernel: StaticKernel) -> float:
    """Integral of K(x, x) over the domain; equals N for the projection
    kernels (an orthonormality check through generic quadrature)."""
    if kernel.family not in ("hermite_n", "laguerre_n"):
        raise DomainError("total_mass is defined for the finite-N families")
    nodes, weights = _mass_rule(kernel)
    diag = _pairs(kernel, nodes, nodes)
    return float(np.sum(weights * diag))
