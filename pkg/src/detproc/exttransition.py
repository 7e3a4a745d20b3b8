"""Space-time extended kernels and the transition densities they are built
from.

Extended kernels carry a case split: equal times reduce exactly to the
static kernel (never through an integral), the forward case integrates a
bounded-envelope representation over a finite range, and the backward case
integrates a Gaussian- or exponentially-damped tail over a semi-infinite
range truncated where the closed-form decay envelope falls below 1e-14.
Oscillation is resolved by Gauss-Legendre panels whose width is tied to
the local phase rate; envelope growth/decay rates bound the width as well,
so each 8-node panel sees a mild integrand. Truncation points and panel
counts are reported in the metadata of the *_with_info entry point.

Transition densities: the generalized heat kernel p_sin (valid for either
sign of the time increment, with density interpretation only forward), the
drifted variant q built from it by the parabolic shift x - t^2/4, and the
squared Bessel density p^(nu), evaluated in log space so large arguments
do not overflow the Bessel factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, DomainError
from .quadgauss import gauss_power01, panels
from .specfun import airy, bessel_j, log_bessel_i
from .statickernels import (
    StaticKernel,
    bessel_kernel,
    eval_static,
    sine_kernel,
)
from .statickernels import airy_kernel as _airy_static

__all__ = [
    "ExtendedKernel",
    "TransitionDensity",
    "ext_sine",
    "ext_airy",
    "ext_bessel",
    "heat_density",
    "drifted_density",
    "squared_bessel_density",
    "eval_extended",
    "eval_extended_with_info",
    "eval_transition",
    "p_sin",
]

_EXT_FAMILIES = ("ext_sine", "ext_airy", "ext_bessel")
_TD_KINDS = ("heat", "drifted", "squared_bessel")

# refuse backward evaluations whose damped tail needs more panels than this
_MAX_PANELS = 200_000


@dataclass(frozen=True)
class ExtendedKernel:
    family: str
    nu: float | None = None

    def __post_init__(self) -> None:
        if self.family not in _EXT_FAMILIES:
            raise DomainError(f"unknown extended family {self.family!r}")
        if self.family == "ext_bessel" and (self.nu is None or not self.nu > -1.0):
            raise DomainError("ext_bessel needs nu > -1")

    @property
    def static(self) -> StaticKernel:
        if self.family == "ext_sine":
            return sine_kernel()
        if self.family == "ext_airy":
            return _airy_static()
        return bessel_kernel(self.nu)


@dataclass(frozen=True)
class TransitionDensity:
    kind: str
    nu: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _TD_KINDS:
            raise DomainError(f"unknown transition kind {self.kind!r}")
        if self.kind == "squared_bessel" and (self.nu is None or not self.nu > -1.0):
            raise DomainError("squared_bessel needs nu > -1")


def ext_sine() -> ExtendedKernel:
    return ExtendedKernel("ext_sine")


def ext_airy() -> ExtendedKernel:
    return ExtendedKernel("ext_airy")


def ext_bessel(nu: float) -> ExtendedKernel:
    return ExtendedKernel("ext_bessel", nu=nu)


def heat_density() -> TransitionDensity:
    return TransitionDensity("heat")


def drifted_density() -> TransitionDensity:
    return TransitionDensity("drifted")


def squared_bessel_density(nu: float) -> TransitionDensity:
    return TransitionDensity("squared_bessel", nu=nu)


def _npanels_guard(a: float, b: float, width: float) -> None:
    if (b - a) / width > _MAX_PANELS:
        raise DivergenceError(
            "backward-time tail needs an impractical quadrature range; "
            "no truncation bound established at these parameters"
        )


def _ext_sine_value(delta: float, x: float, y: float):
    w = y - x
    if delta > 0.0:
        width = min(math.pi / (abs(w) + 1.0), 4.0 / (1.0 + delta))
        nodes, wts = panels(0.0, 1.0, width)
        vals = np.exp(0.5 * delta * nodes * nodes) * np.cos(nodes * w)
        return float(vals @ wts) / math.pi, {"truncation": None, "nodes": nodes.size}
    g = -delta
    umax = math.sqrt(68.0 / g) + 1.0
    width = min(math.pi / (abs(w) + 1.0), 4.0 / (1.0 + g * umax))
    _npanels_guard(1.0, umax, width)
    nodes, wts = panels(1.0, umax, width)
    vals = np.exp(0.5 * delta * nodes * nodes) * np.cos(nodes * w)
    return -float(vals @ wts) / math.pi, {"truncation": umax, "nodes": nodes.size}


def _ext_airy_value(delta: float, x: float, y: float):
    if delta > 0.0:
        umax = max(0.0, -min(x, y)) + 14.0 + 4.0 / (1.0 + delta)
        depth = umax + max(abs(x), abs(y))
        width = min(math.pi / (2.0 * math.sqrt(depth + 1.0)), 4.0 / (1.0 + delta), 0.5)
        _npanels_guard(0.0, umax, width)
        nodes, wts = panels(0.0, umax, width)
        ax, _ = airy(nodes + x)
        ay, _ = airy(nodes + y)
        vals = np.exp(-0.5 * delta * nodes) * ax * ay
        return float(vals @ wts), {"truncation": umax, "nodes": nodes.size}
    g = -delta
    umin = -(66.0 / g + 4.0)
    depth = abs(umin) + max(abs(x), abs(y))
    width = min(math.pi / (2.0 * math.sqrt(depth + 1.0)), 0.5)
    _npanels_guard(umin, 0.0, width)
    nodes, wts = panels(umin, 0.0, width)
    ax, _ = airy(nodes + x)
    ay, _ = airy(nodes + y)
    vals = np.exp(-0.5 * delta * nodes) * ax * ay
    return -float(vals @ wts), {"truncation": umin, "nodes": nodes.size}


def _jtilde(nu: float, t):
    """Entire part of J_nu: J_nu(2 sqrt t) / t^{nu/2}, valid at t = 0."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    tiny = t <= 0.01
    if np.any(tiny):
        # three series terms suffice below 0.01
        tt = t[tiny]
        g0 = math.gamma(nu + 1.0)
        out[tiny] = (
            1.0 / g0
            - tt / math.gamma(nu + 2.0)
            + tt * tt / (2.0 * math.gamma(nu + 3.0))
            - tt * tt * tt / (6.0 * math.gamma(nu + 4.0))
        )
    if np.any(~tiny):
        tt = t[~tiny]
        out[~tiny] = bessel_j(nu, 2.0 * np.sqrt(tt)) / tt ** (0.5 * nu)
    return out


def _ext_bessel_value(nu: float, delta: float, x: float, y: float):
    if delta > 0.0:
        n = 64 + int(2.0 * (math.sqrt(x) + math.sqrt(y))) + int(2.0 * delta)
        u, w = gauss_power01(n, nu)
        with np.errstate(divide="ignore"):
            pref = (x * y) ** (0.5 * nu)
        vals = np.exp(2.0 * delta * u) * _jtilde(nu, u * x) * _jtilde(nu, u * y)
        return pref * float(vals @ w), {"truncation": None, "nodes": u.size}
    g = -2.0 * delta
    rmax = math.sqrt(34.0 / g) + 1.0
    freq = 2.0 * (math.sqrt(x) + math.sqrt(y))
    width = min(math.pi / (freq + 1.0), 4.0 / (1.0 + 2.0 * g * rmax))
    _npanels_guard(1.0, rmax, width)
    r, wr = panels(1.0, rmax, width)
    vals = (
        2.0
        * r
        * np.exp(-g * r * r)
        * bessel_j(nu, 2.0 * r * math.sqrt(x))
        * bessel_j(nu, 2.0 * r * math.sqrt(y))
    )
    return -float(vals @ wr), {"truncation": rmax * rmax, "nodes": r.size}


def eval_extended_with_info(
    kernel: ExtendedKernel, s: float, x: float, t: float, y: float
) -> tuple[float, dict]:
    """Extended kernel value plus quadrature metadata (truncation point of
    the semi-infinite backward integral and node count)."""
    if s < 0.0 or t < 0.0:
        raise DomainError("extended kernels take nonnegative times")
    if kernel.family == "ext_bessel" and (x < 0.0 or y < 0.0):
        raise DomainError("ext_bessel lives on [0, oo)")
    if s == t:
        return eval_static(kernel.static, x, y), {"truncation": None, "nodes": 0}
    delta = t - s
    if kernel.family == "ext_sine":
        return _ext_sine_value(delta, x, y)
    if kernel.family == "ext_airy":
        return _ext_airy_value(delta, x, y)
    return _ext_bessel_value(kernel.nu, delta, x, y)


def eval_extended(kernel: ExtendedKernel, s: float, x: float, t: float, y: float) -> float:
    value, _ = eval_extended_with_info(kernel, s, x, t, y)
    return value


def p_sin(tau, x, y):
    """Generalized heat kernel (2 pi |tau|)^{-1/2} exp(-(x-y)^2 / (2 tau)).

    Accepts complex space arguments (the backward-time contour machinery
    feeds purely imaginary displacements through here); tau must be a
    nonzero real.
    """
    if tau == 0.0:
        raise DomainError("tau = 0 is the delta branch, not a density value")
    d = np.asarray(x) - np.asarray(y)
    pref = 1.0 / math.sqrt(2.0 * math.pi * abs(tau))
    return pref * np.exp(-(d * d) / (2.0 * tau))


def _p_nu_log(nu: float, tau: float, to: float, frm: float) -> float:
    # log of (1/(2|tau|)) (to/frm)^{nu/2} e^{-(frm+to)/(2 tau)} I_nu(sqrt(frm to)/|tau|)
    z = math.sqrt(frm * to) / abs(tau)
    return (
        -math.log(2.0 * abs(tau))
        + 0.5 * nu * (math.log(to) - math.log(frm))
        - (frm + to) / (2.0 * tau)
        + float(log_bessel_i(nu, z))
    )


def eval_transition(td: TransitionDensity, s: float, t: float, frm: float, to: float) -> float:
    """Transition density value from state `frm` at time s to `to` at t.

    The t = s case is a point mass represented symbolically by callers,
    never evaluated here (DomainError).
    """
    if t == s:
        raise DomainError("t = s is the delta branch; no density value exists")
    tau = t - s
    if td.kind == "heat":
        return float(p_sin(tau, to, frm))
    if td.kind == "drifted":
        return float(p_sin(tau, to - t * t / 4.0, frm - s * s / 4.0))
    # squared_bessel
    nu = td.nu
    if frm < 0.0 or to < 0.0:
        raise DomainError("squared_bessel density needs nonnegative space arguments")
    if frm < 1e-12:
        # started at the origin: y^nu e^{-y/(2 tau)} / ((2 tau)^{nu+1} Gamma(nu+1))
        if tau < 0.0:
            raise DomainError("the zero-start branch is defined for forward time only")
        if to == 0.0:
            if nu > 0.0:
                return 0.0
            if nu < 0.0:
                return math.inf
            return math.exp(-math.log(2.0 * tau))
        logp = (
            nu * math.log(to)
            - to / (2.0 * tau)
            - (nu + 1.0) * math.log(2.0 * tau)
            - math.lgamma(nu + 1.0)
        )
        return math.exp(logp)
    if to == 0.0:
        # density vanishes at the origin for nu > 0, diverges for nu < 0
        if nu > 0.0:
            return 0.0
        if nu < 0.0:
            return math.inf
        return math.exp(-frm / (2.0 * tau)) / (2.0 * abs(tau))
    return math.exp(_p_nu_log(nu, tau, to, frm))
