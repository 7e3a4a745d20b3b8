"""Space-time kernels started from a fixed finite configuration.

A deterministic initial configuration ``xi`` with finitely many simple
points induces, for each pair of positive times, a correlation kernel
that is no longer a function of ``t - s``.  For the families implemented
here the kernel has a residue form: a sum over the points of ``xi`` of a
forward transition factor times a one-dimensional integral in an
auxiliary variable ``u``, minus the bare transition density when
``s > t``.

* ``sine``: heat-kernel factors, ``u`` runs over the real line and
  enters through ``iu``.  The integrand decays like
  ``exp(-u^2 / (2 t))``, so the grid is truncated where that Gaussian
  (weighted by the polynomial growth of the point factor) drops below
  1e-16 and integrated by Gauss-Legendre, 200 nodes doubled until two
  successive values agree to 1e-9.
* ``airy_prelimit``: drifted heat-kernel factors at finite ``n``.  The
  parabolic shift ``t^2/4`` and the constant drift ``-n^(1/3)`` (the
  principal-value mass of the semicircle profile against ``1/x``) enter
  as explicit exponential factors; the ``u`` machinery is shared with
  the sine family.
* ``bessel``: squared-Bessel factors on the nonnegative half-line,
  ``u`` runs over ``(-inf, 0]`` and the backward factor is real with an
  integrable ``|u|^nu`` endpoint factor, handled by a Gauss-Jacobi rule
  near 0 and Gauss-Legendre panels beyond.

Everything internal is complex; the public value is the real part after
asserting the imaginary part is below 1e-8.  ``contour_crosscheck``
recomputes the point sum as literal contour integrals over small
circles and returns both routes for comparison.

The real-line quadrature for the sine and airy families cancels
digits: the integrand magnitude carries ``exp(y^2 / (2 t))`` while the
result is order one, so the achievable absolute accuracy degrades by
that factor times machine epsilon.  Keep ``y^2 / (2 t)`` below about 25
for 1e-8 work.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .configspace import Configuration
from .errors import ConvergenceError, DomainError, GeometryError
from .exttransition import p_sin
from .quadgauss import gauss_power01, legendre
from .specfun import bessel_j

__all__ = [
    "NonEqKernelSpec",
    "airy_prelimit_noneq",
    "bessel_noneq",
    "contour_crosscheck",
    "eval_noneq",
    "eval_noneq_grid",
    "m_airy",
    "phi_0",
    "phi_airy",
    "sine_noneq",
    "weierstrass_g",
]

_FAMILIES = ("sine", "airy_prelimit", "bessel")


def weierstrass_g(u, p: int):
    """Weierstrass primary factor ``G(u, p)``.

    ``G(u, 0) = 1 - u`` and for ``p >= 1`` the factor
    ``(1 - u) exp(sum_{k<=p} u^k / k)``.  Accepts real or complex ``u``
    and returns the same kind; ``G(0, p) = 1`` for every ``p``.
    """
    if p < 0 or p != int(p):
        raise DomainError(f"genus must be a nonnegative integer, got {p!r}")
    p = int(p)
    if p == 0:
        return 1.0 - u
    acc = 0.0
    upow = 1.0
    for k in range(1, p + 1):
        upow = upow * u
        acc = acc + upow / k
    if isinstance(acc, complex):
        return (1.0 - u) * cmath.exp(acc)
    return (1.0 - u) * math.exp(acc)


def phi_0(config: Configuration, z, w):
    """Genus-zero point factor ``prod G((w - z)/(x - z), 0)`` over ``x != z``.

    The product runs over the support of ``config`` with the point at
    ``z`` itself removed (multiplicities of the remaining points are
    honoured).  Empty products give 1.
    """
    out = 1.0 + 0.0j
    for x, m in zip(config.points, config.multiplicities):
        if x == z:
            continue
        out *= ((x - w) / (x - z)) ** m
    return out


def m_airy(config: Configuration, level: float) -> float:
    """Truncated centering mass: semicircle-edge density minus ``config``.

    Integrates ``rhohat(x)/x`` with ``rhohat(x) = sqrt(-x)/pi`` on
    ``x < 0`` over ``0 < |x| < level`` (analytically
    ``-(2/pi) sqrt(level)``) and subtracts ``1/x`` for every point of
    ``config`` with ``0 < |x| < level``, counted with multiplicity.
    """
    if level <= 0.0:
        raise DomainError(f"truncation level must be positive, got {level!r}")
    out = -(2.0 / math.pi) * math.sqrt(level)
    for x, m in zip(config.points, config.multiplicities):
        if 0.0 < abs(x) < level:
            out -= m / x
    return out


def phi_airy(config: Configuration, w, level: float):
    """Truncated Airy point factor ``exp(w M_A) prod G(w/x, 1)`` over the window.

    Both the centering mass and the genus-one product are truncated to
    ``0 < |x| < level``; convergence as ``level`` grows is monitored by
    callers, not assumed here.
    """
    mass = m_airy(config, level)
    out = cmath.exp(w * mass)
    for x, m in zip(config.points, config.multiplicities):
        if 0.0 < abs(x) < level:
            out *= weierstrass_g(w / x, 1) ** m
    return out


@dataclass(frozen=True)
class NonEqKernelSpec:
    """A kernel family together with its deterministic starting configuration.

    ``family`` is one of ``sine``, ``airy_prelimit``, ``bessel``.  The
    configuration must be simple (all multiplicities 1); the bessel
    family additionally needs nonnegative points and an index
    ``nu > -1``, and ``airy_prelimit`` needs the particle count ``n``
    that sets the drift constant ``-n**(1/3)``.
    """

    family: str
    base_config: Configuration
    n: int | None = None
    nu: float | None = None

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if any(m != 1 for m in self.base_config.multiplicities):
            raise DomainError("starting configuration must be simple")
        if self.family == "bessel":
            if self.nu is None or not self.nu > -1.0:
                raise DomainError("bessel family needs nu > -1")
            if self.base_config.points and self.base_config.points[0] < 0.0:
                raise DomainError("bessel points must be nonnegative")
        elif self.nu is not None:
            raise DomainError("nu only applies to the bessel family")
        if self.family == "airy_prelimit":
            if self.n is None or self.n != int(self.n) or self.n < 1:
                raise DomainError("airy_prelimit needs a positive integer n")
        elif self.n is not None:
            raise DomainError("n only applies to the airy_prelimit family")

    @property
    def drift(self) -> float:
        """Constant drift ``-n**(1/3)`` of the prelimit family."""
        if self.family != "airy_prelimit":
            raise DomainError("drift is only defined for airy_prelimit")
        return -float(self.n) ** (1.0 / 3.0)


def sine_noneq(config: Configuration) -> NonEqKernelSpec:
    return NonEqKernelSpec(family="sine", base_config=config)


def airy_prelimit_noneq(config: Configuration, n: int) -> NonEqKernelSpec:
    return NonEqKernelSpec(family="airy_prelimit", base_config=config, n=n)


def bessel_noneq(config: Configuration, nu: float) -> NonEqKernelSpec:
    return NonEqKernelSpec(family="bessel", base_config=config, nu=nu)


def _phi0_columns(points: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Matrix ``phi[j, k] = phi_0(xi, points[j], w[k])`` for simple points."""
    factors = points[:, None] - w[None, :]
    full = np.prod(factors, axis=0)
    denom = np.empty(len(points), dtype=float)
    for j, xj in enumerate(points):
        diffs = np.delete(points, j) - xj
        denom[j] = float(np.prod(diffs)) if diffs.size else 1.0
    return (full[None, :] / factors) / denom[:, None]


def _itilde(nu: float, w: np.ndarray) -> np.ndarray:
    """Entire series ``sum_k w^k / (k! Gamma(nu + k + 1))``.

    Equals ``I_nu(2 sqrt(w)) / w^(nu/2)`` on the positive axis and its
    analytic continuation elsewhere; alternating for negative ``w``.
    """
    w = np.asarray(w)
    out = np.full(w.shape, 1.0 / math.gamma(nu + 1.0), dtype=w.dtype)
    term = np.copy(out)
    for k in range(1, 400):
        term = term * w / (k * (nu + k))
        out = out + term
        if np.max(np.abs(term)) <= 1e-18 * max(np.max(np.abs(out)), 1e-300):
            return out
    raise DomainError("series argument too large for the entire-part expansion")


def _p_bessel_start(nu: float, s: float, x: float, z: np.ndarray) -> np.ndarray:
    """Squared-Bessel density from ``z`` to ``x`` over time ``s``, entire in ``z``.

    ``(1/(2s)) (x/(2s))^nu exp(-(z + x)/(2s))`` times the entire part of
    the modified-Bessel factor; agrees with the zero-start branch at
    ``z = 0`` and needs no branch tracking for complex ``z``.
    """
    if x < 0.0:
        raise DomainError("evaluation point must be nonnegative")
    if x == 0.0:
        if nu > 0.0:
            return np.zeros_like(np.asarray(z))
        if nu < 0.0:
            raise DomainError("kernel diverges at the hard edge for nu < 0")
        return np.exp(-(np.asarray(z) + x) / (2.0 * s)) / (2.0 * s)
    pref = (x / (2.0 * s)) ** nu / (2.0 * s)
    z = np.asarray(z)
    return pref * np.exp(-(z + x) / (2.0 * s)) * _itilde(nu, z * x / (4.0 * s * s))


def _jtilde_profile(nu: float, a: np.ndarray) -> np.ndarray:
    """``J_nu(2 sqrt(a)) / a^(nu/2)`` for ``a >= 0``, stable at both ends.

    The series branch ends at ``a = 6.25`` (``z = 5``), the same point
    where the Bessel routine itself leaves its series: the two branches
    then differ only at that routine's matching level, which matters
    because quadrature panels straddle the switch and any larger jump
    would stall the doubling below exponentially amplified integrands.
    """
    a = np.asarray(a, dtype=float)
    out = np.empty_like(a)
    small = a <= 6.25
    if np.any(small):
        out[small] = _itilde(nu, -a[small])
    if not np.all(small):
        big = a[~small]
        out[~small] = bessel_j(nu, 2.0 * np.sqrt(big)) / big ** (0.5 * nu)
    return out


def _p_bessel_back(nu: float, t: float, u: np.ndarray, y: float) -> np.ndarray:
    """Backward factor at real ``u <= 0``: the phase-cancelled real form.

    ``(1/(2t)) (|u|/(2t))^nu exp((u + y)/(2t))`` times the Bessel-J
    profile in ``|u| y / (4 t^2)``.  Integrates to exactly 1 over
    ``u in (-inf, 0]``.
    """
    if y < 0.0:
        raise DomainError("evaluation point must be nonnegative")
    u = np.asarray(u, dtype=float)
    pref = (np.abs(u) / (2.0 * t)) ** nu / (2.0 * t)
    return pref * np.exp((u + y) / (2.0 * t)) * _jtilde_profile(
        nu, -u * y / (4.0 * t * t)
    )


def _gauss_truncation(t: float, centre: float, npts: int) -> float:
    """Half-width where ``exp((centre^2 - u^2)/(2t))`` times polynomial
    growth of degree ``npts - 1`` falls below 1e-16."""
    return math.sqrt(73.7 * t + centre * centre) + 6.0 + 0.5 * math.sqrt(npts)


def _double_to_floor(evaluate, rel_floor: float, n0: int = 200, cap: int = 6400):
    """Double ``evaluate(n) -> (value, l1)`` until successive values agree.

    The target is 1e-9 or ``rel_floor`` times the weighted absolute sum
    of the integrand, whichever is larger.  The integrands here can
    carry exponentially large oscillating magnitudes against an
    order-one result, so below ``rel_floor * l1`` finer grids only
    resample the noise of the integrand evaluations themselves:
    ``rel_floor`` is a few machine epsilons for integrands built from
    exponentials alone and the Bessel routine's relative accuracy when
    its backward-recurrence branch is in play.
    """
    n = n0
    prev, _ = evaluate(n)
    while True:
        if 2 * n > cap:
            raise ConvergenceError(
                f"u-quadrature not converged by {n} nodes"
            )
        cur, l1 = evaluate(2 * n)
        gap = float(np.max(np.abs(cur - prev)))
        if gap <= max(1e-9, rel_floor * l1):
            return cur, 2 * n, gap
        prev = cur
        n *= 2


def _integral_term_gaussian(
    points: np.ndarray,
    prefactors: np.ndarray,
    t: float,
    ytilde: float,
    drift: float,
) -> tuple[complex, int, float]:
    """Shared u-integral for the sine (drift 0) and airy_prelimit families.

    Computes ``sum_j prefactors[j] * int du phi_0(xi, x_j, iu)
    exp((iu - x_j) drift) p_sin(-t, iu, ytilde)`` by Gauss-Legendre
    doubling against the roundoff floor: the integrand carries
    ``exp(ytilde^2/(2t))`` against an order-one result, so the
    achievable absolute accuracy is that magnitude times ``eps``.
    Returns (value, nodes, cauchy gap).
    """
    half = _gauss_truncation(t, ytilde, len(points))
    shift = np.exp(-points * drift) if drift != 0.0 else np.ones(len(points))
    weights = prefactors * shift
    # complex exp(z) is accurate to eps * |z|, and |z| peaks at the
    # grid edge; that is the relative noise finer grids resample
    zmax = (half + abs(ytilde)) ** 2 / (2.0 * t) + abs(drift) * half
    rel_floor = 2.3e-16 * (16.0 + zmax)

    def evaluate(n: int):
        u, wq = legendre(n, -half, half)
        w = 1j * u
        back = p_sin(-t, w, ytilde)
        if drift != 0.0:
            back = back * np.exp(w * drift)
        phi = _phi0_columns(points, w)
        rows = weights[:, None] * phi * (back * wq)[None, :]
        return complex(np.sum(rows)), float(np.sum(np.abs(rows)))

    return _double_to_floor(evaluate, rel_floor)


def _integral_term_bessel(
    points: np.ndarray,
    prefactors: np.ndarray,
    nu: float,
    t: float,
    y: float,
) -> tuple[complex, int, float]:
    """u-integral over ``(-inf, 0]`` for the bessel family.

    Splits off ``[-2t, 0]`` where the ``|u|^nu`` endpoint factor is
    resolved by a Gauss-Jacobi rule, and covers the exponentially
    damped remainder ``[-V, -2t]`` with Gauss-Legendre; both halves
    share the doubled node count.  The signed integrand carries
    ``exp(y/(2t))`` against an order-one result, so the doubling
    target relaxes to the realised roundoff floor.
    """
    vmax = y + 2.0 * t * (40.0 + 2.0 * len(points) + abs(nu))
    v1 = min(2.0 * t, vmax)

    def smooth_part(v: np.ndarray) -> np.ndarray:
        phi = _phi0_columns(points, -v)
        profile = _jtilde_profile(nu, v * y / (4.0 * t * t))
        damp = np.exp((y - v) / (2.0 * t)) / (2.0 * t) ** (nu + 1.0)
        return (prefactors @ phi) * profile * damp

    def evaluate(n: int):
        uj, wj = gauss_power01(n, nu)
        terms = v1 ** (nu + 1.0) * smooth_part(v1 * uj) * wj
        total = complex(np.sum(terms))
        l1 = float(np.sum(np.abs(terms)))
        if vmax > v1:
            vg, wg = legendre(n, v1, vmax)
            terms = smooth_part(vg) * vg**nu * wg
            total += complex(np.sum(terms))
            l1 += float(np.sum(np.abs(terms)))
        return total, l1

    return _double_to_floor(evaluate, 5e-12)


def _integral_vector_gaussian(
    points: np.ndarray,
    t: float,
    ytilde: float,
    drift: float,
) -> tuple[np.ndarray, int, float]:
    """Per-point u-integrals shared by every x at fixed ``(t, ytilde)``.

    ``vec[j] = int du phi_0(xi, x_j, iu) exp(iu drift) p_sin(-t, iu,
    ytilde)``; the same integrand as the scalar route without the
    x-dependent prefactors, so a kernel block over many x values reuses
    one quadrature per column.  Doubling criterion and roundoff floor as
    in the scalar route, applied to the vector sup norm.
    """
    half = _gauss_truncation(t, ytilde, len(points))
    zmax = (half + abs(ytilde)) ** 2 / (2.0 * t) + abs(drift) * half
    rel_floor = 2.3e-16 * (16.0 + zmax)

    def evaluate(n: int):
        u, wq = legendre(n, -half, half)
        w = 1j * u
        back = p_sin(-t, w, ytilde)
        if drift != 0.0:
            back = back * np.exp(w * drift)
        rows = _phi0_columns(points, w) * (back * wq)[None, :]
        return rows.sum(axis=1), float(np.sum(np.abs(rows)))

    return _double_to_floor(evaluate, rel_floor)


def _integral_vector_bessel(
    points: np.ndarray,
    nu: float,
    t: float,
    y: float,
) -> tuple[np.ndarray, int, float]:
    """Per-point ``(-inf, 0]`` u-integrals at fixed ``(t, y)``, split and
    damped exactly as the scalar bessel route."""
    vmax = y + 2.0 * t * (40.0 + 2.0 * len(points) + abs(nu))
    v1 = min(2.0 * t, vmax)

    def smooth_rows(v: np.ndarray) -> np.ndarray:
        profile = _jtilde_profile(nu, v * y / (4.0 * t * t))
        damp = np.exp((y - v) / (2.0 * t)) / (2.0 * t) ** (nu + 1.0)
        return _phi0_columns(points, -v) * (profile * damp)[None, :]

    def evaluate(n: int):
        uj, wj = gauss_power01(n, nu)
        rows = v1 ** (nu + 1.0) * smooth_rows(v1 * uj) * wj[None, :]
        total = rows.sum(axis=1)
        l1 = float(np.sum(np.abs(rows)))
        if vmax > v1:
            vg, wg = legendre(n, v1, vmax)
            rows = smooth_rows(vg) * (vg**nu * wg)[None, :]
            total = total + rows.sum(axis=1)
            l1 += float(np.sum(np.abs(rows)))
        return total, l1

    return _double_to_floor(evaluate, 5e-12)


def eval_noneq_grid(spec: NonEqKernelSpec, s: float, xs, t: float, ys) -> np.ndarray:
    """Kernel block ``[i, k] = kernel(s, xs[i]; t, ys[k])`` at fixed times.

    The residue route factorizes into transition densities from the xs to
    the base points times per-point u-integrals that depend only on
    ``(t, y)``, so a block costs one quadrature per column instead of one
    per entry.  Agrees with eval_noneq entry by entry to the shared
    quadrature target; the same imaginary-part guard applies.
    """
    if s <= 0.0 or t <= 0.0:
        raise DomainError("both times must be positive")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or ys.ndim != 1:
        raise DomainError("evaluation points must be one-dimensional")
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise DomainError("evaluation points must be finite")
    if spec.family == "bessel" and (np.any(xs < 0.0) or np.any(ys < 0.0)):
        raise DomainError("bessel evaluation points must be nonnegative")
    points = np.array(spec.base_config.points, dtype=float)
    out = np.zeros((xs.size, ys.size), dtype=complex)
    if points.size and xs.size and ys.size:
        if spec.family == "sine":
            lead = np.asarray(p_sin(s, xs[:, None], points[None, :]))
            cols = [_integral_vector_gaussian(points, t, float(y), 0.0)[0] for y in ys]
        elif spec.family == "airy_prelimit":
            xt = xs - s * s / 4.0
            lead = np.asarray(p_sin(s, xt[:, None], points[None, :]))
            lead = lead * np.exp(-points * spec.drift)[None, :]
            cols = [
                _integral_vector_gaussian(points, t, float(y) - t * t / 4.0, spec.drift)[0]
                for y in ys
            ]
        else:
            lead = np.stack([_p_bessel_start(spec.nu, s, float(x), points) for x in xs])
            cols = [_integral_vector_bessel(points, spec.nu, t, float(y))[0] for y in ys]
        out = lead.astype(complex) @ np.stack(cols, axis=1)
    if s > t and xs.size and ys.size:
        if spec.family == "sine":
            out = out - np.asarray(p_sin(s - t, xs[:, None], ys[None, :]))
        elif spec.family == "airy_prelimit":
            xt = xs - s * s / 4.0
            yt = ys - t * t / 4.0
            out = out - np.asarray(p_sin(s - t, xt[:, None], yt[None, :]))
        else:
            out = out - np.stack(
                [_p_bessel_start(spec.nu, s - t, float(x), ys).real for x in xs]
            )
    worst = float(np.max(np.abs(out.imag), initial=0.0))
    assert worst <= 1e-8, f"imaginary residue {worst:.3e} exceeds 1e-8 on the ({s!r}, {t!r}) block"
    return out.real.astype(float)


def _kernel_pieces(spec: NonEqKernelSpec, s: float, x: float, t: float, y: float):
    """Residue-route integral term plus the ``s > t`` subtraction."""
    if s <= 0.0 or t <= 0.0:
        raise DomainError("both times must be positive")
    points = np.array(spec.base_config.points, dtype=float)
    if spec.family == "sine":
        if points.size:
            pref = np.asarray(p_sin(s, x, points))
            integral, _, _ = _integral_term_gaussian(points, pref, t, y, 0.0)
        else:
            integral = 0.0 + 0.0j
        sub = float(p_sin(s - t, x, y)) if s > t else 0.0
        return integral, sub
    if spec.family == "airy_prelimit":
        xt = x - s * s / 4.0
        yt = y - t * t / 4.0
        if points.size:
            pref = np.asarray(p_sin(s, xt, points))
            integral, _, _ = _integral_term_gaussian(points, pref, t, yt, spec.drift)
        else:
            integral = 0.0 + 0.0j
        sub = float(p_sin(s - t, xt, yt)) if s > t else 0.0
        return integral, sub
    if x < 0.0 or y < 0.0:
        raise DomainError("bessel evaluation points must be nonnegative")
    if points.size:
        pref = _p_bessel_start(spec.nu, s, x, points).astype(complex)
        integral, _, _ = _integral_term_bessel(points, pref, spec.nu, t, y)
    else:
        integral = 0.0 + 0.0j
    if s > t:
        sub = float(_p_bessel_start(spec.nu, s - t, x, np.array(y)).real)
    else:
        sub = 0.0
    return integral, sub


def eval_noneq(spec: NonEqKernelSpec, s: float, x: float, t: float, y: float) -> float:
    """Kernel value at ``(s, x; t, y)`` for positive times.

    Point sum times the family's u-quadrature, minus the bare
    transition density when ``s > t``.  Internal arithmetic is complex;
    the imaginary part must come out below 1e-8 in magnitude or an
    ``AssertionError`` is raised.
    """
    integral, sub = _kernel_pieces(spec, s, x, t, y)
    value = complex(integral) - sub
    assert abs(value.imag) <= 1e-8, (
        f"imaginary residue {value.imag:.3e} exceeds 1e-8 at "
        f"({s!r}, {x!r}, {t!r}, {y!r})"
    )
    return float(value.real)


def _circle_radii(points: np.ndarray, wnodes: np.ndarray) -> np.ndarray:
    """Per-point circle radii: under half the gap, clear of every w node."""
    radii = np.empty(len(points))
    for j, xj in enumerate(points):
        gaps = np.abs(np.delete(points, j) - xj)
        gap = float(np.min(gaps)) if gaps.size else math.inf
        clearance = float(np.min(np.abs(wnodes - xj)))
        radii[j] = 0.45 * min(gap, clearance)
    if not np.all(radii > 1e-12):
        raise GeometryError("contour circles collapse: points too close to "
                            "each other or to the u-grid")
    return radii


def _contour_integral(
    spec: NonEqKernelSpec,
    s: float,
    x: float,
    t: float,
    y: float,
    n_u: int,
    n_theta: int,
) -> complex:
    """Integral term recomputed as literal contour integrals.

    For each u node, every configuration point is encircled by a small
    positively oriented circle discretised by an ``n_theta``-point
    trapezoid rule (spectrally accurate on the circle), and the full
    double integral is summed.  The circles must neither overlap nor
    enclose the u node; their radii are chosen from the realised grid
    and a ``GeometryError`` is raised when that is impossible.
    """
    points = np.array(spec.base_config.points, dtype=float)
    if not points.size:
        return 0.0 + 0.0j
    if spec.family == "bessel":
        vmax = y + 2.0 * t * (40.0 + 2.0 * len(points) + abs(spec.nu))
        uj, wj = gauss_power01(n_u, spec.nu)
        v1 = min(2.0 * t, vmax)
        v_a = v1 * uj
        w_a = v1 ** (spec.nu + 1.0) * wj * v_a ** (-spec.nu)
        if vmax > v1:
            v_b, w_b = legendre(n_u, v1, vmax)
            v = np.concatenate([v_a, v_b])
            vw = np.concatenate([w_a, w_b])
        else:
            v, vw = v_a, w_a
        wnodes = -v
        back = _p_bessel_back(spec.nu, t, wnodes, y)
        uweights = vw * back
    else:
        centre = y - t * t / 4.0 if spec.family == "airy_prelimit" else y
        half = _gauss_truncation(t, centre, len(points))
        u, uw = legendre(n_u, -half, half)
        wnodes = 1j * u
        # the airy drift factor exp((w - z) drift) lives with the
        # z-integrand below, not here
        uweights = uw * p_sin(-t, wnodes, centre)

    radii = _circle_radii(points, wnodes)
    theta = 2.0 * math.pi * np.arange(n_theta) / n_theta
    ring = np.exp(1j * theta)
    total = 0.0 + 0.0j
    for j, xj in enumerate(points):
        z = xj + radii[j] * ring
        if spec.family == "bessel":
            start = _p_bessel_start(spec.nu, s, x, z)
        elif spec.family == "airy_prelimit":
            start = p_sin(s, x - s * s / 4.0, z)
        else:
            start = p_sin(s, x, z)
        # product over all points of (x_m - w)/(x_m - z), then / (w - z)
        num = np.prod(points[:, None] - wnodes[None, :], axis=0)
        den = np.prod(points[:, None] - z[None, :], axis=0)
        pole = wnodes[:, None] - z[None, :]
        inner = (num[:, None] / den[None, :]) / pole
        drift_fac = 1.0
        if spec.family == "airy_prelimit":
            drift_fac = np.exp((wnodes[:, None] - z[None, :]) * spec.drift)
        ray = start[None, :] * inner * drift_fac * (radii[j] * ring)[None, :]
        per_u = np.sum(ray, axis=1) / n_theta
        total += complex(uweights @ per_u)
    return total


def contour_crosscheck(
    spec: NonEqKernelSpec,
    s: float,
    x: float,
    t: float,
    y: float,
    n_u: int = 400,
    n_theta: int = 64,
) -> tuple[float, float]:
    """Integral term by residues versus literal contour integration.

    Returns ``(residue_value, contour_value)`` for the integral term
    alone (no ``s > t`` subtraction, which is identical on both
    routes).  Only the sine and bessel families are supported here;
    node counts are fixed so the routes stay independent of the
    doubling schedule.
    """
    if spec.family not in ("sine", "bessel"):
        raise DomainError("crosscheck covers the sine and bessel families")
    if s <= 0.0 or t <= 0.0:
        raise DomainError("both times must be positive")
    if n_u % 2:
        raise DomainError("u-grid size must be even (keeps nodes off 0)")
    integral, _ = _kernel_pieces(spec, s, x, t, y)
    contour = _contour_integral(spec, s, x, t, y, n_u, n_theta)
    return float(complex(integral).real), float(contour.real)
