"""Configuration-space machinery: finite point configurations with
multiplicities, restriction and shift, the g^kappa cell partition, the
two-sided density-matching membership test, the absolute-value label map,
and per-cell path moduli over power-law time grids.

Cells [g^kappa(k), g^kappa(k+1)) are half-open so cell counts partition
the line exactly. Membership over a continuum of window lengths is
certified on a finite probe set: every count jump (both one-sided limits)
plus a uniform refinement grid; the result records the window it was
certified up to.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError
from .quadgauss import gauss_power01, legendre
from .statickernels import airy_kernel, bessel_kernel, eval_static

__all__ = [
    "Configuration",
    "SpaceParams",
    "MembershipResult",
    "PathModulusReport",
    "configuration",
    "restrict",
    "shift",
    "g_kappa",
    "cell_index",
    "label_map",
    "kappa_star",
    "rho_mass",
    "membership",
    "path_modulus",
]

_KAPPA_STAR = {"sine": 1.0, "airy": 2.0 / 3.0, "bessel": 2.0, "zero": 1.0}


@dataclass(frozen=True)
class Configuration:
    """Finite point configuration: strictly increasing support points with
    positive integer multiplicities."""

    points: tuple[float, ...]
    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.points) != len(self.multiplicities):
            raise DomainError("points and multiplicities must align")
        for x in self.points:
            if not math.isfinite(x):
                raise DomainError("configuration points must be finite")
        for m in self.multiplicities:
            if not (isinstance(m, int) and m >= 1):
                raise DomainError("multiplicities must be positive integers")
        if any(a >= b for a, b in zip(self.points, self.points[1:])):
            raise DomainError("support points must be strictly increasing")

    @property
    def total(self) -> int:
        return sum(self.multiplicities)

    @property
    def is_simple(self) -> bool:
        """All multiplicities one (the collision-free predicate)."""
        return all(m == 1 for m in self.multiplicities)

    @property
    def is_nonnegative(self) -> bool:
        """No mass on the negative half-line."""
        return not self.points or self.points[0] >= 0.0

    def count(self, a: float, b: float, include_left: bool = True, include_right: bool = True) -> int:
        if b < a:
            return 0
        lo = (bisect_left if include_left else bisect_right)(self.points, a)
        hi = (bisect_right if include_right else bisect_left)(self.points, b)
        return sum(self.multiplicities[lo:hi])


def configuration(values: Sequence[float]) -> Configuration:
    """Build a Configuration from raw values, collapsing exact repeats into
    multiplicities."""
    vals = sorted(float(v) for v in values)
    pts: list[float] = []
    mults: list[int] = []
    for v in vals:
        if pts and v == pts[-1]:
            mults[-1] += 1
        else:
            pts.append(v)
            mults.append(1)
    return Configuration(tuple(pts), tuple(mults))


def restrict(config: Configuration, a: float, b: float,
             include_left: bool = True, include_right: bool = True) -> Configuration:
    lo = (bisect_left if include_left else bisect_right)(config.points, a)
    hi = (bisect_right if include_right else bisect_left)(config.points, b)
    if b < a:
        lo = hi = 0
    return Configuration(config.points[lo:hi], config.multiplicities[lo:hi])


def shift(config: Configuration, u: float) -> Configuration:
    # points distinct in exact arithmetic can collide after rounding; the
    # collided mass belongs in one multiplicity, not an invalid support
    pts: list[float] = []
    mults: list[int] = []
    for x, m in zip(config.points, config.multiplicities):
        v = x + u
        if pts and v == pts[-1]:
            mults[-1] += m
        else:
            pts.append(v)
            mults.append(m)
    return Configuration(tuple(pts), tuple(mults))


def g_kappa(kappa: float, x: float) -> float:
    """Odd power map sign(x)|x|^kappa."""
    if not kappa > 0.0:
        raise DomainError("kappa must be positive")
    return math.copysign(abs(x) ** kappa, x) if x != 0.0 else 0.0


def cell_index(kappa: float, x: float) -> int:
    """Index k of the half-open cell [g^kappa(k), g^kappa(k+1)) containing x."""
    v = math.copysign(abs(x) ** (1.0 / kappa), x) if x != 0.0 else 0.0
    k = math.floor(v)
    while g_kappa(kappa, k + 1) <= x:
        k += 1
    while g_kappa(kappa, k) > x:
        k -= 1
    return k


def label_map(config: Configuration) -> tuple[float, ...]:
    """Labels ordered by nondecreasing absolute value, the negative point
    first on a |x| tie; multiplicities expand to repeated labels."""
    expanded: list[float] = []
    for x, m in zip(config.points, config.multiplicities):
        expanded.extend([x] * m)
    expanded.sort(key=lambda x: (abs(x), x))
    return tuple(expanded)


def kappa_star(family: str) -> float:
    if family not in _KAPPA_STAR:
        raise DomainError(f"unknown density family {family!r}")
    return _KAPPA_STAR[family]


@dataclass(frozen=True)
class SpaceParams:
    """Parameters of the density-matched configuration class: reference
    density family (`zero` is the trivial fixture), window exponent eps,
    cell exponent kappa < kappa_star(family), base window l0, and the
    per-cell occupancy cap m0."""

    family: str
    eps: float
    kappa: float
    l0: int
    m0: int
    nu: float | None = None

    def __post_init__(self) -> None:
        star = kappa_star(self.family)
        if not 0.0 < self.eps < 1.0:
            raise DomainError("eps must lie in (0,1)")
        if not 0.0 < self.kappa < star:
            raise DomainError(f"kappa must lie in (0, {star}) for {self.family}")
        if not (isinstance(self.l0, int) and self.l0 >= 1):
            raise DomainError("l0 must be a positive integer")
        if not (isinstance(self.m0, int) and self.m0 >= 1):
            raise DomainError("m0 must be a positive integer")
        if self.family == "bessel" and (self.nu is None or not self.nu > -1.0):
            raise DomainError("bessel family needs nu > -1")


def rho_mass(params: SpaceParams, a: float, b: float) -> float:
    """Mass of the reference density on [a, b]."""
    if b < a:
        raise DomainError("interval endpoints out of order")
    if params.family == "zero":
        return 0.0
    if params.family == "sine":
        return (b - a) / math.pi
    if params.family == "airy":
        kern = airy_kernel()
        nodes, wts = legendre(max(32, int(8 * (b - a)) + 8), a, b)
        return float(sum(w * eval_static(kern, float(x), float(x)) for x, w in zip(nodes, wts)))
    # bessel: supported on [0, oo) with an x^nu edge factor
    kern = bessel_kernel(params.nu)
    a = max(a, 0.0)
    if b <= a:
        return 0.0
    total = 0.0
    if a == 0.0:
        c = min(b, 1.0)
        u, w = gauss_power01(64, params.nu)
        vals = [
            eval_static(kern, float(c * ui), float(c * ui)) * float(c * ui) ** (-params.nu)
            for ui in u
        ]
        total += c ** (params.nu + 1.0) * float(sum(wi * v for wi, v in zip(w, vals)))
        a = c
    if b > a:
        nodes, wts = legendre(max(32, int(8 * (b - a)) + 8), a, b)
        total += float(sum(w * eval_static(kern, float(x), float(x)) for x, w in zip(nodes, wts)))
    return total


@dataclass(frozen=True)
class MembershipResult:
    status: str
    certified_to: float
    condition: str | None = None
    witness: float | int | None = None

    @property
    def is_member(self) -> bool:
        return self.status == "member"


def _window_probes(config: Configuration, l0: float, l_max: float, grid_per_unit: int) -> list[float]:
    probes = {float(l0), float(l_max)}
    n = max(1, int(math.ceil((l_max - l0) * grid_per_unit)))
    for j in range(n + 1):
        probes.add(l0 + (l_max - l0) * j / n)
    for x in config.points:
        ax = abs(x)
        if l0 <= ax <= l_max:
            probes.add(ax)
    return sorted(probes)


def membership(config: Configuration, params: SpaceParams, l_max: float,
               grid_per_unit: int = 512) -> MembershipResult:
    """Certify the two window-count inequalities on [l0, l_max] and the
    per-cell occupancy cap.

    Scan order (fixes which witness is "first"): the cell cap over the
    support, cells ascending; then window lengths ascending, right window
    before the mirrored one at each probe. Count jumps are probed from
    both sides. The verdict is a finite-grid certificate up to l_max.
    """
    if l_max < params.l0:
        raise DomainError("l_max must be at least l0")
    # empty cells cannot violate the cap, so only occupied ones are scanned
    occupied = sorted({cell_index(params.kappa, x) for x in config.points})
    for k in occupied:
        c = config.count(
            g_kappa(params.kappa, k), g_kappa(params.kappa, k + 1),
            include_left=True, include_right=False,
        )
        if c > params.m0:
            return MembershipResult("violated", l_max, "cell_bound", k)

    probes = _window_probes(config, params.l0, l_max, grid_per_unit)
    # cumulative reference masses over the probe ladder
    rho_right = rho_mass(params, 0.0, probes[0])
    rho_left = rho_mass(params, -probes[0], 0.0)
    for i, length in enumerate(probes):
        if i > 0:
            rho_right += rho_mass(params, probes[i - 1], length)
            rho_left += rho_mass(params, -length, -probes[i - 1])
        bound = length ** params.eps
        for include_end in (True, False):
            cr = config.count(0.0, length, include_right=include_end)
            if abs(rho_right - cr) > bound:
                return MembershipResult("violated", l_max, "window_right", length)
            cl = config.count(-length, 0.0, include_left=include_end)
            if abs(rho_left - cl) > bound:
                return MembershipResult("violated", l_max, "window_left", length)
    return MembershipResult("member", l_max)


@dataclass(frozen=True)
class PathModulusReport:
    max_count: int
    witness_cell: int | None
    witness_time: float | None
    cell_maxima: tuple[tuple[int, int], ...]


def path_modulus(path: Sequence[tuple[float, Configuration]], kappa: float, ell: int) -> PathModulusReport:
    """Per-cell occupancy maxima of a configuration path over the power-law
    time grids j / max(|k|,1)^ell.

    Only cells occupied somewhere along the path are reported (empty cells
    have maximum zero trivially). The path must store every grid time
    (1e-9 snap); a missing grid time is a domain error, never interpolated
    over.
    """
    if not kappa > 0.0:
        raise DomainError("kappa must be positive")
    if not (isinstance(ell, int) and ell >= 1):
        raise DomainError("ell must be a positive integer")
    if not path:
        return PathModulusReport(0, None, None, ())
    times = [t for t, _ in path]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise DomainError("path times must be strictly increasing")
    horizon = times[-1]
    occupied: set[int] = set()
    for _, cfg in path:
        occupied.update(cell_index(kappa, x) for x in cfg.points)
    if not occupied:
        return PathModulusReport(0, None, None, ())

    def snap(target: float) -> Configuration:
        i = bisect_left(times, target - 1e-9)
        if i < len(times) and abs(times[i] - target) <= 1e-9:
            return path[i][1]
        raise DomainError(f"path is missing grid time {target!r}")

    best = 0
    witness_cell: int | None = None
    witness_time: float | None = None
    maxima: list[tuple[int, int]] = []
    for k in sorted(occupied):
        rate = float(max(abs(k), 1)) ** ell
        nj = int(math.floor(horizon * rate + 1e-9))
        a = g_kappa(kappa, k)
        b = g_kappa(kappa, k + 1)
        cell_best = 0
        cell_time = None
        for j in range(nj + 1):
            cfg = snap(j / rate)
            c = cfg.count(a, b, include_left=True, include_right=False)
            if c > cell_best:
                cell_best = c
                cell_time = j / rate
        maxima.append((k, cell_best))
        if cell_best > best:
            best = cell_best
            witness_cell = k
            witness_time = cell_time
    return PathModulusReport(best, witness_cell, witness_time, tuple(maxima))
