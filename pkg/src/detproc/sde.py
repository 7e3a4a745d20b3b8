"""Euler-Maruyama integration of the finite noncolliding systems.

Seven labeled systems share one stepping core: the Dyson model, the
noncolliding squared Bessel process, their Ornstein-Uhlenbeck versions
obtained by the exponential time change, the drifted soft-edge system and
its OU version, and the reflected Bessel coordinates of the squared OU
process. Drifts are written symbol-for-symbol from the defining equations
and unit-tested against hand-coded loops.

Stepping: each output step of size dt is covered by adaptive substeps. A
substep is rejected (halved, redone with fresh noise) if it reverses an
ordering, shrinks an adjacent gap below 10% of its value, lands a
nonnegative coordinate below zero where the exact process cannot, or moves
a coordinate by drift alone further than max(|x|/2, 2 sqrt(h)). Substeps
are tracked as integer multiples of dt * 2^-40, so macro steps terminate
exactly; falling below one unit raises a step-collapse error. The
time-dependent drift term of the drifted soft-edge system is evaluated at
the substep midpoint, which makes the parabolic-shift coupling to the
plain Dyson model an exact pathwise identity under shared noise.

Noise comes from per-path counter-based streams keyed by (seed, path
index): a path's draws depend only on its own trajectory, so ensembles are
reproducible under any chunking and identical to single-path integration.

Truncated drift evaluators for the three infinite systems report the
radius-r interaction sum (for the soft-edge family minus its closed-form
compensator) at a tagged particle of a finite configuration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .configspace import Configuration, configuration
from .errors import DomainError, SingularityError, StepCollapseError
from .rng import TAG_SDE, Streams

__all__ = [
    "LabeledPath",
    "SdeSystem",
    "TruncatedDrift",
    "airy_drift",
    "airy_ou",
    "airy_scaling_transform",
    "bessel_ou",
    "diffusion_vector",
    "drift_vector",
    "dyson",
    "dyson_ou",
    "integrate",
    "isde_ai",
    "isde_j",
    "isde_sin",
    "ou_time_change",
    "simulate_paths",
    "sqbessel",
    "sqbessel_ou",
    "truncated_drift",
    "unlabel",
]

_KINDS = (
    "dyson",
    "sqbessel",
    "dyson_ou",
    "airy_drift",
    "airy_ou",
    "sqbessel_ou",
    "bessel_ou",
)
_NU_KINDS = ("sqbessel", "sqbessel_ou", "bessel_ou")
_NONNEG_KINDS = _NU_KINDS
_SQUARED_KINDS = ("sqbessel", "sqbessel_ou")

_UNITS = np.uint64(1) << np.uint64(40)


@dataclass(frozen=True)
class SdeSystem:
    """One of the finite labeled systems; n is the particle count."""

    kind: str
    n: int
    nu: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise DomainError(f"unknown system kind {self.kind!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise DomainError("particle count must be a positive integer")
        if self.kind in _NU_KINDS:
            if self.nu is None:
                raise DomainError(f"{self.kind} needs an index nu > -1")
            if not self.nu > -1.0:
                raise DomainError("index nu must exceed -1")
        elif self.nu is not None:
            raise DomainError(f"{self.kind} takes no index nu")

    @property
    def reflecting(self) -> bool:
        """Wall at the origin handled by reflection (nu in (-1,0))."""
        return self.kind in _NONNEG_KINDS and self.nu is not None and self.nu < 0.0


def dyson(n: int) -> SdeSystem:
    return SdeSystem(kind="dyson", n=n)


def sqbessel(nu: float, n: int) -> SdeSystem:
    return SdeSystem(kind="sqbessel", n=n, nu=nu)


def dyson_ou(n: int) -> SdeSystem:
    return SdeSystem(kind="dyson_ou", n=n)


def airy_drift(n: int) -> SdeSystem:
    return SdeSystem(kind="airy_drift", n=n)


def airy_ou(n: int) -> SdeSystem:
    return SdeSystem(kind="airy_ou", n=n)


def sqbessel_ou(nu: float, n: int) -> SdeSystem:
    return SdeSystem(kind="sqbessel_ou", n=n, nu=nu)


def bessel_ou(nu: float, n: int) -> SdeSystem:
    return SdeSystem(kind="bessel_ou", n=n, nu=nu)


def _pair_sums(state: np.ndarray) -> np.ndarray:
    """sum_k 1/(x_j - x_k) over k != j, batched over leading axes."""
    d = state[..., :, None] - state[..., None, :]
    idx = np.arange(state.shape[-1])
    d[..., idx, idx] = np.inf
    return np.sum(1.0 / d, axis=-1)


def drift_vector(system: SdeSystem, t, state: np.ndarray) -> np.ndarray:
    """Drift of every coordinate at time t; state may carry batch axes,
    t must broadcast against state[..., 0]."""
    state = np.asarray(state, dtype=float)
    n = float(system.n)
    if system.kind == "dyson":
        return _pair_sums(state)
    if system.kind == "dyson_ou":
        return _pair_sums(state) - state / (2.0 * n)
    if system.kind == "airy_drift":
        tt = np.asarray(t, dtype=float)[..., None]
        return _pair_sums(state) + (tt / 2.0 - n ** (1.0 / 3.0))
    if system.kind == "airy_ou":
        return _pair_sums(state) - (state + 2.0 * n ** (2.0 / 3.0)) / (2.0 * n ** (1.0 / 3.0))
    if system.kind == "sqbessel":
        return 2.0 * (system.nu + 1.0) + 4.0 * state * _pair_sums(state)
    if system.kind == "sqbessel_ou":
        return 2.0 * (system.nu + 1.0) + 4.0 * state * _pair_sums(state) - state / n
    # bessel_ou: interaction acts through the squared coordinates
    pair = _pair_sums(state * state)
    return (2.0 * system.nu + 1.0) / (2.0 * state) - state / (2.0 * n) + 2.0 * state * pair


def diffusion_vector(system: SdeSystem, state: np.ndarray) -> np.ndarray:
    """Per-coordinate noise coefficient (1, or 2 sqrt(Z) clamped at 0)."""
    state = np.asarray(state, dtype=float)
    if system.kind in _SQUARED_KINDS:
        return 2.0 * np.sqrt(np.maximum(state, 0.0))
    return np.ones_like(state)


@dataclass(frozen=True)
class LabeledPath:
    """Ordered particle path stored on the dt grid, with its step record."""

    times: np.ndarray
    states: np.ndarray
    seed: int
    dt: float
    rejections: int
    min_substep: float

    def __post_init__(self) -> None:
        if self.states.ndim != 2 or self.times.shape[0] != self.states.shape[0]:
            raise DomainError("times and states are inconsistent")
        if not np.all(np.isfinite(self.states)):
            raise DomainError("path contains non-finite positions")
        if np.any(np.diff(self.times) <= 0.0):
            raise DomainError("path times must be strictly increasing")
        if self.states.shape[1] > 1 and not np.all(np.diff(self.states, axis=1) > 0.0):
            raise DomainError("path loses the strict ordering")


def _check_initial(system: SdeSystem, initial) -> np.ndarray:
    x0 = np.asarray(initial, dtype=float)
    if x0.ndim != 1 or x0.shape[0] != system.n:
        raise DomainError(f"initial state must have {system.n} coordinates")
    if not np.all(np.isfinite(x0)):
        raise DomainError("initial state must be finite")
    if x0.shape[0] > 1 and not np.all(np.diff(x0) > 0.0):
        raise DomainError("initial state must be strictly increasing")
    if system.kind in _NONNEG_KINDS and np.any(x0 < 0.0):
        raise DomainError(f"{system.kind} needs nonnegative coordinates")
    return x0


def _advance_block(system, t0, dt, state, streams, rec):
    """Advance every path in `state` (P, n) by one macro step of dt."""
    p, n = state.shape
    left = np.full(p, _UNITS, dtype=np.uint64)
    h_units = np.full(p, _UNITS, dtype=np.uint64)
    scale = dt / float(_UNITS)
    reflect = system.reflecting
    strict_floor = system.kind in _NONNEG_KINDS and not reflect
    while True:
        active = left > 0
        if not np.any(active):
            return
        idx = np.nonzero(active)[0]
        sub = streams.select(idx)
        z = sub.normals(n)
        streams.put_counter(idx, sub)
        st = state[idx]
        hu = np.minimum(h_units[idx], left[idx])
        h = hu.astype(float) * scale
        t_sub = t0 + (_UNITS - left[idx]).astype(float) * scale
        b = drift_vector(system, t_sub + h / 2.0, st)
        sig = diffusion_vector(system, st)
        prop = st + b * h[:, None] + sig * np.sqrt(h)[:, None] * z
        if reflect:
            prop = np.abs(prop)

        ok = np.ones(idx.shape, dtype=bool)
        if n > 1:
            old_gap = np.diff(st, axis=1)
            new_gap = np.diff(prop, axis=1)
            ok &= np.all(new_gap > 0.0, axis=1)
            ok &= np.all(new_gap >= 0.1 * old_gap, axis=1)
        if strict_floor:
            ok &= np.all(prop > 0.0, axis=1)
        limit = np.maximum(0.5 * np.abs(st), 2.0 * np.sqrt(h)[:, None])
        ok &= np.all(np.abs(b) * h[:, None] <= limit, axis=1)

        good = idx[ok]
        state[good] = prop[ok]
        left[good] -= hu[ok]
        h_units[good] = np.minimum(hu[ok] * np.uint64(2), np.maximum(left[good], np.uint64(1)))
        bad = idx[~ok]
        if bad.size:
            rec["rejections"] += int(bad.size)
            if np.any(hu[~ok] <= np.uint64(1)):
                raise StepCollapseError(
                    "substep fell below dt * 2^-40; near-collision stiffness"
                )
            h_units[bad] = hu[~ok] >> np.uint64(1)
            rec["min_units"] = min(rec["min_units"], int(h_units[bad].min()))


def _store_steps(horizon: float, dt: float) -> int:
    if not dt > 0.0:
        raise DomainError("dt must be positive")
    if not horizon > 0.0:
        raise DomainError("horizon must be positive")
    nsteps = int(math.floor(horizon / dt + 1e-9))
    if nsteps < 1:
        raise DomainError("horizon must cover at least one step of dt")
    return nsteps


def integrate(system: SdeSystem, initial, horizon: float, dt: float, seed: int) -> LabeledPath:
    """Integrate one path, storing the state at every multiple of dt."""
    x0 = _check_initial(system, initial)
    nsteps = _store_steps(horizon, dt)
    streams = Streams.make(seed, TAG_SDE, [0])
    state = x0[None, :].copy()
    out = np.empty((nsteps + 1, system.n))
    out[0] = x0
    rec = {"rejections": 0, "min_units": int(_UNITS)}
    for k in range(nsteps):
        _advance_block(system, k * dt, dt, state, streams, rec)
        out[k + 1] = state[0]
    return LabeledPath(
        times=np.arange(nsteps + 1) * dt,
        states=out,
        seed=seed,
        dt=dt,
        rejections=rec["rejections"],
        min_substep=rec["min_units"] * dt / float(_UNITS),
    )


def simulate_paths(
    system: SdeSystem,
    initial,
    horizon: float,
    dt: float,
    seed: int,
    n_paths: int,
    store_times=None,
    chunk: int = 8192,
):
    """Ensemble of independent paths; returns (times, states (P, M, n)).

    initial is either one state vector shared by every path or a
    (n_paths, n) batch of per-path states. store_times defaults to every
    multiple of dt; explicit times must sit on the dt grid. Path p always
    reproduces integrate() run with stream index p, whatever the chunk
    size.
    """
    nsteps = _store_steps(horizon, dt)
    if not (isinstance(n_paths, int) and n_paths >= 1):
        raise DomainError("n_paths must be a positive integer")
    init = np.asarray(initial, dtype=float)
    if init.ndim == 2:
        if init.shape != (n_paths, system.n):
            raise DomainError(f"per-path initial states must have shape ({n_paths}, {system.n})")
        if not np.all(np.isfinite(init)):
            raise DomainError("initial state must be finite")
        if system.n > 1 and not np.all(np.diff(init, axis=1) > 0.0):
            raise DomainError("initial state must be strictly increasing")
        if system.kind in _NONNEG_KINDS and np.any(init < 0.0):
            raise DomainError(f"{system.kind} needs nonnegative coordinates")
        x0 = init.astype(float, copy=True)
    else:
        x0 = _check_initial(system, initial)
    if store_times is None:
        store_idx = np.arange(nsteps + 1)
    else:
        store_idx = []
        for t in store_times:
            k = int(round(float(t) / dt))
            if not (0 <= k <= nsteps) or abs(k * dt - float(t)) > 1e-9 * max(1.0, abs(float(t))):
                raise DomainError(f"store time {t!r} is not a multiple of dt within the horizon")
            store_idx.append(k)
        store_idx = np.asarray(store_idx, dtype=int)
        if store_idx.size == 0 or np.any(np.diff(store_idx) <= 0):
            raise DomainError("store times must be strictly increasing")
    lookup = {int(k): i for i, k in enumerate(store_idx)}
    out = np.empty((n_paths, store_idx.size, system.n))
    for start in range(0, n_paths, chunk):
        stop = min(start + chunk, n_paths)
        streams = Streams.make(seed, TAG_SDE, np.arange(start, stop, dtype=np.uint64))
        if x0.ndim == 2:
            state = x0[start:stop].copy()
        else:
            state = np.tile(x0, (stop - start, 1))
        rec = {"rejections": 0, "min_units": int(_UNITS)}
        if 0 in lookup:
            out[start:stop, lookup[0]] = state
        for k in range(nsteps):
            _advance_block(system, k * dt, dt, state, streams, rec)
            if (k + 1) in lookup:
                out[start:stop, lookup[k + 1]] = state
    return store_idx * dt, out


def unlabel(path: LabeledPath) -> list[Configuration]:
    """Forget the labels: the configuration at every stored time."""
    return [configuration([float(v) for v in row]) for row in path.states]


def ou_time_change(n: int, t: float) -> float:
    """tau_N(t) = (e^{2 gamma t} - 1)/(2 gamma) with gamma = 1/(2N)."""
    if not (isinstance(n, int) and n >= 1):
        raise DomainError("particle count must be a positive integer")
    if t < 0.0:
        raise DomainError("time must be nonnegative")
    return float(n) * math.expm1(t / float(n))


def airy_scaling_transform(n: int, path: LabeledPath) -> LabeledPath:
    """Map an OU Dyson path to soft-edge coordinates:
    Y(t) = n^{-1/3} X(n^{2/3} t) - 2 n^{2/3}."""
    if not (isinstance(n, int) and n >= 1):
        raise DomainError("particle count must be a positive integer")
    a = float(n) ** (2.0 / 3.0)
    return LabeledPath(
        times=path.times / a,
        states=path.states / float(n) ** (1.0 / 3.0) - 2.0 * a,
        seed=path.seed,
        dt=path.dt / a,
        rejections=path.rejections,
        min_substep=path.min_substep / a,
    )


_ISDE_FAMILIES = ("isde_sin", "isde_ai", "isde_j")


@dataclass(frozen=True)
class TruncatedDrift:
    """Radius-r partial interaction sum at a tagged configuration point."""

    family: str
    radius: float
    tagged: int
    config: Configuration
    nu: float | None = None

    def __post_init__(self) -> None:
        if self.family not in _ISDE_FAMILIES:
            raise DomainError(f"unknown drift family {self.family!r}")
        if not self.radius > 0.0:
            raise DomainError("radius must be positive")
        pts = self.config.points
        if not (isinstance(self.tagged, int) and 0 <= self.tagged < len(pts)):
            raise DomainError("tagged index outside the configuration")
        if not abs(pts[self.tagged]) < self.radius:
            raise DomainError("tagged particle must sit inside the radius")
        if self.family == "isde_j":
            if self.nu is None:
                raise DomainError("isde_j needs an index nu > -1")
            if not self.nu > -1.0:
                raise DomainError("index nu must exceed -1")
            if pts and pts[0] < 0.0:
                raise DomainError("isde_j configurations live on [0, oo)")
        elif self.nu is not None:
            raise DomainError(f"{self.family} takes no index nu")


def isde_sin(config: Configuration, radius: float, tagged: int) -> TruncatedDrift:
    return TruncatedDrift(family="isde_sin", radius=radius, tagged=tagged, config=config)


def isde_ai(config: Configuration, radius: float, tagged: int) -> TruncatedDrift:
    return TruncatedDrift(family="isde_ai", radius=radius, tagged=tagged, config=config)


def isde_j(config: Configuration, radius: float, tagged: int, nu: float) -> TruncatedDrift:
    return TruncatedDrift(family="isde_j", radius=radius, tagged=tagged, config=config, nu=nu)


def truncated_drift(td: TruncatedDrift) -> float:
    """The radius-r interaction sum at the tagged particle (isde_ai minus
    its closed-form compensator (2/pi) sqrt(r))."""
    pts = td.config.points
    mults = td.config.multiplicities
    xj = pts[td.tagged]
    if mults[td.tagged] > 1:
        raise SingularityError("another particle coincides with the tagged one")
    total = 0.0
    for k, (xk, m) in enumerate(zip(pts, mults)):
        if k == td.tagged or not abs(xk) < td.radius:
            continue
        if td.family == "isde_j":
            total += m * 4.0 * xj / (xj - xk)
        else:
            total += m * 1.0 / (xj - xk)
    if td.family == "isde_ai":
        total -= (2.0 / math.pi) * math.sqrt(td.radius)
    return total
