"""Monte Carlo estimators and statistical checks for the library's
determinantal identities and quantitative bounds.

Every check is deterministic given (inputs, seed): sampling and path
generation reuse the counter-based streams of the sampling and sde
modules, so the same seed never produces correlated randomness across
the two. No verdict is ever reported without a standard error; the
single reading of "satisfied" is lhs <= rhs + 3 * SE.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .configspace import Configuration, configuration
from .errors import ConvergenceError, DomainError
from .fredholm import (
    FredholmProblem,
    TestFunction,
    eval_test_function,
    log_linear_window,
    mgf,
    sampled_window,
)
from .noneqkernels import sine_noneq
from .quadgauss import legendre, refine_doubling
from .sampling import EnsembleSample, EnsembleSpec, gue_scaled, laguerre, sample
from .sde import SdeSystem, simulate_paths
from .specfun import gauss_tail
from .statickernels import (
    StaticKernel,
    bessel_kernel,
    eval_static_grid,
    hermite_kernel,
    laguerre_kernel,
    sine_kernel,
)

__all__ = [
    "EstimatorResult",
    "BoundCheck",
    "MultitimeReport",
    "bound_check",
    "bump_statistic",
    "BumpStatistic",
    "estimate_rho",
    "estimate_rho_pair",
    "density_identity_fraction",
    "stationary_start",
    "check_moment_bound",
    "displacement_profile",
    "check_displacement_tail",
    "check_reversibility",
    "check_multitime_determinant",
    "scaling_distance",
    "run_suite",
    "SUITE_NAMES",
]


@dataclass(frozen=True)
class EstimatorResult:
    """A vector of estimates with per-entry standard errors.

    edges carries one array per axis: either bin edges (length size + 1)
    or window positions (length size) for non-histogram grids.
    """

    estimate: np.ndarray
    std_error: np.ndarray
    n_samples: int
    edges: tuple

    def __post_init__(self):
        est = np.asarray(self.estimate, dtype=float)
        se = np.asarray(self.std_error, dtype=float)
        if est.shape != se.shape:
            raise DomainError("estimate and std_error must have the same shape")
        if not np.all(np.isfinite(se)) or np.any(se < 0.0):
            raise DomainError("standard errors must be finite and nonnegative")
        if not (isinstance(self.n_samples, int) and self.n_samples >= 2):
            raise DomainError("need at least 2 samples for a standard error")
        if len(self.edges) != est.ndim:
            raise DomainError("one edge array per estimate axis")
        for axis, e in enumerate(self.edges):
            e = np.asarray(e, dtype=float)
            if e.shape[0] not in (est.shape[axis], est.shape[axis] + 1):
                raise DomainError("edge arrays must match the estimate grid")
        object.__setattr__(self, "estimate", est)
        object.__setattr__(self, "std_error", se)
        object.__setattr__(self, "edges", tuple(np.asarray(e, dtype=float) for e in self.edges))


def _verdict_for(lhs: float, std_error: float, rhs: float) -> str:
    return "satisfied" if lhs <= rhs + 3.0 * std_error else "violated-beyond-3SE"


@dataclass(frozen=True)
class BoundCheck:
    """An estimated left side against a bound, with the verdict derived
    from the 3 * SE rule and nothing else."""

    lhs: float
    std_error: float
    rhs: float
    verdict: str

    def __post_init__(self):
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            raise DomainError("bound sides must be finite")
        if not (math.isfinite(self.std_error) and self.std_error >= 0.0):
            raise DomainError("standard error must be finite and nonnegative")
        if self.verdict != _verdict_for(self.lhs, self.std_error, self.rhs):
            raise DomainError("verdict must be computed from lhs, std_error, rhs")


def bound_check(lhs: float, std_error: float, rhs: float) -> BoundCheck:
    lhs, std_error, rhs = float(lhs), float(std_error), float(rhs)
    return BoundCheck(lhs, std_error, rhs, _verdict_for(lhs, std_error, rhs))


@dataclass(frozen=True)
class MultitimeReport:
    """Fredholm determinant vs the Monte Carlo expectation it predicts."""

    determinant: float
    estimate: float
    std_error: float
    n_paths: int
    verdict: str

    def __post_init__(self):
        if not (math.isfinite(self.std_error) and self.std_error >= 0.0):
            raise DomainError("standard error must be finite and nonnegative")
        if self.verdict != _verdict_for(abs(self.estimate - self.determinant), self.std_error, 0.0):
            raise DomainError("verdict must be computed from the comparison")


def _rows_of(samples) -> np.ndarray:
    if isinstance(samples, EnsembleSample):
        return samples.configurations
    rows = np.asarray(samples, dtype=float)
    if rows.ndim != 2 or rows.shape[1] < 1:
        raise DomainError("samples must be a (draws, particles) array")
    if not np.all(np.isfinite(rows)):
        raise DomainError("samples must be finite")
    return rows


def _edges_for(rows: np.ndarray, bins) -> np.ndarray:
    if bins is None:
        pooled = rows.ravel()
        lo, hi = float(pooled.min()), float(pooled.max())
        if hi <= lo:
            return np.array([lo - 0.5, lo + 0.5])
        q75, q25 = np.percentile(pooled, [75.0, 25.0])
        width = 2.0 * (q75 - q25) / pooled.size ** (1.0 / 3.0)
        count = int(math.ceil((hi - lo) / width)) if width > 0.0 else 1
        return np.linspace(lo, hi, count + 1)
    if isinstance(bins, int):
        if bins < 1:
            raise DomainError("bin count must be positive")
        lo, hi = float(rows.min()), float(rows.max())
        if hi <= lo:
            lo, hi = lo - 0.5, lo + 0.5
        return np.linspace(lo, hi, bins + 1)
    edges = np.asarray(bins, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0.0):
        raise DomainError("explicit edges must be a strictly increasing 1D array")
    return edges


def _bin_counts(rows: np.ndarray, edges: np.ndarray) -> np.ndarray:
    # per-draw occupation counts; right edge closed, matching np.histogram
    pos = rows.ravel()
    idx = np.searchsorted(edges, pos, side="right") - 1
    idx = np.where(pos == edges[-1], edges.size - 2, idx)
    valid = (idx >= 0) & (idx <= edges.size - 2) & (pos <= edges[-1])
    counts = np.zeros((rows.shape[0], edges.size - 1))
    draw = np.repeat(np.arange(rows.shape[0]), rows.shape[1])
    np.add.at(counts, (draw[valid], idx[valid]), 1.0)
    return counts


def estimate_rho(samples, bins=None) -> EstimatorResult:
    """Histogram estimate of the one-point density with per-bin SEs.

    samples is an EnsembleSample or a plain (draws, particles) array,
    for instance one stored time slice of an sde path ensemble. Bin
    edges default to the Freedman-Diaconis rule on the pooled points;
    pass an integer count or an explicit edge array to override. The
    estimate integrates to the particle number when the edges cover
    every sample.
    """
    rows = _rows_of(samples)
    if rows.shape[0] < 1000:
        raise DomainError("density estimation needs at least 1000 draws")
    edges = _edges_for(rows, bins)
    counts = _bin_counts(rows, edges)
    widths = np.diff(edges)
    estimate = counts.mean(axis=0) / widths
    std_error = counts.std(axis=0, ddof=1) / math.sqrt(rows.shape[0]) / widths
    return EstimatorResult(estimate, std_error, rows.shape[0], (edges,))


def estimate_rho_pair(samples, bins, chunk: int = 2048) -> EstimatorResult:
    """Two-point correlation estimate on the grid edges x edges.

    Cell (a, b) estimates the density of ordered pairs of distinct
    particles with the first in bin a and the second in bin b; for a
    determinantal ensemble it converges to K(x,x)K(y,y) - K(x,y)^2.
    """
    rows = _rows_of(samples)
    if rows.shape[0] < 1000:
        raise DomainError("density estimation needs at least 1000 draws")
    edges = _edges_for(rows, bins)
    nb = edges.size - 1
    total = np.zeros((nb, nb))
    total_sq = np.zeros((nb, nb))
    for start in range(0, rows.shape[0], chunk):
        counts = _bin_counts(rows[start : start + chunk], edges)
        pairs = counts[:, :, None] * counts[:, None, :]
        diag = np.arange(nb)
        pairs[:, diag, diag] -= counts
        total += pairs.sum(axis=0)
        total_sq += (pairs * pairs).sum(axis=0)
    draws = rows.shape[0]
    mean = total / draws
    var = np.maximum(total_sq - draws * mean * mean, 0.0) / (draws - 1)
    area = np.diff(edges)[:, None] * np.diff(edges)[None, :]
    return EstimatorResult(mean / area, np.sqrt(var / draws) / area, draws, (edges, edges))


def _ensemble_and_kernel(target):
    if isinstance(target, EnsembleSpec):
        if target.family == "gue_scaled":
            return target, hermite_kernel(target.n)
        if target.family == "laguerre":
            return target, laguerre_kernel(target.n, target.nu)
        raise DomainError(f"no closed-form correlation kernel for family {target.family!r}")
    if isinstance(target, StaticKernel):
        if target.family == "hermite_n":
            return gue_scaled(target.n), target
        if target.family == "laguerre_n":
            return laguerre(target.n, target.nu), target
        raise DomainError(f"no exact finite sampler for kernel family {target.family!r}")
    raise DomainError("expected an EnsembleSpec or a finite-rank StaticKernel")


def _diag_quadrature(kernel: StaticKernel, lo: float, hi: float) -> float:
    if kernel.domain_nonneg:
        lo = max(lo, 0.0)
    if hi <= lo:
        return 0.0

    def evaluate(n):
        x, w = legendre(n, lo, hi)
        return float(w @ np.diag(eval_static_grid(kernel, x, x)))

    value, _, _ = refine_doubling(evaluate, 32, 1e-10)
    return value


def check_moment_bound(target, interval, k: int, *, count: int = 40000, seed: int = 20260) -> BoundCheck:
    """Centered count moment E|eta(D) - rho(D)|^(2k) against (3 rho(D))^k.

    target is an ensemble or its kernel; the missing half of the pair is
    derived, the mean is the kernel quadrature (not the sample mean),
    and the verdict allows the usual 3 * SE slack on the estimate.
    """
    spec, kernel = _ensemble_and_kernel(target)
    if k not in (1, 2, 3):
        raise DomainError("moment order k must be 1, 2, or 3")
    lo, hi = (float(v) for v in interval)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise DomainError("interval must be finite with lo <= hi")
    rho = _diag_quadrature(kernel, lo, hi)
    rows = sample(spec, count, seed).configurations
    eta = ((rows >= lo) & (rows <= hi)).sum(axis=1)
    values = (eta - rho) ** (2 * k)
    lhs = float(values.mean())
    se = float(values.std(ddof=1)) / math.sqrt(count)
    return bound_check(lhs, se, (3.0 * rho) ** k)


def stationary_start(system: SdeSystem, n_paths: int, seed: int) -> np.ndarray:
    """Draw per-path initial states from the system's reversible law.

    dyson_ou is stationary under the scaled Hermite ensemble; the
    squared-coordinate OU systems are stationary under twice a Laguerre
    draw (sqbessel_ou on that scale directly, bessel_ou after a square
    root); the non-reverting kinds have no stationary law.
    """
    if system.kind == "dyson_ou":
        return sample(gue_scaled(system.n), n_paths, seed).configurations
    if system.kind == "sqbessel_ou":
        return 2.0 * sample(laguerre(system.n, system.nu), n_paths, seed).configurations
    if system.kind == "bessel_ou":
        return np.sqrt(2.0 * sample(laguerre(system.n, system.nu), n_paths, seed).configurations)
    raise DomainError(f"system kind {system.kind!r} has no stationary law at finite n")


def _stationary_rho(system: SdeSystem, lo: float, hi: float) -> float:
    if system.kind == "dyson_ou":
        return _diag_quadrature(hermite_kernel(system.n), lo, hi)
    if system.kind == "sqbessel_ou":
        return _diag_quadrature(laguerre_kernel(system.n, system.nu), max(lo, 0.0) / 2.0, hi / 2.0)
    if system.kind == "bessel_ou":
        kernel = laguerre_kernel(system.n, system.nu)
        lo = max(lo, 0.0)
        if hi <= lo:
            return 0.0

        def evaluate(n):
            x, w = legendre(n, lo, hi)
            diag = np.diag(eval_static_grid(kernel, x * x / 2.0, x * x / 2.0))
            return float(w @ (x * diag))

        value, _, _ = refine_doubling(evaluate, 32, 1e-10)
        return value
    raise DomainError(f"system kind {system.kind!r} has no stationary law at finite n")


def displacement_profile(
    system: SdeSystem,
    interval,
    epsilons,
    horizon: float,
    *,
    paths: int = 4000,
    dt: float = 1e-3,
    seed: int = 20260,
    displacement: str = "linear",
) -> EstimatorResult:
    """Tail probabilities that a particle started in D moves more than
    epsilon (sup over the stored grid) before the horizon.

    displacement "sqrt" measures |sqrt X(t) - sqrt X(0)| and is only
    meaningful for the nonnegative systems. Estimates at different
    epsilons share paths, so they are monotone by construction.
    """
    lo, hi = (float(v) for v in interval)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
        raise DomainError("interval must be finite with lo <= hi")
    eps = np.asarray(epsilons, dtype=float)
    if eps.ndim != 1 or eps.size < 1 or not np.all(eps > 0.0):
        raise DomainError("epsilons must be a 1D array of positive thresholds")
    if np.any(np.diff(eps) <= 0.0):
        raise DomainError("epsilons must be strictly increasing")
    if displacement not in ("linear", "sqrt"):
        raise DomainError("displacement must be 'linear' or 'sqrt'")
    if displacement == "sqrt" and system.kind not in ("sqbessel", "sqbessel_ou", "bessel_ou"):
        raise DomainError("sqrt displacement needs a nonnegative system")
    init = stationary_start(system, paths, seed)
    _, out = simulate_paths(system, init, horizon, dt, seed, n_paths=paths)
    reference = out[:, 0, :]
    if displacement == "sqrt":
        moved = np.abs(np.sqrt(out) - np.sqrt(reference)[:, None, :])
    else:
        moved = np.abs(out - reference[:, None, :])
    worst = moved.max(axis=1)
    started = (reference >= lo) & (reference <= hi)
    probs = np.empty(eps.size)
    errs = np.empty(eps.size)
    for i, e in enumerate(eps):
        hit = np.any(started & (worst > e), axis=1).astype(float)
        probs[i] = hit.mean()
        errs[i] = hit.std(ddof=1) / math.sqrt(paths)
    return EstimatorResult(probs, errs, paths, (eps,))


def check_displacement_tail(
    system: SdeSystem,
    interval,
    epsilons,
    horizon: float,
    *,
    paths: int = 4000,
    dt: float = 1e-3,
    seed: int = 20260,
    displacement: str = "linear",
) -> BoundCheck:
    """Shape stability of the displacement tail bound.

    The bound's constant is existential, so the check fits
    C(eps) = P(eps) / ((rho(D) v 1) * gauss_tail(eps / sqrt T)) on the
    epsilon grid and requires max C / min C <= 3. Grid cells with zero
    observed tail carry no information about C and are excluded; fewer
    than two informative cells is a ConvergenceError, not a verdict.
    """
    profile = displacement_profile(
        system, interval, epsilons, horizon, paths=paths, dt=dt, seed=seed, displacement=displacement
    )
    rho = max(_stationary_rho(system, float(interval[0]), float(interval[1])), 1.0)
    eps = profile.edges[0]
    tail = np.array([gauss_tail(e / math.sqrt(horizon)) for e in eps])
    keep = profile.estimate > 0.0
    if int(keep.sum()) < 2:
        raise ConvergenceError("tail grid too coarse: fewer than two cells with observed exits")
    fitted = profile.estimate[keep] / (rho * tail[keep])
    fitted_se = profile.std_error[keep] / (rho * tail[keep])
    top, bottom = int(np.argmax(fitted)), int(np.argmin(fitted))
    ratio = fitted[top] / fitted[bottom]
    spread = ratio * math.hypot(fitted_se[top] / fitted[top], fitted_se[bottom] / fitted[bottom])
    return bound_check(ratio, spread, 3.0)


@dataclass(frozen=True)
class BumpStatistic:
    """Polynomial functional (sum of a smooth compactly supported bump
    over the particles) ** power."""

    center: float
    width: float
    power: int = 1

    def __post_init__(self):
        if not (math.isfinite(self.center) and self.width > 0.0):
            raise DomainError("bump needs a finite center and positive width")
        if not (isinstance(self.power, int) and self.power >= 1):
            raise DomainError("power must be a positive integer")

    def __call__(self, rows: np.ndarray) -> np.ndarray:
        u = (np.asarray(rows, dtype=float) - self.center) / self.width
        inside = np.abs(u) < 1.0
        safe = np.where(inside, u, 0.0)
        phi = np.where(inside, np.exp(1.0 - 1.0 / (1.0 - safe * safe)), 0.0)
        return phi.sum(axis=-1) ** self.power


def bump_statistic(center: float, width: float, power: int = 1) -> BumpStatistic:
    return BumpStatistic(center, width, power)


def check_reversibility(
    system: SdeSystem,
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    t: float,
    *,
    paths: int = 20000,
    dt: float = 1e-3,
    seed: int = 20260,
) -> BoundCheck:
    """|E f(X_0) g(X_t) - E g(X_0) f(X_t)| under the stationary start.

    Both orderings are evaluated on the same paths, so the difference
    is estimated pairwise and the SE reflects the correlation.
    """
    if not (isinstance(t, (int, float)) and math.isfinite(t) and t >= 0.0):
        raise DomainError("t must be a finite nonnegative time")
    start = stationary_start(system, paths, seed)
    if t == 0.0:
        later = start
    else:
        _, out = simulate_paths(system, start, float(t), dt, seed, n_paths=paths, store_times=[float(t)])
        later = out[:, 0, :]
    forward = np.asarray(f(start), dtype=float) * np.asarray(g(later), dtype=float)
    backward = np.asarray(g(start), dtype=float) * np.asarray(f(later), dtype=float)
    if forward.shape != (paths,) or backward.shape != (paths,):
        raise DomainError("functionals must map (paths, n) states to one value per path")
    delta = forward - backward
    lhs = abs(float(delta.mean()))
    se = float(delta.std(ddof=1)) / math.sqrt(paths)
    return bound_check(lhs, se, 0.0)


def check_multitime_determinant(
    points,
    times,
    functions,
    *,
    paths: int = 20000,
    dt: float = 1e-3,
    seed: int = 20260,
    nodes: int = 48,
) -> MultitimeReport:
    """Flagship identity: the multitime generating functional of the
    noncolliding system started at a finite configuration equals the
    Fredholm determinant of its space-time kernel.

    Left side by quadrature (fredholm.mgf), right side by simulating
    paths from the configuration and averaging exp of the summed test
    functions along the stored times.
    """
    config = points if isinstance(points, Configuration) else configuration(points)
    n = len(config.points)
    if not 1 <= n <= 4:
        raise DomainError("the identity check supports 1 to 4 particles")
    times = tuple(float(t) for t in times)
    if len(times) > 2:
        raise DomainError("the identity check supports at most two times")
    functions = (functions,) if isinstance(functions, TestFunction) else tuple(functions)
    problem = FredholmProblem(sine_noneq(config), times, functions, nodes)
    determinant = mgf(problem)

    system = SdeSystem(kind="dyson", n=n)
    _, out = simulate_paths(
        system, np.sort(np.asarray(config.points, dtype=float)), times[-1], dt, seed,
        n_paths=paths, store_times=list(times),
    )
    total = np.zeros(paths)
    for m, tf in enumerate(functions):
        total += eval_test_function(tf, out[:, m, :].ravel()).reshape(paths, n).sum(axis=1)
    weights = np.exp(total)
    estimate = float(weights.mean())
    se = float(weights.std(ddof=1)) / math.sqrt(paths)
    verdict = _verdict_for(abs(estimate - determinant), se, 0.0)
    return MultitimeReport(determinant, estimate, se, paths, verdict)


def scaling_distance(family: str, n: int, nu: float | None = None, grid_points: int = 17) -> float:
    """Sup distance between the finite-n kernel and its scaling limit on
    the standard grid ([-2,2]^2 bulk, [0,4]^2 hard edge)."""
    if grid_points < 2:
        raise DomainError("need at least a 2x2 grid")
    if family == "sine":
        grid = np.linspace(-2.0, 2.0, grid_points)
        finite, limit = hermite_kernel(n), sine_kernel()
    elif family == "bessel":
        if nu is None:
            raise DomainError("the hard-edge comparison needs nu")
        grid = np.linspace(0.0, 4.0, grid_points)
        finite, limit = laguerre_kernel(n, nu), bessel_kernel(nu)
    else:
        raise DomainError("family must be 'sine' or 'bessel'")
    gap = eval_static_grid(finite, grid, grid) - eval_static_grid(limit, grid, grid)
    return float(np.max(np.abs(gap)))


def _check_dict(name: str, check: BoundCheck) -> dict:
    return {
        "name": name,
        "lhs": check.lhs,
        "std_error": check.std_error,
        "rhs": check.rhs,
        "verdict": check.verdict,
    }


def _binned_kernel_density(kernel: StaticKernel, edges: np.ndarray) -> np.ndarray:
    # bin-averaged diagonal, so histogram comparisons carry no midpoint bias
    out = np.empty(edges.size - 1)
    for i in range(edges.size - 1):
        x, w = legendre(4, edges[i], edges[i + 1])
        out[i] = float(w @ np.diag(eval_static_grid(kernel, x, x))) / (edges[i + 1] - edges[i])
    return out


def density_identity_fraction(spec: EnsembleSpec, draws: int, seed: int, edges, band: float = 2.0) -> float:
    """Fraction of histogram bins within band * SE of the kernel's
    bin-averaged diagonal; the determinantal one-point identity."""
    kernel = _ensemble_and_kernel(spec)[1]
    edges = np.asarray(edges, dtype=float)
    result = estimate_rho(sample(spec, draws, seed), edges)
    target = _binned_kernel_density(kernel, edges)
    inside = np.abs(result.estimate - target) <= band * result.std_error
    return float(inside.mean())


def _suite_rho(seed: int) -> list[dict]:
    reports = []
    for spec, edges in (
        (gue_scaled(8), np.linspace(-8.0, 8.0, 41)),
        (laguerre(5, 0.5), np.linspace(0.0, 25.0, 41)),
    ):
        fraction = density_identity_fraction(spec, 20000, seed, edges)
        reports.append(
            _check_dict(
                f"one-point density, {spec.family}({spec.n})",
                bound_check(1.0 - fraction, 0.0, 0.05),
            )
        )
    return reports


def _suite_moments(seed: int) -> list[dict]:
    reports = []
    for spec in (gue_scaled(8), laguerre(8, 0.0)):
        for k in (1, 2):
            check = check_moment_bound(spec, (0.0, 1.0), k, count=20000, seed=seed)
            reports.append(_check_dict(f"count moment k={k}, {spec.family}({spec.n})", check))
    return reports


def _suite_displacement(seed: int) -> list[dict]:
    horizon = 0.25
    eps = np.array([0.5, 1.0, 2.0]) * math.sqrt(horizon)
    linear = check_displacement_tail(
        SdeSystem(kind="dyson_ou", n=8), (-1.0, 1.0), eps, horizon, paths=3000, seed=seed
    )
    bessel = check_displacement_tail(
        SdeSystem(kind="sqbessel_ou", n=8, nu=0.5), (0.0, 8.0), eps, horizon,
        paths=3000, seed=seed, displacement="sqrt",
    )
    return [
        _check_dict("fitted-C stability, dyson_ou(8)", linear),
        _check_dict("fitted-C stability, sqbessel_ou(8, 0.5) sqrt displacement", bessel),
    ]


def _suite_reversibility(seed: int) -> list[dict]:
    f = bump_statistic(-1.0, 1.0)
    g = bump_statistic(1.0, 1.0, power=2)
    dyson = check_reversibility(SdeSystem(kind="dyson_ou", n=4), f, g, 0.5, paths=20000, seed=seed)
    fb = bump_statistic(1.0, 0.8)
    gb = bump_statistic(2.5, 0.8, power=2)
    bessel = check_reversibility(
        SdeSystem(kind="bessel_ou", n=4, nu=0.5), fb, gb, 0.5, paths=20000, seed=seed
    )
    return [
        _check_dict("reversibility, dyson_ou(4)", dyson),
        _check_dict("reversibility, bessel_ou(4, 0.5)", bessel),
    ]


def _suite_multitime(seed: int) -> list[dict]:
    f1 = sampled_window(-3.0, 3.0, [-3.0, -1.5, 0.0, 1.5, 3.0], [0.0, 0.25, 0.4, 0.25, 0.0])
    f2 = log_linear_window(-3.0, 3.0, 0.1, -0.05)
    report = check_multitime_determinant(
        [-1.0, 0.0, 1.0], (0.5, 1.0), (f1, f2), paths=10000, dt=1e-3, seed=seed
    )
    return [
        {
            "name": "multitime identity, three particles, two times",
            "determinant": report.determinant,
            "estimate": report.estimate,
            "std_error": report.std_error,
            "n_paths": report.n_paths,
            "verdict": report.verdict,
        }
    ]


def _suite_scaling(seed: int) -> list[dict]:
    reports = []
    for family, nu in (("sine", None), ("bessel", 0.0), ("bessel", 0.5)):
        gaps = [scaling_distance(family, n, nu) for n in (50, 200, 500)]
        worst = max(later / earlier for earlier, later in zip(gaps, gaps[1:]))
        label = family if nu is None else f"{family} nu={nu}"
        reports.append(_check_dict(f"scaling monotone, {label}", bound_check(worst, 0.0, 1.0)))
        if family == "sine":
            reports.append(_check_dict("scaling distance, sine n=500", bound_check(gaps[-1], 0.0, 0.02)))
    return reports


_SUITES = {
    "rho": _suite_rho,
    "moments": _suite_moments,
    "displacement": _suite_displacement,
    "reversibility": _suite_reversibility,
    "multitime": _suite_multitime,
    "scaling-limits": _suite_scaling,
}

SUITE_NAMES = tuple(sorted(_SUITES))


def run_suite(name: str, seed: int = 2026) -> dict:
    """One named batch of checks, reported as a JSON-ready dict."""
    if name not in _SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    checks = _SUITES[name](seed)
    overall = "satisfied" if all(c["verdict"] == "satisfied" for c in checks) else "violated-beyond-3SE"
    return {"suite": name, "seed": seed, "checks": checks, "verdict": overall}
