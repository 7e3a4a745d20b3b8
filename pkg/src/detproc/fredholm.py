"""Fredholm determinants on quadrature grids.

Two entry points share the Nystrom machinery: gap_probability discretizes
det(I - K) on one interval with the symmetrized sqrt(w) K sqrt(w) form,
and mgf assembles the multitime block operator delta + K(t_m, x; t_n, y)
chi_n(y) w_y whose determinant is the moment generating functional of the
process over the chosen windows, with chi = e^f - 1. The block matrix is
not symmetric across times, so it goes through pivoted LU unsymmetrized.

Both determinants are computed at the requested node count and again at
twice that count; the pair must agree to 1e-8 (kernels here are analytic
on the windows, so Gauss-Legendre converges spectrally and the doubled
value is returned) or a convergence error is raised.

Test functions enter as sampled values spanning a compact window plus
natural cubic interpolation; indicator and log-linear windows have
constructors. A constant sample row may be -inf (a hard gap window,
chi = -1); anything else must be finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .exttransition import ExtendedKernel, eval_extended
from .noneqkernels import NonEqKernelSpec, eval_noneq_grid
from .quadgauss import legendre
from .statickernels import StaticKernel, eval_static_grid

__all__ = [
    "TestFunction",
    "FredholmProblem",
    "FredholmResult",
    "indicator_window",
    "log_linear_window",
    "sampled_window",
    "eval_test_function",
    "gap_probability",
    "gap_report",
    "mgf",
    "mgf_report",
]

_CAUCHY_TOL = 1e-8


@dataclass(frozen=True)
class TestFunction:
    """Samples of f spanning a compact window, interpolated cubically."""

    window: tuple[float, float]
    xs: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        a, b = (float(self.window[0]), float(self.window[1]))
        if not (math.isfinite(a) and math.isfinite(b) and a < b):
            raise DomainError("window must be a nondegenerate compact interval")
        xs = np.asarray(self.xs, dtype=float)
        vals = np.asarray(self.values, dtype=float)
        if xs.ndim != 1 or xs.shape != vals.shape or xs.size < 2:
            raise DomainError("need at least two matching sample points")
        if not np.all(np.isfinite(xs)):
            raise DomainError("sample points must be finite")
        if np.any(np.diff(xs) <= 0.0):
            raise DomainError("sample points must be strictly increasing")
        if abs(xs[0] - a) > 1e-12 or abs(xs[-1] - b) > 1e-12:
            raise DomainError("samples must span the window exactly")
        if np.any(np.isposinf(vals)) or np.any(np.isnan(vals)):
            raise DomainError("sample values must be real or -inf")
        if np.any(np.isneginf(vals)) and not np.all(vals == vals[0]):
            raise DomainError("-inf samples are only allowed as a constant row")
        object.__setattr__(self, "window", (a, b))
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "values", vals)


def indicator_window(a: float, b: float, z: float) -> TestFunction:
    """f = log(1 + z) on [a, b]: chi = z there; z = -1 is the hard gap."""
    if not z >= -1.0:
        raise DomainError("indicator level needs z >= -1")
    level = -math.inf if z == -1.0 else math.log1p(z)
    return TestFunction(window=(a, b), xs=np.array([a, b]), values=np.array([level, level]))


def log_linear_window(a: float, b: float, alpha: float, beta: float) -> TestFunction:
    """f(x) = alpha + beta x on [a, b]."""
    return TestFunction(
        window=(a, b),
        xs=np.array([a, b]),
        values=np.array([alpha + beta * a, alpha + beta * b]),
    )


def sampled_window(a: float, b: float, xs, values) -> TestFunction:
    return TestFunction(window=(a, b), xs=np.asarray(xs), values=np.asarray(values))


def _natural_cubic_second_derivs(xs: np.ndarray, vals: np.ndarray) -> np.ndarray:
    n = xs.size
    m = np.zeros(n)
    if n < 3:
        return m
    h = np.diff(xs)
    rhs = 6.0 * np.diff(np.diff(vals) / h)
    diag = 2.0 * (h[:-1] + h[1:])
    mat = np.diag(diag)
    off = np.arange(n - 3)
    mat[off, off + 1] = h[1:-1]
    mat[off + 1, off] = h[1:-1]
    m[1:-1] = np.linalg.solve(mat, rhs)
    return m


def eval_test_function(tf: TestFunction, x) -> np.ndarray:
    """Interpolated f at points inside the window; exactly 0 outside it."""
    q = np.asarray(x, dtype=float)
    scalar = q.ndim == 0
    q = np.atleast_1d(q)
    a, b = tf.window
    out = np.zeros(q.shape)
    inside = (q >= a) & (q <= b)
    if np.any(inside):
        if np.all(tf.values == tf.values[0]):
            out[inside] = tf.values[0]
        else:
            xs, vals = tf.xs, tf.values
            m = _natural_cubic_second_derivs(xs, vals)
            k = np.clip(np.searchsorted(xs, q[inside], side="right") - 1, 0, xs.size - 2)
            h = xs[k + 1] - xs[k]
            lo = (xs[k + 1] - q[inside]) / h
            hi = (q[inside] - xs[k]) / h
            out[inside] = (
                lo * vals[k]
                + hi * vals[k + 1]
                + ((lo**3 - lo) * m[k] + (hi**3 - hi) * m[k + 1]) * h * h / 6.0
            )
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class FredholmProblem:
    """Kernel, strictly increasing times, one test function per time."""

    kernel: object
    times: tuple[float, ...]
    functions: tuple[TestFunction, ...]
    nodes: tuple[int, ...]

    def __post_init__(self):
        if not isinstance(self.kernel, (StaticKernel, ExtendedKernel, NonEqKernelSpec)):
            raise DomainError("kernel must be a static, extended, or space-time kernel")
        times = tuple(float(t) for t in np.atleast_1d(np.asarray(self.times, dtype=float)))
        if len(times) < 1 or not all(math.isfinite(t) for t in times):
            raise DomainError("need at least one finite time")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise DomainError("times must be strictly increasing")
        funcs = tuple(self.functions) if isinstance(self.functions, (tuple, list)) else (self.functions,)
        if len(funcs) != len(times) or not all(isinstance(f, TestFunction) for f in funcs):
            raise DomainError("need one test function per time")
        if isinstance(self.kernel, StaticKernel) and len(times) != 1:
            raise DomainError("a static kernel has no two-time values; use a single time")
        raw = self.nodes
        counts = tuple(int(n) for n in (raw if isinstance(raw, (tuple, list, np.ndarray)) else [raw] * len(times)))
        if len(counts) != len(times) or any(n < 4 for n in counts):
            raise DomainError("need >= 4 quadrature nodes per window")
        floor = _domain_floor(self.kernel)
        for f in funcs:
            if f.window[0] < floor:
                raise DomainError("window exits the kernel domain")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "functions", funcs)
        object.__setattr__(self, "nodes", counts)


@dataclass(frozen=True)
class FredholmResult:
    value: float
    nodes_used: tuple[int, ...]
    cauchy_gap: float


def _domain_floor(kernel) -> float:
    if isinstance(kernel, StaticKernel) and kernel.family in ("bessel", "laguerre"):
        return 0.0
    if isinstance(kernel, ExtendedKernel) and kernel.family == "ext_bessel":
        return 0.0
    if isinstance(kernel, NonEqKernelSpec) and kernel.family == "bessel":
        return 0.0
    return -math.inf


def _gap_det(kernel: StaticKernel, a: float, b: float, n: int) -> float:
    x, w = legendre(n, a, b)
    sqw = np.sqrt(w)
    mat = np.eye(n) - sqw[:, None] * eval_static_grid(kernel, x, x) * sqw[None, :]
    sign, logabs = np.linalg.slogdet(mat)
    return float(sign * math.exp(logabs))


def gap_report(kernel: StaticKernel, interval, nodes: int = 64) -> FredholmResult:
    """det(I - K) on [a, b], doubled-node value with its Cauchy gap."""
    if not isinstance(kernel, StaticKernel):
        raise DomainError("gap probabilities take a static kernel")
    a, b = (float(interval[0]), float(interval[1]))
    if not (math.isfinite(a) and math.isfinite(b) and a <= b):
        raise DomainError("interval must be a finite [a, b] with a <= b")
    if not (isinstance(nodes, int) and nodes >= 4):
        raise DomainError("need at least 4 quadrature nodes")
    if a == b:
        return FredholmResult(value=1.0, nodes_used=(nodes,), cauchy_gap=0.0)
    if a < _domain_floor(kernel):
        raise DomainError("interval exits the kernel domain")
    coarse = _gap_det(kernel, a, b, nodes)
    fine = _gap_det(kernel, a, b, 2 * nodes)
    gap = abs(fine - coarse)
    if gap > _CAUCHY_TOL:
        raise ConvergenceError(f"node doubling still moves the determinant by {gap:.2e}")
    if not -1e-9 <= fine <= 1.0 + 1e-9:
        raise ConvergenceError(f"gap determinant {fine!r} left [0, 1]")
    return FredholmResult(value=fine, nodes_used=(2 * nodes,), cauchy_gap=gap)


def gap_probability(kernel: StaticKernel, interval, nodes: int = 64) -> float:
    return gap_report(kernel, interval, nodes).value


def _kernel_block(kernel, s: float, xs: np.ndarray, t: float, ys: np.ndarray) -> np.ndarray:
    if isinstance(kernel, StaticKernel):
        return eval_static_grid(kernel, xs, ys)
    if isinstance(kernel, NonEqKernelSpec):
        return eval_noneq_grid(kernel, s, xs, t, ys)
    out = np.empty((xs.size, ys.size))
    for i, x in enumerate(xs):
        for k, y in enumerate(ys):
            out[i, k] = eval_extended(kernel, s, float(x), t, float(y))
    return out


def _panelization(f: TestFunction, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Panel edges at the interpolation knots with proportional node counts.

    The spline is analytic between knots but only C2 across them, so one
    Gauss rule spanning a knot converges algebraically; per-panel rules
    keep the doubling criterion attainable.
    """
    a, b = f.window
    if np.all(f.values == f.values[0]):
        knots = np.array([a, b])
    else:
        knots = f.xs
    lens = np.diff(knots)
    counts = np.maximum(4, np.rint(n * lens / (b - a)).astype(int))
    return knots, counts


def _window_rule(knots: np.ndarray, counts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    xs, ws = [], []
    for ka, kb, c in zip(knots[:-1], knots[1:], counts):
        x, w = legendre(int(c), float(ka), float(kb))
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def _mgf_det(problem: FredholmProblem, factor: int) -> float:
    grids = []
    for n, f in zip(problem.nodes, problem.functions):
        knots, counts = _panelization(f, n)
        grids.append(_window_rule(knots, factor * counts))
    chis = [
        np.expm1(eval_test_function(f, x)) * w
        for f, (x, w) in zip(problem.functions, grids)
    ]
    total = sum(x.size for x, _ in grids)
    mat = np.eye(total)
    row = 0
    for m, tm in enumerate(problem.times):
        col = 0
        xs = grids[m][0]
        for n, tn in enumerate(problem.times):
            ys = grids[n][0]
            block = _kernel_block(problem.kernel, tm, xs, tn, ys)
            mat[row : row + xs.size, col : col + ys.size] += block * chis[n][None, :]
            col += ys.size
        row += xs.size
    sign, logabs = np.linalg.slogdet(mat)
    return float(sign * math.exp(logabs))


def mgf_report(problem: FredholmProblem) -> FredholmResult:
    """Determinant of the multitime block operator, doubled-node value."""
    if all(np.all(f.values == 0.0) for f in problem.functions):
        return FredholmResult(value=1.0, nodes_used=problem.nodes, cauchy_gap=0.0)
    coarse = _mgf_det(problem, 1)
    fine = _mgf_det(problem, 2)
    gap = abs(fine - coarse)
    if gap > _CAUCHY_TOL:
        raise ConvergenceError(f"node doubling still moves the determinant by {gap:.2e}")
    used = tuple(
        int(2 * _panelization(f, n)[1].sum())
        for n, f in zip(problem.nodes, problem.functions)
    )
    return FredholmResult(value=fine, nodes_used=used, cauchy_gap=gap)


def mgf(problem: FredholmProblem) -> float:
    return mgf_report(problem).value
