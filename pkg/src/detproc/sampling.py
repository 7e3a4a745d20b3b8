"""Exact samplers for the finite matrix ensembles.

Four families, each a frozen spec plus an unnormalized log density:

gue_scaled(n): eigenvalues of an n x n Hermitian matrix with standard
normal diagonal and unit-variance complex off-diagonal entries, all
multiplied by sqrt(n); joint density prop to Delta(x)^2 exp(-sum x^2/2n).

gue_shifted(n): the same eigenvalues without the sqrt(n) factor, shifted
by n^(1/3), density prop to Delta(x)^2 exp(-sum (x - n^(1/3))^2 / 2).

laguerre(n, nu): density prop to Delta(x)^2 prod x^nu exp(-sum x/n) on
nonnegative reals, the n-point law of the finite hard-edge kernel. Drawn
for every real nu > -1 from a bidiagonal chi factorization; squared
singular values keep the spectrum nonnegative exactly, and a multiple of
n/2 moves the chi rate 1/2 onto the 1/n of the target.

laguerre_printed(n, nu): the chiral variant with exponent nu + 1/2 and
rate 1/2. No matrix factorization is wired to it on purpose: it is drawn
by the auxiliary Metropolis chain over its log density, so the draws
stand on nothing but the printed formula when the two candidate
exponents are compared against the kernel diagonal.

Matrix samplers consume one counter-based stream per sample index and the
chain sampler one per chain index, so batches are reproducible and
independent of chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rng import TAG_METROPOLIS, TAG_SAMPLE, Streams

__all__ = [
    "EnsembleSpec",
    "EnsembleSample",
    "MetropolisRun",
    "gue_scaled",
    "gue_shifted",
    "laguerre",
    "laguerre_printed",
    "sample",
    "log_density_unnormalized",
    "metropolis_chain",
]

_FAMILIES = ("gue_scaled", "gue_shifted", "laguerre", "laguerre_printed")
_LAGUERRE_FAMILIES = ("laguerre", "laguerre_printed")

_MH_CHAINS = 32
_MH_BURN = 1536
_MH_THIN = 8


@dataclass(frozen=True)
class EnsembleSpec:
    family: str
    n: int
    nu: float | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown ensemble family {self.family!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError("ensemble size must be a positive integer")
        if self.family in _LAGUERRE_FAMILIES:
            if self.nu is None:
                raise DomainError(f"{self.family} needs a hard-edge exponent nu")
            object.__setattr__(self, "nu", float(self.nu))
            if not (self.nu > -1.0 and math.isfinite(self.nu)):
                raise DomainError("hard-edge exponent must satisfy nu > -1")
        elif self.nu is not None:
            raise DomainError(f"{self.family} takes no exponent")


def gue_scaled(n: int) -> EnsembleSpec:
    return EnsembleSpec(family="gue_scaled", n=n)


def gue_shifted(n: int) -> EnsembleSpec:
    return EnsembleSpec(family="gue_shifted", n=n)


def laguerre(n: int, nu: float) -> EnsembleSpec:
    return EnsembleSpec(family="laguerre", n=n, nu=nu)


def laguerre_printed(n: int, nu: float) -> EnsembleSpec:
    return EnsembleSpec(family="laguerre_printed", n=n, nu=nu)


@dataclass(frozen=True)
class EnsembleSample:
    """Batch of independent draws, one strictly ordered vector per row."""

    configurations: np.ndarray
    spec: EnsembleSpec
    seed: int

    def __post_init__(self):
        rows = np.asarray(self.configurations, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != self.spec.n:
            raise DomainError(f"configurations must be (count, {self.spec.n})")
        if rows.shape[0] < 1:
            raise DomainError("sample batch is empty")
        if not np.all(np.isfinite(rows)):
            raise DomainError("sample positions must be finite")
        if self.spec.n > 1 and not np.all(np.diff(rows, axis=1) > 0.0):
            raise DomainError("sample rows must be strictly increasing")
        if self.spec.family in _LAGUERRE_FAMILIES and np.any(rows < 0.0):
            raise DomainError("hard-edge samples must be nonnegative")
        object.__setattr__(self, "configurations", rows)

    @property
    def count(self) -> int:
        return self.configurations.shape[0]


@dataclass(frozen=True)
class MetropolisRun:
    """Kept chain states (kept, chains, n) and the overall acceptance rate."""

    states: np.ndarray
    acceptance: float
    spec: EnsembleSpec
    seed: int


def _log_rows(spec: EnsembleSpec, rows: np.ndarray) -> np.ndarray:
    """Unnormalized log density of each row of a (batch, n) array."""
    n = spec.n
    out = np.zeros(rows.shape[0])
    if n > 1:
        iu, ju = np.triu_indices(n, 1)
        gaps = np.abs(rows[:, iu] - rows[:, ju])
        with np.errstate(divide="ignore"):
            out += 2.0 * np.log(gaps).sum(axis=1)
    if spec.family == "gue_scaled":
        out -= (rows * rows).sum(axis=1) / (2.0 * n)
    elif spec.family == "gue_shifted":
        centered = rows - float(n) ** (1.0 / 3.0)
        out -= 0.5 * (centered * centered).sum(axis=1)
    else:
        off_support = (rows < 0.0).any(axis=1)
        expo = spec.nu if spec.family == "laguerre" else spec.nu + 0.5
        rate = 1.0 / n if spec.family == "laguerre" else 0.5
        if expo != 0.0:
            with np.errstate(divide="ignore"):
                logs = np.where(rows > 0.0, np.log(np.where(rows > 0.0, rows, 1.0)), -np.inf)
            out += expo * logs.sum(axis=1)
        out -= rate * rows.sum(axis=1)
        out = np.where(off_support, -np.inf, out)
    return out


def log_density_unnormalized(spec: EnsembleSpec, x) -> float:
    """Log joint density without the normalization constant.

    Symmetric in the coordinates. Coincident points, and hard-edge points
    with a negative coordinate, carry zero density and return -inf.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.shape[0] != spec.n:
        raise DomainError(f"position vector must have {spec.n} coordinates")
    if not np.all(np.isfinite(arr)):
        raise DomainError("position vector must be finite")
    return float(_log_rows(spec, arr[None, :])[0])


def _sample_gue(spec: EnsembleSpec, count: int, seed: int, chunk: int) -> np.ndarray:
    n = spec.n
    iu, ju = np.triu_indices(n, 1)
    diag = np.arange(n)
    rows = np.empty((count, n))
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        streams = Streams.make(seed, TAG_SAMPLE, np.arange(start, stop, dtype=np.uint64))
        z = streams.normals(n * n)
        h = np.zeros((stop - start, n, n), dtype=complex)
        h[:, diag, diag] = z[:, :n]
        if n > 1:
            off = (z[:, n::2] + 1j * z[:, n + 1 :: 2]) / np.sqrt(2.0)
            h[:, iu, ju] = off
            h[:, ju, iu] = off.conj()
        eig = np.linalg.eigvalsh(h)
        if spec.family == "gue_scaled":
            rows[start:stop] = np.sqrt(float(n)) * eig
        else:
            rows[start:stop] = eig + float(n) ** (1.0 / 3.0)
    return rows


def _sample_bidiagonal(spec: EnsembleSpec, count: int, seed: int, chunk: int) -> np.ndarray:
    n, nu = spec.n, spec.nu
    rows = np.empty((count, n))
    for start in range(0, count, chunk):
        stop = min(start + chunk, count)
        streams = Streams.make(seed, TAG_SAMPLE, np.arange(start, stop, dtype=np.uint64))
        b = np.zeros((stop - start, n, n))
        for k in range(n):
            b[:, k, k] = np.sqrt(streams.chisq(2.0 * (nu + n - k)))
        for k in range(1, n):
            b[:, k, k - 1] = np.sqrt(streams.chisq(2.0 * (n - k)))
        sv = np.linalg.svd(b, compute_uv=False)
        rows[start:stop] = (n / 2.0) * sv[:, ::-1] ** 2
    return rows


def _sample_metropolis(spec: EnsembleSpec, count: int, seed: int) -> np.ndarray:
    chains = _MH_CHAINS
    per = -(-count // chains)
    init_streams = Streams.make(seed, TAG_SAMPLE, np.arange(chains, dtype=np.uint64))
    coords = np.empty((chains, spec.n))
    for k in range(spec.n):
        coords[:, k] = 2.0 * init_streams.gammas(spec.nu + 1.5)
    init = np.sort(coords, axis=1)
    run = metropolis_chain(
        spec,
        init,
        n_steps=_MH_BURN + per * _MH_THIN,
        seed=seed,
        burn=_MH_BURN,
        thin=_MH_THIN,
    )
    return run.states.reshape(-1, spec.n)[:count]


def sample(spec: EnsembleSpec, count: int, seed: int, chunk: int = 8192) -> EnsembleSample:
    """Draw `count` independent configurations.

    Matrix families are exact draws; the printed chiral family runs the
    auxiliary Metropolis chain (32 chains, fixed burn-in and thinning), so
    its rows are stationary but serially thinned rather than independent.
    """
    if not isinstance(count, int) or count < 1:
        raise DomainError("count must be a positive integer")
    if not isinstance(chunk, int) or chunk < 1:
        raise DomainError("chunk must be a positive integer")
    if spec.family in ("gue_scaled", "gue_shifted"):
        rows = _sample_gue(spec, count, seed, chunk)
    elif spec.family == "laguerre":
        rows = _sample_bidiagonal(spec, count, seed, chunk)
    else:
        rows = _sample_metropolis(spec, count, seed)
    return EnsembleSample(configurations=rows, spec=spec, seed=seed)


def _default_step(spec: EnsembleSpec) -> float:
    if spec.family == "gue_scaled":
        return 0.5 * math.sqrt(float(spec.n))
    if spec.family == "gue_shifted":
        return 0.5
    return 1.0


def metropolis_chain(
    spec: EnsembleSpec,
    init,
    n_steps: int,
    seed: int,
    step_scale: float | None = None,
    burn: int = 0,
    thin: int = 1,
) -> MetropolisRun:
    """Random-walk Metropolis over the unnormalized log density.

    init is one state or a (chains, n) batch run in lockstep; rows are
    sorted before use. Proposals perturb every coordinate by a normal step
    and re-sort. States at steps burn, burn+thin, ... are kept. Each chain
    owns stream (seed, chain index) and consumes a fixed number of draws
    per step, so runs are reproducible.
    """
    arr = np.asarray(init, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != spec.n:
        raise DomainError(f"chain states must have {spec.n} coordinates")
    if not np.all(np.isfinite(arr)):
        raise DomainError("chain states must be finite")
    if not (isinstance(n_steps, int) and n_steps >= 1):
        raise DomainError("n_steps must be a positive integer")
    if not (isinstance(burn, int) and 0 <= burn < n_steps):
        raise DomainError("burn must be a nonnegative integer below n_steps")
    if not (isinstance(thin, int) and thin >= 1):
        raise DomainError("thin must be a positive integer")
    sig = _default_step(spec) if step_scale is None else float(step_scale)
    if not (sig > 0.0 and math.isfinite(sig)):
        raise DomainError("step_scale must be positive")
    state = np.sort(arr, axis=1)
    logp = _log_rows(spec, state)
    if not np.all(np.isfinite(logp)):
        raise DomainError("initial chain states must carry positive density")
    chains = state.shape[0]
    streams = Streams.make(seed, TAG_METROPOLIS, np.arange(chains, dtype=np.uint64))
    kept = []
    accepted = 0
    for step in range(n_steps):
        z = streams.normals(spec.n)
        u = streams.uniforms(1)[:, 0]
        proposal = np.sort(state + sig * z, axis=1)
        logq = _log_rows(spec, proposal)
        take = np.log(u) < logq - logp
        state[take] = proposal[take]
        logp[take] = logq[take]
        accepted += int(take.sum())
        if step >= burn and (step - burn) % thin == 0:
            kept.append(state.copy())
    return MetropolisRun(
        states=np.array(kept),
        acceptance=accepted / (n_steps * chains),
        spec=spec,
        seed=seed,
    )
