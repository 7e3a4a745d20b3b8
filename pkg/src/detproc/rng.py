"""Counter-based random number streams.

Every stochastic component draws from a Philox4x32-10 stream keyed by
(seed, purpose tag, lane index), one stream per path or per sample. Draw
counts depend only on a lane's own trajectory, so results are reproducible
independently of chunking, worker count, and scheduling. Normal variates
come from the Wichura PPND16 inverse normal CDF; gamma variates from the
Marsaglia-Tsang rejection sampler driven by the same streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Streams", "derive_key", "philox4x32_10", "norm_ppf"]

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = np.uint32(0x9E3779B9)
_W1 = np.uint32(0xBB67AE85)
_MASK32 = np.uint64(0xFFFFFFFF)

# purpose tags for key derivation (arbitrary distinct constants)
TAG_SDE = 0x53444501
TAG_SDE_REFINE = 0x53444502
TAG_SAMPLE = 0x53414D01
TAG_METROPOLIS = 0x53414D02
TAG_VALIDATE = 0x56414C01


def _splitmix64(x):
    with np.errstate(over="ignore"):
        z = x + np.uint64(0x9E3779B97F4A7C15)
        z ^= z >> np.uint64(30)
        z = z * np.uint64(0xBF58476D1CE4E5B9)
        z ^= z >> np.uint64(27)
        z = z * np.uint64(0x94D049BB133111EB)
        z ^= z >> np.uint64(31)
    return z


def derive_key(*parts):
    """Mix integer parts (scalars or arrays) into a 64-bit stream key."""
    key = np.uint64(0)
    for p in parts:
        arr = np.asarray(p)
        if arr.dtype.kind not in "iu":
            raise TypeError("key parts must be integers")
        key = _splitmix64(np.uint64(key) ^ arr.astype(np.uint64))
    return key


def philox4x32_10(c0, c1, c2, c3, k0, k1):
    """Vectorized Philox4x32, 10 rounds. Inputs and outputs are uint32 arrays."""
    c0 = np.asarray(c0, dtype=np.uint32).copy()
    c1 = np.asarray(c1, dtype=np.uint32).copy()
    c2 = np.asarray(c2, dtype=np.uint32).copy()
    c3 = np.asarray(c3, dtype=np.uint32).copy()
    k0 = np.asarray(k0, dtype=np.uint32).copy()
    k1 = np.asarray(k1, dtype=np.uint32).copy()
    for _ in range(10):
        p0 = c0.astype(np.uint64) * _M0
        p1 = c2.astype(np.uint64) * _M1
        hi0 = (p0 >> np.uint64(32)).astype(np.uint32)
        lo0 = (p0 & _MASK32).astype(np.uint32)
        hi1 = (p1 >> np.uint64(32)).astype(np.uint32)
        lo1 = (p1 & _MASK32).astype(np.uint32)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    return c0, c1, c2, c3


# PPND16 (Wichura's algorithm AS 241), |error| < 1e-15 over (0,1).
_PPND_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
    1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_PPND_B = (
    1.0, 4.2313330701600911252e1, 6.8718700749205790830e2,
    5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3,
)
_PPND_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_PPND_D = (
    1.0, 2.05319162663775882187e0, 1.67638483018380384940e0,
    6.89767334985100004550e-1, 1.48103976427480074590e-1,
    1.51986665636164571966e-2, 5.47593808499534494600e-4,
    1.05075007164441684324e-9,
)
_PPND_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_PPND_F = (
    1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1,
    1.48753612908506148525e-2, 7.86869131145613259100e-4,
    1.84631831751005468180e-5, 1.42151175831644588870e-7,
    2.04426310338993978564e-15,
)


def _poly(coeffs, r):
    acc = np.full_like(r, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * r + c
    return acc


def norm_ppf(p):
    """Inverse standard normal CDF (PPND16), vectorized, p in (0,1)."""
    p = np.asarray(p, dtype=float)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if np.any(central):
        r = 0.180625 - q[central] ** 2
        out[central] = q[central] * _poly(_PPND_A, r) / _poly(_PPND_B, r)

    if np.any(~central):
        qt = q[~central]
        pt = p[~central]
        r = np.where(qt < 0.0, pt, 1.0 - pt)
        r = np.sqrt(-np.log(r))
        near = r <= 5.0
        val = np.empty_like(r)
        if np.any(near):
            rn = r[near] - 1.6
            val[near] = _poly(_PPND_C, rn) / _poly(_PPND_D, rn)
        if np.any(~near):
            rf = r[~near] - 5.0
            val[~near] = _poly(_PPND_E, rf) / _poly(_PPND_F, rf)
        out[~central] = np.where(qt < 0.0, -val, val)
    return out


@dataclass
class Streams:
    """A batch of independent per-lane Philox streams with explicit counters."""

    key: np.ndarray      # (P,) uint64
    counter: np.ndarray  # (P,) uint64, counts 128-bit blocks consumed

    @classmethod
    def make(cls, seed: int, tag: int, indices) -> "Streams":
        indices = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
        key = derive_key(np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                         np.full_like(indices, np.uint64(tag)),
                         indices)
        return cls(key=np.atleast_1d(key).astype(np.uint64),
                   counter=np.zeros(indices.shape, dtype=np.uint64))

    def __len__(self) -> int:
        return self.key.shape[0]

    def select(self, mask_or_idx) -> "Streams":
        """View onto a subset of lanes; counters stay shared with the parent."""
        return Streams(key=self.key[mask_or_idx], counter=self.counter[mask_or_idx])

    def put_counter(self, mask_or_idx, sub: "Streams") -> None:
        self.counter[mask_or_idx] = sub.counter

    def _blocks(self, nblocks: int):
        # One Philox block = 128 bits = 2 doubles. Counter layout:
        # (c0,c1) = per-lane 64-bit block counter, c2 = 0, c3 = 0.
        p = self.key.shape[0]
        ctr = self.counter[:, None] + np.arange(nblocks, dtype=np.uint64)[None, :]
        c0 = (ctr & _MASK32).astype(np.uint32)
        c1 = (ctr >> np.uint64(32)).astype(np.uint32)
        zeros = np.zeros((p, nblocks), dtype=np.uint32)
        k0 = np.broadcast_to((self.key & _MASK32).astype(np.uint32)[:, None], (p, nblocks))
        k1 = np.broadcast_to((self.key >> np.uint64(32)).astype(np.uint32)[:, None], (p, nblocks))
        r0, r1, r2, r3 = philox4x32_10(c0, c1, zeros, zeros, k0, k1)
        self.counter = self.counter + np.uint64(nblocks)
        return r0, r1, r2, r3

    def uniforms(self, n: int) -> np.ndarray:
        """(P, n) doubles, uniform on the open interval (0,1)."""
        nblocks = (n + 1) // 2
        r0, r1, r2, r3 = self._blocks(nblocks)
        hi = (r0.astype(np.uint64) << np.uint64(32)) | r1.astype(np.uint64)
        lo = (r2.astype(np.uint64) << np.uint64(32)) | r3.astype(np.uint64)
        p = self.key.shape[0]
        vals = np.empty((p, 2 * nblocks), dtype=np.float64)
        vals[:, 0::2] = ((hi >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
        vals[:, 1::2] = ((lo >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53
        return vals[:, :n]

    def normals(self, n: int) -> np.ndarray:
        """(P, n) standard normal variates via the inverse CDF."""
        return norm_ppf(self.uniforms(n))

    def gammas(self, shape_param) -> np.ndarray:
        """(P,) gamma(shape, scale=1) variates, Marsaglia-Tsang.

        Lanes consume attempts from their own streams only, so acceptance
        in one lane never shifts another lane's draws.
        """
        d_in = np.broadcast_to(np.asarray(shape_param, dtype=float), self.key.shape).copy()
        if np.any(d_in <= 0.0):
            raise ValueError("gamma shape must be positive")
        small = d_in < 1.0
        d = np.where(small, d_in + 1.0, d_in)
        d3 = d - 1.0 / 3.0
        c = 1.0 / np.sqrt(9.0 * d3)
        out = np.empty_like(d)
        pending = np.ones(d.shape, dtype=bool)
        while np.any(pending):
            idx = np.nonzero(pending)[0]
            sub = self.select(idx)
            draws = sub.uniforms(2)
            self.put_counter(idx, sub)
            x = norm_ppf(draws[:, 0])
            u = draws[:, 1]
            v = (1.0 + c[idx] * x) ** 3
            ok = v > 0.0
            lhs = np.log(u)
            rhs = 0.5 * x * x + d3[idx] * (1.0 - v + np.log(np.where(ok, v, 1.0)))
            accept = ok & (lhs < rhs)
            took = idx[accept]
            out[took] = d3[took] * v[accept]
            pending[took] = False
        if np.any(small):
            idx = np.nonzero(small)[0]
            sub = self.select(idx)
            u = sub.uniforms(1)[:, 0]
            self.put_counter(idx, sub)
            out[idx] *= u ** (1.0 / d_in[idx])
        return out

    def chisq(self, df) -> np.ndarray:
        """(P,) chi-square variates with (possibly non-integer) df > 0."""
        return 2.0 * self.gammas(np.asarray(df, dtype=float) / 2.0)
