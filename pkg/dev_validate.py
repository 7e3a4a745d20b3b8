import math
import time

import numpy as np

from detproc import validate as V
from detproc.quadgauss import legendre
from detproc.sampling import gue_scaled, laguerre, sample
from detproc.sde import SdeSystem, simulate_paths
from detproc.statickernels import eval_static_grid, hermite_kernel, laguerre_kernel


def clock(label, fn):
    t0 = time.time()
    out = fn()
    print(f"{label}: {time.time() - t0:.1f}s")
    return out


# 1. stationarity of the squared/bessel OU maps (independent: initial law at T vs t=0 histogram)
def stationarity(kind, nu, transform, edges, paths=3000, horizon=0.5, dt=1e-3, seed=901):
    system = SdeSystem(kind=kind, n=8, nu=nu)
    init = V.stationary_start(system, paths, seed)
    _, out = simulate_paths(system, init, horizon, dt, seed, n_paths=paths, store_times=[horizon])
    a = V.estimate_rho(transform(init), edges)
    b = V.estimate_rho(transform(out[:, 0, :]), edges)
    z = np.abs(a.estimate - b.estimate) / np.hypot(a.std_error, b.std_error)
    print(f"{kind} stationarity: max z {z.max():.2f}")


clock("sqbessel_ou stat", lambda: stationarity("sqbessel_ou", 0.5, lambda r: r, np.linspace(0.0, 40.0, 17)))
clock("bessel_ou stat", lambda: stationarity("bessel_ou", 0.5, lambda r: r, np.linspace(0.0, 7.0, 15)))

# 2. variance identity oracle for the moment bound (k=1 lhs == rho - iint K^2)
for spec, kern in ((gue_scaled(8), hermite_kernel(8)), (laguerre(8, 0.0), laguerre_kernel(8, 0.0))):
    for interval in ((0.0, 1.0), (-2.0, 0.0)):
        lo, hi = interval
        lo_q = max(lo, 0.0) if kern.domain_nonneg else lo
        if hi <= lo_q:
            rho = kk = 0.0
        else:
            x, w = legendre(160, lo_q, hi)
            kmat = eval_static_grid(kern, x, x)
            rho = float(w @ np.diag(kmat))
            kk = float(np.einsum("i,j,ij->", w, w, kmat * kmat))
        check = V.check_moment_bound(spec, interval, 1, count=40000, seed=20260)
        zvar = abs(check.lhs - (rho - kk)) / check.std_error if check.std_error else 0.0
        print(f"moment {spec.family} D={interval}: lhs {check.lhs:.4f} var-oracle {rho - kk:.4f} "
              f"z {zvar:.2f} rhs {check.rhs:.4f} verdict {check.verdict}")
        for k in (2,):
            c2 = V.check_moment_bound(spec, interval, k, count=40000, seed=20260)
            print(f"  k=2: lhs {c2.lhs:.4f} se {c2.std_error:.4f} rhs {c2.rhs:.4f} {c2.verdict}")

# 3. displacement profiles
for kind, nu, D, disp in (("dyson_ou", None, (-1.0, 1.0), "linear"), ("sqbessel_ou", 0.5, (0.0, 8.0), "sqrt")):
    system = SdeSystem(kind=kind, n=8, nu=nu)
    T = 0.25
    eps = np.array([0.5, 1.0, 2.0]) * math.sqrt(T)
    prof = clock(f"profile {kind}", lambda: V.displacement_profile(system, D, eps, T, paths=4000, seed=20260, displacement=disp))
    check = V.check_displacement_tail(system, D, eps, T, paths=4000, seed=20260, displacement=disp)
    huge = V.displacement_profile(system, D, [10.0 * math.sqrt(T)], T, paths=1000, seed=20260, displacement=disp)
    print(f"{kind}: probs {prof.estimate} ses {prof.std_error} ratio {check.lhs:.2f}+-{check.std_error:.2f} "
          f"{check.verdict}; eps=10sqrtT prob {huge.estimate[0]}")

# 4. reversibility
f = V.bump_statistic(-1.0, 1.0)
g = V.bump_statistic(1.0, 1.0, power=2)
rev = clock("rev dyson", lambda: V.check_reversibility(SdeSystem(kind="dyson_ou", n=4), f, g, 0.5, paths=20000, seed=20260))
print(f"dyson_ou rev: lhs {rev.lhs:.5f} se {rev.std_error:.5f} z {rev.lhs / rev.std_error:.2f} {rev.verdict}")
fb = V.bump_statistic(1.0, 0.8)
gb = V.bump_statistic(2.5, 0.8, power=2)
revb = clock("rev bessel", lambda: V.check_reversibility(SdeSystem(kind="bessel_ou", n=4, nu=0.5), fb, gb, 0.5, paths=20000, seed=20260))
print(f"bessel_ou rev: lhs {revb.lhs:.5f} se {revb.std_error:.5f} z {revb.lhs / revb.std_error:.2f} {revb.verdict}")
same = V.check_reversibility(SdeSystem(kind="dyson_ou", n=4), f, f, 0.5, paths=2000, seed=5)
zero = V.check_reversibility(SdeSystem(kind="dyson_ou", n=4), f, g, 0.0, paths=2000, seed=5)
print(f"f=g diff {same.lhs}, t=0 diff {zero.lhs}")

# 5. scaling distances
for family, nu in (("sine", None), ("bessel", 0.0), ("bessel", 0.5)):
    gaps = [V.scaling_distance(family, n, nu) for n in (50, 200, 500)]
    print(f"scaling {family} nu={nu}: {[f'{g:.5f}' for g in gaps]}")

# 6. rho suite fraction at candidate seeds
for seed in (2026, 101, 211):
    t0 = time.time()
    rep = V.run_suite("rho", seed)
    print(f"rho suite seed {seed}: {[ (c['lhs'], c['verdict']) for c in rep['checks'] ]} ({time.time()-t0:.1f}s)")

# 7. pair estimator vs determinant formula (gue_scaled(8), coarse interior cells)
rows = sample(gue_scaled(8), 30000, seed=101).configurations
edges = np.linspace(-6.0, 6.0, 7)
pair = V.estimate_rho_pair(rows, edges)
kern = hermite_kernel(8)
worst = 0.0
for a in range(6):
    for b in range(6):
        if a == b:
            continue
        xa, wa = legendre(4, edges[a], edges[a + 1])
        xb, wb = legendre(4, edges[b], edges[b + 1])
        ka = np.diag(eval_static_grid(kern, xa, xa))
        kb = np.diag(eval_static_grid(kern, xb, xb))
        cross = eval_static_grid(kern, xa, xb)
        mass = float(np.einsum("i,j,ij->", wa, wb, ka[:, None] * kb[None, :] - cross * cross))
        target = mass / ((edges[a + 1] - edges[a]) * (edges[b + 1] - edges[b]))
        se = pair.std_error[a, b]
        if se > 0:
            worst = max(worst, abs(pair.estimate[a, b] - target) / se)
print(f"pair estimator max z {worst:.2f}")

# 8. multitime suite at candidate seeds
for seed in (2026, 211):
    t0 = time.time()
    rep = V.run_suite("multitime", seed)
    c = rep["checks"][0]
    z = (c["estimate"] - c["determinant"]) / c["std_error"]
    print(f"multitime seed {seed}: det {c['determinant']:.6f} est {c['estimate']:.6f} z {z:.2f} {c['verdict']} ({time.time()-t0:.1f}s)")
