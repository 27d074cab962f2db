"""Shared fixtures-free utilities for the test suite."""

import numpy as np

from rfw.scalars import bisect_root


def ball_quadratic_fstar(matrix, target, center, radius):
    """Exact optimum of 0.5 (x-t)' A (x-t) over a Euclidean ball,
    solved through the dual: find lam >= 0 with ||x(lam) - center|| =
    radius where x(lam) = (A + lam I)^-1 (A t + lam center).  Serves as
    an independent reference for the solver's constrained optimum."""
    matrix = np.asarray(matrix, dtype=float)
    target = np.asarray(target, dtype=float)
    n = len(target)
    eye = np.eye(n)

    def x_of(lam):
        return np.linalg.solve(matrix + lam * eye,
                               matrix @ target + lam * center)

    def phi(lam):
        return np.linalg.norm(x_of(lam) - center) - radius

    if phi(0.0) <= 0.0:
        xs = x_of(0.0)
    else:
        hi = 1.0
        while phi(hi) > 0.0:
            hi *= 2.0
            if hi > 1e18:
                raise RuntimeError("dual variable does not bracket")
        lam = bisect_root(phi, 0.0, hi, tol=1e-15)
        xs = x_of(lam)
    d = xs - target
    return 0.5 * float(d @ matrix @ d), xs


def fd_directional(kernel, value, x, u, h=1e-6):
    """Central finite difference of a scalar field along exp(x, t u)."""
    return (value(kernel.exp(x, h * u)) - value(kernel.exp(x, -h * u))) / (2 * h)


def hadamard_slacks(kernel, n_samples, rng, spread=2.0):
    """Worst slacks of the two nonpositive-curvature inequalities over
    random geodesic triangles: tangent chords never exceed distances,
    and squared distance is 1-strongly convex along geodesics."""
    cos_min, npc_min = np.inf, np.inf
    for _ in range(n_samples):
        x = kernel.random_point(rng)
        a = kernel.exp(x, rng.uniform(0, spread)
                       * kernel.random_unit_tangent(x, rng))
        b = kernel.exp(x, rng.uniform(0, spread)
                       * kernel.random_unit_tangent(x, rng))
        chord = kernel.norm(x, kernel.log(x, a) - kernel.log(x, b))
        cos_min = min(cos_min, kernel.dist(a, b) - chord)
        t = rng.uniform()
        g = kernel.geodesic(a, b, t)
        lhs = kernel.dist(x, g) ** 2
        rhs = ((1 - t) * kernel.dist(x, a) ** 2
               + t * kernel.dist(x, b) ** 2
               - t * (1 - t) * kernel.dist(a, b) ** 2)
        npc_min = min(npc_min, rhs - lhs)
    return cos_min, npc_min


def geometry_invariant_worst(kernel, n_samples, rng, spread=1.0):
    """Worst absolute error over random draws of the core kernel
    invariants: exp/log roundtrip, dist = |log|, geodesic speed,
    transport isometry, and unit-speed exp."""
    worst = 0.0
    for _ in range(n_samples):
        x = kernel.random_point(rng)
        u = spread * kernel.random_unit_tangent(x, rng)
        s = rng.uniform(0.05, 1.0)
        y = kernel.exp(x, s * u)
        worst = max(worst, abs(kernel.dist(x, y) - s * kernel.norm(x, u)))
        back = kernel.log(x, y)
        worst = max(worst, kernel.norm(x, back - s * u))
        t = rng.uniform()
        worst = max(worst, abs(kernel.dist(x, kernel.geodesic(x, y, t))
                               - t * kernel.dist(x, y)))
        v = rng.uniform(0.1, 2.0) * kernel.random_unit_tangent(x, rng)
        w = rng.uniform(0.1, 2.0) * kernel.random_unit_tangent(x, rng)
        tv = kernel.transport(x, y, v)
        tw = kernel.transport(x, y, w)
        worst = max(worst, abs(kernel.inner(y, tv, tw)
                               - kernel.inner(x, v, w)))
    return worst
