"""Geodesic balls and their linear minimization oracles.

The oracle solves  max_{z in ball} <w, log_x(z)>  for a nonzero tangent
direction w at a feasible point x.  On constant-curvature manifolds the
maximizer lies on the ball boundary inside the totally geodesic surface
spanned by log_x(center) and w, which reduces the problem to one angle
phi: the vertex is exp_x(alpha(phi) p(phi)) with p(phi) a unit vector in
that plane and alpha(phi) the travel distance to the boundary.  On the
sphere alpha(phi) has a closed form; the generic solver recovers it by
bisection on the boundary-crossing equation.
"""

import numpy as np
from dataclasses import dataclass
from typing import Optional

from .errors import (BracketError, ConfigError, ContractError,
                     NoIntersectionError, NumericsError)
from .manifolds import Euclidean, Hyperboloid, Manifold, Sphere
from .scalars import bisect_root, minimize_1d

MEMBERSHIP_TOL = 1e-9
DEFAULT_TOL = 1e-12


@dataclass
class LmoResult:
    vertex: np.ndarray
    objective: float
    phi: Optional[float] = None


@dataclass
class GeodesicBall:
    """Closed metric ball {z : dist(center, z) <= radius}.

    On positively curved manifolds the radius must stay strictly below
    pi / (2 sqrt(K)) so the ball is uniquely geodesic and the oracle's
    boundary reduction applies.
    """

    kernel: Manifold
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.kernel.check_point(self.center)
        if not self.radius > 0.0:
            raise ConfigError("GeodesicBall: radius must be positive")
        K = self.kernel.curvature.K
        if self.kernel.curvature.kappa_max > 0.0 and K > 0.0:
            rmax = np.pi / (2.0 * np.sqrt(K))
            if not self.radius < rmax:
                raise ConfigError(
                    f"GeodesicBall: radius {self.radius:.6g} must be "
                    f"< pi/(2 sqrt(K)) = {rmax:.6g}")

    @property
    def diameter(self):
        return 2.0 * self.radius

    def membership(self, x, tol=MEMBERSHIP_TOL):
        return self.kernel.dist(self.center, x) <= self.radius + tol

    def sample(self, rng):
        """Interior point, uniform-ish: random direction at the center,
        radius scaled so the push-forward is uniform in the flat limit."""
        u = self.kernel.random_unit_tangent(self.center, rng)
        rho = self.radius * rng.uniform() ** (1.0 / self.kernel.dim)
        return self.kernel.exp(self.center, rho * u)

    def lmo(self, w, x, tol=DEFAULT_TOL):
        k = self.kernel
        if isinstance(k, Sphere):
            return lmo_sphere_ball(w, x, self, tol)
        if isinstance(k, Euclidean):
            nw = np.linalg.norm(w)
            if nw < 1e-15:
                raise ContractError("lmo: zero direction")
            v = self.center + self.radius * (w / nw)
            return LmoResult(v, float(np.dot(w, v - x)))
        if isinstance(k, Hyperboloid):
            return lmo_constant_curvature_ball(w, x, self, tol)
        raise ConfigError(
            f"GeodesicBall.lmo: no oracle for kernel {k.name}")


def alpha_phi_sphere(a, b, c):
    """Smallest nonnegative root of a*cos(alpha) + b*sin(alpha) = c.

    This is the travel distance from a point x in a spherical cap to the
    cap boundary along a unit direction p, with a = <center, x>,
    b = <center, p> and c = cos(radius).  Solved by the tangent
    half-angle substitution; the singular branch a + c ~ 0 falls back to
    a scan-and-bisect root search.
    """
    disc = a * a + b * b - c * c
    if disc < 0.0:
        raise NoIntersectionError(
            f"alpha_phi_sphere: ray misses the boundary (disc={disc:.3g})")
    den = a + c
    if abs(den) < 1e-13 * max(1.0, abs(a), abs(c)):
        return _alpha_phi_bisect(a, b, c)
    num = b + np.sqrt(disc)
    if a >= c and num < 0.0:
        # inside the cap sqrt(disc) >= |b|, so a negative numerator is
        # boundary roundoff; the exit root is 0, not a 2pi wrap
        num = 0.0
    alpha = 2.0 * np.arctan(num / den)
    if alpha < 0.0:
        # the + branch only goes negative when x is outside the cap
        alpha += 2.0 * np.pi
    return float(alpha)


def _alpha_phi_bisect(a, b, c, n_scan=720):
    f = lambda t: a * np.cos(t) + b * np.sin(t) - c
    grid = np.linspace(0.0, 2.0 * np.pi, n_scan + 1)
    vals = f(grid)
    for i in range(n_scan):
        if vals[i] == 0.0:
            return float(grid[i])
        if vals[i] * vals[i + 1] <= 0.0:
            return float(bisect_root(f, grid[i], grid[i + 1], tol=1e-14))
    raise NumericsError("alpha_phi_sphere: no root located on (0, 2pi]")


def _section_frame(kernel, ball, x, w, norm_w):
    """Orthonormal pair (u1, u2) at x spanning the oracle's search
    plane: u1 along w, u2 the component of log_x(center) orthogonal to
    it.  Returns (u1, None) when the plane degenerates to a line."""
    u1 = w / norm_w
    g = kernel.log(x, ball.center)
    g_perp = g - kernel.inner(x, u1, g) * u1
    n_perp = np.sqrt(max(kernel.inner(x, g_perp, g_perp), 0.0))
    scale = max(np.sqrt(max(kernel.inner(x, g, g), 0.0)), 1.0)
    if n_perp <= 1e-10 * scale:
        return u1, None
    return u1, g_perp / n_perp


def _phi_search(neg_obj, tol):
    """Minimize neg_obj over [-pi, pi] from three bracketing starts;
    the objective can have two local optima near +-pi/2."""
    best = None
    for lo, hi in ((-np.pi, 0.0), (-0.5 * np.pi, 0.5 * np.pi), (0.0, np.pi)):
        cand = minimize_1d(neg_obj, lo, hi, tol=tol)
        if best is None or cand[1] < best[1]:
            best = cand
    return best


def lmo_sphere_ball(w, x, ball, tol=DEFAULT_TOL):
    """Closed-form oracle for balls on the unit sphere."""
    k = ball.kernel
    if not isinstance(k, Sphere):
        raise ConfigError("lmo_sphere_ball: kernel must be a sphere")
    norm_w = k.norm(x, w)
    if norm_w < 1e-15:
        raise ContractError("lmo_sphere_ball: zero direction")
    if not ball.membership(x):
        raise ContractError("lmo_sphere_ball: x is outside the ball")

    x0, r = ball.center, ball.radius
    c = np.cos(r)
    # snap a membership-tolerance boundary point back onto the cap so the
    # half-angle discriminant stays nonnegative
    a = max(float(np.dot(x0, x)), c)

    u1, u2 = _section_frame(k, ball, x, w, norm_w)
    b1 = float(np.dot(x0, u1))
    if u2 is None:
        # center, or center aligned with w: optimum is along w itself
        alpha = alpha_phi_sphere(a, b1, c)
        v = k.exp(x, alpha * u1)
        return LmoResult(v, k.inner(x, w, k.log(x, v)), phi=0.0)
    b2 = float(np.dot(x0, u2))

    def neg_obj(phi):
        b = np.cos(phi) * b1 + np.sin(phi) * b2
        return -alpha_phi_sphere(a, b, c) * np.cos(phi)

    phi, neg = _phi_search(neg_obj, tol)
    alpha = alpha_phi_sphere(a, np.cos(phi) * b1 + np.sin(phi) * b2, c)
    p = np.cos(phi) * u1 + np.sin(phi) * u2
    v = k.exp(x, alpha * p)
    return LmoResult(v, k.inner(x, w, k.log(x, v)), phi=float(phi))


def _exit_distance(ball, x, p, hi, tol):
    """Distance along the unit ray p from x to the ball boundary, by
    bisection on dist(exp_x(s p), center) - r over [0, hi]."""
    k, x0, r = ball.kernel, ball.center, ball.radius

    def f(s):
        val = k.dist(k.exp(x, s * p), x0) - r
        if s == 0.0:
            # x sits in the ball within membership tolerance; clamp so
            # the bracket survives a +1e-10 roundoff at the endpoint
            return min(val, 0.0)
        return val

    try:
        return bisect_root(f, 0.0, hi, tol=tol)
    except BracketError:
        if f(hi) <= 0.0:
            return hi  # the ray stays in the closed ball up to hi
        raise


def lmo_constant_curvature_ball(w, x, ball, tol=DEFAULT_TOL):
    """Oracle for balls on constant-curvature kernels (sphere,
    hyperboloid, Euclidean).  Same plane reduction as the sphere closed
    form, with the travel distance found by bisection instead of the
    half-angle formula; used as a slower cross-check and as the primary
    oracle on the hyperboloid.
    """
    k = ball.kernel
    if not isinstance(k, (Sphere, Hyperboloid, Euclidean)):
        raise ConfigError(
            "lmo_constant_curvature_ball: kernel must have constant curvature")
    norm_w = k.norm(x, w)
    if norm_w < 1e-15:
        raise ContractError("lmo_constant_curvature_ball: zero direction")
    if not ball.membership(x):
        raise ContractError("lmo_constant_curvature_ball: x is outside the ball")

    hi = k.dist(x, ball.center) + ball.radius
    u1, u2 = _section_frame(k, ball, x, w, norm_w)
    if u2 is None:
        alpha = _exit_distance(ball, x, u1, hi, tol)
        v = k.exp(x, alpha * u1)
        return LmoResult(v, k.inner(x, w, k.log(x, v)), phi=0.0)

    def neg_obj(phi):
        p = np.cos(phi) * u1 + np.sin(phi) * u2
        return -_exit_distance(ball, x, p, hi, tol) * np.cos(phi)

    phi, neg = _phi_search(neg_obj, max(tol, 1e-12))
    p = np.cos(phi) * u1 + np.sin(phi) * u2
    alpha = _exit_distance(ball, x, p, hi, tol)
    v = k.exp(x, alpha * p)
    return LmoResult(v, k.inner(x, w, k.log(x, v)), phi=float(phi))


# ---------------------------------------------------------------------------
# brute-force references
# ---------------------------------------------------------------------------

def _center_frame(ball, x, w):
    """Orthonormal tangent pair at the center spanning the plane through
    the center, x and (transported) w; completes the frame with a
    deterministic direction when the span degenerates."""
    k, x0 = ball.kernel, ball.center
    cands = []
    if k.dist(x0, x) > 1e-12:
        cands.append(k.log(x0, x))
        cands.append(k.transport(x, x0, w))
    else:
        cands.append(np.array(w, copy=True))
    # deterministic completions in case of rank deficiency
    rng = np.random.default_rng(0)
    for _ in range(4):
        cands.append(k.random_tangent(x0, rng))

    frame = []
    for cand in cands:
        v = cand
        for q in frame:
            v = v - k.inner(x0, q, v) * q
        nv = np.sqrt(max(k.inner(x0, v, v), 0.0))
        if nv > 1e-10:
            frame.append(v / nv)
        if len(frame) == 2:
            return frame[0], frame[1]
    raise NumericsError("could not build a section frame at the center")


def boundary_section_grid(ball, x, w, n_grid):
    """n_grid boundary points on the geodesic section through the
    center, x and w.  For a ball on S^2 the section circle is the whole
    boundary, so this doubles as a dense boundary grid there."""
    k, x0, r = ball.kernel, ball.center, ball.radius
    q1, q2 = _center_frame(ball, x, w)
    th = np.linspace(0.0, 2.0 * np.pi, n_grid, endpoint=False)
    u = np.cos(th)[:, None] * q1[None, :] + np.sin(th)[:, None] * q2[None, :]
    if isinstance(k, Sphere):
        z = np.cos(r) * x0[None, :] + np.sin(r) * u
        return z / np.linalg.norm(z, axis=1, keepdims=True)
    if isinstance(k, Hyperboloid):
        return np.cosh(r) * x0[None, :] + np.sinh(r) * u
    if isinstance(k, Euclidean):
        return x0[None, :] + r * u
    raise ConfigError("boundary_section_grid: unsupported kernel")


def grid_objectives(kernel, x, w, z):
    """<w, log_x(z_i)> for a batch of points z (rows), vectorized."""
    if isinstance(kernel, Sphere):
        cz = np.clip(z @ x, -1.0, 1.0)
        theta = np.arccos(cz)
        fac = np.where(theta > 1e-9, theta / np.maximum(np.sin(theta), 1e-300), 1.0)
        return fac * (z @ w)
    if isinstance(kernel, Hyperboloid):
        eta = np.ones(len(x))
        eta[0] = -1.0
        cz = -(z @ (eta * x))
        s = np.sqrt(np.maximum(cz * cz - 1.0, 0.0))
        theta = np.arccosh(np.maximum(cz, 1.0))
        fac = np.where(s > 1e-9, theta / np.maximum(s, 1e-300), 1.0)
        return fac * (z @ (eta * w))
    if isinstance(kernel, Euclidean):
        return (z - x[None, :]) @ w
    raise ConfigError("grid_objectives: unsupported kernel")


def lmo_brute_force(ball, w, x, n_grid=100_000):
    """Best boundary point over the section grid; independent reference
    for the oracles (uses only exp at the center and the log formulas)."""
    z = boundary_section_grid(ball, x, w, n_grid)
    obj = grid_objectives(ball.kernel, x, w, z)
    i = int(np.argmax(obj))
    return z[i], float(obj[i])


def random_boundary_best(ball, w, x, n, rng):
    """Best objective over n random boundary points (full boundary
    sphere, not just the section); a domination check for the oracle."""
    k, x0, r = ball.kernel, ball.center, ball.radius
    z = np.asarray([k.exp(x0, r * k.random_unit_tangent(x0, rng))
                    for _ in range(n)])
    return float(np.max(grid_objectives(k, x, w, z)))
