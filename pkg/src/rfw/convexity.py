"""Numerical certifiers for strong convexity of sets.

Four notions are checked by sampling, each returning a certificate with
the worst margin seen:

* geodesic: the metric ball of radius alpha*t*(1-t)*d(x,y)^2 around
  gamma(t) stays inside the set;
* riemannian: the pullback log_x(C) is strongly convex in the tangent
  space, uniformly over base points x in C;
* double geodesic: every tangent perturbation z at gamma(t) with
  norm(z) <= alpha*t*(1-t)*d(x,y)^2 exponentiates into the set;
* scaling inequality: at the oracle vertex v for direction w,
  <w, log_x(v)> >= alpha * norm(w) * dist(x,v)^2, plus an approximate
  variant that subtracts a curvature residual term built from the
  double exponential map.

Margins for the membership-based notions are measured as the gap
between the admissible travel distance along the sampled direction and
the required one (bisection on membership); the scaling notions have
analytic margins.
"""

import json
import numpy as np
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import ConfigError, ContractError, DomainError, NumericsError
from .manifolds import CurvatureInfo, Euclidean, Hyperboloid, Manifold, Sphere
from .balls import GeodesicBall

DEFAULT_CERT_TOL = 1e-8

NOTIONS = ("geodesic", "riemannian", "double_geodesic", "scaling",
           "approx_scaling")


@dataclass
class ConvexSet:
    """A set presented through predicates: membership test, interior
    sampler, and (when available) a linear minimization oracle
    (w, x) -> vertex maximizing <w, log_x(.)>."""

    kernel: Manifold
    membership: Callable
    sampler: Callable
    lmo: Optional[Callable] = None
    diameter: Optional[float] = None

    def __post_init__(self):
        if not callable(self.membership) or not callable(self.sampler):
            raise ConfigError("ConvexSet needs a membership test and a sampler")


def ball_set(ball: GeodesicBall) -> ConvexSet:
    lmo = None
    if isinstance(ball.kernel, (Sphere, Euclidean, Hyperboloid)):
        lmo = lambda w, x: ball.lmo(w, x).vertex
    return ConvexSet(kernel=ball.kernel, membership=ball.membership,
                     sampler=ball.sample, lmo=lmo, diameter=ball.diameter)


@dataclass(frozen=True)
class DistanceEquivalence:
    """Distance d equivalent to the Riemannian one:
    ell * d_M <= d <= big_l * d_M.  A homothety d = c * d_M is built in;
    anything else must supply distance_fn(kernel, x, y)."""

    ell: float = 1.0
    big_l: float = 1.0
    distance_fn: Optional[Callable] = None

    def __post_init__(self):
        if not (0.0 < self.ell <= self.big_l):
            raise ConfigError("DistanceEquivalence: need 0 < ell <= big_l")

    def distance(self, kernel, x, y):
        if self.distance_fn is not None:
            return self.distance_fn(kernel, x, y)
        if self.ell != self.big_l:
            raise ConfigError(
                "DistanceEquivalence: ell < big_l needs an explicit distance_fn")
        return self.ell * kernel.dist(x, y)

    @classmethod
    def riemannian(cls):
        return cls(1.0, 1.0)


@dataclass
class ConvexityCertificate:
    notion: str
    alpha_tested: float
    samples: int
    worst_margin: float
    witness: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_CERT_TOL

    @property
    def passed(self):
        return self.worst_margin >= -self.tolerance

    def to_dict(self):
        return {
            "notion": self.notion,
            "alpha_tested": self.alpha_tested,
            "samples": self.samples,
            "worst_margin": self.worst_margin,
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "witness": {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                        for k, v in self.witness.items()},
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def certificate_from_dict(d):
    witness = {k: (np.asarray(v) if isinstance(v, list) else v)
               for k, v in d.get("witness", {}).items()}
    return ConvexityCertificate(d["notion"], d["alpha_tested"], d["samples"],
                                d["worst_margin"], witness, d["tolerance"])


# ---------------------------------------------------------------------------
# clearance along a ray, by bisection on membership
# ---------------------------------------------------------------------------

def _sup_member(member_at, hi_cap, resolution):
    """sup{s in [0, hi_cap] : member_at(s)}; assumes membership along
    the ray is an initial interval (true for convex sets)."""
    if not member_at(0.0):
        return 0.0
    if member_at(hi_cap):
        return hi_cap
    lo, hi = 0.0, hi_cap
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if member_at(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _ray_margin(member_at, required, cap, refine):
    """Margin of the admissible travel distance over the required one.
    required is shrunk by 1e-6 relatively before the pass probe so that
    boundary-tight constants survive roundoff."""
    ok = member_at(required * (1.0 - 1e-6))
    if not refine:
        return 0.0 if ok else -max(required, 1e-12)
    hi_cap = max(cap, 2.0 * required, 1e-9)
    clearance = _sup_member(member_at, hi_cap, 1e-11 * max(1.0, hi_cap))
    return clearance - required


def _guarded(membership, kernel, base, direction):
    def member_at(s):
        try:
            z = kernel.exp(base, s * direction)
        except DomainError:
            return False  # leaving the exp domain counts as a violation
        return bool(membership(z))
    return member_at


def _cap_for(cset):
    return cset.diameter if cset.diameter is not None else 1.0


# ---------------------------------------------------------------------------
# the four checkers
# ---------------------------------------------------------------------------

def check_geodesic_strong_convexity(cset, alpha, n_samples, rng, refine=True,
                                    tolerance=DEFAULT_CERT_TOL):
    """Sample chords (x, y) and times t; require the metric ball of
    radius alpha*t*(1-t)*d(x,y)^2 around gamma(t) to stay in the set,
    probing the worst direction drawn uniformly on the tangent sphere."""
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x, y = cset.sampler(rng), cset.sampler(rng)
        t = rng.uniform()
        d = k.dist(x, y)
        m = k.geodesic(x, y, t)
        rho = alpha * t * (1.0 - t) * d * d
        u = k.random_unit_tangent(m, rng)
        margin = _ray_margin(_guarded(cset.membership, k, m, u), rho,
                             _cap_for(cset), refine)
        if margin < worst:
            worst = margin
            witness = {"x": x, "y": y, "t": t, "direction": u,
                       "required": rho, "margin": margin}
    return ConvexityCertificate("geodesic", alpha, n_samples, float(worst),
                                witness, tolerance)


def check_riemannian_strong_convexity(cset, alpha, n_samples, rng,
                                      refine=True,
                                      tolerance=DEFAULT_CERT_TOL):
    """Strong convexity of the tangent-space pullback log_x(C),
    uniformly over sampled base points x in C."""
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x = cset.sampler(rng)
        p = k.log(x, cset.sampler(rng))
        q = k.log(x, cset.sampler(rng))
        t = rng.uniform()
        dpq2 = k.inner(x, p - q, p - q)
        combo = (1.0 - t) * p + t * q
        rho = alpha * t * (1.0 - t) * dpq2
        zdir = k.random_unit_tangent(x, rng)

        def member_at(s):
            try:
                z = k.exp(x, combo + s * zdir)
            except DomainError:
                return False
            return bool(cset.membership(z))

        margin = _ray_margin(member_at, rho, _cap_for(cset), refine)
        if margin < worst:
            worst = margin
            witness = {"x": x, "p": p, "q": q, "t": t, "direction": zdir,
                       "required": rho, "margin": margin}
    return ConvexityCertificate("riemannian", alpha, n_samples, float(worst),
                                witness, tolerance)


def check_double_geodesic_strong_convexity(cset, alpha, dist_eq=None,
                                           n_samples=1000, rng=None,
                                           refine=True,
                                           tolerance=DEFAULT_CERT_TOL):
    """Like the geodesic notion but phrased through exp at gamma(t):
    every z with norm(z) <= alpha*t*(1-t)*d(x,y)^2 must exponentiate
    into the set (a missing exp counts as failure), with d given by
    dist_eq rather than pinned to the Riemannian distance."""
    if dist_eq is None:
        dist_eq = DistanceEquivalence.riemannian()
    if rng is None:
        rng = np.random.default_rng()
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x, y = cset.sampler(rng), cset.sampler(rng)
        t = rng.uniform()
        d = dist_eq.distance(k, x, y)
        m = k.geodesic(x, y, t)
        rho = alpha * t * (1.0 - t) * d * d
        u = k.random_unit_tangent(m, rng)
        margin = _ray_margin(_guarded(cset.membership, k, m, u), rho,
                             _cap_for(cset), refine)
        if margin < worst:
            worst = margin
            witness = {"x": x, "y": y, "t": t, "direction": u,
                       "required": rho, "margin": margin}
    return ConvexityCertificate("double_geodesic", alpha, n_samples,
                                float(worst), witness, tolerance)


def check_scaling_inequality(cset, alpha, n_samples, rng,
                             tolerance=DEFAULT_CERT_TOL):
    """At the oracle vertex v for a unit direction w at x in C, require
    <w, log_x(v)> >= alpha * norm(w) * dist(x, v)^2."""
    if cset.lmo is None:
        raise ConfigError("check_scaling_inequality: set has no oracle")
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x = cset.sampler(rng)
        w = k.random_unit_tangent(x, rng)
        v = cset.lmo(w, x)
        lx = k.log(x, v)
        lhs = k.inner(x, w, lx)
        margin = lhs - alpha * k.inner(x, lx, lx)
        if margin < worst:
            worst = margin
            witness = {"x": x, "w": w, "vertex": v, "lhs": lhs,
                       "margin": margin}
    return ConvexityCertificate("scaling", alpha, n_samples, float(worst),
                                witness, tolerance)


def check_approx_scaling_inequality(cset, alpha, n_samples, rng,
                                    tolerance=DEFAULT_CERT_TOL):
    """Scaling inequality with the curvature correction term: the lower
    bound alpha*norm(w)*dist(x,v)^2 is offset by <w, r(x)> where r(x) is
    the residual of the double exponential map along the half chord,
    evaluated with the transported normalized direction."""
    if cset.lmo is None:
        raise ConfigError("check_approx_scaling_inequality: set has no oracle")
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x = cset.sampler(rng)
        w = k.random_unit_tangent(x, rng)
        v = cset.lmo(w, x)
        lx = k.log(x, v)
        d = k.dist(x, v)
        if d < 1e-12:
            continue  # degenerate set; nothing to certify at this point
        mid = k.geodesic(x, v, 0.5)
        zstar = k.transport(x, mid, w)  # unit: transport is an isometry
        omega = k.transport(mid, x, (0.25 * alpha * d * d) * zstar)
        r_x = residual(k, x, 0.5 * lx, omega)
        lhs = k.inner(x, w, lx)
        margin = lhs - alpha * d * d - k.inner(x, w, r_x)
        if margin < worst:
            worst = margin
            witness = {"x": x, "w": w, "vertex": v, "lhs": lhs,
                       "residual": r_x, "margin": margin}
    return ConvexityCertificate("approx_scaling", alpha, n_samples,
                                float(worst), witness, tolerance)


def run_checker(notion, cset, alpha, n_samples, rng, dist_eq=None,
                refine=True, tolerance=DEFAULT_CERT_TOL):
    """Dispatch by notion name (see NOTIONS)."""
    if notion == "geodesic":
        return check_geodesic_strong_convexity(cset, alpha, n_samples, rng,
                                               refine, tolerance)
    if notion == "riemannian":
        return check_riemannian_strong_convexity(cset, alpha, n_samples, rng,
                                                 refine, tolerance)
    if notion == "double_geodesic":
        return check_double_geodesic_strong_convexity(
            cset, alpha, dist_eq or DistanceEquivalence.riemannian(),
            n_samples, rng, refine, tolerance)
    if notion == "scaling":
        return check_scaling_inequality(cset, alpha, n_samples, rng, tolerance)
    if notion == "approx_scaling":
        return check_approx_scaling_inequality(cset, alpha, n_samples, rng,
                                               tolerance)
    raise ConfigError(f"unknown notion '{notion}'")


def estimate_alpha(cset, notion, n_samples, rng, rel_tol=0.02, dist_eq=None):
    """Largest alpha (within rel_tol, relative) passing the checker at
    the given sample budget.  Bisection over [0, 10/diameter]; every
    probe replays the same sample stream so the pass/fail threshold is
    sharp."""
    if cset.diameter is None:
        raise ConfigError("estimate_alpha: set needs a diameter hint")
    hi = 10.0 / cset.diameter
    probe_seed = int(rng.integers(0, 2 ** 62))

    def passes(alpha):
        prng = np.random.default_rng(probe_seed)
        cert = run_checker(notion, cset, alpha, n_samples, prng,
                           dist_eq=dist_eq, refine=False)
        return cert.passed

    if passes(hi):
        return hi
    lo = 0.0
    floor = 1e-7 * hi
    while hi - lo > rel_tol * max(lo, floor):
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo


# ---------------------------------------------------------------------------
# double exponential map and its residual
# ---------------------------------------------------------------------------

def double_exp(kernel, x, u, v):
    """Exp at exp_x(u) of v transported from x along the geodesic."""
    y = kernel.exp(x, u)
    return kernel.exp(y, kernel.transport(x, y, v))

def exp_map_operator(kernel, x, u, v):
    """h_x(u, v) = log_x(double_exp(x, u, v)); equals u + v on flat
    space and deviates cubically on curved ones."""
    return kernel.log(x, double_exp(kernel, x, u, v))

def residual(kernel, x, u, v):
    """R_x(u, v) = h_x(u, v) - u - v."""
    return exp_map_operator(kernel, x, u, v) - u - v


# ---------------------------------------------------------------------------
# geometric constants
# ---------------------------------------------------------------------------

def zeta(r, kappa_min):
    """Smoothness constant of 0.5*dist^2(., x0) on a ball of radius r:
    s*coth(s) with s = r*sqrt(|kappa_min|) for negative curvature, 1
    otherwise (continuity at kappa = 0)."""
    if r < 0.0:
        raise ContractError("zeta: radius must be nonnegative")
    if kappa_min >= 0.0 or r == 0.0:
        return 1.0
    s = r * np.sqrt(-kappa_min)
    return float(s / np.tanh(s))


def delta(r, kappa_max):
    """Strong-convexity constant of 0.5*dist^2(., x0) on a ball of
    radius r: s*cot(s) with s = r*sqrt(kappa_max) for positive
    curvature (requires s < pi/2), 1 otherwise."""
    if r < 0.0:
        raise ContractError("delta: radius must be nonnegative")
    if kappa_max <= 0.0 or r == 0.0:
        return 1.0
    s = r * np.sqrt(kappa_max)
    if s >= 0.5 * np.pi:
        raise DomainError(f"delta: r*sqrt(kappa_max)={s:.6g} >= pi/2")
    return float(s / np.tan(s))


def riemannian_strong_convexity_radius(curv: CurvatureInfo, r_probe):
    """One application of the admissible-radius map
    r -> 0.5 * (delta_r / zeta_r) * min{1/(4K), K/(4F)}; balls of any
    fixed-point radius are strongly convex in the Riemannian sense.
    Returns +inf on flat space (every radius is admissible there)."""
    K = curv.K
    if K == 0.0:
        return np.inf
    F = curv.grad_curvature_bound
    cap = 1.0 / (4.0 * K)
    if F > 0.0:
        cap = min(cap, K / (4.0 * F))
    ratio = delta(r_probe, curv.kappa_max) / zeta(r_probe, curv.kappa_min)
    return 0.5 * ratio * cap


def strong_convexity_radius(curv: CurvatureInfo, tol=1e-10, max_iter=200):
    """Fixed point of riemannian_strong_convexity_radius, iterated from
    r0 = 1/(8K); +inf on flat space (any radius works there)."""
    if curv.K == 0.0:
        return np.inf
    r = 1.0 / (8.0 * curv.K)
    for _ in range(max_iter):
        r_new = riemannian_strong_convexity_radius(curv, r)
        if abs(r_new - r) <= tol * max(abs(r), 1e-30):
            return float(r_new)
        r = r_new
    raise NumericsError("strong_convexity_radius: fixed point did not settle")


def levelset_alpha(mu, L, s, ell=1.0):
    """Strong-convexity constant of the sublevel set {f <= s} of a
    mu-strongly convex, L-smooth function whose minimum value is 0:
    mu / (2 sqrt(2 s L max{ell^-2, 1}))."""
    if not (mu > 0.0 and L >= mu and s > 0.0 and ell > 0.0):
        raise ContractError("levelset_alpha: need 0 < mu <= L, s > 0, ell > 0")
    return float(mu / (2.0 * np.sqrt(2.0 * s * L * max(ell ** -2.0, 1.0))))


def ball_strong_convexity_alpha(curv: CurvatureInfo, r):
    """Strong-convexity constant certified for a geodesic ball of
    radius r: 0.5*dist^2(., center) is (delta_r/2)-strongly convex and
    (3 zeta_r/2)-smooth through the exp pullback, and the ball is its
    sublevel set at r^2/2."""
    mu = 0.5 * delta(r, curv.kappa_max)
    L = 1.5 * zeta(r, curv.kappa_min)
    return levelset_alpha(mu, L, 0.5 * r * r, 1.0)


# ---------------------------------------------------------------------------
# function-class checks
# ---------------------------------------------------------------------------

@dataclass
class SmoothStronglyConvexFn:
    """Value/gradient oracle with declared geodesic constants."""

    kernel: Manifold
    value: Callable
    grad: Callable
    mu: float
    L: float
    fstar: Optional[float] = None
    xstar: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.xstar is not None:
            g = self.grad(self.xstar)
            if self.kernel.norm(self.xstar, g) > 1e-8:
                raise ContractError(
                    "SmoothStronglyConvexFn: grad(xstar) is not zero")


@dataclass
class CheckReport:
    name: str
    samples: int
    worst_margin: float
    witness: dict = field(default_factory=dict)
    tolerance: float = DEFAULT_CERT_TOL

    @property
    def passed(self):
        return self.worst_margin >= -self.tolerance

    def to_dict(self):
        return {"name": self.name, "samples": self.samples,
                "worst_margin": self.worst_margin,
                "tolerance": self.tolerance, "passed": bool(self.passed),
                "witness": {k: (v.tolist() if isinstance(v, np.ndarray) else v)
                            for k, v in self.witness.items()}}


def check_smoothness_gradient_bound(fn, cset, n_samples, rng,
                                    tolerance=DEFAULT_CERT_TOL):
    """Self-bounding property of smooth functions: norm(grad f(x)) <=
    sqrt(2 L (f(x) - fstar)) on the set."""
    if fn.fstar is None:
        raise ConfigError("check_smoothness_gradient_bound: fstar required")
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x = cset.sampler(rng)
        gap = max(fn.value(x) - fn.fstar, 0.0)
        margin = np.sqrt(2.0 * fn.L * gap) - k.norm(x, fn.grad(x))
        if margin < worst:
            worst = margin
            witness = {"x": x, "margin": margin}
    return CheckReport("smoothness_gradient_bound", n_samples, float(worst),
                       witness, tolerance)


def check_gconvexity_of_function(fn, cset, n_samples, rng,
                                 tolerance=DEFAULT_CERT_TOL):
    """Geodesic mu-strong-convexity and L-smoothness inequalities of fn
    along sampled chords of the set; the worst of the two margins is
    reported."""
    k = cset.kernel
    worst, witness = np.inf, {}
    for _ in range(n_samples):
        x, y = cset.sampler(rng), cset.sampler(rng)
        t = rng.uniform()
        d = k.dist(x, y)
        fx, fy = fn.value(x), fn.value(y)
        mid = k.geodesic(x, y, t)
        convexity = ((1.0 - t) * fx + t * fy
                     - 0.5 * fn.mu * t * (1.0 - t) * d * d - fn.value(mid))
        lin = fy - fx - k.inner(x, fn.grad(x), k.log(x, y))
        smooth = 0.5 * fn.L * d * d - abs(lin)
        margin = min(convexity, smooth)
        if margin < worst:
            worst = margin
            witness = {"x": x, "y": y, "t": t, "convexity": convexity,
                       "smoothness": smooth}
    return CheckReport("gconvexity", n_samples, float(worst), witness,
                       tolerance)
