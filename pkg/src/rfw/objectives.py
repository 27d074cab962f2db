"""Objectives used by the solver, the experiment harness and the
function-class checks."""

import numpy as np
from dataclasses import dataclass

from .convexity import SmoothStronglyConvexFn, delta, zeta
from .errors import ConfigError
from .manifolds import Euclidean, Manifold, Sphere


@dataclass
class QuadraticOnEmbedded:
    """f(x) = scale * 0.5 (x - target)' A (x - target) restricted to an
    embedded-vector manifold (sphere or Euclidean space); the
    Riemannian gradient is the tangent projection of the ambient one.

    The random construction Gram-normalizes A to unit spectral norm, so
    the reported smoothness constant is L = scale * norm(A, 2)."""

    kernel: Manifold
    matrix: np.ndarray
    target: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        if not isinstance(self.kernel, (Sphere, Euclidean)):
            raise ConfigError(
                "QuadraticOnEmbedded: ambient-projection gradient is only "
                "metric-consistent on the sphere and Euclidean space")
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.target = np.asarray(self.target, dtype=float)
        if self.matrix.shape != (self.target.size, self.target.size):
            raise ConfigError("QuadraticOnEmbedded: matrix/target shape mismatch")
        w = np.linalg.eigvalsh(0.5 * (self.matrix + self.matrix.T))
        self._eig_min, self._eig_max = float(w[0]), float(w[-1])
        if self._eig_min < -1e-12:
            raise ConfigError("QuadraticOnEmbedded: matrix must be PSD")

    @classmethod
    def random(cls, kernel, rows, rng, scale=1.0):
        """Gram matrix of a rows x n Gaussian draw, spectral norm 1."""
        g = rng.standard_normal((rows, kernel.n))
        a = g.T @ g
        a /= np.linalg.norm(a, 2)
        return cls(kernel, a, kernel.random_point(rng), scale)

    @property
    def L(self):
        return self.scale * self._eig_max

    @property
    def mu(self):
        """lambda_min(A); the strong-convexity constant on flat space
        (a Gram matrix with rows < n has mu = 0)."""
        return self.scale * max(self._eig_min, 0.0)

    def value(self, x):
        d = x - self.target
        return self.scale * 0.5 * float(d @ self.matrix @ d)

    def grad(self, x):
        return self.kernel.project_tangent(
            x, self.scale * (self.matrix @ (x - self.target)))

    def value_grad(self, x):
        d = x - self.target
        ad = self.matrix @ d
        return (self.scale * 0.5 * float(d @ ad),
                self.kernel.project_tangent(x, self.scale * ad))

    def as_smooth_fn(self, mu=None, L=None, fstar=None, xstar=None):
        return SmoothStronglyConvexFn(
            self.kernel, self.value, self.grad,
            mu=self.mu if mu is None else mu,
            L=self.L if L is None else L,
            fstar=fstar, xstar=xstar)


@dataclass
class SquaredDistanceObjective:
    """f(x) = 0.5 * dist(x, center)^2 with grad f(x) = -log_x(center).

    On a ball of radius r around the center this is delta_r-strongly
    convex and zeta_r-smooth, with the constants from the curvature
    bounds of the kernel."""

    kernel: Manifold
    center: np.ndarray

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=float)
        self.kernel.check_point(self.center)

    def value(self, x):
        d = self.kernel.dist(x, self.center)
        return 0.5 * d * d

    def grad(self, x):
        return -self.kernel.log(x, self.center)

    def value_grad(self, x):
        lx = self.kernel.log(x, self.center)
        return 0.5 * self.kernel.inner(x, lx, lx), -lx

    def mu_on(self, radius):
        return delta(radius, self.kernel.curvature.kappa_max)

    def L_on(self, radius):
        return zeta(radius, self.kernel.curvature.kappa_min)

    def as_smooth_fn(self, radius):
        """Constants instantiated for a ball of the given radius around
        the center; fstar = 0 is attained there."""
        return SmoothStronglyConvexFn(
            self.kernel, self.value, self.grad,
            mu=self.mu_on(radius), L=self.L_on(radius),
            fstar=0.0, xstar=self.center)


def min_gradient_norm(objective, cset, n_samples, rng):
    """Empirical min of norm(grad) over sampled points of the set; the
    lower bound fed to the contraction check when the unconstrained
    optimum lies outside the set."""
    k = cset.kernel
    best = np.inf
    for _ in range(n_samples):
        x = cset.sampler(rng)
        best = min(best, k.norm(x, objective.grad(x)))
    return float(best)
