"""Numerical certification of strong convexity constants of sets.

Flat sanity check first (a Euclidean ball of radius R is 1/(2R)-strongly
convex), then the chain of notions on a spherical cap at the critical
radius where the curvature-corrected constant is self-consistent.

    python3 demos/certify_constants.py
"""

import numpy as np

from rfw import (Euclidean, GeodesicBall, Sphere, ball_set, estimate_alpha,
                 run_checker, strong_convexity_radius)
from rfw.convexity import ball_strong_convexity_alpha

rng = np.random.default_rng(2)

print("estimated scaling constants of Euclidean balls (exact: 1/(2R))")
for radius in (0.5, 1.0, 2.0):
    ball = GeodesicBall(Euclidean(3), np.zeros(3), radius)
    est = estimate_alpha(ball_set(ball), "scaling", 4000, rng)
    print(f"   R={radius:<4} estimate {est:.4f}   exact {0.5 / radius:.4f}")

print()
k = Sphere(3)
rstar = strong_convexity_radius(k.curvature)
astar = ball_strong_convexity_alpha(k.curvature, rstar)
print(f"critical cap radius on the unit sphere: r* = {rstar:.6f}")
print(f"certified constant at r*:             alpha = {astar:.6f}")
print()

cset = ball_set(GeodesicBall(k, k.base_point(), rstar))
print("running every notion at that alpha (positive margin = inequality "
      "holds with room):")
for notion in ("riemannian", "scaling", "geodesic", "double_geodesic",
               "approx_scaling"):
    cert = run_checker(notion, cset, astar, 500, np.random.default_rng(3))
    flag = "ok " if cert.passed else "FAIL"
    print(f"   {notion:<16} worst margin {cert.worst_margin:+.3e}  {flag}")

print()
print("the same cap is NOT 10x-strongly convex:")
cert = run_checker("riemannian", cset, 10.0 * astar, 500,
                   np.random.default_rng(3))
print(f"   riemannian at 10*alpha: worst margin {cert.worst_margin:+.3e}  "
      f"{'ok' if cert.passed else 'FAIL (as expected)'}")
