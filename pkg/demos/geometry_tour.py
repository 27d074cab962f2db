"""Tour of the geometry kernels: exp/log roundtrips, distances, parallel
transport, and the curvature data each kernel reports.

    python3 demos/geometry_tour.py
"""

import numpy as np

from rfw import Euclidean, Hyperboloid, Spd, Sphere

rng = np.random.default_rng(0)

for k in (Euclidean(4), Sphere(4), Hyperboloid(3), Spd(3)):
    x = k.random_point(rng)
    u = 0.7 * k.random_unit_tangent(x, rng)
    y = k.exp(x, u)
    back = k.log(x, y)
    print(f"== {k.name} (intrinsic dim {k.dim}) ==")
    print(f"   curvature in [{k.curvature.kappa_min:+.2f}, "
          f"{k.curvature.kappa_max:+.2f}]")
    print(f"   dist(x, exp_x(u)) = {k.dist(x, y):.6f}  (|u| = 0.7)")
    print(f"   roundtrip |log(exp(u)) - u| = {k.norm(x, back - u):.2e}")

    # transport preserves the metric
    v = k.random_unit_tangent(x, rng)
    vt = k.transport(x, y, v)
    print(f"   |transported v| - |v| = {abs(k.norm(y, vt) - 1.0):.2e}")

    # geodesics have constant speed
    g1 = k.geodesic(x, y, 0.25)
    g2 = k.geodesic(x, y, 0.75)
    print(f"   d(gamma(1/4), gamma(3/4)) - d/2 = "
          f"{k.dist(g1, g2) - 0.5 * k.dist(x, y):+.2e}")
    print()

# the sphere has a cut locus: exp is only invertible below distance pi
s = Sphere(3)
x = s.random_point(rng)
far = s.exp(x, (np.pi - 1e-5) * s.random_unit_tangent(x, rng))
print(f"sphere near cut locus: dist = {s.dist(x, far):.6f} (pi = {np.pi:.6f})")
