"""Normal geodesics: the exponential map, cut times, and the group layer.

A covector (u, v) launches a horizontal curve whose projection to each
spectral block is a circular arc of angular speed alpha_j |v|; the vertical
coordinates record swept area.  The Heisenberg group is the smallest case
and everything is visible by hand there.
"""

import numpy as np

from htcarnot import (
    Covector,
    GroupPoint,
    catalog_structure,
    cut_time,
    dilate,
    exp_map,
    geodesic_sample,
    in_injectivity_domain,
    inverse,
    is_abnormal,
    multiply,
)

heis = catalog_structure("heisenberg3")

# Unit horizontal speed, vertical momentum pi: the projection is a half
# circle of radius 1/pi, landing on the x2-axis.
lam = Covector([1.0, 0.0], [np.pi])
pt = exp_map(heis, lam)
print(f"half turn:  x = {pt.x},  z = {pt.z}")
print(f"expected:   x = [0, {2/np.pi}],  z = [{1/(2*np.pi)}]\n")

# Sampling along the arc shows the vertical coordinate growing monotonically
# while the horizontal projection walks the circle.
print("t, x1, x2, z along the half-circle:")
for t, q in zip([0.0, 0.25, 0.5, 0.75, 1.0],
                geodesic_sample(heis, lam, [0.0, 0.25, 0.5, 0.75, 1.0])):
    print(f"  {t:4.2f}  {q.x[0]:+.6f}  {q.x[1]:+.6f}  {q.z[0]:+.6f}")

# The arc stops minimizing when the projection closes the full circle.
tc = cut_time(heis, lam)
print(f"\ncut time 2 pi / |v| = {tc} (full circle at t = 2)")
print("inside injectivity domain:", in_injectivity_domain(heis, lam))

# Left translations are isometries; geodesics through any base point are
# translates of geodesics through the identity.
g = GroupPoint([0.4, -0.2], [0.1])
shifted = multiply(heis, g, pt)
back = multiply(heis, inverse(g), shifted)
print("translate and undo:", np.max(np.abs(back.as_vector() - pt.as_vector())))

# Dilations scale the covector and conjugate the endpoint:
# exp(eps u, eps v ... careful: momenta scale anisotropically.
eps = 0.5
scaled = dilate(eps, pt)
print(f"dilated endpoint: x = {scaled.x}, z = {scaled.z} "
      "(x scales by eps, z by eps^2)")

# The degenerate catalog group has directions the structure operator kills;
# those launch straight lines that never stop minimizing (abnormal).
deg = catalog_structure("degenerate-corank1")
ab = Covector([1.0, 0.5, 0.0, 0.0], [3.0])
print("\ndegenerate group, kernel covector:")
print("  abnormal:", is_abnormal(deg, ab))
print("  cut time:", cut_time(deg, ab))
print("  endpoint:", exp_map(deg, ab).x, "(straight line, no vertical drift)")
