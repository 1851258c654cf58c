"""Photons in Gr_2(R^4): build one through two incident planes and check that
its Plucker image is a projective line and its cross ratios are coherent."""

import numpy as np

from nagano import GrassmannContext, Plane, arithmetic_distance, photon_collinearity_residual, photon_through
from nagano.grassmann import cross_ratio_proj, param_through
from nagano.numerics import make_rng

ctx = GrassmannContext(2, 2)
x = Plane(np.eye(4)[:, :2])
y = Plane(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.7], [0.0, -0.2]]))
print("arithmetic distance:", arithmetic_distance(ctx, x, y))

ph = photon_through(ctx, x, y)
print("Plucker collinearity residual: %.2e" % photon_collinearity_residual(ctx, ph))

pp, theta_y = param_through(ctx, x, y)
angles = [0.0, theta_y, 0.9, 1.3]
print("cross ratio of four points on the photon:", cross_ratio_proj(*[np.tan(a) for a in angles]))

rng = make_rng(1)
far = Plane(rng.standard_normal((4, 2)))
print("a generic plane is at distance", arithmetic_distance(ctx, x, far), "from x")
