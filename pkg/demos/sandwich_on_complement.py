"""A domain cut out by four hyperplane duals in Gr_2(R^4). No closed form is
available, so the distance is bracketed between a Caratheodory lower bound and
a chain upper bound."""

from nagano import GrassmannContext, HyperplaneComplementDomain, sandwich
from nagano.grassmann import random_plane
from nagano.numerics import make_rng

rng = make_rng(5)
ctx = GrassmannContext(2, 2)
dom = HyperplaneComplementDomain(ctx, [random_plane(4, 2, rng) for _ in range(4)], random_plane(4, 2, rng))
for i in range(5):
    x, y = dom.sample_point(rng), dom.sample_point(rng)
    rep = sandwich(dom, x, y, seed=i)
    print("pair %d: %.6f <= K <= %.6f  (gap %.2e)" % (i, rep.lower, rep.upper, rep.gap))
