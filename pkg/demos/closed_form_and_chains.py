"""Kobayashi distance on the symmetric domain of signature (2,2): compare the
closed form with the geodesic r-chain and with the searched upper bound."""

import numpy as np

from nagano import SymmetricDomain, geodesic_r_chain, kobayashi_closed_form, kobayashi_upper, relative_position
from nagano.numerics import make_rng

dom = SymmetricDomain.standard(2, 2)
x = dom.base_point
y = dom.graph_plane(np.diag([0.5, 0.25]))
print("closed form:", kobayashi_closed_form(dom, x, y), " log 5 =", np.log(5))

rel = relative_position(dom, x, y)
print("singular values:", rel.sigmas, " flat coordinates:", rel.flat_coords)

chain = geodesic_r_chain(dom, x, y)
print("r-chain with", chain.segments, "segments, total", chain.total)

rng = make_rng(2)
a, b = dom.sample_point(rng), dom.sample_point(rng)
upper, searched = kobayashi_upper(dom, a, b, rng=rng)
print("random pair: closed form %.10f, searched chain %.10f (%d segments)"
      % (kobayashi_closed_form(dom, a, b), upper, searched.segments))
