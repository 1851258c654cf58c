"""Caratheodory lower bound on the symmetric domain as the number of sampled
duals grows, then after local optimization of the best duals."""

from nagano import SymmetricDomain, caratheodory_lower, kobayashi_closed_form, sample_duals
from nagano.numerics import make_rng

rng = make_rng(4)
dom = SymmetricDomain.standard(2, 2)
x, y = dom.sample_point(rng), dom.sample_point(rng)
exact = kobayashi_closed_form(dom, x, y)
duals = sample_duals(dom, 1000, rng)
for k in (10, 100, 300, 1000):
    value, _ = caratheodory_lower(dom, x, y, duals[:k])
    print("%4d duals: %.8f  (short by %.2e)" % (k, value, exact - value))
value, _ = caratheodory_lower(dom, x, y, duals, optimize=True, rng=rng)
print("optimized: %.10f  (short by %.2e)" % (value, exact - value))
