"""Four-point delta at growing scales. The rank-one ball stays bounded while
the rank-two domain contains flats whose delta grows with the scale."""

from nagano import SymmetricDomain, hyperbolicity_probe

scales = (2, 4, 8, 16)
for p, q in [(1, 2), (2, 2)]:
    rows = hyperbolicity_probe(SymmetricDomain.standard(p, q), scales, quadruples=100, seed=9)
    for r in rows:
        flat = r.get("flat_delta")
        print("(%d,%d) scale %5.1f  sampled delta %.4f  flat delta %s"
              % (p, q, r["scale"], r["sampled_delta"], "-" if flat is None else "%.6f" % flat))
