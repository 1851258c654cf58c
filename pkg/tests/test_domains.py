import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nagano.domains import (
    Domain,
    HyperplaneComplementDomain,
    SymmetricDomain,
    count_components,
    domain_from_json,
    hilbert_length_angles,
    photon_convexity_probe,
    photon_intersection,
    r_proper_probe,
    segment_hilbert_length,
)
from nagano.errors import (
    DifferentComponents,
    DimensionMismatch,
    EmptyIntersection,
    NotInDomain,
    NotPhotonRelated,
    ValidationError,
)
from nagano.grassmann import (
    GrassmannContext,
    Plane,
    ProjParam,
    is_transverse,
    random_photon_through,
    random_plane,
)
from nagano.numerics import make_rng


def ball(p, q):
    return SymmetricDomain.standard(p, q)


def line_param():
    return ProjParam(np.zeros((2, 0)), np.array([1.0, 0.0]), np.array([0.0, 1.0]))


class UnionDomain(Domain):
    """Union of two sign cells: a deliberately non-photon-convex fixture."""

    kind = "union"

    def __init__(self, a, b):
        self.ctx, self.a, self.b = a.ctx, a, b

    def margins(self, bases):
        return np.maximum(self.a.margins(bases), self.b.margins(bases))

    def sample_point(self, rng):
        return self.a.sample_point(rng)


def two_cell_union():
    ctx = GrassmannContext(1, 1)
    angles = [0.1, 0.9, 1.7, 2.5]
    duals = [Plane([[np.cos(t)], [np.sin(t)]]) for t in angles]
    cell = lambda t: HyperplaneComplementDomain(ctx, duals, Plane([[np.cos(t)], [np.sin(t)]]))
    # references in the arcs (0.9, 1.7) and (2.5, pi + 0.1), which are not adjacent
    return UnionDomain(cell(1.3), cell(2.8))


# --- membership -------------------------------------------------------------


def test_contains_examples():
    dom = ball(2, 1)
    assert dom.contains(Plane([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    d12 = ball(1, 2)
    assert d12.contains(Plane([[1.0], [0.0], [0.0]]))
    assert not d12.contains(Plane([[0.0], [0.0], [1.0]]))
    assert d12.contains(Plane([[1.0], [0.5], [0.0]]))


def test_contains_checks_dimension():
    with pytest.raises(DimensionMismatch):
        ball(1, 2).contains(Plane(np.eye(3)[:, :2]))


def test_dual_contains_examples():
    dom = SymmetricDomain(GrassmannContext(2, 1), np.diag([1.0, 1.0, -1.0]))
    assert dom.dual_contains(Plane([[0.0], [0.0], [1.0]]))
    with pytest.raises(DimensionMismatch):
        dom.dual_contains(Plane([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    assert ball(1, 2).dual_contains(Plane(np.eye(3)[:, 1:]))


def test_symmetric_domain_validates_signature():
    with pytest.raises(ValidationError):
        SymmetricDomain(GrassmannContext(2, 1), np.diag([1.0, -1.0, -1.0]))
    with pytest.raises(ValidationError):
        SymmetricDomain(GrassmannContext(1, 1), np.array([[1.0, 2.0], [0.0, -1.0]]))


def test_dual_points_are_transverse_to_interior(rng):
    dom = ball(2, 3)
    for _ in range(30):
        xi = dom.dual_graph(np.linalg.qr(rng.standard_normal((3, 3)))[0][:2] * rng.uniform(0, 1))
        assert dom.dual_contains(xi)
        for _ in range(10):
            assert is_transverse(dom.ctx, dom.sample_point(rng), xi)


def test_domain_json_round_trip(rng):
    sym = SymmetricDomain(GrassmannContext(2, 2), np.diag([2.0, 1.0, -1.0, -3.0]))
    again = domain_from_json(json.dumps(sym.to_json()))
    assert np.array_equal(again.form, sym.form)
    ctx = GrassmannContext(2, 2)
    comp = HyperplaneComplementDomain(ctx, [random_plane(4, 2, rng) for _ in range(3)], random_plane(4, 2, rng))
    again = domain_from_json(comp.to_json())
    assert np.array_equal(again.signs, comp.signs)
    with pytest.raises(ValidationError):
        domain_from_json({"kind": "other", "p": 1, "q": 1})


# --- photon intersections ---------------------------------------------------


@pytest.mark.parametrize("method", ["raycast", "exact"])
def test_interval_on_the_projective_line(method):
    iv = photon_intersection(ball(1, 1), line_param(), seed=0.0, method=method)
    assert iv.lo == pytest.approx(-1, abs=1e-11) and iv.hi == pytest.approx(1, abs=1e-11)


def test_no_duals_gives_whole_line(rng):
    ctx = GrassmannContext(2, 2)
    everything = HyperplaneComplementDomain(ctx, [], random_plane(4, 2, rng))
    pp = random_photon_through(ctx, random_plane(4, 2, rng), rng)
    assert photon_intersection(everything, pp).whole_line
    assert photon_intersection(everything, pp, method="exact").whole_line


@pytest.mark.parametrize("method", ["raycast", "exact"])
def test_photon_outside_is_empty(method):
    # every plane containing e3 is non-positive for diag(1,1,-1,-1)
    pp = ProjParam(np.eye(4)[:, [2]], np.eye(4)[:, 0], np.eye(4)[:, 1])
    with pytest.raises(EmptyIntersection):
        photon_intersection(ball(2, 2), pp, method=method)


@pytest.mark.parametrize("pq", [(1, 2), (2, 2), (2, 3)])
def test_raycast_agrees_with_exact_arcs(pq, rng):
    dom = ball(*pq)
    for _ in range(40):
        pp = random_photon_through(dom.ctx, dom.sample_point(rng), rng)
        a = photon_intersection(dom, pp, seed=0.0, method="raycast")
        b = photon_intersection(dom, pp, seed=0.0, method="exact")
        assert a.lo_angle == pytest.approx(b.lo_angle, abs=1e-9)
        assert a.hi_angle == pytest.approx(b.hi_angle, abs=1e-9)


def test_raycast_agrees_with_exact_on_complement(rng):
    ctx = GrassmannContext(2, 2)
    dom = HyperplaneComplementDomain(ctx, [random_plane(4, 2, rng) for _ in range(4)], random_plane(4, 2, rng))
    for _ in range(40):
        pp = random_photon_through(ctx, dom.sample_point(rng), rng)
        a = photon_intersection(dom, pp, seed=0.0, method="raycast")
        b = photon_intersection(dom, pp, seed=0.0, method="exact")
        assert a.whole_line == b.whole_line
        assert a.lo_angle == pytest.approx(b.lo_angle, abs=1e-8)
        assert a.hi_angle == pytest.approx(b.hi_angle, abs=1e-8)


def test_endpoints_sit_on_the_boundary(rng):
    dom = ball(2, 3)
    for _ in range(20):
        pp = random_photon_through(dom.ctx, dom.sample_point(rng), rng)
        iv = photon_intersection(dom, pp, seed=0.0)
        for th in (iv.lo_angle, iv.hi_angle):
            assert abs(dom.margin_at_angle(pp, th)) < 1e-9
        assert dom.margin_at_angle(pp, 0.5 * (iv.lo_angle + iv.hi_angle)) > 0


def test_seed_outside_is_rejected():
    pp = line_param()
    with pytest.raises(NotInDomain):
        photon_intersection(ball(1, 1), pp, seed=np.pi / 2)


# --- segment lengths --------------------------------------------------------


def test_segment_length_examples():
    dom = ball(1, 1)
    x, y = Plane([[1.0], [0.0]]), Plane([[1.0], [0.5]])
    assert segment_hilbert_length(dom, x, x) == 0.0
    for method in ("raycast", "exact"):
        assert segment_hilbert_length(dom, x, y, method=method) == pytest.approx(np.log(3), abs=1e-10)


def test_segment_length_is_zero_on_whole_line(rng):
    ctx = GrassmannContext(2, 2)
    everything = HyperplaneComplementDomain(ctx, [], random_plane(4, 2, rng))
    x = random_plane(4, 2, rng)
    y = Plane(np.column_stack([x.basis[:, 0], x.basis[:, 1] + rng.standard_normal(4)]))
    assert segment_hilbert_length(everything, x, y) == 0.0


def test_segment_length_errors(rng):
    dom = ball(2, 2)
    x = dom.base_point
    with pytest.raises(NotPhotonRelated):
        segment_hilbert_length(dom, x, dom.graph_plane(np.diag([0.3, 0.2])))
    union = two_cell_union()
    x, y = Plane([[np.cos(1.3)], [np.sin(1.3)]]), Plane([[np.cos(2.8)], [np.sin(2.8)]])
    assert union.contains(x) and union.contains(y)
    with pytest.raises(DifferentComponents):
        segment_hilbert_length(union, x, y)


def photon_pair(dom, rng, spread=1.0):
    x = dom.sample_point(rng)
    pp = random_photon_through(dom.ctx, x, rng)
    iv = photon_intersection(dom, pp, seed=0.0, method="exact")
    th = rng.uniform(iv.lo_angle, iv.hi_angle) * spread
    return x, pp.eval_angle(th), pp, iv


@pytest.mark.parametrize("pq", [(1, 2), (2, 2), (2, 3)])
def test_segment_length_symmetry_and_reparametrization(pq, rng):
    dom = ball(*pq)
    for _ in range(20):
        x, y, pp, _ = photon_pair(dom, rng)
        if x == y:
            continue
        d = segment_hilbert_length(dom, x, y)
        assert segment_hilbert_length(dom, y, x) == pytest.approx(d, abs=1e-8)
        # an independent frame of the same photon
        pp2 = ProjParam.from_photon(pp.photon, rng=rng)
        th_x, th_y = pp2.angle_of(x), pp2.angle_of(y)
        iv = photon_intersection(dom, pp2, seed=th_x, method="raycast")
        rep = iv.contains_angle(th_y)
        assert hilbert_length_angles(iv.lo_angle, th_x, rep, iv.hi_angle) == pytest.approx(d, abs=1e-8)


def test_segment_length_invariant_under_form_isometries(rng):
    dom = ball(2, 3)
    for _ in range(20):
        x, y, _, _ = photon_pair(dom, rng)
        g = dom.random_isometry(rng)
        assert np.allclose(g.T @ dom.form @ g, dom.form, atol=1e-10)
        gx, gy = x.transform(g), y.transform(g)
        assert dom.contains(gx) and dom.contains(gy)
        assert segment_hilbert_length(dom, gx, gy) == pytest.approx(segment_hilbert_length(dom, x, y), abs=1e-8)


def test_segment_length_is_additive_along_a_photon(rng):
    dom = ball(2, 2)
    for _ in range(20):
        x = dom.sample_point(rng)
        pp = random_photon_through(dom.ctx, x, rng)
        iv = photon_intersection(dom, pp, seed=0.0, method="exact")
        a, b = sorted(rng.uniform(iv.lo_angle, iv.hi_angle, size=2))
        p0, p1, p2 = pp.eval_angle(iv.lo_angle * 0.3), pp.eval_angle(a), pp.eval_angle(b)
        total = segment_hilbert_length(dom, p0, p2)
        parts = segment_hilbert_length(dom, p0, p1) + segment_hilbert_length(dom, p1, p2)
        if a > iv.lo_angle * 0.3:
            assert parts == pytest.approx(total, abs=1e-8)


# --- probes -----------------------------------------------------------------


@pytest.mark.parametrize("pq", [(1, 2), (2, 2), (2, 3)])
def test_symmetric_domains_pass_probes(pq):
    dom = ball(*pq)
    rp = r_proper_probe(dom, 60, seed=1)
    assert rp["pass"] and rp["passed"] == 60 and rp["seed"] == 1
    pc = photon_convexity_probe(dom, 60, seed=1)
    assert pc["max_components"] == 1 and pc["checked"] == 60


def test_whole_grassmannian_fails_r_properness(rng):
    ctx = GrassmannContext(2, 2)
    everything = HyperplaneComplementDomain(ctx, [], random_plane(4, 2, rng))
    rp = r_proper_probe(everything, 30, seed=0)
    assert rp["failed"] == 30 and not rp["pass"]


def test_complement_probe_reports_rate(rng):
    ctx = GrassmannContext(2, 2)
    dom = HyperplaneComplementDomain(ctx, [random_plane(4, 2, rng) for _ in range(3)], random_plane(4, 2, rng))
    rp = r_proper_probe(dom, 40, seed=3)
    assert rp["passed"] + rp["failed"] == 40 and rp["heuristic"]


def test_adversarial_union_is_not_photon_convex():
    dom = two_cell_union()
    assert count_components(dom, line_param()) == 2
    report = photon_convexity_probe(dom, 10, seed=0)
    assert report["max_components"] > 1 and not report["pass"]


def test_convexity_probe_redraws_missing_photons():
    dom = ball(2, 3)
    report = photon_convexity_probe(dom, 40, seed=2)
    assert report["skipped"] > 0
    assert report["checked"] == 40


def test_convexity_probe_falls_back_when_redraws_run_out():
    dom = ball(2, 3)
    report = photon_convexity_probe(dom, 10, seed=2, max_redraws=0)
    assert report["skipped"] == 0 and report["checked"] == 10


def test_probe_reports_are_reproducible():
    dom = ball(2, 2)
    assert json.dumps(r_proper_probe(dom, 20, 9)) == json.dumps(r_proper_probe(dom, 20, 9))


@pytest.mark.parametrize("method", ["exact", "raycast"])
def test_hilbert_length_ignores_photon_frame(method):
    rng = make_rng(77)
    dom = ball(2, 2)
    x = dom.sample_point(rng)
    pp0 = random_photon_through(dom.ctx, x, rng)
    iv0 = photon_intersection(dom, pp0, seed=0.0, method="exact")
    y = Plane(pp0.basis_at_angle(0.5 * (iv0.contains_angle(pp0.angle_of(x)) + iv0.hi_angle)))
    reference = segment_hilbert_length(dom, x, y)
    assert reference > 0
    for _ in range(5):
        pp = ProjParam.from_photon(pp0.photon, rng)
        iv = photon_intersection(dom, pp, seed=pp.angle_of(x), method=method)
        a, b = iv.contains_angle(pp.angle_of(x)), iv.contains_angle(pp.angle_of(y))
        assert hilbert_length_angles(iv.lo_angle, a, b, iv.hi_angle) == pytest.approx(reference, abs=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1.5, 1.5), min_size=5, max_size=5, unique=True))
def test_hilbert_length_is_additive_along_the_arc(angles):
    lo, a, b, c, hi = sorted(angles)
    if min(np.diff([lo, a, b, c, hi])) < 1e-6 or hi - lo >= np.pi:
        return
    whole = hilbert_length_angles(lo, a, c, hi)
    assert whole == pytest.approx(hilbert_length_angles(lo, a, b, hi) + hilbert_length_angles(lo, b, c, hi), abs=1e-9)
    assert hilbert_length_angles(lo, c, a, hi) == pytest.approx(whole, abs=1e-12)
