"""Domains in Gr_p(R^{p+q}) and how photons meet them.

Two kinds of domain are modelled:

* ``SymmetricDomain``: p-planes on which a symmetric form of signature (p, q)
  is positive definite (the bounded symmetric model).
* ``HyperplaneComplementDomain``: a sign cell cut out by finitely many dual
  q-planes xi_i, i.e. the planes x with a prescribed sign pattern of
  det[x | xi_i].

Photon parameters are handled as angles: the projective line of a photon is
the circle R/(pi Z), with ``theta`` corresponding to ``t = tan(theta)``.
"""

from dataclasses import dataclass
import json

import numpy as np
from scipy import linalg

from .errors import (
    DifferentComponents,
    DimensionMismatch,
    EmptyIntersection,
    NotInDomain,
    NotPhotonRelated,
    ValidationError,
)
from .grassmann import (
    GrassmannContext,
    Plane,
    ProjParam,
    angle_to_ext,
    ext_to_json,
    param_through,
    random_photon,
    random_photon_through,
)
from .numerics import DEFAULT_TOL, bracketed_root, make_rng

GRID_SIZE = 1024
_BISECT_ITERS = 60


def _orthonormal_stack(bases):
    """Batch QR of an (m, n, k) stack; only spans matter downstream."""
    Q, _ = np.linalg.qr(bases)
    return Q


def _check_point(ctx, x, name="x"):
    if x.n != ctx.n or x.k != ctx.p:
        raise DimensionMismatch(f"{name} must be a {ctx.p}-plane of R^{ctx.n}", n=x.n, k=x.k)


def _check_dual(ctx, xi, name="xi"):
    if xi.n != ctx.n or xi.k != ctx.q:
        raise DimensionMismatch(f"{name} must be a {ctx.q}-plane of R^{ctx.n}", n=xi.n, k=xi.k)


class Domain:
    """Common interface: membership, signed margin and photon arcs."""

    ctx: GrassmannContext
    heuristic = False

    @property
    def tol(self):
        return self.ctx.tol

    def margin(self, x):
        _check_point(self.ctx, x)
        return float(self.margins(x.basis[None, :, :])[0])

    def contains(self, x):
        return self.margin(x) > self.tol.geom_abs

    def margins_at_angles(self, pp, thetas):
        return self.margins(pp.bases_at_angles(thetas))

    def margin_at_angle(self, pp, theta):
        return float(self.margins(pp.bases_at_angles([theta]))[0])

    def arcs(self, pp):
        """Exact arcs of the photon inside the domain, or None if unsupported."""
        return None


@dataclass(frozen=True)
class PhotonInterval:
    """Connected piece of a photon inside a domain.

    ``lo_angle < hi_angle`` with ``hi_angle - lo_angle <= pi``; the open arc
    between them lies in the domain. ``lo`` and ``hi`` give the endpoints as
    extended reals ``tan(angle)``.
    """

    pp: ProjParam
    lo_angle: float
    hi_angle: float
    whole_line: bool = False

    @property
    def lo(self):
        return angle_to_ext(self.lo_angle)

    @property
    def hi(self):
        return angle_to_ext(self.hi_angle)

    @property
    def length(self):
        return np.pi if self.whole_line else self.hi_angle - self.lo_angle

    def contains_angle(self, theta):
        """Representative of ``theta`` (mod pi) inside the arc, or None."""
        if self.whole_line:
            return float(theta)
        k = np.ceil((self.lo_angle - theta) / np.pi)
        rep = theta + k * np.pi
        if rep == self.lo_angle:
            rep += np.pi
        return float(rep) if rep < self.hi_angle else None

    def to_json(self):
        return {
            "lo": ext_to_json(self.lo) if not self.whole_line else None,
            "hi": ext_to_json(self.hi) if not self.whole_line else None,
            "whole_line": self.whole_line,
        }


class SymmetricDomain(Domain):
    """Planes on which ``form`` (signature (p, q)) is positive definite."""

    kind = "symmetric"

    def __init__(self, ctx, form):
        form = np.asarray(form, dtype=float)
        n = ctx.n
        if form.shape != (n, n):
            raise DimensionMismatch("form must be n x n", n=n, shape=list(form.shape))
        if not np.all(np.isfinite(form)):
            raise ValidationError("form has non-finite entries")
        if np.max(np.abs(form - form.T)) > 1e-12 * max(1.0, np.max(np.abs(form))):
            raise ValidationError("form must be symmetric")
        form = 0.5 * (form + form.T)
        lam, Q = np.linalg.eigh(form)
        scale = np.max(np.abs(lam))
        pos = lam > ctx.tol.rank_rel * scale
        neg = lam < -ctx.tol.rank_rel * scale
        if pos.sum() != ctx.p or neg.sum() != ctx.q:
            raise ValidationError(
                "form must have signature (p, q)", p=ctx.p, q=ctx.q, positive=int(pos.sum()), negative=int(neg.sum())
            )
        order = np.concatenate([np.flatnonzero(pos)[::-1], np.flatnonzero(neg)])
        lam, Q = lam[order], Q[:, order]
        self.ctx = ctx
        self.form = form
        # frame: S^T F S = J = diag(I_p, -I_q)
        self.frame = Q / np.sqrt(np.abs(lam))
        self.frame_inv = (Q * np.sqrt(np.abs(lam))).T
        self.J = np.diag(np.concatenate([np.ones(ctx.p), -np.ones(ctx.q)]))
        self.base_point = Plane(self.frame[:, : ctx.p])

    @classmethod
    def standard(cls, p, q, tol=DEFAULT_TOL):
        ctx = GrassmannContext(p, q, tol)
        return cls(ctx, np.diag(np.concatenate([np.ones(p), -np.ones(q)])))

    def margins(self, bases):
        Q = _orthonormal_stack(np.asarray(bases, dtype=float))
        G = np.swapaxes(Q, 1, 2) @ self.form @ Q
        return np.linalg.eigvalsh(G)[:, 0]

    def gram(self, x):
        return x.basis.T @ self.form @ x.basis

    def graph_plane(self, C):
        """The p-plane span(S [I; C]) for a q x p matrix C (inside iff ||C|| < 1)."""
        C = np.asarray(C, dtype=float).reshape(self.ctx.q, self.ctx.p)
        return Plane(self.frame @ np.vstack([np.eye(self.ctx.p), C]))

    def dual_graph(self, C):
        """The q-plane span(S [C; I]) for a p x q matrix C (closed dual iff ||C|| <= 1)."""
        C = np.asarray(C, dtype=float).reshape(self.ctx.p, self.ctx.q)
        return Plane(self.frame @ np.vstack([C, np.eye(self.ctx.q)]))

    def dual_contains(self, xi, closed=False):
        """Form restricted to ``xi`` is negative definite (semidefinite if closed)."""
        _check_dual(self.ctx, xi)
        top = float(np.linalg.eigvalsh(xi.basis.T @ self.form @ xi.basis)[-1])
        if closed:
            return top <= self.tol.geom_abs * 1e3
        return top < -self.tol.geom_abs

    def supporting_dual(self, b):
        """Form-orthogonal complement of a boundary p-plane ``b``.

        It is a q-plane in the closed dual that meets ``b`` along its null
        direction, i.e. a supporting dual point at ``b``.
        """
        _check_point(self.ctx, b)
        return Plane(linalg.null_space(b.basis.T @ self.form))

    def arcs(self, pp):
        """Closed-form arc of a photon inside the domain.

        A plane span(v0, v) is positive iff the form is positive on v0 and
        the Schur complement v^T (F - F V0 G0^{-1} V0^T F) v is positive; the
        latter is a binary quadratic form in the coefficients of v on (u, w).
        """
        F = self.form
        V0 = pp.v0
        K = F
        if V0.shape[1]:
            G0 = V0.T @ F @ V0
            ev = np.linalg.eigvalsh(G0)
            if ev[0] <= self.tol.geom_abs * max(1.0, abs(ev[-1])):
                return []
            FV = F @ V0
            K = F - FV @ np.linalg.solve(G0, FV.T)
        UW = np.column_stack([pp.u, pp.w])
        M = UW.T @ K @ UW
        M = 0.5 * (M + M.T)
        lam, E = np.linalg.eigh(M)
        scale = max(np.max(np.abs(lam)), 1e-300)
        if lam[0] > self.tol.rank_rel * scale:
            return "whole"
        if lam[1] <= self.tol.rank_rel * scale:
            return []
        alpha = np.arctan(np.sqrt(lam[1] / -lam[0]))
        center = np.arctan2(E[1, 1], E[0, 1])
        return [(center - alpha, center + alpha)]

    def sample_point(self, rng, radius=0.95):
        rng = make_rng(rng)
        C = rng.standard_normal((self.ctx.q, self.ctx.p))
        C *= rng.uniform(0.0, radius) / np.linalg.norm(C, 2)
        return self.graph_plane(C)

    def random_isometry(self, rng, boost=1.0):
        """Random element of the form's orthogonal group.

        Product of a block rotation diag(R_p, R_q) and hyperbolic rotations
        mixing positive and negative frame directions, conjugated by the frame.
        """
        rng = make_rng(rng)
        p, q = self.ctx.p, self.ctx.q
        Rp, _ = np.linalg.qr(rng.standard_normal((p, p)))
        Rq, _ = np.linalg.qr(rng.standard_normal((q, q)))
        O = linalg.block_diag(Rp, Rq)
        for i in range(p):
            j = p + int(rng.integers(q))
            s = rng.uniform(-boost, boost)
            H = np.eye(p + q)
            H[i, i] = H[j, j] = np.cosh(s)
            H[i, j] = H[j, i] = np.sinh(s)
            O = O @ H
        return self.frame @ O @ self.frame_inv

    def to_json(self):
        return {
            "kind": self.kind,
            "p": self.ctx.p,
            "q": self.ctx.q,
            "n": self.ctx.n,
            "form": [float(v) for v in self.form.ravel()],
        }

    def __repr__(self):
        return f"SymmetricDomain(p={self.ctx.p}, q={self.ctx.q})"


class HyperplaneComplementDomain(Domain):
    """Sign cell of x_ref in the complement of the hypersurfaces Z_{xi_i}.

    The sign of det[x | xi_i] depends on the orientation of the basis of x,
    so membership compares sign patterns up to a global sign. The sign cell
    over-approximates the connected component of x_ref.
    """

    kind = "complement"
    heuristic = True

    def __init__(self, ctx, duals, reference):
        self.ctx = ctx
        duals = list(duals)
        for i, xi in enumerate(duals):
            _check_dual(ctx, xi, f"duals[{i}]")
        _check_point(ctx, reference, "reference")
        self.duals = duals
        self.reference = reference
        self._dual_stack = np.stack([xi.basis for xi in duals]) if duals else np.zeros((0, ctx.n, ctx.q))
        d = self.dets(reference.basis[None])[0]
        if np.any(np.abs(d) <= ctx.tol.rank_rel):
            raise ValidationError("reference plane is not transverse to every dual", dets=[float(v) for v in d])
        self.signs = np.sign(d)

    def dets(self, bases):
        """det[x | xi_i] for a stack of orthonormalized bases: shape (m, len(duals))."""
        Q = _orthonormal_stack(np.asarray(bases, dtype=float))
        m, k = Q.shape[0], len(self.duals)
        if k == 0:
            return np.zeros((m, 0))
        A = np.broadcast_to(Q[:, None], (m, k) + Q.shape[1:])
        B = np.broadcast_to(self._dual_stack[None], (m, k) + self._dual_stack.shape[1:])
        return np.linalg.det(np.concatenate([A, B], axis=3))

    def margins(self, bases):
        d = self.dets(bases)
        if d.shape[1] == 0:
            return np.ones(d.shape[0])
        signed = d * self.signs
        return np.maximum(signed.min(axis=1), (-signed).min(axis=1))

    def dual_contains(self, xi, samples=500, seed=0):
        """True for defining duals; otherwise a sampled best-effort verdict."""
        _check_dual(self.ctx, xi)
        if any(xi.same_span(d, self.tol) for d in self.duals):
            return True
        rng = make_rng(seed)
        for _ in range(samples):
            x = self.sample_point(rng)
            if abs(np.linalg.det(np.hstack([x.basis, xi.basis]))) <= self.tol.rank_rel:
                return False
        return True

    def arcs(self, pp):
        """Exact arcs: each det is linear in (cos theta, sin theta)."""
        base = pp.bases_at_angles([0.0, np.pi / 2])
        # orientation-consistent determinants along the photon
        k = len(self.duals)
        if k == 0:
            return "whole"
        a = np.array([np.linalg.det(np.hstack([base[0], xi.basis])) for xi in self.duals])
        b = np.array([np.linalg.det(np.hstack([base[1], xi.basis])) for xi in self.duals])
        scale = np.hypot(a, b)
        if np.any(scale <= self.tol.rank_rel * max(1.0, np.max(np.abs(np.concatenate([a, b]))))):
            return []
        roots = np.sort(np.arctan2(-a, b) % np.pi)
        cuts = np.concatenate([roots, [roots[0] + np.pi]])
        arcs = []
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            if hi - lo <= 0.0:
                continue
            mid = 0.5 * (lo + hi)
            s = np.sign(np.cos(mid) * a + np.sin(mid) * b)
            if np.all(s == self.signs) or np.all(s == -self.signs):
                arcs.append((float(lo), float(hi)))
        return arcs

    def sample_point(self, rng, max_tries=60, path_checks=32):
        """Random point joined to the reference by a segment inside the cell.

        The segment is straight in the affine chart around the reference and
        is checked at ``path_checks`` points, so samples stay in the
        reference's connected component rather than just its sign cell.
        """
        rng = make_rng(rng)
        X = self.reference.basis
        Xperp = linalg.null_space(X.T)
        radius = 2.0
        fractions = np.linspace(0.0, 1.0, path_checks + 1)[1:]
        for _ in range(max_tries):
            C = rng.standard_normal((self.ctx.q, self.ctx.p))
            C *= rng.uniform(0.0, radius) / np.linalg.norm(C, 2)
            path = X[None] + fractions[:, None, None] * (Xperp @ C)[None]
            if np.all(self.margins(path) > self.tol.geom_abs):
                return Plane(path[-1])
            radius *= 0.8
        return self.reference

    def to_json(self):
        return {
            "kind": self.kind,
            "p": self.ctx.p,
            "q": self.ctx.q,
            "duals": [xi.to_json() for xi in self.duals],
            "reference": self.reference.to_json(),
        }

    def __repr__(self):
        return f"HyperplaneComplementDomain(p={self.ctx.p}, q={self.ctx.q}, duals={len(self.duals)})"


def domain_from_json(data, tol=DEFAULT_TOL):
    if isinstance(data, str):
        data = json.loads(data)
    try:
        kind = data["kind"]
        p, q = int(data["p"]), int(data["q"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed domain JSON: {exc}") from exc
    ctx = GrassmannContext(p, q, tol)
    if "n" in data and int(data["n"]) != ctx.n:
        raise DimensionMismatch("n must equal p + q", n=int(data["n"]), p=p, q=q)
    if kind == "symmetric":
        form = np.asarray(data.get("form", []), dtype=float)
        if form.size != ctx.n**2:
            raise ValidationError("form must have n*n entries", n=ctx.n, length=int(form.size))
        return SymmetricDomain(ctx, form.reshape(ctx.n, ctx.n))
    if kind == "complement":
        duals = [Plane.from_json(d, tol) for d in data.get("duals", [])]
        if "reference" not in data:
            raise ValidationError("complement domain needs a reference plane")
        return HyperplaneComplementDomain(ctx, duals, Plane.from_json(data["reference"], tol))
    raise ValidationError(f"unknown domain kind {kind!r}", kind=kind)


def _cyclic_runs(inside):
    """Maximal cyclic runs of True as (start, length) pairs."""
    m = inside.size
    if inside.all():
        return [(0, m)]
    if not inside.any():
        return []
    start = int(np.flatnonzero(~inside)[0])
    rolled = np.roll(inside, -start)
    runs, i = [], 0
    while i < m:
        if rolled[i]:
            j = i
            while j < m and rolled[j]:
                j += 1
            runs.append(((i + start) % m, j - i))
            i = j
        else:
            i += 1
    return runs


def _raycast(domain, pp, seed):
    tol = domain.tol
    thetas = np.arange(GRID_SIZE) * (np.pi / GRID_SIZE)
    margins = domain.margins_at_angles(pp, thetas)
    inside = margins > tol.geom_abs
    if inside.all():
        return PhotonInterval(pp, 0.0, np.pi, whole_line=True)
    if seed is None:
        if not inside.any():
            raise EmptyIntersection("photon misses the domain on the scan grid")
        k = int(np.argmax(margins))
        start = thetas[k]
    else:
        start = float(seed)
        if domain.margin_at_angle(pp, start) <= tol.geom_abs:
            raise NotInDomain("seed parameter is outside the domain", seed=start)
    step = np.pi / GRID_SIZE
    f = lambda th: domain.margin_at_angle(pp, th)

    def walk(direction):
        # grid points strictly beyond start in the given direction
        k0 = np.floor(start / step) if direction > 0 else np.ceil(start / step)
        last = start
        for i in range(1, GRID_SIZE + 1):
            th = (k0 + direction * i) * step
            if (th - start) * direction <= 0:
                continue
            idx = int(round(th / step)) % GRID_SIZE
            if not inside[idx]:
                # confirm at the exact angle, margins are pi-periodic
                if f(th) <= tol.geom_abs:
                    return bracketed_root(lambda t: f(t) - tol.geom_abs, last, th, tol, _BISECT_ITERS)
            last = th
        return None

    hi = walk(+1)
    lo = walk(-1)
    if hi is None or lo is None:
        return PhotonInterval(pp, 0.0, np.pi, whole_line=True)
    return PhotonInterval(pp, float(lo), float(hi))


def _from_arcs(domain, pp, arcs, seed):
    if arcs == "whole":
        return PhotonInterval(pp, 0.0, np.pi, whole_line=True)
    if not arcs:
        raise EmptyIntersection("photon misses the domain")
    if seed is None:
        lo, hi = max(arcs, key=lambda a: a[1] - a[0])
        return PhotonInterval(pp, lo, hi)
    for lo, hi in arcs:
        iv = PhotonInterval(pp, lo, hi)
        rep = iv.contains_angle(float(seed))
        if rep is not None:
            shift = rep - float(seed)
            return PhotonInterval(pp, lo - shift, hi - shift)
    raise NotInDomain("seed parameter is outside the domain", seed=float(seed))


def photon_intersection(domain, pp, seed=None, method="raycast"):
    """Connected arc of the photon ``pp`` inside ``domain``.

    ``method="raycast"`` scans a 1024-point grid over the circle and refines
    the endpoints by bisection on the signed margin. ``method="exact"`` uses
    the domain's closed-form arcs; ``"auto"`` picks exact when available.
    With a seed angle, the arc containing the seed is returned and its
    endpoints are shifted so that ``lo < seed < hi``.
    """
    if method not in ("raycast", "exact", "auto"):
        raise ValidationError(f"unknown method {method!r}")
    if method != "raycast":
        arcs = domain.arcs(pp)
        if arcs is not None:
            return _from_arcs(domain, pp, arcs, seed)
        if method == "exact":
            raise ValidationError("domain has no closed-form photon arcs")
    return _raycast(domain, pp, seed)


def hilbert_length_angles(lo, a, b, hi):
    """|log| of the cross ratio of four angles lo < a, b < hi on one arc."""
    if a == b:
        return 0.0
    return abs(
        np.log(np.sin(b - lo)) + np.log(np.sin(hi - a)) - np.log(np.sin(a - lo)) - np.log(np.sin(hi - b))
    )


def segment_hilbert_length(domain, x, y, method="auto", pp_theta=None):
    """Hilbert length of the photon segment from x to y inside ``domain``.

    Zero when x = y or when the photon lies entirely in the domain.
    """
    ctx = domain.ctx
    _check_point(ctx, x)
    _check_point(ctx, y)
    if x.same_span(y, ctx.tol):
        return 0.0
    pp, theta_y = pp_theta if pp_theta is not None else param_through(ctx, x, y)
    if pp is None:
        raise NotPhotonRelated("x and y are not on a common photon")
    iv = photon_intersection(domain, pp, seed=0.0, method=method)
    if iv.whole_line:
        return 0.0
    rep = iv.contains_angle(theta_y)
    if rep is None or domain.margin_at_angle(pp, theta_y) <= domain.tol.geom_abs:
        raise DifferentComponents("y is not in the arc of the photon containing x")
    return float(hilbert_length_angles(iv.lo_angle, 0.0, rep, iv.hi_angle))


def _report_base(name, domain, seed, samples):
    return {
        "probe": name,
        "domain": domain.kind,
        "p": domain.ctx.p,
        "q": domain.ctx.q,
        "seed": int(seed),
        "samples": int(samples),
        "heuristic": True,
    }


def r_proper_probe(domain, sample_count=200, seed=0, method="raycast"):
    """Check on sampled photons that the domain misses at least two points.

    Photons pass through random interior points in random rank-one
    directions; a photon fails when it lies inside the domain or the domain
    covers it up to a single point.
    """
    rng = make_rng(seed)
    slack = 1e-9
    passed, failed, worst = 0, 0, None
    for i in range(sample_count):
        x = domain.sample_point(rng)
        pp = random_photon_through(domain.ctx, x, rng)
        iv = photon_intersection(domain, pp, seed=0.0, method=method)
        ok = (not iv.whole_line) and iv.length < np.pi - slack
        passed += ok
        failed += not ok
        if worst is None or iv.length > worst["arc_angle"]:
            worst = {"index": i, "arc_angle": float(iv.length), "whole_line": iv.whole_line, "point": x.to_json()}
    report = _report_base("r_proper", domain, seed, sample_count)
    report.update({"passed": int(passed), "failed": int(failed), "pass": failed == 0, "widest": worst})
    return report


def count_components(domain, pp, grid=GRID_SIZE):
    """Number of cyclic runs of grid angles inside the domain (0 if none)."""
    thetas = np.arange(grid) * (np.pi / grid)
    inside = domain.margins_at_angles(pp, thetas) > domain.tol.geom_abs
    return len(_cyclic_runs(inside))


def photon_convexity_probe(domain, sample_count=200, seed=0, max_redraws=50):
    """Count connected pieces of photon ∩ domain on sampled photons.

    Even-indexed samples are uniformly random photons, redrawn up to
    ``max_redraws`` times while they miss the domain and then replaced by a
    photon through a sampled interior point; odd-indexed ones always pass
    through an interior point. ``skipped`` counts the misses.
    """
    rng = make_rng(seed)
    counts = []
    skipped = 0
    witness = None
    for i in range(sample_count):
        if i % 2:
            pp = random_photon_through(domain.ctx, domain.sample_point(rng), rng)
            c = count_components(domain, pp)
        else:
            for _ in range(max_redraws):
                pp = ProjParam.from_photon(random_photon(domain.ctx, rng))
                c = count_components(domain, pp)
                if c:
                    break
                skipped += 1
            else:
                pp = random_photon_through(domain.ctx, domain.sample_point(rng), rng)
                c = count_components(domain, pp)
        if c == 0:
            continue
        counts.append(c)
        if witness is None or c > witness["components"]:
            witness = {"index": i, "components": int(c), "photon": pp.photon.to_json()}
    report = _report_base("photon_convexity", domain, seed, sample_count)
    max_c = max(counts) if counts else 0
    report.update(
        {
            "checked": len(counts),
            "skipped": int(skipped),
            "max_components": int(max_c),
            "pass": max_c <= 1,
            "witness": witness,
        }
    )
    return report
