"""Kobayashi and Caratheodory metrics on Grassmannian domains.

The Kobayashi pseudometric is the infimum of total Hilbert length over
photon chains; on symmetric domains it has a closed form, the L1 norm of
the flat coordinates of the pair. The Caratheodory metric is the supremum
over pairs of dual points of |log| of the flag cross ratio, a lower bound.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .domains import (
    SymmetricDomain,
    hilbert_length_angles,
    photon_intersection,
    segment_hilbert_length,
    _check_point,
)
from .errors import (
    BoundaryProximity,
    ChartDegeneracy,
    DifferentComponents,
    EmptyDualSample,
    EmptyIntersection,
    InvariantViolation,
    NaganoError,
    NotInDomain,
    NoChainFound,
    ValidationError,
)
from .grassmann import Plane, ProjParam, param_through, random_photon_through
from .numerics import make_rng, minimize, spawn_rngs

# Scaling between Caratheodory and Kobayashi for the Plücker representation:
# the highest weight evaluates to 1 on its own coroot.
CHI_H_ALPHA = 1.0

# singular values this close to 1 are treated as boundary points
SIGMA_MARGIN = 1e-12


@dataclass
class Chain:
    points: list
    segment_lengths: list

    @property
    def total(self):
        return float(sum(self.segment_lengths))

    @property
    def segments(self):
        return len(self.segment_lengths)

    def to_json(self):
        return {
            "points": [pt.to_json() for pt in self.points],
            "segment_lengths": [float(v) for v in self.segment_lengths],
            "total": self.total,
        }


@dataclass(frozen=True)
class RelativePosition:
    sigmas: tuple
    flat_coords: tuple

    def to_json(self):
        return {"sigmas": [float(s) for s in self.sigmas], "flat_coords": [float(t) for t in self.flat_coords]}


@dataclass
class SearchConfig:
    max_segments: int = 4
    restarts: int = 3
    budget: int = 600
    dual_samples: int = 1000
    optimize_duals: bool = True
    initial_candidates: int = 6


@dataclass
class MetricReport:
    lower: float
    upper: float
    exact: object
    chain_witness: Chain
    dual_witness: tuple
    seed: int
    extra: dict = field(default_factory=dict)

    @property
    def gap(self):
        return self.upper - self.lower

    def to_json(self):
        out = {
            "lower": float(self.lower),
            "upper": float(self.upper),
            "exact": None if self.exact is None else float(self.exact),
            "gap": float(self.gap),
            "chain_witness": self.chain_witness.to_json(),
            "dual_witness": [xi.to_json() for xi in self.dual_witness] if self.dual_witness else None,
            "seed": int(self.seed),
        }
        out.update(self.extra)
        return out


def _require_symmetric(dom):
    if not isinstance(dom, SymmetricDomain):
        raise ValidationError("operation needs a SymmetricDomain", kind=getattr(dom, "kind", None))


def _require_inside(dom, x, name):
    _check_point(dom.ctx, x, name)
    m = dom.margin(x)
    if m <= dom.tol.geom_abs:
        raise NotInDomain(f"{name} is not in the domain", margin=m)


def _form_frame(dom, x):
    """Matrix h with h^T F h = J whose first p columns span x."""
    _require_symmetric(dom)
    F = dom.form
    X = x.basis
    G = X.T @ F @ X
    if np.linalg.eigvalsh(G)[0] <= dom.tol.geom_abs:
        raise NotInDomain("form is not positive definite on x")
    Xp = linalg.solve_triangular(np.linalg.cholesky(G), X.T, lower=True).T
    N = linalg.null_space(X.T @ F)
    M = -(N.T @ F @ N)
    Yn = linalg.solve_triangular(np.linalg.cholesky(0.5 * (M + M.T)), N.T, lower=True).T
    return np.hstack([Xp, Yn])


def normalize_to_base(dom, x):
    """Form isometry g with g(base point) = x.

    Built by form-orthonormalizing a basis of x (positive part) and of its
    form-orthogonal complement (negative part).
    """
    h = _form_frame(dom, x)
    return h @ dom.frame_inv


def _graph_in_frame(dom, h, y):
    """Graph matrix B (q x p) of y in the chart of the frame h."""
    PQ = dom.J @ h.T @ dom.form @ y.basis
    p = dom.ctx.p
    P, Q = PQ[:p], PQ[p:]
    if np.linalg.cond(P) > 1 / dom.tol.rank_rel:
        raise ChartDegeneracy("plane is not in the affine chart of the base point")
    return np.linalg.solve(P.T, Q.T).T


def _flat_from_mu(dom, x, y, r):
    """Flat coordinates via mu = 1/(1 - sigma^2), computed from Gram matrices.

    Avoids the cancellation in 1 - sigma for points far apart.
    """
    F = dom.form
    X, Y = x.basis, y.basis
    Gx, Gy, Cxy = X.T @ F @ X, Y.T @ F @ Y, X.T @ F @ Y
    Lx = np.linalg.cholesky(Gx)
    A = linalg.solve_triangular(Lx, Cxy, lower=True)
    M = A @ np.linalg.solve(Gy, A.T)
    mu = np.sort(np.linalg.eigvalsh(0.5 * (M + M.T)))[::-1][:r]
    return 2.0 * np.arccosh(np.sqrt(np.maximum(mu, 1.0)))


def relative_position(dom, x, y):
    """Singular values of the graph of y over x, and their flat coordinates."""
    _require_inside(dom, x, "x")
    _require_inside(dom, y, "y")
    r = min(dom.ctx.p, dom.ctx.q)
    if x.same_span(y, dom.tol):
        return RelativePosition((0.0,) * r, (0.0,) * r)
    h = _form_frame(dom, x)
    B = _graph_in_frame(dom, h, y)
    sig = np.linalg.svd(B, compute_uv=False)[:r]
    if sig.size and sig[0] >= 1.0 - SIGMA_MARGIN:
        raise BoundaryProximity("relative position is at the boundary", sigma_max=float(sig[0]))
    t = 2.0 * np.arctanh(sig)
    far = sig >= 0.5
    if np.any(far):
        t_mu = _flat_from_mu(dom, x, y, r)
        t = np.where(far, t_mu, t)
    return RelativePosition(tuple(float(s) for s in sig), tuple(float(v) for v in t))


def kobayashi_closed_form(dom, x, y):
    """Sum of the flat coordinates of the pair (exact Kobayashi distance).

    The pair is evaluated in a canonical order so that the result is
    bitwise symmetric in (x, y).
    """
    if y.basis.tobytes() < x.basis.tobytes():
        x, y = y, x
    return float(sum(relative_position(dom, x, y).flat_coords))


def _diagonal_frame(dom, x, y):
    """Frame hR diagonalizing the pair: y is the graph of diag(sigma)."""
    h = _form_frame(dom, x)
    B = _graph_in_frame(dom, h, y)
    U, sig, Vt = np.linalg.svd(B)
    R = linalg.block_diag(Vt.T, U)
    return h @ R, sig


def geodesic_r_chain(dom, x, y):
    """Chain x = z_0, ..., z_k = y through the graphs of diag(s_1..s_i, 0..).

    Consecutive points differ by a rank-one graph perturbation, so they lie
    on one photon; the chain realizes the closed-form distance.
    """
    _require_inside(dom, x, "x")
    _require_inside(dom, y, "y")
    if x.same_span(y, dom.tol):
        return Chain([x], [])
    hr, sig = _diagonal_frame(dom, x, y)
    p, q = dom.ctx.p, dom.ctx.q
    nonzero = [i for i, s in enumerate(sig) if s > dom.tol.rank_rel]
    points = [x]
    D = np.zeros((q, p))
    for count, i in enumerate(nonzero):
        D[i, i] = sig[i]
        if count == len(nonzero) - 1:
            points.append(y)
        else:
            points.append(Plane(hr @ np.vstack([np.eye(p), D])))
    lengths = [segment_hilbert_length(dom, a, b) for a, b in zip(points[:-1], points[1:])]
    return Chain(points, lengths)


def optimal_dual_pair(dom, x, y):
    """Dual pair attaining the closed form in the Caratheodory supremum.

    In the diagonalizing frame these are the dual graphs of +E and -E with E
    the p x q partial identity.
    """
    hr, _ = _diagonal_frame(dom, x, y)
    p, q = dom.ctx.p, dom.ctx.q
    E = np.eye(p, q)
    return Plane(hr @ np.vstack([E, np.eye(q)])), Plane(hr @ np.vstack([-E, np.eye(q)]))


def sample_duals(dom, count, rng):
    """Dual points on the Shilov-type boundary of the closed dual.

    Each sample is the dual graph of the polar factor of a Gaussian p x q
    matrix (all singular values 1), shrunk slightly to stay strictly
    negative. Draws a fixed amount of randomness per sample, so a shorter
    request is always a prefix of a longer one with the same generator.
    """
    _require_symmetric(dom)
    rng = make_rng(rng)
    p, q = dom.ctx.p, dom.ctx.q
    out = []
    for _ in range(count):
        G = rng.standard_normal((p, q))
        U, _, Vt = np.linalg.svd(G, full_matrices=False)
        out.append(dom.dual_graph((1.0 - 1e-9) * (U @ Vt)))
    return out


def _dual_log_ratio(X, Y, xi_stack):
    """r(xi) = log|det[x|xi]| - log|det[y|xi]| for a stack of dual bases."""
    m = xi_stack.shape[0]
    Xs = np.broadcast_to(X, (m,) + X.shape)
    Ys = np.broadcast_to(Y, (m,) + Y.shape)
    _, lx = np.linalg.slogdet(np.concatenate([Xs, xi_stack], axis=2))
    _, ly = np.linalg.slogdet(np.concatenate([Ys, xi_stack], axis=2))
    return lx - ly


def _clip_ball(C):
    U, s, Vt = np.linalg.svd(C, full_matrices=False)
    return (U * np.minimum(s, 1.0 - 1e-12)) @ Vt


def caratheodory_lower(dom, x, y, duals, optimize=False, rng=None, budget=400):
    """max over dual pairs of |log| flag cross ratio, a lower bound for K.

    With ``optimize`` (symmetric domains) the best and worst duals are each
    refined by Nelder-Mead in dual-graph coordinates, clipped to the closed
    unit ball.

    Returns:
        ``(value, (xi, eta))``
    """
    _require_inside(dom, x, "x")
    _require_inside(dom, y, "y")
    duals = list(duals)
    if not duals:
        raise EmptyDualSample("no dual points supplied")
    symmetric = isinstance(dom, SymmetricDomain)
    for i, xi in enumerate(duals):
        ok = dom.dual_contains(xi, closed=True) if symmetric else dom.dual_contains(xi)
        if not ok:
            raise ValidationError("dual point is outside the dual of the domain", index=i)
    X, Y = x.basis, y.basis
    stack = np.stack([xi.basis for xi in duals])
    r = _dual_log_ratio(X, Y, stack)
    imax, imin = int(np.argmax(r)), int(np.argmin(r))
    best_hi, best_lo = float(r[imax]), float(r[imin])
    wit_hi, wit_lo = duals[imax], duals[imin]
    if optimize and symmetric and not x.same_span(y, dom.tol):
        p, q = dom.ctx.p, dom.ctx.q
        S, Sinv = dom.frame, dom.frame_inv

        def coords(xi):
            AB = Sinv @ xi.basis
            return np.linalg.solve(AB[p:].T, AB[:p].T).T

        def r_of(c):
            C = _clip_ball(c.reshape(p, q))
            return float(_dual_log_ratio(X, Y, (S @ np.vstack([C, np.eye(q)]))[None])[0])

        rng = make_rng(rng)
        c_hi, v_hi = minimize(lambda c: -r_of(c), coords(wit_hi).ravel(), budget=budget, rng=rng, restarts=3)
        c_lo, v_lo = minimize(r_of, coords(wit_lo).ravel(), budget=budget, rng=rng, restarts=3)
        if -v_hi > best_hi:
            best_hi, wit_hi = -v_hi, dom.dual_graph(_clip_ball(c_hi.reshape(p, q)))
        if v_lo < best_lo:
            best_lo, wit_lo = v_lo, dom.dual_graph(_clip_ball(c_lo.reshape(p, q)))
    return float(best_hi - best_lo), (wit_hi, wit_lo)


class _ChainModel:
    """Chains from x to y in an affine chart around x.

    Points are graphs [I; Z] in the chart T. An N-chain is a factorization
    B = P Qt^T whose rank-one pieces are added one at a time, so consecutive
    points are photon-related by construction.
    """

    def __init__(self, dom, x, y, T):
        self.dom = dom
        p = dom.ctx.p
        self.T = T
        PQ = np.linalg.solve(T, y.basis)
        if np.linalg.cond(PQ[:p]) > 1 / dom.tol.rank_rel:
            raise ChartDegeneracy("y is not in the chart around x")
        self.B = np.linalg.solve(PQ[:p].T, PQ[p:].T).T
        U, s, _ = np.linalg.svd(self.B)
        self.rank = int(np.count_nonzero(s > dom.tol.rank_rel * max(s[0], 1e-300))) if s.size else 0
        self.UB = U[:, : self.rank]
        self.x, self.y = x, y

    @classmethod
    def charts(cls, dom, x, y):
        """Models in every available chart around x.

        Symmetric domains use the form-orthonormal frame (the domain is the
        unit ball there). Otherwise the complement of x and each defining
        dual point serve as the hyperplane at infinity; a dual chart
        contains the whole domain.
        """
        X = x.basis
        if isinstance(dom, SymmetricDomain):
            frames = [_form_frame(dom, x)]
        else:
            frames = [np.hstack([X, linalg.null_space(X.T)])]
            frames += [np.hstack([X, xi.basis]) for xi in getattr(dom, "duals", [])]
        models = []
        for T in frames:
            try:
                models.append(cls(dom, x, y, T))
            except (ChartDegeneracy, np.linalg.LinAlgError):
                continue
        return models

    def n_params(self, N):
        p, q = self.dom.ctx.p, self.dom.ctx.q
        lead = q * N if N >= q else self.rank * N
        return lead + N * p

    def factors(self, theta, N):
        p, q = self.dom.ctx.p, self.dom.ctx.q
        if N >= q:
            P = theta[: q * N].reshape(q, N)
            rest = theta[q * N :]
        else:
            K = theta[: self.rank * N].reshape(self.rank, N)
            P = self.UB @ K
            rest = theta[self.rank * N :]
        W = rest.reshape(N, p)
        Pp = np.linalg.pinv(P)
        Qt_T = Pp @ self.B + (np.eye(N) - Pp @ P) @ W
        return P, Qt_T

    def step_length(self, Z, a, b):
        """Hilbert length of the photon step from graph Z to Z + a b^T."""
        p = self.dom.ctx.p
        T = self.T
        na, nb = np.linalg.norm(a), np.linalg.norm(b)
        if na * nb < 1e-14:
            return 0.0
        bu = b / nb
        Cperp = linalg.null_space(bu[None, :]) if p > 1 else np.zeros((p, 0))
        V0 = T @ np.vstack([Cperp, Z @ Cperp])
        u = T @ np.concatenate([bu, Z @ bu])
        w = nb * (T @ np.concatenate([np.zeros(p), a]))
        pp = ProjParam(V0, u, w)
        try:
            iv = photon_intersection(self.dom, pp, seed=0.0, method="auto")
        except (NotInDomain, EmptyIntersection):
            return np.inf
        if iv.whole_line:
            return 0.0
        target = np.pi / 4
        if iv.contains_angle(target) is None or target >= iv.hi_angle:
            return np.inf
        return float(hilbert_length_angles(iv.lo_angle, 0.0, target, iv.hi_angle))

    def length(self, theta, N):
        try:
            P, Qt_T = self.factors(np.asarray(theta, dtype=float), N)
        except np.linalg.LinAlgError:
            return np.inf
        p, q = self.dom.ctx.p, self.dom.ctx.q
        Z = np.zeros((q, p))
        total = 0.0
        for k in range(N):
            a, b = P[:, k], Qt_T[k, :]
            total += self.step_length(Z, a, b)
            if not np.isfinite(total):
                return np.inf
            Z = Z + np.outer(a, b)
        return total

    def points(self, theta, N):
        P, Qt_T = self.factors(np.asarray(theta, dtype=float), N)
        p, q = self.dom.ctx.p, self.dom.ctx.q
        Z = np.zeros((q, p))
        pts = [self.x]
        for k in range(N):
            Zn = Z + np.outer(P[:, k], Qt_T[k, :])
            if np.linalg.norm(Zn - Z) < 1e-14:
                continue
            Z = Zn
            pts.append(self.y if k == N - 1 else Plane(self.T @ np.vstack([np.eye(p), Z])))
        if len(pts) > 1 and pts[-1] is not self.y:
            pts[-1] = self.y
        return pts

    def svd_theta(self, N, rng, jitter=0.0):
        """Parameters of the chain that walks the SVD terms of B in order.

        Extra segments split the leading terms into equal parts.
        """
        q = self.dom.ctx.q
        U, s, Vt = np.linalg.svd(self.B)
        terms = list(range(self.rank))
        pieces = [1] * len(terms)
        for k in range(N - len(terms)):
            pieces[k % len(terms)] += 1
        cols_a, cols_b = [], []
        for i, m in zip(terms, pieces):
            for _ in range(m):
                cols_a.append(U[:, i] * np.sqrt(s[i]))
                cols_b.append(Vt[i] * np.sqrt(s[i]) / m)
        P = np.column_stack(cols_a)
        Wt = np.vstack(cols_b)
        if jitter:
            P = P + jitter * rng.standard_normal(P.shape)
            Wt = Wt + jitter * rng.standard_normal(Wt.shape)
        if N >= q:
            lead = P.ravel()
        else:
            lead = (self.UB.T @ P).ravel()
        return np.concatenate([lead, Wt.ravel()])


def _chain_from_points(dom, pts):
    lengths = []
    for a, b in zip(pts[:-1], pts[1:]):
        lengths.append(segment_hilbert_length(dom, a, b))
    return Chain(pts, lengths)


def kobayashi_upper(dom, x, y, config=None, rng=None):
    """Best chain length found by a search over chains of <= max_segments.

    Candidates: the geodesic r-chain on symmetric domains, SVD-ordered chains
    and random rank-one factorizations in a chart around x; the best ones are
    refined by Nelder-Mead. Lengths of the returned witness are recomputed
    segment by segment, so the value is a genuine chain length.

    Returns:
        ``(value, chain)``
    """
    config = config or SearchConfig()
    rng = make_rng(rng)
    _require_inside(dom, x, "x")
    _require_inside(dom, y, "y")
    if x.same_span(y, dom.tol):
        return 0.0, Chain([x], [])
    pp, theta_y = param_through(dom.ctx, x, y)
    if pp is not None:
        try:
            length = segment_hilbert_length(dom, x, y, pp_theta=(pp, theta_y))
            return length, Chain([x, y], [length])
        except DifferentComponents:
            pass

    best_val, best_chain = np.inf, None
    if isinstance(dom, SymmetricDomain):
        best_chain = geodesic_r_chain(dom, x, y)
        best_val = best_chain.total

    candidates = []
    for model in _ChainModel.charts(dom, x, y):
        lo_n = max(model.rank, 1)
        for N in range(lo_n, max(config.max_segments, lo_n) + 1):
            seeds = [model.svd_theta(N, rng)]
            for _ in range(config.initial_candidates):
                seeds.append(model.svd_theta(N, rng, jitter=0.3))
            for th in seeds:
                candidates.append((model.length(th, N), N, th, model))
    candidates.sort(key=lambda c: c[0])
    finite = [c for c in candidates if np.isfinite(c[0])]
    refine = finite[: max(1, config.restarts)]
    per_run = max(50, config.budget // max(1, len(refine)))
    for value, N, th, model in refine:
        f = lambda t, model=model, N=N: model.length(t, N)
        th_opt, v_opt = minimize(f, th, budget=per_run, rng=rng, restarts=config.restarts)
        if v_opt < best_val - 1e-15:
            try:
                chain = _chain_from_points(dom, model.points(th_opt, N))
            except (NaganoError, np.linalg.LinAlgError):
                continue
            if chain.total < best_val:
                best_val, best_chain = chain.total, chain
    if best_chain is None:
        raise NoChainFound("no admissible chain found within the search budget", max_segments=config.max_segments)
    return float(best_val), best_chain


def sandwich(dom, x, y, config=None, seed=0):
    """Caratheodory lower bound, chain upper bound and (if symmetric) exact value."""
    config = config or SearchConfig()
    rng_duals, rng_opt, rng_chain = spawn_rngs(seed, 3)
    symmetric = isinstance(dom, SymmetricDomain)
    if symmetric:
        duals = sample_duals(dom, config.dual_samples, rng_duals)
        lower, witness = caratheodory_lower(dom, x, y, duals, optimize=config.optimize_duals, rng=rng_opt)
    else:
        lower, witness = caratheodory_lower(dom, x, y, dom.duals)
    upper, chain = kobayashi_upper(dom, x, y, config, rng_chain)
    exact = kobayashi_closed_form(dom, x, y) if symmetric else None
    tol = dom.tol.metric_abs
    if lower > upper + tol:
        raise InvariantViolation("lower bound exceeds upper bound", lower=lower, upper=upper)
    if exact is not None and not (lower <= exact + tol and exact <= upper + tol):
        raise InvariantViolation("closed form outside the bounds", lower=lower, exact=exact, upper=upper)
    return MetricReport(lower, upper, exact, chain, witness, int(seed), {"heuristic": bool(dom.heuristic)})


def photon_step(dom, x, distance, rng, max_tries=50):
    """Move from x a Hilbert distance ``distance`` along a random photon.

    Along an arc (lo, hi), s(theta) = sin(theta - lo) / sin(hi - theta)
    changes by the factor exp(distance) per unit of Hilbert length.
    """
    rng = make_rng(rng)
    if distance == 0:
        return x
    for _ in range(max_tries):
        pp = random_photon_through(dom.ctx, x, rng)
        iv = photon_intersection(dom, pp, seed=0.0, method="auto")
        if iv.whole_line:
            continue
        lo, hi = iv.lo_angle, iv.hi_angle
        L = hi - lo
        s = np.sin(-lo) / np.sin(hi) * np.exp(distance if rng.random() < 0.5 else -distance)
        theta = lo + np.arctan2(s * np.sin(L), 1.0 + s * np.cos(L))
        z = pp.eval_angle(theta)
        if dom.contains(z):
            return z
    raise NoChainFound("could not move along any sampled photon", distance=float(distance))


def four_point_delta(d):
    """Gromov four-point defect for a 4x4 distance matrix."""
    sums = sorted([d[0][1] + d[2][3], d[0][2] + d[1][3], d[0][3] + d[1][2]], reverse=True)
    return 0.5 * (sums[0] - sums[1])


def flat_quadruple(dom, D):
    """Points with flat coordinates (0,0), (D,D), (D,0), (0,D) in a rank-2 flat."""
    _require_symmetric(dom)
    p, q = dom.ctx.p, dom.ctx.q
    pts = []
    for t1, t2 in ((0, 0), (D, D), (D, 0), (0, D)):
        C = np.zeros((q, p))
        C[0, 0], C[1, 1] = np.tanh(t1 / 2), np.tanh(t2 / 2)
        pts.append(dom.graph_plane(C))
    return pts


def hyperbolicity_probe(dom, scales=(2, 4, 8, 16), quadruples=200, seed=0, config=None):
    """Four-point defect at several scales.

    Sampled quadruples are drawn by photon walks from the base point with
    total length uniform in [0, D/2], so their diameter is at most D. On
    symmetric domains of rank >= 2 the flat quadruple is evaluated too. On
    other domains the distance is the sandwich midpoint and the largest gap
    is recorded.
    """
    symmetric = isinstance(dom, SymmetricDomain)
    config = config or SearchConfig(dual_samples=200, budget=200, restarts=1)
    rows = []
    base = dom.base_point if symmetric else dom.reference
    for D, rng in zip(scales, spawn_rngs(seed, len(scales))):
        max_gap = 0.0

        def dist(a, b):
            nonlocal max_gap
            if a.same_span(b, dom.tol):
                return 0.0
            if symmetric:
                return kobayashi_closed_form(dom, a, b)
            rep = sandwich(dom, a, b, config, seed)
            max_gap = max(max_gap, rep.gap)
            return 0.5 * (rep.lower + rep.upper)

        sampled = 0.0
        for _ in range(quadruples):
            pts = []
            for _ in range(4):
                total = rng.uniform(0.0, D / 2)
                z = photon_step(dom, base, total / 2, rng)
                pts.append(photon_step(dom, z, total / 2, rng))
            d = [[dist(a, b) if i < j else 0.0 for j, b in enumerate(pts)] for i, a in enumerate(pts)]
            d = [[d[min(i, j)][max(i, j)] for j in range(4)] for i in range(4)]
            sampled = max(sampled, four_point_delta(d))
        row = {"scale": float(D), "sampled_delta": float(sampled), "gap": float(max_gap), "seed": int(seed)}
        delta = sampled
        if symmetric and min(dom.ctx.p, dom.ctx.q) >= 2:
            pts = flat_quadruple(dom, D)
            d = [[kobayashi_closed_form(dom, a, b) if i != j else 0.0 for j, b in enumerate(pts)] for i, a in enumerate(pts)]
            flat = four_point_delta(d)
            row["flat_delta"] = float(flat)
            delta = max(delta, flat)
        row["delta"] = float(delta)
        rows.append(row)
    return rows
