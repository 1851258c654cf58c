"""Incidence geometry of the real Grassmannian Gr_p(R^{p+q}).

Points are p-planes, dual points are q-planes. Photons are the pencils of
p-planes squeezed between a (p-1)-plane and a (p+1)-plane; they are projective
lines, parametrized here either by an extended real ``t`` or by an angle
``theta`` with ``t = tan(theta)``.
"""

from dataclasses import dataclass, field
from itertools import combinations
import json

import numpy as np
from scipy import linalg

from .errors import (
    DegenerateQuadruple,
    DimensionMismatch,
    IdenticalPlanes,
    NonTransverseConfiguration,
    ValidationError,
)
from .numerics import DEFAULT_TOL, make_rng, rank_with_tol


class _Infinity:
    """The point at infinity of the projective line R ∪ {∞}."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


def is_inf(t):
    return t is INF


def ext_to_angle(t):
    """Angle in (-pi/2, pi/2] of an extended real."""
    if t is INF:
        return np.pi / 2
    return float(np.arctan(float(t)))


def angle_to_ext(theta):
    """Extended real ``tan(theta)``; angles congruent to pi/2 map to ``INF``."""
    theta = (float(theta) + np.pi / 2) % np.pi - np.pi / 2
    if abs(abs(theta) - np.pi / 2) < 1e-15:
        return INF
    return float(np.tan(theta))


def ext_to_json(t):
    return "inf" if t is INF else float(t)


def ext_from_json(value):
    return INF if value == "inf" else float(value)


@dataclass(frozen=True)
class GrassmannContext:
    p: int
    q: int
    tol: object = DEFAULT_TOL

    def __post_init__(self):
        if int(self.p) < 1 or int(self.q) < 1:
            raise ValidationError("p and q must be >= 1", p=self.p, q=self.q)

    @property
    def n(self):
        return self.p + self.q


def orthonormalize(M, tol=DEFAULT_TOL):
    """Orthonormal basis of the column span of ``M`` (column-pivoted QR).

    Raises ``ValidationError`` when the columns are numerically dependent.
    """
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.ndim != 2 or M.shape[1] == 0:
        raise ValidationError("basis must be a nonempty 2-d array", shape=list(M.shape))
    if not np.all(np.isfinite(M)):
        raise ValidationError("basis has non-finite entries")
    k = M.shape[1]
    if rank_with_tol(M, tol) < k:
        raise ValidationError("basis columns are linearly dependent", shape=list(M.shape))
    Q, _, _ = linalg.qr(M, mode="economic", pivoting=True)
    return Q[:, :k]


class Plane:
    """A linear subspace of R^n, stored by an orthonormal basis (n x k).

    Equality compares spans, not bases.
    """

    __slots__ = ("basis",)
    __hash__ = None

    def __init__(self, basis, tol=DEFAULT_TOL):
        self.basis = orthonormalize(basis, tol)
        self.basis.setflags(write=False)

    @classmethod
    def from_orthonormal(cls, basis):
        """Wrap a basis already known to be orthonormal, skipping checks."""
        obj = cls.__new__(cls)
        obj.basis = np.asarray(basis, dtype=float)
        obj.basis.setflags(write=False)
        return obj

    @classmethod
    def span(cls, *vectors, tol=DEFAULT_TOL):
        return cls(np.column_stack(vectors), tol)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def k(self):
        return self.basis.shape[1]

    def same_span(self, other, tol=DEFAULT_TOL):
        if self.n != other.n or self.k != other.k:
            return False
        return rank_with_tol(np.hstack([self.basis, other.basis]), tol) == self.k

    def __eq__(self, other):
        if not isinstance(other, Plane):
            return NotImplemented
        return self.same_span(other)

    def transform(self, g):
        """Image of the plane under an invertible matrix ``g``."""
        return Plane(np.asarray(g, dtype=float) @ self.basis)

    def projector(self):
        return self.basis @ self.basis.T

    def to_json(self):
        return {"n": self.n, "k": self.k, "basis": [float(v) for v in self.basis.ravel()]}

    @classmethod
    def from_json(cls, data, tol=DEFAULT_TOL):
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n, k = int(data["n"]), int(data["k"])
            values = np.asarray(data["basis"], dtype=float).ravel()
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed plane JSON: {exc}") from exc
        if values.size != n * k or n < 1 or k < 1:
            raise ValidationError("basis length does not match n*k", n=n, k=k, length=int(values.size))
        return cls(values.reshape(n, k), tol)

    def __repr__(self):
        return f"Plane(n={self.n}, k={self.k})"


def standard_plane(n, indices):
    """Span of the coordinate vectors ``e_i`` for i in ``indices`` (0-based)."""
    basis = np.zeros((n, len(indices)))
    for col, i in enumerate(indices):
        basis[i, col] = 1.0
    return Plane.from_orthonormal(basis)


def _check_dim(ctx, plane, k, name):
    if plane.n != ctx.n or plane.k != k:
        raise DimensionMismatch(
            f"{name} must be a {k}-plane of R^{ctx.n}", name=name, n=plane.n, k=plane.k, expected_k=k
        )


@dataclass(frozen=True)
class Photon:
    """The pencil {V : v0 ⊂ V ⊂ v1}, dim v0 = p-1, dim v1 = p+1."""

    v0: Plane
    v1: Plane

    def validate(self, tol=DEFAULT_TOL):
        if self.v1.k != self.v0.k + 2:
            raise ValidationError("photon needs dim v1 = dim v0 + 2", dim_v0=self.v0.k, dim_v1=self.v1.k)
        if self.v0.k and rank_with_tol(np.hstack([self.v0.basis, self.v1.basis]), tol) != self.v1.k:
            raise ValidationError("photon requires v0 ⊂ v1")
        return self

    def contains(self, x, tol=DEFAULT_TOL):
        if x.k != self.v0.k + 1:
            return False
        inner = self.v0.k == 0 or rank_with_tol(np.hstack([self.v0.basis, x.basis]), tol) == x.k
        outer = rank_with_tol(np.hstack([x.basis, self.v1.basis]), tol) == self.v1.k
        return inner and outer

    def to_json(self):
        return {"v0": self.v0.to_json() if self.v0.k else None, "v1": self.v1.to_json()}


@dataclass(frozen=True)
class ProjParam:
    """Projective parametrization ``[a:b] -> span(v0, a*u + b*w)`` of a photon.

    ``v0`` is stored as a plain (possibly non-orthonormal) n x (p-1) matrix so
    that hot loops can build parametrizations without re-orthonormalizing.
    """

    v0: np.ndarray
    u: np.ndarray
    w: np.ndarray
    _photon: list = field(default_factory=list, repr=False, compare=False)

    @property
    def photon(self):
        if not self._photon:
            v0 = Plane(self.v0) if self.v0.shape[1] else Plane.from_orthonormal(self.v0)
            self._photon.append(Photon(v0, Plane(np.column_stack([self.v0, self.u, self.w]))))
        return self._photon[0]

    @classmethod
    def from_photon(cls, photon, rng=None):
        """A parametrization of ``photon`` with an orthonormal frame.

        With ``rng`` the frame is randomly rotated inside the complement of
        ``v0`` in ``v1`` (any frame is a valid projective parametrization).
        """
        v0 = photon.v0.basis
        comp = photon.v1.basis - v0 @ (v0.T @ photon.v1.basis) if v0.shape[1] else photon.v1.basis
        U, s, _ = np.linalg.svd(comp, full_matrices=False)
        frame = U[:, :2]
        if rng is not None:
            a = make_rng(rng).uniform(0, 2 * np.pi)
            rot = np.array([[np.cos(a), -np.sin(a)], [np.sin(a), np.cos(a)]])
            frame = frame @ rot
        pp = cls(v0, frame[:, 0], frame[:, 1])
        pp._photon.append(photon)
        return pp

    def basis_at_angle(self, theta):
        """Spanning matrix (not orthonormalized) of the point at angle ``theta``."""
        vec = np.cos(theta) * self.u + np.sin(theta) * self.w
        return np.column_stack([self.v0, vec])

    def bases_at_angles(self, thetas):
        """Stacked spanning matrices, shape (len(thetas), n, p)."""
        thetas = np.asarray(thetas, dtype=float)
        vecs = np.cos(thetas)[:, None] * self.u[None, :] + np.sin(thetas)[:, None] * self.w[None, :]
        head = np.broadcast_to(self.v0, (thetas.size,) + self.v0.shape)
        return np.concatenate([head, vecs[:, :, None]], axis=2)

    def eval_angle(self, theta):
        return Plane(self.basis_at_angle(theta))

    def angle_of(self, x, tol=DEFAULT_TOL):
        """Angle in [0, pi) of a plane ``x`` lying on the photon."""
        B = x.basis
        if self.v0.shape[1]:
            coeffs, *_ = np.linalg.lstsq(np.column_stack([self.v0, self.u, self.w]), B, rcond=None)
            tail = coeffs[-2:, :]
        else:
            coeffs, *_ = np.linalg.lstsq(np.column_stack([self.u, self.w]), B, rcond=None)
            tail = coeffs
        # x ∩ span(u, w) modulo v0 is one-dimensional; take the dominant direction
        U, s, _ = np.linalg.svd(tail)
        a, b = U[:, 0]
        return float(np.arctan2(b, a) % np.pi)


def intersect_dim(ctx, x, y):
    """dim(x ∩ y) for two p-planes."""
    _check_dim(ctx, x, ctx.p, "x")
    _check_dim(ctx, y, ctx.p, "y")
    return 2 * ctx.p - rank_with_tol(np.hstack([x.basis, y.basis]), ctx.tol)


def arithmetic_distance(ctx, x, y):
    """p - dim(x ∩ y): the number of photon steps needed to go from x to y."""
    return ctx.p - intersect_dim(ctx, x, y)


def is_transverse(ctx, x, xi):
    _check_dim(ctx, x, ctx.p, "x")
    _check_dim(ctx, xi, ctx.q, "xi")
    return rank_with_tol(np.hstack([x.basis, xi.basis]), ctx.tol) == ctx.n


def _principal_frame(ctx, x, y):
    """Principal vectors of (x, y) ordered by decreasing cosine.

    Returns ``(v0, u, w, cos_last)`` where ``v0`` spans the first p-1
    principal vectors of x, ``u`` is the last one and ``w`` is the unit
    direction of the matching y principal vector orthogonal to x.
    """
    X, Y = x.basis, y.basis
    U, s, Vt = np.linalg.svd(X.T @ Y)
    v0 = X @ U[:, : ctx.p - 1]
    u = X @ U[:, ctx.p - 1]
    yv = Y @ Vt[ctx.p - 1, :]
    w = yv - X @ (X.T @ yv)
    w = w / np.linalg.norm(w)
    return v0, u, w, float(np.clip(s[ctx.p - 1], -1.0, 1.0))


def photon_through(ctx, x, y):
    """The unique photon through two distinct p-planes, or None.

    The photon exists iff the arithmetic distance is 1; then
    ``v0 = x ∩ y`` and ``v1 = x + y``.
    """
    pp, _ = param_through(ctx, x, y)
    return None if pp is None else pp.photon


def param_through(ctx, x, y):
    """Parametrization of the photon through x and y with x at angle 0.

    Returns ``(pp, theta_y)`` with ``theta_y`` in (0, pi) the angle of y, or
    ``(None, None)`` when x and y are not on a common photon.
    """
    d = arithmetic_distance(ctx, x, y)
    if d == 0:
        raise IdenticalPlanes("x and y span the same plane")
    if d > 1:
        return None, None
    v0, u, w, c = _principal_frame(ctx, x, y)
    pp = ProjParam(v0, u, w)
    # y's principal vector is c*u + sqrt(1-c^2)*w
    theta_y = float(np.arctan2(np.sqrt(max(0.0, 1.0 - c * c)), c) % np.pi)
    if ctx.p > 1:
        v0p = Plane.from_orthonormal(v0)
    else:
        v0p = Plane.from_orthonormal(np.zeros((ctx.n, 0)))
    pp._photon.append(Photon(v0p, Plane.from_orthonormal(np.column_stack([v0, u, w]))))
    return pp, theta_y


def param_eval(pp, t):
    """The plane at parameter ``t`` (a float or ``INF``)."""
    if t is INF:
        return Plane(np.column_stack([pp.v0, pp.w]))
    return Plane(np.column_stack([pp.v0, pp.u + float(t) * pp.w]))


def plucker(ctx, x):
    """Normalized vector of p x p minors in lexicographic row-subset order.

    The sign is fixed by making the first nonzero coordinate positive.
    """
    _check_dim(ctx, x, ctx.p, "x")
    return plucker_coords(x.basis, ctx.tol)


def plucker_coords(basis, tol=DEFAULT_TOL):
    basis = np.asarray(basis, dtype=float)
    n, p = basis.shape
    rows = np.array(list(combinations(range(n), p)))
    minors = np.linalg.det(basis[rows, :])
    norm = np.linalg.norm(minors)
    if norm == 0:
        raise ValidationError("degenerate basis has no Plücker image")
    minors = minors / norm
    nz = np.flatnonzero(np.abs(minors) > tol.rank_rel)
    if nz.size and minors[nz[0]] < 0:
        minors = -minors
    return minors


def plucker_index(n, p):
    """Row subsets (0-based) labelling the Plücker coordinates."""
    return list(combinations(range(n), p))


def photon_collinearity_residual(ctx, photon):
    """Third singular value of the Plücker images at t = 0, 1, ∞.

    Zero means the three images span a 2-dimensional subspace, i.e. they are
    collinear in projective space.
    """
    pp = ProjParam.from_photon(photon)
    rows = [plucker(ctx, param_eval(pp, t)) for t in (0.0, 1.0, INF)]
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return float(s[2]) if s.size > 2 else 0.0


def _homog(t):
    if t is INF:
        return (0.0, 1.0)
    return (1.0, float(t))


def _bracket(a, b):
    return a[0] * b[1] - a[1] * b[0]


def cross_ratio_proj(a, b, c, d):
    """Cross ratio ((c-a)(d-b)) / ((b-a)(d-c)) on R ∪ {∞}.

    Normalized so that ``cross_ratio_proj(0, 1, t, INF) == t``. Returns ``INF``
    when the denominator vanishes.
    """
    pts = [_homog(v) for v in (a, b, c, d)]
    distinct = []
    for pt in pts:
        if not any(abs(_bracket(pt, other)) == 0.0 for other in distinct):
            distinct.append(pt)
    if len(distinct) < 3:
        raise DegenerateQuadruple("need at least three distinct points", points=[ext_to_json(v) for v in (a, b, c, d)])
    A, B, C, D = pts
    num = _bracket(A, C) * _bracket(B, D)
    den = _bracket(A, B) * _bracket(C, D)
    if den == 0.0:
        return INF
    return num / den


def cross_ratio_angles(a, b, c, d):
    """Cross ratio of four points given by angles (homogeneous [cos: sin])."""
    return np.sin(c - a) * np.sin(d - b) / (np.sin(b - a) * np.sin(d - c))


def flag_det(x, xi):
    return float(np.linalg.det(np.hstack([x.basis, xi.basis])))


def cross_ratio_flag(ctx, xi, x, y, eta):
    """Flag cross ratio det[x|xi] det[y|eta] / (det[y|xi] det[x|eta])."""
    _check_dim(ctx, x, ctx.p, "x")
    _check_dim(ctx, y, ctx.p, "y")
    _check_dim(ctx, xi, ctx.q, "xi")
    _check_dim(ctx, eta, ctx.q, "eta")
    dets = {}
    for pname, pl in (("x", x), ("y", y)):
        for dname, du in (("xi", xi), ("eta", eta)):
            value = flag_det(pl, du)
            if abs(value) <= ctx.tol.rank_rel:
                raise NonTransverseConfiguration(f"{pname} is not transverse to {dname}", pair=[pname, dname])
            dets[pname, dname] = value
    return dets["x", "xi"] * dets["y", "eta"] / (dets["y", "xi"] * dets["x", "eta"])


def random_plane(n, k, rng):
    rng = make_rng(rng)
    Q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return Plane.from_orthonormal(Q)


def random_photon(ctx, rng):
    """A random photon: random (p+1)-plane v1 and random hyperplane v0 in it."""
    rng = make_rng(rng)
    v1 = random_plane(ctx.n, ctx.p + 1, rng)
    if ctx.p == 1:
        return Photon(Plane.from_orthonormal(np.zeros((ctx.n, 0))), v1)
    coeffs, _ = np.linalg.qr(rng.standard_normal((ctx.p + 1, ctx.p - 1)))
    return Photon(Plane.from_orthonormal(v1.basis @ coeffs), v1)


def random_photon_through(ctx, x, rng):
    """A random photon through the p-plane ``x``, parametrized with x at t=0."""
    rng = make_rng(rng)
    X = x.basis
    if ctx.p > 1:
        coeffs, _ = np.linalg.qr(rng.standard_normal((ctx.p, ctx.p)))
        v0, u = X @ coeffs[:, : ctx.p - 1], X @ coeffs[:, ctx.p - 1]
    else:
        v0, u = np.zeros((ctx.n, 0)), X[:, 0]
    w = rng.standard_normal(ctx.n)
    w = w - X @ (X.T @ w)
    w = w / np.linalg.norm(w)
    return ProjParam(v0, u, w)
