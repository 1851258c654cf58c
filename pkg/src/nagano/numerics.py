"""Shared numerical primitives: tolerances, rank decisions, bisection, RNG and
a derivative-free minimizer."""

from dataclasses import dataclass, replace

import numpy as np
from scipy import optimize

from .errors import NoSignChange, ValidationError


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used throughout the package.

    Attributes:
        rank_rel: singular values below ``rank_rel * s_max`` count as zero.
        geom_abs: absolute tolerance for geometric decisions (membership
            margins, root brackets).
        metric_abs: absolute tolerance when comparing metric values.
    """

    rank_rel: float = 1e-10
    geom_abs: float = 1e-12
    metric_abs: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "geom_abs", "metric_abs"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"tolerance {name} must be positive", **{name: value})
        if self.rank_rel > 1e-6:
            raise ValidationError("rank_rel must be <= 1e-6", rank_rel=self.rank_rel)

    def with_overrides(self, **kwargs):
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        return replace(self, **kwargs)


DEFAULT_TOL = Tolerance()


def singular_values(M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)


def rank_with_tol(M, tol=DEFAULT_TOL):
    """Number of singular values above ``tol.rank_rel`` times the largest one."""
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        raise ValidationError("rank of an empty matrix is undefined")
    s = singular_values(M)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel * s[0]))


def bracketed_root(f, lo, hi, tol=DEFAULT_TOL, max_iter=200):
    """Bisection for a sign change of ``f`` on ``[lo, hi]``.

    Stops when ``|f(t)| <= tol.geom_abs`` or the bracket is narrower than
    ``tol.geom_abs``. The returned point always lies in the closed bracket.
    """
    lo, hi = float(lo), float(hi)
    if lo > hi:
        lo, hi = hi, lo
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoSignChange("f has the same sign at both ends", lo=lo, hi=hi, f_lo=float(f_lo), f_hi=float(f_hi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= tol.geom_abs or (hi - lo) <= tol.geom_abs:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def make_rng(seed=0):
    """Counter-based generator (Philox) keyed by a 64-bit seed."""
    if isinstance(seed, np.random.Generator):
        return seed
    if seed is None:
        seed = 0
    return np.random.Generator(np.random.Philox(int(seed) % 2**64))


def spawn_rngs(seed, count):
    """Independent child generators for parallel batches over one seed."""
    children = np.random.SeedSequence(int(seed) % 2**64).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def minimize(f, x0, budget=500, rng=None, restarts=3, step=0.1):
    """Nelder-Mead descent with random restarts.

    The first run starts from an axis-aligned simplex around ``x0``; each
    restart re-seeds a randomly oriented simplex around the best point so far.
    Non-finite objective values are treated as ``+inf``. The returned value
    never exceeds ``f(x0)``.

    Returns:
        ``(x_best, f_best)``
    """
    x0 = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    rng = make_rng(0) if rng is None else make_rng(rng)
    dim = x0.size
    evals = 0

    def wrapped(x):
        nonlocal evals
        evals += 1
        value = f(x)
        return float(value) if np.isfinite(value) else np.inf

    best_x, best_f = x0, wrapped(x0)
    if dim == 0 or budget <= 1:
        return best_x, best_f

    runs = restarts + 1
    for run in range(runs):
        remaining = budget - evals
        if remaining <= dim + 1:
            break
        share = max(dim + 2, remaining // (runs - run))
        scale = step * max(1.0, float(np.max(np.abs(best_x))))
        if run == 0:
            simplex = np.vstack([best_x, best_x + scale * np.eye(dim)])
        else:
            basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
            radius = scale * 2.0 ** (-run + 1)
            simplex = np.vstack([best_x, best_x + radius * basis.T])
        res = optimize.minimize(
            wrapped,
            best_x,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "maxfev": share,
                "xatol": 1e-13,
                "fatol": 1e-14,
                "adaptive": dim > 4,
            },
        )
        if res.fun < best_f:
            best_x, best_f = np.asarray(res.x, dtype=float), float(res.fun)
    return best_x, best_f
