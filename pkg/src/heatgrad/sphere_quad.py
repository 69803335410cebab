"""Quadrature on intervals and on the unit sphere S^{n-1}.

Three layers:

* :func:`quad_1d` -- adaptive Gauss-Kronrod (7/15) on a finite interval.
  Nodes are interior to every panel, so integrable endpoint behaviour is
  never sampled directly.
* :func:`integrate_zonal` -- integrands depending on ``(e_sigma, e)`` only.
* :func:`integrate_biaxial` -- integrands depending on ``s = (e_sigma, e_n)``
  and ``w = (e_sigma, z)``, where ``z = cos(theta) e_n + sin(theta) e_perp``.
  Rotations about ``e_n`` reduce every such integral to two angles.

A Monte Carlo estimator over uniformly sampled sphere points is provided as
an independent oracle for the deterministic rules.
"""

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .errors import ConvergenceError, DomainError
from .specfun import sphere_area


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets shared by the quadrature routines.

    ``max_subdivisions`` bounds the number of Gauss-Kronrod panels in
    :func:`quad_1d`; ``max_nodes`` bounds the per-axis order of the tensor
    Gauss rules used on the sphere; ``mc_samples`` and ``seed`` drive the
    Monte Carlo cross-checks.
    """

    abs_tol: float = 1e-14
    rel_tol: float = 1e-11
    max_subdivisions: int = 4000
    mc_samples: int = 100_000
    max_nodes: int = 512
    seed: int = 0

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0 or self.abs_tol + self.rel_tol <= 0:
            raise DomainError("need abs_tol, rel_tol >= 0 with abs_tol + rel_tol > 0")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")
        if self.mc_samples < 1 or self.max_nodes < 2:
            raise DomainError("mc_samples must be >= 1 and max_nodes >= 2")

    def tolerance(self, value):
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadratureConfig()

# tensor rules on the sphere are not trusted below this relative accuracy
SPHERE_REL_FLOOR = 1e-12
MAX_TS_LEVEL = 7
# tanh-sinh weights at |t| = 3.2 are below 1e-18 of the largest weight
TS_HALF_WIDTH = 3.2

# Gauss-Kronrod 7/15 nodes and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_KX = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes
_GW = np.zeros(15)
_GW[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk_panels(f, lo, hi):
    """Apply the 15-point Kronrod and embedded Gauss rules to many panels."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _KX[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError("integrand returned a non-finite value at a quadrature node")
    k = half * (fx @ _KW)
    g = half * (fx @ _GW)
    return k, np.abs(k - g)


def quad_1d(f, lo, hi, cfg=None, initial_panels=8, breakpoints=()):
    """Adaptive Gauss-Kronrod quadrature of a vectorised ``f`` on ``[lo, hi]``.

    Parameters
    ----------
    f : callable
        Maps a 1-D array of abscissae to an array of the same shape.
    lo, hi : float
        Finite limits, ``lo < hi``.
    cfg : QuadratureConfig, optional
    initial_panels : int
        Number of equal panels in the first pass.
    breakpoints : sequence of float
        Extra panel boundaries, e.g. at known kinks of the integrand.

    Returns
    -------
    value, err_est : float
        ``err_est`` is the sum of the panelwise ``|K15 - G7|`` differences.

    Raises
    ------
    ConvergenceError
        When ``cfg.max_subdivisions`` panels do not meet the tolerance;
        the best estimate is attached to the exception.
    """
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError(f"quad_1d needs finite lo < hi, got [{lo}, {hi}]")
    edges = np.linspace(lo, hi, max(1, int(initial_panels)) + 1)
    extra = [b for b in breakpoints if lo < b < hi]
    if extra:
        edges = np.unique(np.concatenate([edges, extra]))
    k, e = _gk_panels(f, edges[:-1], edges[1:])
    heap = [(-ei, a, b, ki) for ki, ei, a, b in zip(k, e, edges[:-1], edges[1:])]
    heapq.heapify(heap)
    total = float(np.sum(k))
    err = float(np.sum(e))
    while err > cfg.tolerance(total):
        if len(heap) >= cfg.max_subdivisions:
            raise ConvergenceError(
                f"quad_1d exhausted {cfg.max_subdivisions} panels "
                f"(estimate {total!r}, error {err:.3e})", total, err)
        # bisect the handful of worst panels in one vectorised call
        batch = [heapq.heappop(heap) for _ in range(min(len(heap), 8))]
        a = np.array([p[1] for p in batch])
        b = np.array([p[2] for p in batch])
        m = 0.5 * (a + b)
        if np.any((m <= a) | (m >= b)):
            raise ConvergenceError("quad_1d panels reached floating-point resolution",
                                   total, err)
        k2, e2 = _gk_panels(f, np.concatenate([a, m]), np.concatenate([m, b]))
        for p in batch:
            total -= p[3]
            err += p[0]
        nb = len(batch)
        for i in range(nb):
            for j, (pa, pb) in ((i, (a[i], m[i])), (i + nb, (m[i], b[i]))):
                heapq.heappush(heap, (-e2[j], pa, pb, k2[j]))
        total += float(np.sum(k2))
        err += float(np.sum(e2))
    # recompute sums from the panels to shed accumulated rounding
    total = math.fsum(p[3] for p in heap)
    err = math.fsum(-p[0] for p in heap)
    return total, err


def integrate_zonal(F, n, cfg=None, full_output=False):
    """Integrate ``F((e_sigma, e))`` over S^{n-1} for an even ``F``.

    Uses ``2 omega_{n-1} int_0^{pi/2} F(cos t) sin^{n-2} t dt``; the
    result does not depend on the axis ``e``.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"integrate_zonal needs n >= 2, got {n!r}")
    n = int(n)
    pref = 2.0 * sphere_area(n - 1)

    def integrand(t):
        return F(np.cos(t)) * np.sin(t) ** (n - 2)

    val, err = quad_1d(integrand, 0.0, 0.5 * math.pi, cfg)
    val, err = pref * val, pref * err
    return (val, err) if full_output else val


@lru_cache(maxsize=256)
def _jacobi(order, alpha, beta):
    x, w = roots_jacobi(order, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=128)
def z_polar_rule(n, order_w, order_c, w_power):
    """θ-independent node set for bi-axial integrals with polar axis ``z``.

    Returns arrays ``(w, rc, weight)`` such that, for any ``theta``,

        sum weight * G(cos(theta) * w + sin(theta) * rc, w)

    approximates ``int_{S^{n-1}} G(s, w) |w|^w_power d sigma``.  The factor
    ``|w|^w_power (1 - w^2)^{(n-3)/2}`` is absorbed into Gauss-Jacobi weights
    on each half ``w > 0`` and ``w < 0``, so kinks at ``w = 0`` cost nothing.
    """
    a = 0.5 * (n - 3)
    x, wx = _jacobi(order_w, a, float(w_power))
    wpos = 0.5 * (1.0 + x)
    # (1 - w)^a w^p dw = 2^{-(a + p + 1)} (1 - x)^a (1 + x)^p dx
    ww = wx * 2.0 ** -(a + w_power + 1.0) * (1.0 + wpos) ** a
    r = np.sqrt(np.maximum(0.0, 1.0 - wpos * wpos))
    if n == 2:
        c = np.array([-1.0, 1.0])
        wc = np.array([1.0, 1.0])
    else:
        b = 0.5 * (n - 4)
        c, wc = _jacobi(order_c, b, b)
        wc = wc * sphere_area(n - 2)
    w_half = np.repeat(wpos, c.size)
    rc_half = np.outer(r, c).ravel()
    wt_half = np.outer(ww, wc).ravel()
    w = np.concatenate([w_half, -w_half])
    rc = np.concatenate([rc_half, rc_half])
    wt = np.concatenate([wt_half, wt_half])
    for arr in (w, rc, wt):
        arr.setflags(write=False)
    return w, rc, wt


@lru_cache(maxsize=32)
def tanh_sinh_base(level):
    """Tanh-sinh rule on [0, 1] with step ``h = 2**-level``.

    Returns ``(pos, weight)``.  Nodes crowd both ends double-exponentially;
    the integrands handled here are bounded there, so positions are kept
    as plain fractions of the interval.
    """
    h = 2.0 ** -level
    kmax = int(math.ceil(TS_HALF_WIDTH / h))
    t = np.arange(-kmax, kmax + 1) * h
    u = 0.5 * math.pi * np.sinh(np.abs(t))
    e = np.exp(-2.0 * u)
    small = e / (1.0 + e)  # (1 - tanh(u)) / 2
    pos = np.where(t > 0, 1.0 - small, small)
    # dx/dt on [0, 1] is (pi/4) cosh(t) / cosh(u)^2
    weight = h * math.pi * np.cosh(t) * e / (1.0 + e) ** 2
    pos.setflags(write=False)
    weight.setflags(write=False)
    return pos, weight


def _ts_nodes(a, b, level):
    """Tanh-sinh nodes and weights on ``[a, b]`` for broadcastable arrays."""
    pos, weight = tanh_sinh_base(level)
    a = np.asarray(a, dtype=float)[..., None]
    L = np.asarray(b, dtype=float)[..., None] - a
    return a + L * pos, L * weight


def _split_nodes(breaks, level):
    """Concatenate tanh-sinh rules over consecutive pieces of ``breaks``.

    ``breaks`` has shape ``(..., m + 1)``; the result has ``m`` pieces along
    the last axis.
    """
    xs, ws = [], []
    for j in range(breaks.shape[-1] - 1):
        x, w = _ts_nodes(breaks[..., j], breaks[..., j + 1], level)
        xs.append(x)
        ws.append(w)
    return np.concatenate(xs, axis=-1), np.concatenate(ws, axis=-1)


def _int_power(x, k):
    out = x.copy() if k else np.ones_like(x)
    for _ in range(k - 1):
        out *= x
    return out


def biaxial_split_nodes(n, thetas, level, symmetric=False):
    """Node arrays for bi-axial integrals with polar axis ``e_n``.

    All non-smooth loci of ``G(s) |w|^beta`` sit on piece boundaries:
    the equator ``s = 0``, the kink ``w = 0`` inside the azimuthal
    integral, and the tangency latitudes ``pi/2 +- theta`` where the
    great circle ``w = 0`` touches a parallel.  Each piece gets a
    tanh-sinh rule.

    Returns ``(s, outer_w, w, inner_w)`` with shapes ``(T, Ko)``,
    ``(T, Ko)``, ``(T, Ko, Ki)``, ``(T, Ko, Ki)`` so that

        sum_o outer_w * sum_i inner_w * G(s[..., None], w) |w|^beta

    approximates the sphere integral for each theta.  ``symmetric=True``
    folds the southern hemisphere onto the northern one, valid when
    ``G(-s, -w) = G(s, w)``.
    """
    th = np.atleast_1d(np.asarray(thetas, dtype=float))
    T = th.size
    if n == 2:
        pts = np.mod(np.stack([np.full(T, 0.5 * math.pi), np.full(T, 1.5 * math.pi),
                               th + 0.5 * math.pi, th + 1.5 * math.pi], axis=-1), 2 * math.pi)
        pts = np.sort(pts, axis=-1)
        breaks = np.concatenate([pts, pts[:, :1] + 2 * math.pi], axis=-1)
        phi, wt = _split_nodes(breaks, level)
        s = np.cos(phi)
        w = np.cos(phi - th[:, None])
        return s, wt, w[..., None], np.ones_like(w)[..., None]

    tp = np.minimum(th, math.pi - th)
    half = 0.5 * math.pi
    if symmetric:
        breaks = np.stack([np.zeros(T), half - tp, np.full(T, half)], axis=-1)
    else:
        breaks = np.stack([np.zeros(T), half - tp, np.full(T, half),
                           half + tp, np.full(T, math.pi)], axis=-1)
    t1, w1 = _split_nodes(breaks, level)
    s = np.cos(t1)
    st1 = np.sin(t1)
    outer = w1 * _int_power(st1, n - 2) * sphere_area(n - 2)
    if symmetric:
        outer = 2.0 * outer
    A = np.cos(th)[:, None] * s
    B = np.sin(th)[:, None] * st1
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(B > 0, -A / np.where(B > 0, B, 1.0), 2.0)
    kink = np.where(np.abs(ratio) < 1.0, np.arccos(np.clip(ratio, -1.0, 1.0)), half)
    ib = np.stack([np.zeros_like(kink), kink, np.full_like(kink, math.pi)], axis=-1)
    t2, w2 = _split_nodes(ib, level)
    w = np.cos(t2)
    w *= B[..., None]
    w += A[..., None]
    inner = w2
    if n > 3:
        inner = w2 * _int_power(np.sin(t2), n - 3)
    return s, outer, w, inner


def _biaxial_en(G, n, theta, level, w_power):
    s, outer, w, inner = biaxial_split_nodes(n, [theta], level)
    vals = G(s[..., None], w)
    if w_power != 0:
        vals = vals * np.abs(w) ** w_power
    return float(np.einsum("to,toi,toi->", outer, inner, np.broadcast_to(vals, w.shape)))


def _biaxial_z(G, n, theta, order, w_power):
    w, rc, wt = z_polar_rule(n, order, order, float(w_power))
    s = math.cos(theta) * w + math.sin(theta) * rc
    return float(np.dot(wt, G(np.clip(s, -1.0, 1.0), w)))


def integrate_biaxial(G, n, theta_z, cfg=None, *, w_power=0.0, polar=None,
                      full_output=False, min_order=8):
    """Integrate ``G(s, w) |w|^w_power`` over S^{n-1}.

    Here ``s = (e_sigma, e_n)`` and ``w = (e_sigma, z)`` with
    ``z = cos(theta_z) e_n + sin(theta_z) e_perp``.  ``G`` must accept
    broadcastable arrays.

    ``polar='e_n'`` (the default) uses spherical angles about ``e_n``,
    ``omega_{n-2} int int G sin^{n-2} t1 sin^{n-3} t2``, split at the
    equator, the tangency latitudes and the ``w = 0`` kink, with a
    tanh-sinh rule on every piece (see :func:`biaxial_split_nodes`).  The
    step is halved until two estimates agree.  ``polar='z'`` takes ``z``
    as the polar axis and folds ``|w|^w_power`` into Gauss-Jacobi weights;
    its order is doubled instead.  The two schemes share no nodes, which
    makes them useful cross-checks of each other.

    The difference of the last two estimates is the error estimate.
    """
    cfg = cfg or DEFAULT_CONFIG
    if int(n) != n or n < 2:
        raise DomainError(f"integrate_biaxial needs n >= 2, got {n!r}")
    n = int(n)
    # only the angle between z and e_n matters (rotation or reflection
    # about the e_n axis), so fold theta into [0, pi]
    theta_z = abs(math.remainder(float(theta_z), 2 * math.pi))
    if polar is None:
        polar = "e_n"
    if polar not in ("z", "e_n"):
        raise DomainError(f"unknown polar axis {polar!r}")
    if polar == "z":
        rule, order, grow = _biaxial_z, int(min_order), (lambda o: 2 * o)
        too_big = (lambda o: o > cfg.max_nodes)
    else:
        rule, order, grow = _biaxial_en, 2, (lambda o: o + 1)
        too_big = (lambda o: o > MAX_TS_LEVEL)
    tol_floor = SPHERE_REL_FLOOR
    prev = rule(G, n, theta_z, order, w_power)
    err = math.inf
    while True:
        order = grow(order)
        if too_big(order):
            raise ConvergenceError(
                f"integrate_biaxial ({polar}) did not converge before its node budget",
                prev, err)
        cur = rule(G, n, theta_z, order, w_power)
        err = abs(cur - prev)
        if err <= max(cfg.tolerance(cur), tol_floor * abs(cur)):
            return (cur, err) if full_output else cur
        prev = cur


def sample_sphere(n, size, rng):
    """Uniform points on S^{n-1}: normalised standard Gaussian vectors."""
    g = rng.standard_normal((size, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def mc_integrate_sphere(func, n, samples, rng, chunk=200_000):
    """Monte Carlo estimate of ``int_{S^{n-1}} func(points) d sigma``.

    Returns ``(value, standard_error)``.
    """
    area = sphere_area(n)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        vals = np.asarray(func(sample_sphere(n, m, rng)), dtype=float)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        done += m
    mean = total / samples
    var = max(0.0, total_sq / samples - mean * mean)
    return area * mean, area * math.sqrt(var / samples)


def mc_integrate_biaxial(G, n, theta_z, samples, rng, w_power=0.0):
    """Monte Carlo counterpart of :func:`integrate_biaxial`."""
    z = np.zeros(n)
    z[-1] = math.cos(theta_z)
    z[0] += math.sin(theta_z)

    def func(pts):
        s = pts[:, -1]
        w = pts @ z
        return G(s, w) * np.abs(w) ** w_power

    return mc_integrate_sphere(func, n, samples, rng)
