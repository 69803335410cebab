"""Heat layer potentials on the half-space and the inequality harness.

The boundary is the hyperplane ``x_n = 0``; boundary data live on the strip
``R^{n-1} x (0, t)``.  With ``sigma = t - tau`` and ``r = |x - y|`` every
potential here is a space-time integral of

    A(y) sigma^{-m} exp(-r^2 / (4 a^2 sigma)) f(y', tau)

for a polynomial prefactor ``A`` and an exponent ``m``.  Space is handled
in polar coordinates around ``x'``.  Time is handled by the substitution
``s = r^2 / (4 a^2 sigma)``, which turns the steep ``tau -> t`` end into
the tail ``s^{m-2} e^{-s}``.

Spatial quadrature is implemented for ``n = 2`` and ``n = 3``.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from .coefficients import (DIRICHLET, KERNEL, NEUMANN, Exponent, HeatPoint,
                           sharp_coefficient)
from .errors import DomainError

SMOOTH = "smooth"
SIGN_PATTERN = "sign_pattern"

_GL_ORDER = 8


@lru_cache(maxsize=16)
def _gl(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _panel_rule(breaks, order):
    """Composite Gauss-Legendre on consecutive ``breaks`` (last axis)."""
    x, w = _gl(order)
    breaks = np.asarray(breaks, dtype=float)
    lo = breaks[..., :-1, None]
    width = np.diff(breaks, axis=-1)[..., None]
    nodes = (lo + width * x).reshape(breaks.shape[:-1] + (-1,))
    weights = (width * w).reshape(breaks.shape[:-1] + (-1,))
    return nodes, weights


def _graded_breaks(lo, hi, h0, hmax):
    """Breakpoints on ``[lo, hi]`` starting at width ``h0`` near ``lo``,
    growing with the distance from the origin and capped at ``hmax``."""
    out = [lo]
    x = lo
    while x < hi:
        step = min(max(h0, 0.5 * x), hmax)
        x = min(x + step, hi)
        if hi - x < 0.25 * step:
            x = hi
        out.append(x)
    return np.array(out)


@dataclass(frozen=True)
class BoundaryData:
    """Boundary function ``f(y', tau)`` on the strip ``R^{n-1} x (0, t)``.

    ``func(y, tau)`` must broadcast: ``y`` has a trailing axis of length
    ``n - 1`` and ``tau`` matches ``y.shape[:-1]``.  Values outside the disc
    of radius ``support_radius`` about ``center`` are forced to zero by
    :meth:`eval`.

    ``length_scale`` is the smallest spatial feature size and drives the
    quadrature resolution.  ``radial`` declares rotational symmetry about
    ``center`` (fewer angular nodes).  ``sup_norm`` may carry the exact
    supremum, used for ``p = inf``.  ``spec`` records how the object was
    built, for serialisation.
    """

    n: int
    func: Callable
    center: tuple
    support_radius: float
    smoothness: str = SMOOTH
    length_scale: float = 1.0
    radial: bool = False
    sup_norm: Optional[float] = None
    spec: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n not in (2, 3):
            raise DomainError(f"boundary data are implemented for n in (2, 3), got {self.n!r}")
        c = tuple(float(v) for v in np.atleast_1d(self.center))
        if len(c) != self.n - 1:
            raise DomainError(f"center must have {self.n - 1} coordinates")
        object.__setattr__(self, "center", c)
        if not (self.support_radius > 0 and math.isfinite(self.support_radius)):
            raise DomainError("support_radius must be positive and finite")
        if not self.length_scale > 0:
            raise DomainError("length_scale must be positive")
        if self.smoothness not in (SMOOTH, SIGN_PATTERN):
            raise DomainError(f"unknown smoothness tag {self.smoothness!r}")

    def eval(self, y, tau):
        y = np.asarray(y, dtype=float)
        tau = np.asarray(tau, dtype=float)
        d2 = np.sum((y - np.array(self.center)) ** 2, axis=-1)
        vals = np.asarray(self.func(y, tau), dtype=float)
        return np.where(d2 <= self.support_radius ** 2, vals, 0.0)

    def __call__(self, y, tau):
        return self.eval(y, tau)

    def scaled(self, factor):
        """Data multiplied by ``factor``, keeping the support."""
        f = self.func
        return BoundaryData(self.n, lambda y, tau: factor * f(y, tau), self.center,
                            self.support_radius, self.smoothness, self.length_scale,
                            self.radial, None if self.sup_norm is None else abs(factor) * self.sup_norm,
                            {"kind": "scaled", "factor": factor, "of": self.spec})


def combine(alpha, f, beta, g):
    """The data ``alpha f + beta g`` on the union of both supports."""
    if f.n != g.n:
        raise DomainError("cannot combine data of different dimensions")
    cf, cg = np.array(f.center), np.array(g.center)
    center = 0.5 * (cf + cg)
    dist = float(np.linalg.norm(cf - cg))
    radius = 0.5 * dist + max(f.support_radius, g.support_radius)

    def func(y, tau):
        return alpha * f.eval(y, tau) + beta * g.eval(y, tau)

    smooth = SMOOTH if f.smoothness == g.smoothness == SMOOTH else SIGN_PATTERN
    return BoundaryData(f.n, func, tuple(center), radius, smooth,
                        min(f.length_scale, g.length_scale), False, None,
                        {"kind": "combination", "terms": [[alpha, f.spec], [beta, g.spec]]})


# -- constructors ------------------------------------------------------------

def constant_data(n, value=1.0, radius=1.0, center=None):
    """``f = value`` on the disc of the given radius, for all ``tau``."""
    center = (0.0,) * (n - 1) if center is None else center
    value = float(value)

    def func(y, tau):
        return np.full(np.broadcast_shapes(y.shape[:-1], np.shape(tau)), value)

    return BoundaryData(n, func, center, radius, SMOOTH, radius, True, abs(value),
                        {"kind": "constant", "value": value, "radius": radius,
                         "center": list(center)})


def gaussian_data(n, amplitude=1.0, width=1.0, center=None, cutoff=1e-16):
    """Gaussian bump ``amplitude * exp(-|y' - center|^2 / width^2)``.

    The declared support ends where the bump drops below ``cutoff`` times
    its peak.
    """
    center = (0.0,) * (n - 1) if center is None else center
    c = np.array(center, dtype=float)
    amplitude, width = float(amplitude), float(width)
    radius = width * math.sqrt(-math.log(cutoff))

    def func(y, tau):
        g = amplitude * np.exp(-np.sum((y - c) ** 2, axis=-1) / width ** 2)
        return np.broadcast_to(g, np.broadcast_shapes(g.shape, np.shape(tau)))

    return BoundaryData(n, func, center, radius, SMOOTH, width, True, abs(amplitude),
                        {"kind": "gaussian", "amplitude": amplitude, "width": width,
                         "center": list(center)})


def sign_pattern_data(n, table, cell, t_end, origin=None):
    """Piecewise-constant data from a table of values.

    ``table`` has shape ``(time_bins, *space_cells)`` with ``n - 1`` space
    axes; space cells are squares of side ``cell`` starting at ``origin``
    and time bins split ``(0, t_end)`` evenly.
    """
    table = np.asarray(table, dtype=float)
    if table.ndim != n:
        raise DomainError(f"table must have {n} axes (time + {n - 1} space)")
    origin = np.zeros(n - 1) if origin is None else np.asarray(origin, dtype=float)
    extent = np.array(table.shape[1:]) * cell
    center = origin + 0.5 * extent
    radius = 0.5 * float(np.linalg.norm(extent))
    nt = table.shape[0]

    def func(y, tau):
        shape = np.broadcast_shapes(y.shape[:-1], np.shape(tau))
        idx = np.floor((y - origin) / cell).astype(int)
        inside = np.broadcast_to(np.all((idx >= 0) & (idx < np.array(table.shape[1:])), axis=-1), shape)
        it = np.clip(np.floor(np.asarray(tau) / t_end * nt).astype(int), 0, nt - 1)
        idx = np.clip(idx, 0, np.array(table.shape[1:]) - 1)
        keys = (np.broadcast_to(it, inside.shape),) + tuple(
            np.broadcast_to(idx[..., k], inside.shape) for k in range(n - 1))
        return np.where(inside, table[keys], 0.0)

    return BoundaryData(n, func, tuple(center), radius, SIGN_PATTERN, cell, False,
                        float(np.max(np.abs(table))) if table.size else 0.0,
                        {"kind": "sign_pattern", "table": table.tolist(), "cell": cell,
                         "t_end": t_end, "origin": origin.tolist()})


def random_smooth_data(n, rng, t, a=1.0, center=None, bumps=4, spread=2.0):
    """Sum of Gaussian bumps with smooth random time profiles.

    Bump centres fall within ``spread * a sqrt(t)`` of ``center`` and
    widths range over ``[0.3, 1] a sqrt(t)``.  Each bump is multiplied by
    ``1 + b sin(w tau + phase)`` with ``|b| < 1``.
    """
    center = np.zeros(n - 1) if center is None else np.asarray(center, dtype=float)
    scale = a * math.sqrt(t)
    cs = center + rng.uniform(-spread, spread, size=(bumps, n - 1)) * scale
    ws = rng.uniform(0.3, 1.0, size=bumps) * scale
    amps = rng.normal(size=bumps)
    bs = rng.uniform(-0.9, 0.9, size=bumps)
    freqs = rng.uniform(0.0, 3.0, size=bumps) * math.pi / t
    phases = rng.uniform(0.0, 2 * math.pi, size=bumps)
    cut = math.sqrt(-math.log(1e-16))
    radius = float(np.max(np.linalg.norm(cs - center, axis=-1) + cut * ws))

    def func(y, tau):
        tau = np.asarray(tau, dtype=float)
        total = 0.0
        for k in range(bumps):
            g = np.exp(-np.sum((y - cs[k]) ** 2, axis=-1) / ws[k] ** 2)
            total = total + amps[k] * g * (1.0 + bs[k] * np.sin(freqs[k] * tau + phases[k]))
        return total

    return BoundaryData(n, func, tuple(center), radius, SMOOTH, float(np.min(ws)), False, None,
                        {"kind": "random_smooth", "bumps": bumps})


def data_from_spec(n, spec, t=None):
    """Build :class:`BoundaryData` from the small config vocabulary.

    ``spec`` is a mapping with ``kind`` in ``constant``, ``gaussian``,
    ``sign_pattern`` or ``random_smooth`` plus the constructor's keyword
    arguments (``seed`` for ``random_smooth``).
    """
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "constant":
        return constant_data(n, **spec)
    if kind == "gaussian":
        return gaussian_data(n, **spec)
    if kind == "sign_pattern":
        spec.setdefault("t_end", t)
        return sign_pattern_data(n, **spec)
    if kind == "random_smooth":
        seed = spec.pop("seed", 0)
        spec.setdefault("t", t)
        return random_smooth_data(n, np.random.default_rng(seed), **spec)
    raise DomainError(f"unknown boundary data kind {kind!r}")


# -- norms -------------------------------------------------------------------

def _time_rule(t, resolution):
    """Nodes in ``sigma = t - tau`` graded towards ``sigma = 0``:
    ``sigma = t e^{-u}`` on ``u in [0, 16]`` plus a plain panel below."""
    order = _GL_ORDER * resolution
    u, wu = _panel_rule(np.arange(0.0, 17.0), order)
    sig = t * np.exp(-u)
    w = wu * sig
    tail_x, tail_w = _gl(order)
    lo = t * math.exp(-16.0)
    sig = np.concatenate([sig, lo * tail_x])
    w = np.concatenate([w, lo * tail_w])
    return sig, w


def _space_rule(n, rho_lo, rho_hi, h0, hmax, n_angle, resolution, center):
    """Polar rule about ``center``: points ``(..., n-1)`` and weights."""
    breaks = _graded_breaks(rho_lo, rho_hi, h0, hmax)
    rho, wr = _panel_rule(breaks, _GL_ORDER * resolution)
    center = np.asarray(center, dtype=float)
    if n == 2:
        pts = np.concatenate([center + rho, center - rho])[:, None]
        w = np.concatenate([wr, wr])
        return pts, w
    phi = 2 * math.pi * (np.arange(n_angle) + 0.5) / n_angle
    c, s = np.cos(phi), np.sin(phi)
    pts = np.stack([center[0] + rho[:, None] * c, center[1] + rho[:, None] * s], axis=-1)
    w = (wr * rho)[:, None] * np.full(n_angle, 2 * math.pi / n_angle)
    return pts.reshape(-1, 2), w.ravel()


def _angle_count(data, rho_max, resolution):
    if data.n == 2:
        return 1
    if data.radial:
        return 8 * resolution
    return int(min(512, max(32, math.ceil(4 * math.pi * rho_max / data.length_scale)))) * resolution


def _norm_exponent(p):
    if isinstance(p, Exponent):
        return math.inf if p.is_inf else float(p)
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity"):
            return math.inf
    p = float(p)
    if not p >= 1:
        raise DomainError(f"norm exponent must be >= 1, got {p!r}")
    return p


def lp_strip_norm(data, p, t, cfg=None, resolution=1):
    """``|||f|||_{p,t}``: the ``L^p`` norm of ``f`` over ``R^{n-1} x (0, t)``.

    For ``p = inf`` the declared ``sup_norm`` is used when available and
    otherwise the maximum over the quadrature nodes.  ``p`` may be an
    :class:`Exponent`, a number, ``'inf'``, or 1.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    p_val = _norm_exponent(p)
    R = data.support_radius
    h0 = min(data.length_scale, R) / 4.0
    pts, wx = _space_rule(data.n, 0.0, R, h0, data.length_scale / 2.0,
                          _angle_count(data, R, resolution), resolution, data.center)
    sig, wt = _time_rule(t, resolution)
    tau = t - sig
    if math.isinf(p_val) and data.sup_norm is not None:
        return float(data.sup_norm)
    acc = []
    chunk = max(1, 400_000 // sig.size)
    best = 0.0
    for i in range(0, pts.shape[0], chunk):
        vals = np.abs(data.eval(pts[i:i + chunk, None, :], tau[None, :]))
        if math.isinf(p_val):
            best = max(best, float(np.max(vals)) if vals.size else 0.0)
        else:
            acc.append(float(wx[i:i + chunk] @ (vals ** p_val) @ wt))
    if math.isinf(p_val):
        return best
    total = math.fsum(acc)
    return total ** (1.0 / p_val)


# -- layer integrals ---------------------------------------------------------

def _s_rule(s0, resolution):
    """Nodes ``s >= s0`` for ``int_{s0}^inf s^{m-2} e^{-s} g(s) ds``.

    Geometric panels in ``u = s - s0``, finest near ``u = 0`` at the scale
    ``min(s0, 1)``, up to ``u = 64``.  The panel count is the same for every
    ``s0`` so that rows stack.
    """
    s0 = np.asarray(s0, dtype=float)
    beta = np.minimum(s0, 1.0) / 4.0
    k = 18
    ratio = (64.0 / beta) ** (1.0 / k)
    exps = np.arange(k + 1)
    breaks = np.concatenate([np.zeros(s0.shape + (1,)), beta[..., None] * ratio[..., None] ** exps],
                            axis=-1)
    u, w = _panel_rule(breaks, _GL_ORDER * resolution)
    return s0[..., None] + u, w


def _layer_moments(data, x, t, a, m, resolution=1, n_rho_chunk=16):
    """``I0 = int int sigma^{-m} e^{-r^2/(4a^2 sigma)} f`` and
    ``I1_j = int int (y - x)_j sigma^{-m} e^{-r^2/(4a^2 sigma)} f``."""
    x = np.asarray(x, dtype=float)
    n = data.n
    if x.shape != (n,):
        raise DomainError(f"x must have {n} coordinates")
    xn = float(x[-1])
    if not xn > 0:
        raise DomainError("x_n must be positive")
    if not (t > 0 and math.isfinite(t)):
        raise DomainError("t must be positive and finite")
    if not a > 0:
        raise DomainError("a must be positive")
    xp = x[:-1]
    d = float(np.linalg.norm(xp - np.array(data.center)))
    R = data.support_radius
    rho_lo, rho_hi = max(0.0, d - R), d + R
    diff = a * math.sqrt(t)
    h0 = min(xn, data.length_scale, diff) / 4.0
    hmax = min(data.length_scale, diff) / 2.0
    breaks = _graded_breaks(rho_lo, rho_hi, h0, hmax)
    rho, wr = _panel_rule(breaks, _GL_ORDER * resolution)
    if n == 2:
        dirs = np.array([[1.0], [-1.0]])
        wdir = np.ones(2)
        jac = np.ones_like(rho)
    else:
        radial_here = data.radial and d == 0.0
        na = 8 * resolution if radial_here else _angle_count(data, rho_hi, resolution)
        phi = 2 * math.pi * (np.arange(na) + 0.5) / na
        dirs = np.stack([np.cos(phi), np.sin(phi)], axis=-1)
        wdir = np.full(na, 2 * math.pi / na)
        jac = rho
    r2 = rho ** 2 + xn ** 2
    s0 = r2 / (4 * a * a * t)
    s, ws = _s_rule(s0, resolution)
    # sigma^{-m} d sigma = (4a^2/r^2)^{m-1} s^{m-2} ds
    with np.errstate(under="ignore"):
        ws = ws * s ** (m - 2.0) * np.exp(-s)
    radial_w = wr * jac * (4 * a * a / r2) ** (m - 1.0)
    tau = t * (1.0 - s0[:, None] / s)

    I0 = []
    I1h = [[] for _ in range(n - 1)]
    for i in range(0, rho.size, n_rho_chunk):
        sl = slice(i, i + n_rho_chunk)
        y = xp + rho[sl, None, None] * dirs[None, :, :]
        f = data.eval(y[:, :, None, :], tau[sl, None, :])
        inner = np.einsum("rds,rs->rd", f, ws[sl])
        base = radial_w[sl, None] * inner * wdir
        I0.append(float(np.sum(base)))
        for j in range(n - 1):
            I1h[j].append(float(np.sum(base * (rho[sl, None] * dirs[None, :, j]))))
    i0 = math.fsum(I0)
    i1 = np.array([math.fsum(c) for c in I1h] + [-xn * i0])
    return i0, i1


def _unit(z, n):
    z = np.asarray(z, dtype=float)
    if z.shape != (n,):
        raise DomainError(f"z must have {n} components")
    norm = float(np.linalg.norm(z))
    if abs(norm - 1.0) > 1e-9:
        raise DomainError("z must be a unit vector")
    return z / norm


def _heat_norm(n, a):
    return (4 * a * a * math.pi) ** (-n / 2.0)


def double_layer(data, x, t, a=1.0, cfg=None, resolution=1):
    """Double layer potential solving the Dirichlet problem with data ``f``:

    ``u = x_n (4 a^2 pi)^{-n/2} int_0^t int sigma^{-(n+2)/2} e^{-r^2/(4a^2 sigma)} f dy' dtau``.
    """
    n = data.n
    i0, _ = _layer_moments(data, x, t, a, (n + 2) / 2.0, resolution)
    return float(x[-1]) * _heat_norm(n, a) * i0


def double_layer_constant(x_n, t, a=1.0):
    """Double layer potential of ``f = 1`` on the whole boundary strip,
    ``erfc(x_n / (2 a sqrt(t)))``, which tends to 1 as ``t -> inf``."""
    return math.erfc(x_n / (2 * a * math.sqrt(t)))


def grad_dirichlet(data, x, t, a=1.0, cfg=None, resolution=1):
    """Gradient of ``u / x_n`` for the double layer potential, all components."""
    n = data.n
    _, i1 = _layer_moments(data, x, t, a, (n + 4) / 2.0, resolution)
    return i1 * _heat_norm(n, a) / (2 * a * a)


def grad_ratio_dirichlet(data, x, t, z, a=1.0, cfg=None, resolution=1):
    """``(grad(u / x_n), z)`` through the kernel
    ``(2 pi / (4 a^2 pi)^{(n+2)/2}) (y - x, z) sigma^{-(n+4)/2} e^{-r^2/(4a^2 sigma)}``."""
    return float(grad_dirichlet(data, x, t, a, cfg, resolution) @ _unit(z, data.n))


def single_layer(data, x, t, a=1.0, cfg=None, resolution=1):
    """Single layer potential solving the Neumann problem with data ``g``:

    ``u = -2a^2 (4 a^2 pi)^{-n/2} int_0^t int sigma^{-n/2} e^{-r^2/(4a^2 sigma)} g dy' dtau``.
    """
    n = data.n
    i0, _ = _layer_moments(data, x, t, a, n / 2.0, resolution)
    return -2 * a * a * _heat_norm(n, a) * i0


def grad_single(data, x, t, a=1.0, cfg=None, resolution=1):
    """Gradient of the single layer potential, all components."""
    n = data.n
    _, i1 = _layer_moments(data, x, t, a, (n + 2) / 2.0, resolution)
    return -_heat_norm(n, a) * i1


def grad_single_layer(data, x, t, z, a=1.0, cfg=None, resolution=1):
    """``(grad u, z)`` through the kernel
    ``-(4 a^2 pi)^{-n/2} (y - x, z) sigma^{-(n+2)/2} e^{-r^2/(4a^2 sigma)}``."""
    return float(grad_single(data, x, t, a, cfg, resolution) @ _unit(z, data.n))


def truncation_envelope(radius, t, a=1.0):
    """Gaussian envelope ``exp(-R^2 / (4 a^2 t))`` bounding the relative
    contribution of boundary points farther than ``R`` from ``x'``."""
    return math.exp(-radius ** 2 / (4 * a * a * t))


# -- near-extremal data and the harness --------------------------------------

def _kernel_spec(problem, n, a):
    """``(C, m, sign)`` with directional kernel ``sign * C (y - x, z) sigma^{-m} e^{...}``."""
    if problem == DIRICHLET:
        return _heat_norm(n, a) / (2 * a * a), (n + 4) / 2.0, 1.0
    if problem == NEUMANN:
        return _heat_norm(n, a), (n + 2) / 2.0, -1.0
    raise DomainError(f"unknown problem {problem!r}")


def extremal_boundary_data(problem, pt, ex, x_prime=None, radius=None, time_margin=0.0,
                           theta_star=0.0, resolution=1):
    """Duality extremiser ``sign(K) |K|^{q-1}`` for the gradient kernel ``K``.

    ``K`` is the directional kernel at ``(x, t)`` along
    ``z = cos(theta_star) e_n + sin(theta_star) e_1``.  The data are cut to
    ``|y' - x'| <= radius`` (default ``8 a sqrt(t)``) and to
    ``tau <= t - time_margin``, then scaled to unit ``L^p`` strip norm.
    At ``p = inf`` the result is the sign pattern itself.
    """
    ex = ex if isinstance(ex, Exponent) else Exponent(ex)
    n, a, xn, t = pt.n, pt.a, pt.x_n, pt.t
    if not math.isfinite(t):
        raise DomainError("extremal data need a finite time")
    if n not in (2, 3):
        raise DomainError("extremal data are implemented for n in (2, 3)")
    xp = np.zeros(n - 1) if x_prime is None else np.asarray(x_prime, dtype=float)
    radius = 8 * a * math.sqrt(t) if radius is None else float(radius)
    _, m, _ = _kernel_spec(problem, n, a)
    z = np.zeros(n)
    z[-1] = math.cos(theta_star)
    z[0] += math.sin(theta_star)
    q = float(ex.q)
    # reference: the peak of |K| along the vertical through x'
    sig_ref = xn * xn / (4 * a * a * m)
    log_ref = math.log(xn) - m * math.log(sig_ref) - m
    t_hi = t - time_margin

    def shape(y, tau):
        tau = np.asarray(tau, dtype=float)
        dy = y - xp
        proj = dy @ z[:-1] - xn * z[-1]
        r2 = np.sum(dy * dy, axis=-1) + xn * xn
        sig = t - tau
        with np.errstate(divide="ignore", invalid="ignore", over="ignore", under="ignore"):
            logk = np.log(np.abs(proj)) - m * np.log(sig) - r2 / (4 * a * a * sig) - log_ref
            mag = np.exp((q - 1.0) * logk) if q != 1.0 else np.ones_like(logk)
        out = np.sign(proj) * np.where(sig > 0, mag, 0.0)
        return np.where(tau <= t_hi, out, 0.0)

    ell = min(xn, a * math.sqrt(t)) / 2.0
    radial = theta_star == 0.0
    raw = BoundaryData(n, shape, tuple(xp), radius, SMOOTH, ell, radial,
                       1.0 if ex.is_inf else None)
    if ex.is_inf:
        scale = 1.0
    else:
        scale = 1.0 / lp_strip_norm(raw, ex, t, resolution=resolution)

    def func(y, tau):
        return scale * shape(y, tau)

    return BoundaryData(n, func, tuple(xp), radius, SMOOTH, ell, radial,
                        1.0 if ex.is_inf else None,
                        {"kind": "extremal", "problem": problem, "n": n, "p": str(ex),
                         "a": a, "xn": xn, "t": t, "radius": radius,
                         "time_margin": time_margin, "theta_star": theta_star,
                         "truncation_envelope": truncation_envelope(radius, t, a)})


@lru_cache(maxsize=256)
def _kernel_coefficient(problem, pt, p_str):
    res = sharp_coefficient(problem, pt, Exponent(p_str), normalization=KERNEL) \
        if problem == DIRICHLET else sharp_coefficient(problem, pt, Exponent(p_str))
    return res.value


@dataclass(frozen=True)
class VerifyResult:
    """Outcome of :func:`verify_inequality`; unpacks as ``(lhs, rhs, ratio)``."""

    lhs: float
    rhs: float
    ratio: float
    gradient: tuple
    coefficient: float
    norm: float

    def __iter__(self):
        return iter((self.lhs, self.rhs, self.ratio))


def verify_inequality(problem, pt, ex, data, cfg=None, x_prime=None, resolution=1):
    """Compare ``|gradient|`` with ``coefficient * |||data|||_{p,t}``.

    The gradient is ``grad(u / x_n)`` for the Dirichlet problem and
    ``grad u`` for the Neumann problem at ``x = (x', x_n)``, assembled from
    the directional derivatives along the coordinate frame.  The Dirichlet
    coefficient is taken in the kernel normalisation, which is the one
    that the kernel norm actually produces.
    """
    ex = ex if isinstance(ex, Exponent) else Exponent(ex)
    n = pt.n
    if data.n != n:
        raise DomainError("data dimension does not match the heat point")
    xp = np.zeros(n - 1) if x_prime is None else np.asarray(x_prime, dtype=float)
    x = np.concatenate([xp, [pt.x_n]])
    if problem == DIRICHLET:
        grad = grad_dirichlet(data, x, pt.t, pt.a, cfg, resolution)
    elif problem == NEUMANN:
        grad = grad_single(data, x, pt.t, pt.a, cfg, resolution)
    else:
        raise DomainError(f"unknown problem {problem!r}")
    lhs = float(np.linalg.norm(grad))
    norm = lp_strip_norm(data, ex, pt.t, cfg, resolution)
    coef = _kernel_coefficient(problem, pt, str(ex))
    rhs = coef * norm
    if rhs == 0:
        ratio = 0.0 if lhs == 0 else math.inf
    else:
        ratio = lhs / rhs
    return VerifyResult(lhs, rhs, ratio, tuple(float(g) for g in grad), coef, norm)
