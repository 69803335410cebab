"""Extremal problem for weighted integrals over the unit sphere.

The functional studied here is

    F(z) = int_{S^{n-1}} Gamma(lam+1, kappa/s^2) |s|^{mu+nu} |w|^{2-nu} d sigma,
    s = (e_sigma, e_n),  w = (e_sigma, z),

maximised over unit vectors ``z``.  Rotations about ``e_n`` and the evenness
in ``z`` reduce the search to the angle ``theta`` in ``[0, pi/2]`` between
``z`` and ``e_n``.  For ``kappa, lam, mu >= 0`` and ``0 <= nu < 2`` the
maximum sits at ``theta = 0`` and equals the zonal integral of
``Gamma(lam+1, kappa/s^2) |s|^{mu+2}``; :func:`maximize_F` checks that
numerically rather than assuming it.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import beta as beta_fn

from .errors import ConvergenceError, DomainError, PreconditionError
from .sphere_quad import (DEFAULT_CONFIG, MAX_TS_LEVEL, SPHERE_REL_FLOOR,
                         biaxial_split_nodes, integrate_biaxial, integrate_zonal,
                         quad_1d)
from .specfun import omega_weight, omega_weight_du, sphere_area

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
GRID_SIZE = 512


@dataclass(frozen=True)
class SphereFunctionalParams:
    """Parameters ``(n, kappa, lam, mu, nu)`` of the sphere functional.

    ``mu`` and ``nu`` may leave the range where the maximiser is known
    (``mu >= 0``, ``0 <= nu < 2``); :attr:`lemma_applies` reports whether
    they do.  Only integrability is enforced: ``nu < 2``, and
    ``mu + nu > -1`` unless ``kappa > 0`` (the weight then vanishes to all
    orders at the equator).
    """

    n: int
    kappa: float
    lam: float
    mu: float
    nu: float = 0.0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        for name in ("kappa", "lam", "mu", "nu"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        if self.kappa < 0 or self.lam < 0:
            raise DomainError("kappa and lam must be non-negative")
        if not self.nu < 2:
            raise DomainError(f"nu must be < 2, got {self.nu!r}")
        if self.kappa == 0 and not self.mu + self.nu > -1:
            raise DomainError("mu + nu must exceed -1 for integrability")

    @property
    def s_power(self):
        return self.mu + self.nu

    @property
    def w_power(self):
        return 2.0 - self.nu

    @property
    def lemma_applies(self):
        return self.mu >= 0 and 0 <= self.nu < 2


def sphere_weight(params, s):
    """``Gamma(lam+1, kappa/s^2) |s|^(mu+nu)``, with its limit at ``s = 0``."""
    s = np.abs(np.asarray(s, dtype=float))
    om = omega_weight(params.kappa, params.lam, s)
    p = params.s_power
    if p == 0:
        return om
    with np.errstate(divide="ignore", invalid="ignore"):
        val = om * s ** p
    # kappa > 0 drives the weight to zero faster than any power of s
    return np.where(s > 0, val, 0.0 if (params.kappa > 0 or p > 0) else np.inf)


def eval_F(params, theta_z, cfg=None, full_output=False, polar="e_n"):
    """Value of the functional at ``z = cos(theta_z) e_n + sin(theta_z) e_perp``.

    ``polar`` selects the sphere rule (see :func:`integrate_biaxial`); the
    two choices are independent and agree to quadrature accuracy.
    """
    cfg = cfg or DEFAULT_CONFIG

    def G(s, w):
        return sphere_weight(params, s)

    return integrate_biaxial(G, params.n, theta_z, cfg, w_power=params.w_power,
                             polar=polar, full_output=full_output)


def F_at_axis(params, cfg=None, full_output=False):
    """Zonal value ``int Gamma(lam+1, kappa/s^2) |s|^{mu+2} d sigma``.

    This is the claimed maximum of :func:`eval_F` under the lemma's
    hypotheses, computed along an independent 1-D path.
    """
    def F(u):
        return omega_weight(params.kappa, params.lam, u) * np.abs(u) ** (params.mu + 2.0)

    return integrate_zonal(F, params.n, cfg, full_output=full_output)


def F_at_axis_kappa0(params):
    """Closed form of :func:`F_at_axis` when ``kappa = 0``."""
    n = params.n
    return (math.gamma(params.lam + 1.0) * sphere_area(n - 1)
            * beta_fn((params.mu + 3.0) / 2.0, (n - 1) / 2.0))


class _FixedRule:
    """Vectorised evaluation of F(theta) with a fixed tanh-sinh level.

    The weight is even in ``s``, so only the northern hemisphere is
    sampled.  Weight values are needed on the outer (latitude) nodes only;
    the azimuthal sums touch ``|w|^(2-nu)`` alone.
    """

    def __init__(self, params, level):
        self.params = params
        self.level = level

    def __call__(self, thetas, chunk=32):
        thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
        out = np.empty(thetas.size)
        beta = self.params.w_power
        for i in range(0, thetas.size, chunk):
            s, outer, w, inner = biaxial_split_nodes(
                self.params.n, thetas[i:i + chunk], self.level, symmetric=True)
            np.abs(w, out=w)
            np.power(w, beta, out=w)
            J = np.einsum("toi,toi->to", inner, w)
            out[i:i + chunk] = np.einsum("to,to->t", outer * sphere_weight(self.params, s), J)
        return out


def golden_section_max(f, lo, hi, xtol=1e-10, max_iter=200):
    """Golden-section search for a maximum of a unimodal ``f`` on ``[lo, hi]``.

    Returns ``(x, f(x))`` for the best point visited.
    """
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= xtol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class MaximizeResult:
    """Outcome of :func:`maximize_F`.

    ``grid_max`` is the largest finest-level value over the scanned cells,
    ``value_at_axis`` the finest-level value at ``theta = 0`` and ``level``
    the tanh-sinh level used for the final refinement.
    """

    theta_star: float
    value: float
    err_est: float
    degenerate: bool
    grid_max: float
    value_at_axis: float
    level: int


def maximize_F(params, cfg=None, grid_size=GRID_SIZE, xtol=1e-6):
    """Maximise :func:`eval_F` over ``theta`` in ``[0, pi/2]``.

    The ``grid_size`` scan climbs a ladder of tanh-sinh levels.  At each
    level the error on every surviving cell is bounded by twice the
    largest change from the previous level, and only cells that can still
    hold the maximum under that bound move on, so the expensive levels see
    a handful of angles.  Once the bound is below ``1e-9`` relative, the
    smallest angle within it of the best value wins and golden-section
    search refines inside its neighbouring cells.  A scan whose spread is
    within the coarse bound and stays flat at the finest level is reported
    as degenerate with ``theta_star = 0``.
    """
    cfg = cfg or DEFAULT_CONFIG
    target = max(cfg.rel_tol, 1e-9)
    grid = np.linspace(0.0, 0.5 * math.pi, grid_size)
    alive = np.arange(grid_size)
    level = 2
    prev = _FixedRule(params, level - 1)(grid)
    coarse = None
    while True:
        vals = _FixedRule(params, level)(grid[alive])
        top = float(np.max(vals))
        eps = max(2.0 * float(np.max(np.abs(vals - prev))), 1e-14 * abs(top))
        if coarse is None:
            coarse = (top - float(np.min(vals)), eps)
        if eps <= target * abs(top):
            break
        level += 1
        if level > MAX_TS_LEVEL:
            raise ConvergenceError(
                f"scan for {params} did not settle by level {MAX_TS_LEVEL}", top, eps)
        keep = np.flatnonzero(vals >= top - 2.0 * eps)
        keep = np.unique(np.clip(np.concatenate([keep - 1, keep, keep + 1]), 0, alive.size - 1))
        alive, prev = alive[keep], vals[keep]

    # the previous level is already within eps/2 of the truth, which is all
    # that locating the maximiser needs
    fine = _FixedRule(params, level - 1)
    fmax = top
    f0 = float(vals[0]) if alive[0] == 0 else float(fine(0.0)[0])

    def finish(theta, degenerate):
        value, err = eval_F(params, theta, cfg, full_output=True)
        return MaximizeResult(float(theta), value, max(err, eps), degenerate,
                              fmax, f0, level)

    if coarse[0] <= 2.0 * coarse[1]:
        ends = fine([0.0, 0.25 * math.pi, 0.5 * math.pi])
        if float(np.ptp(ends)) <= 2.0 * eps:
            return finish(0.0, True)

    k = int(alive[np.flatnonzero(vals >= fmax - eps)[0]])
    lo = grid[max(k - 1, 0)]
    hi = grid[min(k + 1, grid_size - 1)]
    theta_gs, f_gs = golden_section_max(lambda th: float(fine(th)[0]), lo, hi, xtol=xtol)
    end_vals = fine([lo, hi])
    # candidates in increasing angle; the first within noise of the best wins
    cands = sorted({lo: float(end_vals[0]), theta_gs: f_gs, hi: float(end_vals[1])}.items())
    best = max(v for _, v in cands)
    theta_star = next(th for th, v in cands if v >= best - eps)
    return finish(theta_star, False)


def _uv_prefactor(n):
    return 2.0 * sphere_area(n - 1)


def compute_U(params, cfg=None):
    """``2 omega_{n-1} int_0^{pi/2} w(sin f) sin^{mu+2} f cos^{n-2} f df``."""
    n, mu = params.n, params.mu

    def g(phi):
        sp = np.sin(phi)
        return omega_weight(params.kappa, params.lam, sp) * sp ** (mu + 2.0) * np.cos(phi) ** (n - 2)

    return _uv_prefactor(n) * quad_1d(g, 0.0, 0.5 * math.pi, cfg)[0]


def compute_V(params, cfg=None):
    """``2 omega_{n-1}/(n-1) int_0^{pi/2} w(sin f) sin^mu f cos^n f df``."""
    n, mu = params.n, params.mu

    def g(phi):
        sp = np.sin(phi)
        return omega_weight(params.kappa, params.lam, sp) * sp ** mu * np.cos(phi) ** n

    return _uv_prefactor(n) / (n - 1) * quad_1d(g, 0.0, 0.5 * math.pi, cfg)[0]


def compute_uv_gap(params, cfg=None):
    """The weight-derivative term of the integration by parts of ``U``:

    ``2 omega_{n-1}/(n-1) int cos^{n-1} f sin^{mu+1} f d/df[w(sin f)] df``,

    so that ``U = (mu + 1) V + gap``.  Positive for ``kappa > 0`` and
    exactly zero for ``kappa = 0``, where ``U = (mu + 1) V``; ``U > V``
    follows for every ``kappa > 0``.
    """
    n, mu = params.n, params.mu
    if params.kappa == 0:
        return 0.0

    def g(phi):
        sp, cp = np.sin(phi), np.cos(phi)
        return cp ** (n - 1) * sp ** (mu + 1.0) * omega_weight_du(params.kappa, params.lam, sp) * cp

    return _uv_prefactor(n) / (n - 1) * quad_1d(g, 0.0, 0.5 * math.pi, cfg)[0]


@dataclass(frozen=True)
class DiscreteHolderInstance:
    """Finite measure space data for the Hölder majorisation statement.

    ``f_table[i, j]`` is ``f(x_i; y_j)``; ``rho[i]`` is ``rho(x_i; y0)``.
    """

    weights: np.ndarray
    rho: np.ndarray
    f_table: np.ndarray
    y0_index: int
    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        r = np.asarray(self.rho, dtype=float)
        f = np.asarray(self.f_table, dtype=float)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rho", r)
        object.__setattr__(self, "f_table", f)
        if w.ndim != 1 or r.shape != w.shape or f.ndim != 2 or f.shape[0] != w.size:
            raise DomainError("inconsistent shapes in DiscreteHolderInstance")
        if np.any(w < 0) or np.any(r < 0) or np.any(f < 0):
            raise DomainError("weights, rho and f must be non-negative")
        if not 0 <= self.y0_index < f.shape[1]:
            raise DomainError("y0_index out of range")
        if not (self.alpha > 0 and self.beta >= 0 and self.gamma > 0):
            raise DomainError("need alpha > 0, beta >= 0, gamma > 0")
        if self.alpha + self.beta != self.gamma:
            raise DomainError("alpha + beta must equal gamma exactly")

    def premise_values(self):
        return (self.weights * self.rho) @ self.f_table ** self.gamma

    def mixed_values(self):
        f0 = self.f_table[:, self.y0_index]
        return (self.weights * self.rho * f0 ** self.beta) @ self.f_table ** self.alpha


def holder_majorization_check(inst, slack=1e-12):
    """Check ``sup_y I(y, y0) = I(y0, y0)`` on a discrete instance.

    Returns ``(holds, witness)`` where ``witness`` is the index of a
    parameter violating the conclusion, or ``None``.  Raises
    :class:`PreconditionError` if the premise (the ``gamma``-integral peaks
    at ``y0``) fails, since the check would then be vacuous.
    """
    J = inst.premise_values()
    j0 = J[inst.y0_index]
    bad = np.flatnonzero(J > j0 * (1.0 + slack))
    if bad.size:
        y = int(bad[0])
        raise PreconditionError(f"premise fails at parameter {y}: {J[y]!r} > {j0!r}", y)
    I = inst.mixed_values()
    i0 = I[inst.y0_index]
    viol = np.flatnonzero(I > i0 * (1.0 + slack))
    if viol.size:
        return False, int(viol[np.argmax(I[viol])])
    return True, None


def random_holder_instance(rng, atoms=20, params=50, beta_zero=False):
    """Random instance whose premise is enforced by rescaling the columns
    that beat ``y0`` down to the level of ``y0``."""
    weights = rng.exponential(size=atoms)
    rho = rng.exponential(size=atoms)
    f = rng.exponential(size=(atoms, params)) ** rng.uniform(0.5, 2.0)
    f[rng.random((atoms, params)) < 0.1] = 0.0
    y0 = int(rng.integers(params))
    f[:, y0] += 1e-3  # keep the reference column away from zero
    alpha = float(rng.uniform(0.1, 3.0))
    beta = 0.0 if beta_zero else float(rng.uniform(0.0, 3.0))
    gamma = alpha + beta
    J = (weights * rho) @ f ** gamma
    scale = np.where(J > J[y0], (J[y0] / np.where(J > 0, J, 1.0)) ** (1.0 / gamma), 1.0)
    f = f * scale
    return DiscreteHolderInstance(weights, rho, f, y0, alpha, beta, gamma)
