"""Gamma-family special functions and unit-sphere areas.

The upper incomplete Gamma function is evaluated with the classical split:
a power series for the lower function when ``x < alpha + 1`` and a modified
Lentz continued fraction otherwise.  Everything is vectorised over numpy
arrays because the sphere quadratures evaluate the weight on large node sets.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 5000


@dataclass(frozen=True)
class IncompleteGammaArgs:
    alpha: float
    x: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"alpha must be finite and positive, got {self.alpha!r}")
        if not (math.isfinite(self.x) and self.x >= 0):
            raise DomainError(f"x must be finite and non-negative, got {self.x!r}")


def gamma(alpha):
    """Complete Gamma function for positive finite ``alpha``."""
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"gamma requires a positive finite argument, got {alpha!r}")
    return math.gamma(alpha)


def _lower_series(alpha, x):
    # gamma(a, x) = x^a e^-x sum_k x^k / (a (a+1) ... (a+k)); converged
    # entries are dropped from the working set as the loop proceeds
    total = np.full_like(x, 1.0 / alpha)
    idx = np.arange(x.size)
    xs = x.copy()
    term = total.copy()
    ap = alpha
    for it in range(_MAX_ITER):
        ap += 1.0
        term *= xs / ap
        total[idx] += term
        if it % 4 == 3:
            keep = np.abs(term) > np.abs(total[idx]) * _EPS
            if not keep.all():
                idx, xs, term = idx[keep], xs[keep], term[keep]
            if idx.size == 0:
                break
    else:
        raise ConvergenceError("incomplete gamma series did not converge")
    return total * np.exp(alpha * np.log(x) - x)


def _upper_cfrac(alpha, x):
    # modified Lentz evaluation of the continued fraction for Gamma(a, x)
    b = x + 1.0 - alpha
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    idx = np.arange(x.size)
    hw = h.copy()
    for i in range(1, _MAX_ITER):
        an = -i * (i - alpha)
        b = b + 2.0
        d = an * d + b
        d[np.abs(d) < _TINY] = _TINY
        c = b + an / c
        c[np.abs(c) < _TINY] = _TINY
        d = 1.0 / d
        delta = d * c
        hw *= delta
        done = np.abs(delta - 1.0) <= _EPS
        if done.any():
            h[idx[done]] = hw[done]
            keep = ~done
            idx, b, c, d, hw = idx[keep], b[keep], c[keep], d[keep], hw[keep]
            if idx.size == 0:
                break
    else:
        raise ConvergenceError("incomplete gamma continued fraction did not converge")
    return np.exp(alpha * np.log(x) - x) * h


def upper_gamma(alpha, x):
    """Upper incomplete Gamma ``Gamma(alpha, x)``, vectorised over ``x``.

    ``alpha`` must be a positive scalar; ``x`` may be any array of
    non-negative values, including ``inf`` (which maps to 0).
    """
    alpha = float(alpha)
    if not (math.isfinite(alpha) and alpha > 0):
        raise DomainError(f"alpha must be finite and positive, got {alpha!r}")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(np.isnan(x)) or np.any(x < 0):
        raise DomainError("x must be non-negative")

    out = np.empty_like(x)
    full = math.gamma(alpha)
    zero = x == 0
    huge = np.isinf(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        # only the tail side can underflow; tiny x also has a very negative log
        huge |= ~zero & (x > alpha + 1.0) & (alpha * np.log(x) - x < -760.0)
    series = ~zero & ~huge & (x < alpha + 1.0)
    cfrac = ~zero & ~huge & ~series
    out[zero] = full
    out[huge] = 0.0
    if series.any():
        out[series] = full - _lower_series(alpha, x[series])
    if cfrac.any():
        out[cfrac] = _upper_cfrac(alpha, x[cfrac])
    return float(out[0]) if scalar else out


def upper_incomplete_gamma(args):
    """Scalar entry point taking validated :class:`IncompleteGammaArgs`."""
    if not isinstance(args, IncompleteGammaArgs):
        args = IncompleteGammaArgs(*args)
    return upper_gamma(args.alpha, args.x)


def omega_weight(kappa, lam, u):
    """Sphere weight ``Gamma(lam + 1, kappa / u**2)``.

    Even in ``u``.  At ``u = 0`` the limit value is returned: 0 when
    ``kappa > 0`` and ``Gamma(lam + 1)`` when ``kappa = 0``.
    """
    if not (kappa >= 0 and math.isfinite(kappa)):
        raise DomainError(f"kappa must be finite and non-negative, got {kappa!r}")
    if not (lam >= 0 and math.isfinite(lam)):
        raise DomainError(f"lambda must be finite and non-negative, got {lam!r}")
    u = np.asarray(u, dtype=float)
    if np.any(np.abs(u) > 1.0 + 1e-12):
        raise DomainError("omega_weight requires |u| <= 1")
    if kappa == 0:
        res = np.full(u.shape, math.gamma(lam + 1.0))
        return float(res) if res.ndim == 0 else res
    u2 = u * u
    with np.errstate(divide="ignore"):
        arg = np.where(u2 > 0, kappa / np.where(u2 > 0, u2, 1.0), np.inf)
    return upper_gamma(lam + 1.0, arg)


def omega_weight_du(kappa, lam, u):
    """Derivative of :func:`omega_weight` in ``u`` for ``u > 0``.

    ``d/du Gamma(lam+1, kappa/u^2) = (kappa/u^2)^lam exp(-kappa/u^2) 2 kappa / u^3``.
    """
    u = np.asarray(u, dtype=float)
    if kappa == 0:
        return np.zeros_like(u) if u.ndim else 0.0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        arg = kappa / (u * u)
        logv = lam * np.log(arg) - arg + math.log(2.0 * kappa) - 3.0 * np.log(u)
        res = np.where(u > 0, np.exp(logv), 0.0)
    return float(res) if res.ndim == 0 else res


def sphere_area(n):
    """Area ``2 pi^(n/2) / Gamma(n/2)`` of the unit sphere in R^n."""
    if int(n) != n or n < 1:
        raise DomainError(f"sphere dimension must be an integer >= 1, got {n!r}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)
