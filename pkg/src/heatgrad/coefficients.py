"""Sharp pointwise coefficients in heat-equation gradient estimates.

Two boundary value problems in the half-space ``x_n > 0`` with zero
initial data are covered:

* Dirichlet, ``u = f`` on the boundary: ``|grad(u/x_n)| <= W_p(x, t) |||f|||_{p,t}``;
* Neumann, ``du/dx_n = g`` on the boundary: ``|grad u| <= N_p(x, t) |||g|||_{p,t}``.

Both coefficients are an explicit prefactor times the ``1/q``-th power of
the sphere functional ``F`` from :mod:`heatgrad.extremal`, maximised over
the direction ``z``.  When the maximiser is known to be ``z = e_n`` the
maximum collapses to a 1-D integral (the "closed form"); otherwise it is
found numerically.

Exponent arithmetic is done in exact rationals, so ``q``, ``lambda`` and
all powers are exact until the final floating-point evaluation.
"""

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.special import beta as beta_fn

from .errors import DomainError, UnsupportedExponentError
from .extremal import SphereFunctionalParams, maximize_F
from .sphere_quad import DEFAULT_CONFIG, quad_1d
from .specfun import omega_weight, sphere_area

INF = math.inf

DIRICHLET = "dirichlet"
NEUMANN = "neumann"
PROBLEMS = (DIRICHLET, NEUMANN)

CLOSED_FORM = "closed_form"
MAXIMIZED = "maximized"

# ``printed`` reproduces the constant c_{n,p} exactly as it is usually
# quoted; ``kernel`` is the constant obtained by taking the L^q norm of the
# gradient kernel directly.  They differ by the factor 4 pi a^2.
PRINTED = "printed"
KERNEL = "kernel"


def _parse_positive(value, name, allow_inf=True):
    if isinstance(value, str):
        token = value.strip().lower()
        if token in ("inf", "infinity", "+inf"):
            value = INF
        else:
            try:
                value = float(token)
            except ValueError:
                raise DomainError(f"{name} must be a number or 'inf', got {value!r}") from None
    value = float(value)
    if math.isnan(value) or value <= 0 or (math.isinf(value) and not allow_inf):
        raise DomainError(f"{name} must be positive{' or inf' if allow_inf else ''}, got {value!r}")
    return value


@dataclass(frozen=True)
class HeatPoint:
    """Evaluation context: dimension, diffusion constant, height and time.

    ``t = inf`` is the long-time limit, where ``kappa = 0``.
    """

    n: int
    a: float
    x_n: float
    t: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise DomainError(f"n must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", _parse_positive(self.a, "a", allow_inf=False))
        object.__setattr__(self, "x_n", _parse_positive(self.x_n, "x_n", allow_inf=False))
        object.__setattr__(self, "t", _parse_positive(self.t, "t"))

    def scaled(self, lam):
        """The parabolically rescaled point ``(lam x_n, lam^2 t)``."""
        return HeatPoint(self.n, self.a, lam * self.x_n, lam * lam * self.t)


class Exponent:
    """Lebesgue exponent ``p`` in ``(1, inf]`` with its conjugate ``q``.

    Finite ``p`` is held as a :class:`fractions.Fraction`; floats are read
    through their shortest decimal representation, so ``Exponent(2.5)``
    is exactly ``5/2``.
    """

    __slots__ = ("p", "q")

    def __init__(self, p):
        if isinstance(p, Exponent):
            p = p.p
        if isinstance(p, str):
            token = p.strip().lower()
            if token in ("inf", "infinity", "+inf"):
                p = INF
            else:
                try:
                    p = Fraction(token)
                except (ValueError, ZeroDivisionError):
                    raise DomainError(f"cannot parse exponent {p!r}") from None
        elif isinstance(p, float):
            if math.isnan(p):
                raise DomainError("exponent is NaN")
            p = INF if math.isinf(p) and p > 0 else Fraction(repr(p)) if math.isfinite(p) else p
        elif isinstance(p, int):
            p = Fraction(p)
        if p == INF:
            self.p = INF
            self.q = Fraction(1)
        else:
            if not isinstance(p, Fraction):
                raise DomainError(f"unsupported exponent type {type(p).__name__}")
            if p <= 1:
                raise UnsupportedExponentError(
                    f"p must lie in (1, inf]; got {p} (p = 1 is not implemented)")
            self.p = p
            self.q = p / (p - 1)

    @property
    def is_inf(self):
        return self.p == INF

    @property
    def inv_p(self):
        """``1/p`` as an exact rational (0 at ``p = inf``)."""
        return Fraction(0) if self.is_inf else 1 / self.p

    @property
    def inv_q(self):
        return 1 - self.inv_p

    def __float__(self):
        return INF if self.is_inf else float(self.p)

    def __eq__(self, other):
        return isinstance(other, Exponent) and self.p == other.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"Exponent({'inf' if self.is_inf else str(self.p)})"

    def __str__(self):
        return "inf" if self.is_inf else str(self.p)


ExponentLike = Union[Exponent, Fraction, int, float, str]


@dataclass(frozen=True)
class CoefficientResult:
    """A computed sharp coefficient.

    ``warning`` is set when the maximisation path was used because the
    closed form is not known to apply.  ``theta_star`` is the angle between
    the maximising direction and ``e_n`` (0 for the closed form).
    """

    problem: str
    n: int
    p: str
    a: float
    xn: float
    t: float
    kappa: float
    lam: float
    value: float
    theta_star: float
    method: str
    err_est: float
    normalization: str = PRINTED
    degenerate: bool = False
    warning: Optional[str] = None

    def __post_init__(self):
        if not (math.isfinite(self.value) and self.value > 0):
            raise DomainError(f"coefficient must be finite and positive, got {self.value!r}")
        if not self.err_est >= 0:
            raise DomainError("err_est must be non-negative")

    def to_record(self):
        rec = asdict(self)
        rec["lambda"] = rec.pop("lam")
        return rec


@dataclass(frozen=True)
class ProblemSetup:
    """Everything that defines one coefficient, with exact exponents.

    ``value = prefactor * x_n**(-xn_power) * (max F)**(1/q)`` where ``F``
    has weight ``Gamma(lam+1, kappa/s^2) |s|^s_power |w|^w_power``.
    """

    problem: str
    pt: HeatPoint
    ex: Exponent
    kappa: float
    lam: Fraction
    prefactor: float
    xn_power: Fraction
    s_power: Fraction
    w_power: Fraction

    @property
    def nu(self):
        return 2 - self.w_power

    @property
    def mu(self):
        return self.s_power - self.nu

    @property
    def axis_power(self):
        """Power of ``cos`` in the closed form: ``mu + 2``."""
        return self.mu + 2

    def functional(self):
        return SphereFunctionalParams(self.pt.n, self.kappa, float(self.lam),
                                      float(self.mu), float(self.nu))


def _kappa(pt, ex):
    if math.isinf(pt.t):
        return 0.0
    return float(ex.q) * pt.x_n ** 2 / (4.0 * pt.a ** 2 * pt.t)


def _as_exponent(ex):
    return ex if isinstance(ex, Exponent) else Exponent(ex)


def dirichlet_params(pt, ex):
    """``(kappa, lambda, c_{n,p})`` for the Dirichlet problem.

    ``c_{n,p} = 2^{1/p} (4a^2)^{1+1/p} / (pi^{n/2-1} q^{n/2+1+1/p})`` in its
    usual printed normalisation; see :func:`dirichlet_sharp_coefficient`.
    """
    ex = _as_exponent(ex)
    n, a = pt.n, pt.a
    ip = float(ex.inv_p)
    q = float(ex.q)
    lam = Fraction(n + 4) * ex.q / 2 - 2
    c = 2.0 ** ip * (4.0 * a * a) ** (1.0 + ip) / (math.pi ** (n / 2.0 - 1.0) * q ** (n / 2.0 + 1.0 + ip))
    return _kappa(pt, ex), float(lam), c


def neumann_params(pt, ex):
    """``(kappa, lambda, k_{n,p})`` for the Neumann problem.

    ``k_{n,p} = 2^{(3-p)/p} a^{2/p} / (pi^{n/2} q^{n/2+1/p})``.
    """
    ex = _as_exponent(ex)
    n, a = pt.n, pt.a
    ip = float(ex.inv_p)
    q = float(ex.q)
    lam = Fraction(n + 2) * ex.q / 2 - 2
    # 2^{(3-p)/p} = 2^{3/p - 1}
    k = 2.0 ** (3.0 * ip - 1.0) * a ** (2.0 * ip) / (math.pi ** (n / 2.0) * q ** (n / 2.0 + ip))
    return _kappa(pt, ex), float(lam), k


def lambda_alternate_form(problem, n, ex):
    """``lambda`` from the second printed expression, for consistency checks.

    Dirichlet: ``(np + 4) / (2(p - 1))``; Neumann: ``((n-2)p + 4) / (2(p - 1))``.
    Both are taken as limits at ``p = inf``.
    """
    ex = _as_exponent(ex)
    shift = 0 if problem == DIRICHLET else 2
    if ex.is_inf:
        return Fraction(n - shift, 2)
    p = ex.p
    return ((n - shift) * p + 4) / (2 * (p - 1))


def setup(problem, pt, ex, normalization=PRINTED):
    """Assemble the :class:`ProblemSetup` for ``problem``."""
    ex = _as_exponent(ex)
    if problem == DIRICHLET:
        kappa, _, pref = dirichlet_params(pt, ex)
        lam = Fraction(pt.n + 4) * ex.q / 2 - 2
        xn_power = 2 + (pt.n + 1) * ex.inv_p
        # |s|^{(n+p+2)/(p-1)} = |s|^{(n+3)(q-1) + 1}: finite at p = inf
        s_power = (pt.n + 3) * (ex.q - 1) + 1
        if normalization == KERNEL:
            pref = pref / (4.0 * math.pi * pt.a ** 2)
        elif normalization != PRINTED:
            raise DomainError(f"unknown normalization {normalization!r}")
    elif problem == NEUMANN:
        kappa, _, pref = neumann_params(pt, ex)
        lam = Fraction(pt.n + 2) * ex.q / 2 - 2
        xn_power = (pt.n + 1) * ex.inv_p
        # |s|^{(n-p+2)/(p-1)} = |s|^{(n+1)(q-1) - 1}
        s_power = (pt.n + 1) * (ex.q - 1) - 1
    else:
        raise DomainError(f"unknown problem {problem!r}; expected one of {PROBLEMS}")
    return ProblemSetup(problem, pt, ex, kappa, lam, pref, xn_power, s_power, ex.q)


def closed_form_applies(problem, n, ex):
    """Whether the axis direction is the proven maximiser for these exponents."""
    ex = _as_exponent(ex)
    if ex.is_inf:
        return problem == DIRICHLET
    if ex.p < 2:
        return False
    return problem == DIRICHLET or ex.p <= Fraction(n + 4, 2)


def axis_integral(st, cfg=None):
    """``2 omega_{n-1} int_0^{pi/2} Gamma(lam+1, kappa/cos^2) cos^m sin^{n-2} dtheta``.

    ``m = mu + 2`` is the closed-form cosine power.  At ``kappa = 0`` the
    Beta-function value ``omega_{n-1} Gamma(lam+1) B((m+1)/2, (n-1)/2)`` is
    returned with a rounding-level error estimate.
    """
    n = st.pt.n
    lam = float(st.lam)
    m = float(st.axis_power)
    if st.kappa == 0:
        val = sphere_area(n - 1) * math.gamma(lam + 1.0) * beta_fn((m + 1.0) / 2.0, (n - 1.0) / 2.0)
        return val, 4e-16 * val

    def g(th):
        c = np.cos(th)
        return omega_weight(st.kappa, lam, c) * c ** m * np.sin(th) ** (n - 2)

    val, err = quad_1d(g, 0.0, 0.5 * math.pi, cfg)
    pref = 2.0 * sphere_area(n - 1)
    return pref * val, pref * err


def _finish(st, F, F_err, theta, method, *, normalization, degenerate=False, warning=None):
    inv_q = float(st.ex.inv_q)
    scale = st.prefactor * st.pt.x_n ** (-float(st.xn_power))
    value = float(scale * F ** inv_q)
    err = value * inv_q * F_err / F if F > 0 else math.inf
    pt = st.pt
    return CoefficientResult(st.problem, pt.n, str(st.ex), pt.a, pt.x_n, pt.t, float(st.kappa),
                             float(st.lam), value, float(theta), method, float(err),
                             normalization, degenerate, warning)


def sharp_coefficient(problem, pt, ex, cfg=None, force_maximize=False, normalization=PRINTED):
    """Sharp coefficient for either problem; see the problem-specific wrappers."""
    cfg = cfg or DEFAULT_CONFIG
    ex = _as_exponent(ex)
    st = setup(problem, pt, ex, normalization)
    applies = closed_form_applies(problem, pt.n, ex)
    if applies and not force_maximize:
        F, F_err = axis_integral(st, cfg)
        return _finish(st, F, F_err, 0.0, CLOSED_FORM, normalization=normalization)

    warning = None
    if problem == NEUMANN and (ex.is_inf or ex.p > Fraction(pt.n + 4, 2)):
        warning = (f"p = {ex} exceeds (n+4)/2 = {Fraction(pt.n + 4, 2)}: the axis maximiser is "
                   "not guaranteed, value comes from numerical maximisation")
    elif not applies:
        warning = f"p = {ex} < 2: value comes from numerical maximisation"
    if st.kappa == 0 and not float(st.s_power) > -1:
        raise DomainError(f"the {problem} coefficient is infinite at t = inf for p = {ex}")
    res = maximize_F(st.functional(), cfg)
    return _finish(st, res.value, res.err_est, res.theta_star, MAXIMIZED,
                   normalization=normalization, degenerate=res.degenerate, warning=warning)


def dirichlet_sharp_coefficient(pt, ex, cfg=None, force_maximize=False, normalization=PRINTED):
    """Sharp Dirichlet coefficient ``W_p(x, t)``.

    For ``p >= 2`` the value is ``c_{n,p} x_n^{-(2+(n+1)/p)}`` times the
    ``1/q``-th power of :func:`axis_integral` with cosine power
    ``(n + 2(p+1))/(p-1)``.  For ``1 < p < 2``, or with ``force_maximize``,
    the sphere functional with exponents ``(n+p+2)/(p-1)`` on ``|s|`` and
    ``q`` on ``|w|`` is maximised numerically.

    ``normalization='printed'`` (default) uses ``c_{n,p}`` as printed;
    ``'kernel'`` divides it by ``4 pi a^2``, which is the constant that the
    L^q norm of the gradient kernel actually produces and the one that
    makes the estimate sharp (see :func:`heatgrad.potentials.verify_inequality`).
    """
    return sharp_coefficient(DIRICHLET, pt, ex, cfg, force_maximize, normalization)


def neumann_sharp_coefficient(pt, ex, cfg=None, force_maximize=False):
    """Sharp Neumann coefficient ``N_p(x, t)``.

    For ``2 <= p <= (n+4)/2`` the value is ``k_{n,p} x_n^{-(n+1)/p}`` times
    the ``1/q``-th power of :func:`axis_integral` with cosine power
    ``(n+2)/(p-1)``.  Outside that range the maximisation path is taken
    and :attr:`CoefficientResult.warning` says why.
    """
    return sharp_coefficient(NEUMANN, pt, ex, cfg, force_maximize)


def dirichlet_inf_direct(pt, cfg=None):
    """``W_inf`` from its own formula,

    ``16 a^2 sqrt(pi) / (Gamma((n-1)/2) x_n^2) int_0^{pi/2} Gamma(n/2+1, kappa/cos^2) cos^2 sin^{n-2}``,

    evaluated without going through ``c_{n,p}``.
    """
    n = pt.n
    kappa = 0.0 if math.isinf(pt.t) else pt.x_n ** 2 / (4.0 * pt.a ** 2 * pt.t)
    pref = 16.0 * pt.a ** 2 * math.sqrt(math.pi) / (math.gamma((n - 1) / 2.0) * pt.x_n ** 2)
    if kappa == 0:
        return pref * math.gamma(n / 2.0 + 1.0) * 0.5 * beta_fn(1.5, (n - 1) / 2.0)

    def g(th):
        c = np.cos(th)
        return omega_weight(kappa, n / 2.0, c) * c * c * np.sin(th) ** (n - 2)

    return pref * quad_1d(g, 0.0, 0.5 * math.pi, cfg)[0]


def neumann_p2_bn(pt, cfg=None):
    """``N_2`` through the constant ``b_n`` as it is commonly printed,

    ``b_n x_n^{-(n+1)/2} { int_0^{pi/2} Gamma(n+1, x_n^2/(2a^2 t cos^2)) cos^{n+2} sin^{n-2} }^{1/2}``,
    ``b_n = a / (2^{(n-1)/2} pi^{(n+1)/4} sqrt(Gamma((n-1)/2)))``.

    This route disagrees with :func:`neumann_sharp_coefficient` at ``p = 2``
    by the constant factor ``sqrt(2)``; it is kept so the discrepancy can
    be measured.
    """
    n = pt.n
    bn = pt.a / (2.0 ** ((n - 1) / 2.0) * math.pi ** ((n + 1) / 4.0) * math.sqrt(math.gamma((n - 1) / 2.0)))
    kappa = 0.0 if math.isinf(pt.t) else pt.x_n ** 2 / (2.0 * pt.a ** 2 * pt.t)
    if kappa == 0:
        integral = math.gamma(n + 1.0) * 0.5 * beta_fn((n + 3) / 2.0, (n - 1) / 2.0)
    else:
        def g(th):
            c = np.cos(th)
            return omega_weight(kappa, float(n), c) * c ** (n + 2) * np.sin(th) ** (n - 2)

        integral = quad_1d(g, 0.0, 0.5 * math.pi, cfg)[0]
    return bn * pt.x_n ** (-(n + 1) / 2.0) * math.sqrt(integral)
