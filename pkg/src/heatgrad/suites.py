"""Property suites behind ``heatgrad selftest``.

Each suite returns a :class:`SuiteResult` with the worst measured
discrepancy, the tolerance it was held to and, on failure, the parameters
of the first counterexample.  ``size="small"`` runs a thinned grid in a
few seconds; ``size="full"`` runs the complete grids.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import coefficients as co
from .extremal import (F_at_axis, SphereFunctionalParams, compute_U, compute_uv_gap,
                       compute_V, holder_majorization_check, maximize_F,
                       random_holder_instance, sphere_weight)
from .sphere_quad import DEFAULT_CONFIG, quad_1d, sample_sphere
from .specfun import sphere_area, upper_gamma
from .errors import HeatGradError


@dataclass
class SuiteResult:
    name: str
    passed: bool
    measured: float
    tolerance: float
    checked: int
    counterexample: Optional[dict] = None
    notes: list = field(default_factory=list)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<16} measured={self.measured:.3e} "
                f"tol={self.tolerance:.1e} cases={self.checked}")


class _Tracker:
    """Accumulates the worst metric and the first failing case."""

    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.worst = 0.0
        self.count = 0
        self.first_bad = None
        self.notes = []

    def record(self, metric, ok, case):
        self.count += 1
        if math.isfinite(metric):
            self.worst = max(self.worst, metric)
        if not ok and self.first_bad is None:
            self.first_bad = case

    def result(self):
        return SuiteResult(self.name, self.first_bad is None, self.worst, self.tol,
                           self.count, self.first_bad, self.notes)


def _rel(a, b):
    return abs(a - b) / abs(b) if b != 0 else abs(a - b)


# -- special functions -------------------------------------------------------

GAMMA_ALPHAS = (0.5, 1.0, 2.5, 5.0, 10.0, 30.0)
GAMMA_XS = (0.0, 0.1, 1.0, 10.0, 100.0)


def gamma_oracle(alpha, x, cfg=None):
    """``int_x^inf xi^{alpha-1} e^{-xi} d xi`` by brute-force adaptive
    quadrature on ``[x, x + L]`` with ``L`` past the decay of the integrand
    (logarithmic variable near 0 for ``alpha < 1``)."""
    cfg = cfg or DEFAULT_CONFIG
    hi = max(x, alpha) + 60.0 + 10.0 * math.sqrt(alpha + 1.0)
    peak = max(alpha - 1.0, 0.0)
    breaks = tuple(b for b in (peak, peak + 5 * math.sqrt(alpha + 1)) if x < b < hi)
    if x == 0 and alpha < 1:
        # substitute xi = v^{1/alpha}: integrand e^{-xi} / alpha
        def g(v):
            return np.exp(-v ** (1.0 / alpha)) / alpha
        head, _ = quad_1d(g, 0.0, 1.0, cfg)
        tail, _ = quad_1d(lambda xi: xi ** (alpha - 1) * np.exp(-xi), 1.0, hi, cfg)
        return head + tail
    val, _ = quad_1d(lambda xi: xi ** (alpha - 1) * np.exp(-xi), x, hi, cfg, breakpoints=breaks)
    return val


def suite_specfun(size="full", cfg=None):
    tr = _Tracker("specfun", 1e-10)
    for a, x in itertools.product(GAMMA_ALPHAS, GAMMA_XS):
        got = upper_gamma(a, x)
        ref = gamma_oracle(a, x, cfg)
        err = _rel(got, ref)
        tr.record(err, err <= 1e-10, {"alpha": a, "x": x, "value": got, "oracle": ref})
        rec = upper_gamma(a + 1, x)
        rhs = a * got + x ** a * math.exp(-x)
        err_r = _rel(rec, rhs)
        tr.record(err_r * 10.0, err_r <= 1e-11, {"alpha": a, "x": x, "recurrence": err_r})
    return tr.result()


# -- Lemma grid ----------------------------------------------------------------

LEMMA_GRID = {
    "n": (2, 3, 4, 6),
    "kappa": (0.1, 1.0, 10.0),
    "lam": (0.0, 1.0, 3.5),
    "mu": (0.0, 1.0, 2.5),
    "nu": (0.0, 0.5, 1.0, 1.9),
}
LEMMA_GRID_SMALL = {
    "n": (2, 3),
    "kappa": (0.1, 10.0),
    "lam": (0.0, 3.5),
    "mu": (0.0, 2.5),
    "nu": (0.0, 1.9),
}


def suite_lemma1(size="full", cfg=None, angle_tol=1e-4, rel_tol=1e-6, grid_size=512):
    grid = LEMMA_GRID if size == "full" else LEMMA_GRID_SMALL
    tr = _Tracker("lemma1", rel_tol)
    for n, k, lam, mu, nu in itertools.product(*grid.values()):
        prm = SphereFunctionalParams(n, k, lam, mu, nu)
        res = maximize_F(prm, cfg, grid_size=grid_size)
        ref = F_at_axis(prm, cfg)
        err = _rel(res.value, ref)
        angle_ok = res.theta_star <= angle_tol or res.degenerate
        tr.record(err, angle_ok and err <= rel_tol,
                  {"n": n, "kappa": k, "lambda": lam, "mu": mu, "nu": nu,
                   "theta_star": res.theta_star, "value": res.value, "closed_form": ref})
    return tr.result()


# -- U / V -------------------------------------------------------------------

UV_GRID = {
    "n": (2, 3, 4, 6),
    "kappa": (0.0, 0.1, 1.0, 10.0),
    "lam": (0.0, 1.0, 3.5),
    "mu": (0.0, 1.0, 2.5),
}


def suite_uv(size="full", cfg=None):
    """``U > V`` for ``kappa > 0``; ``U = V`` at ``kappa = 0, mu = 0``; and the
    integration-by-parts identity ``U = (mu + 1) V + gap`` everywhere."""
    grid = UV_GRID if size == "full" else {k: v[:2] if k != "kappa" else v for k, v in UV_GRID.items()}
    tr = _Tracker("uv", 1e-8)
    for n, k, lam, mu in itertools.product(*grid.values()):
        prm = SphereFunctionalParams(n, k, lam, mu, 0.0)
        U, V = compute_U(prm, cfg), compute_V(prm, cfg)
        gap = compute_uv_gap(prm, cfg)
        case = {"n": n, "kappa": k, "lambda": lam, "mu": mu, "U": U, "V": V, "gap": gap}
        if k > 0:
            tr.record(0.0, U > V, dict(case, check="U > V"))
        elif mu == 0:
            d = abs(U - V) / U
            tr.record(d * 100.0, d <= 1e-10, dict(case, check="U = V"))
        ident = abs(U - (mu + 1.0) * V - gap) / U
        tr.record(ident, ident <= 1e-8, dict(case, check="identity"))
    return tr.result()


# -- discrete majorisation ---------------------------------------------------

def suite_holder(size="full", seed=0, instances=None):
    count = instances or (1000 if size == "full" else 100)
    tr = _Tracker("holder", 0.0)
    for i in range(count):
        rng = np.random.default_rng([seed, i])
        inst = random_holder_instance(rng)
        holds, witness = holder_majorization_check(inst)
        tr.record(0.0 if holds else 1.0, holds, {"seed": [seed, i], "witness": witness})
    return tr.result()


# -- coefficient cross paths -------------------------------------------------

def _kappa_point(n, kappa, ex, a=1.0, xn=1.0):
    """Heat point with the requested ``kappa = q x_n^2 / (4 a^2 t)``."""
    q = 1.0 if ex.is_inf else float(ex.q)
    t = q * xn * xn / (4 * a * a * kappa)
    return co.HeatPoint(n, a, xn, t)


def suite_dirichlet_cross(size="full", cfg=None, rel_tol=1e-6):
    ps = ("2", "3", "10", "inf")
    ns = (2, 3, 5) if size == "full" else (2, 3)
    ks = (0.25, 1.0, 4.0) if size == "full" else (1.0,)
    tr = _Tracker("dirichlet-cross", rel_tol)
    for p, n, k in itertools.product(ps, ns, ks):
        ex = co.Exponent(p)
        pt = _kappa_point(n, k, ex)
        cf = co.dirichlet_sharp_coefficient(pt, ex, cfg)
        mx = co.dirichlet_sharp_coefficient(pt, ex, cfg, force_maximize=True)
        err = _rel(mx.value, cf.value)
        tr.record(err, err <= rel_tol and cf.method == co.CLOSED_FORM,
                  {"p": p, "n": n, "kappa": k, "closed_form": cf.value, "maximized": mx.value,
                   "theta_star": mx.theta_star})
    return tr.result()


def suite_dirichlet_anchors(size="full", cfg=None, rel_tol=1e-8):
    tr = _Tracker("dirichlet-anchor", rel_tol)
    pt = co.HeatPoint(3, 1.0, 1.0, math.inf)
    w = co.dirichlet_sharp_coefficient(pt, co.Exponent("inf"), cfg).value
    err = _rel(w, 4 * math.pi)
    tr.record(err, err <= rel_tol, {"anchor": "W_inf(3,1,1,inf)", "value": w})
    for n in (2, 3, 5):
        for t in (1.0, math.inf):
            pt = co.HeatPoint(n, 1.0, 1.0, t)
            a = co.dirichlet_sharp_coefficient(pt, co.Exponent("inf"), cfg).value
            b = co.dirichlet_inf_direct(pt, cfg)
            err = _rel(a, b)
            tr.record(err, err <= rel_tol, {"n": n, "t": t, "general": a, "direct": b})
    return tr.result()


def suite_neumann(size="full", cfg=None):
    tr = _Tracker("neumann", 1e-6)
    ns = (2, 3, 5) if size == "full" else (2, 3)
    for n in ns:
        for p in (Fraction(2), Fraction(n + 4, 2)):
            ex = co.Exponent(p)
            pt = co.HeatPoint(n, 1.0, 1.0, 1.0)
            cf = co.neumann_sharp_coefficient(pt, ex, cfg)
            mx = co.neumann_sharp_coefficient(pt, ex, cfg, force_maximize=True)
            err = _rel(mx.value, cf.value)
            tr.record(err, err <= 1e-6 and cf.method == co.CLOSED_FORM,
                      {"n": n, "p": str(p), "closed_form": cf.value, "maximized": mx.value})
    pt = co.HeatPoint(3, 1.0, 1.0, math.inf)
    v = co.neumann_sharp_coefficient(pt, co.Exponent(2), cfg).value
    ref = 1.0 / (math.sqrt(2.0) * math.pi)
    err = _rel(v, ref)
    tr.record(err * 100.0, err <= 1e-8, {"anchor": "N_2(3,1,1,inf)", "value": v})
    # the b_n route disagrees by a factor that must not depend on (a, x_n)
    ratios = []
    for a, xn, t in ((1.0, 1.0, math.inf), (0.5, 2.0, math.inf), (2.0, 0.3, 1.0), (1.0, 1.0, 0.7)):
        pt = co.HeatPoint(3, a, xn, t)
        ratios.append(co.neumann_sharp_coefficient(pt, co.Exponent(2), cfg).value
                      / co.neumann_p2_bn(pt, cfg))
    spread = (max(ratios) - min(ratios)) / min(ratios)
    tr.record(spread, spread <= 1e-6, {"bn_ratios": ratios})
    tr.notes.append(f"b_n route factor {ratios[0]:.12g} (sqrt 2 = {math.sqrt(2):.12g})")
    return tr.result()


def suite_scaling(size="full", cfg=None, rel_tol=1e-12):
    tr = _Tracker("scaling", rel_tol)
    cases = [(co.DIRICHLET, 3, "2"), (co.DIRICHLET, 2, "inf"), (co.DIRICHLET, 5, "3"),
             (co.NEUMANN, 3, "2"), (co.NEUMANN, 2, "3"), (co.NEUMANN, 5, "4")]
    if size != "full":
        cases = cases[::2]
    for prob, n, p in cases:
        ex = co.Exponent(p)
        base = co.HeatPoint(n, 1.0, 0.8, 1.3)
        v0 = co.sharp_coefficient(prob, base, ex, cfg).value
        power = (2 + (n + 1) * float(ex.inv_p)) if prob == co.DIRICHLET else (n + 1) * float(ex.inv_p)
        for lam in (0.5, 2.0, 10.0):
            v = co.sharp_coefficient(prob, base.scaled(lam), ex, cfg).value
            err = _rel(v, lam ** (-power) * v0)
            tr.record(err, err <= rel_tol, {"problem": prob, "n": n, "p": p, "lambda": lam})
    return tr.result()


# -- inequality harness ------------------------------------------------------

HARNESS_CASES = tuple(
    (prob, n, p)
    for n in (2, 3)
    for prob, ps in ((co.DIRICHLET, ("2", "3", "inf")), (co.NEUMANN, ("2", "3")))
    for p in ps)


def suite_harness(size="full", seed=0, seeds=None, cfg=None):
    from .potentials import extremal_boundary_data, random_smooth_data, verify_inequality

    count = seeds or (100 if size == "full" else 5)
    tr = _Tracker("harness", 1e-3)
    for prob, n, p in HARNESS_CASES:
        pt = co.HeatPoint(n, 1.0, 1.0, 1.0)
        ex = co.Exponent(p)
        worst = 0.0
        for i in range(count):
            data = random_smooth_data(n, np.random.default_rng([seed, i]), pt.t, pt.a)
            r = verify_inequality(prob, pt, ex, data, cfg)
            worst = max(worst, r.ratio)
            tr.record(max(r.ratio - 1.0, 0.0), r.ratio <= 1 + 1e-3,
                      {"problem": prob, "n": n, "p": p, "seed": [seed, i], "ratio": r.ratio})
        ext = verify_inequality(prob, pt, ex, extremal_boundary_data(prob, pt, ex), cfg)
        tr.record(0.0, ext.ratio >= 0.95,
                  {"problem": prob, "n": n, "p": p, "extremal_ratio": ext.ratio})
        tr.notes.append(f"{prob} n={n} p={p}: max random ratio {worst:.4f}, "
                        f"extremal ratio {ext.ratio:.6f}")
    return tr.result()


# -- Monte Carlo guard ---------------------------------------------------------

MC_CASES = ((co.DIRICHLET, 3, "2"), (co.DIRICHLET, 3, "inf"), (co.DIRICHLET, 2, "3"),
            (co.NEUMANN, 3, "2"), (co.NEUMANN, 2, "3"))


def mc_bracket_guard(params, max_value, directions, points, rng, chunk=5000):
    """Largest ``(F_hat(z) - max_value) / se(z)`` over random ``z``.

    ``F_hat(z)`` averages the integrand over ``points`` uniform sphere
    samples shared by every ``z``, so the estimates for nearby directions
    are strongly correlated and the largest excess behaves like a single
    standard normal draw.
    """
    n = params.n
    area = sphere_area(n)
    E = sample_sphere(n, points, rng)
    base = sphere_weight(params, E[:, -1])
    Z = sample_sphere(n, directions, rng)
    worst = -math.inf
    for i in range(0, directions, chunk):
        W = np.abs(E @ Z[i:i + chunk].T) ** (2.0 - params.nu)
        vals = base[:, None] * W
        mean = vals.mean(axis=0)
        se = vals.std(axis=0, ddof=1) / math.sqrt(points)
        worst = max(worst, float(np.max((area * mean - max_value) / (area * se))))
    return worst


def suite_mc(size="full", seed=0, cfg=None, directions=None, points=4000):
    directions = directions or (100_000 if size == "full" else 10_000)
    tr = _Tracker("mc-guard", 3.0)
    for k, (prob, n, p) in enumerate(MC_CASES):
        pt = co.HeatPoint(n, 1.0, 1.0, 1.0)
        st = co.setup(prob, pt, co.Exponent(p))
        prm = st.functional()
        best = maximize_F(prm, cfg).value
        z = mc_bracket_guard(prm, best, directions, points, np.random.default_rng([seed, k]))
        tr.record(max(z, 0.0), z <= 3.0, {"problem": prob, "n": n, "p": p, "max_excess_se": z})
    return tr.result()


SUITES = {
    "specfun": suite_specfun,
    "lemma1": suite_lemma1,
    "uv": suite_uv,
    "holder": suite_holder,
    "dirichlet-cross": suite_dirichlet_cross,
    "dirichlet-anchors": suite_dirichlet_anchors,
    "neumann": suite_neumann,
    "scaling": suite_scaling,
    "harness": suite_harness,
    "mc": suite_mc,
}


def run_suite(name, size="full", seed=0, cfg=None):
    fn = SUITES[name]
    kwargs = {"size": size}
    if "seed" in fn.__code__.co_varnames:
        kwargs["seed"] = seed
    if "cfg" in fn.__code__.co_varnames:
        kwargs["cfg"] = cfg
    try:
        return fn(**kwargs)
    except HeatGradError as exc:
        return SuiteResult(name, False, math.inf, math.nan, 0, {"error": str(exc)})
