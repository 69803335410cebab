"""
Parabolic scaling and the role of kappa
=======================================

The coefficients depend on ``(x_n, t)`` only through a power of ``x_n`` and
the dimensionless ``kappa = q x_n^2 / (4 a^2 t)``.  Rescaling
``(x_n, t) -> (lam x_n, lam^2 t)`` keeps ``kappa`` fixed, so the value
changes by an exact power of ``lam``.
"""

from heatgrad import Exponent, HeatPoint, sharp_coefficient

base = HeatPoint(3, 1.0, 0.8, 1.3)
for problem in ("dirichlet", "neumann"):
    ex = Exponent(3)
    v0 = sharp_coefficient(problem, base, ex).value
    power = (2 + 4 / 3) if problem == "dirichlet" else 4 / 3
    print(f"{problem}: n=3, p=3, base value {v0:.12g}, expected exponent -{power:.4f}")
    for lam in (0.5, 2.0, 10.0):
        v = sharp_coefficient(problem, base.scaled(lam), ex).value
        print(f"   lam={lam:<5} ratio={v / v0:.15g}  lam^-power={lam ** -power:.15g}")

# kappa-dependence: with x_n fixed, larger t means smaller kappa
print("\nDirichlet n=3 across p and t (x_n = 1, a = 1)")
print("  p \\ t " + "".join(f"{t:>12}" for t in (0.1, 1.0, 10.0)))
for p in ("2", "3", "10", "inf"):
    row = [sharp_coefficient("dirichlet", HeatPoint(3, 1.0, 1.0, t), Exponent(p)).value
           for t in (0.1, 1.0, 10.0)]
    print(f"  {p:>5} " + "".join(f"{v:12.6g}" for v in row))
