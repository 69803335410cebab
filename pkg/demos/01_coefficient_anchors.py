"""
Sharp coefficients at the distinguished limits
==============================================

At ``t = inf`` the weight parameter ``kappa`` vanishes and both coefficient
formulas collapse to Beta/Gamma expressions.  This script prints the
Dirichlet coefficient for ``p = inf`` (which is ``4 pi`` in three
dimensions) and the Neumann coefficient for ``p = 2`` (``a / (sqrt(2) pi)``),
then shows how the finite-time values approach them.
"""

import math

from heatgrad import Exponent, HeatPoint, sharp_coefficient

# the two closed-form anchors
w = sharp_coefficient("dirichlet", HeatPoint(3, 1.0, 1.0, math.inf), Exponent("inf"))
nm = sharp_coefficient("neumann", HeatPoint(3, 1.0, 1.0, math.inf), Exponent(2))
print(f"Dirichlet, n=3, p=inf, t=inf: {w.value:.15f}  (4 pi = {4 * math.pi:.15f})")
print(f"Neumann,   n=3, p=2,   t=inf: {nm.value:.15f}  (1/(sqrt2 pi) = {1 / (math.sqrt(2) * math.pi):.15f})")

# finite t: kappa > 0 and the coefficient grows towards its t = inf limit
print("\n      t      kappa    Dirichlet p=inf    Neumann p=2")
for t in (0.05, 0.2, 1.0, 5.0, 25.0, math.inf):
    pt = HeatPoint(3, 1.0, 1.0, t)
    d = sharp_coefficient("dirichlet", pt, Exponent("inf"))
    n = sharp_coefficient("neumann", pt, Exponent(2))
    print(f"{t:>7}  {d.kappa:9.4f}  {d.value:17.10f}  {n.value:13.10f}")
