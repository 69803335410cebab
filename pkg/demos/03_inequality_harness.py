"""
Checking the gradient inequality on boundary data
=================================================

``verify_inequality`` evaluates the gradient of the layer potential at a
point ``(0, x_n)`` and compares it with ``coefficient * ||f||_p`` over the
boundary strip.  Random smooth data land well below the bound.  Data built
from the kernel itself (the duality extremiser) attain it, which is what
makes the coefficient sharp.
"""

import numpy as np

from heatgrad import Exponent, HeatPoint
from heatgrad.potentials import extremal_boundary_data, random_smooth_data, verify_inequality

pt = HeatPoint(2, 1.0, 1.0, 1.0)
for problem, p in (("dirichlet", "2"), ("dirichlet", "inf"), ("neumann", "3")):
    ex = Exponent(p)
    rng = np.random.default_rng(7)
    ratios = [verify_inequality(problem, pt, ex, random_smooth_data(2, rng, pt.t, pt.a)).ratio
              for _ in range(10)]
    ext = verify_inequality(problem, pt, ex, extremal_boundary_data(problem, pt, ex))
    print(f"{problem:>9} p={p:<3}  random ratios: max {max(ratios):.4f}, "
          f"mean {np.mean(ratios):.4f}   extremal ratio: {ext.ratio:.8f}")
