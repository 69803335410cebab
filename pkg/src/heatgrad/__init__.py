"""Sharp coefficients in gradient estimates for the heat equation in a half-space.

Submodules: :mod:`specfun` (Gamma family), :mod:`sphere_quad` (1-D and
sphere quadrature), :mod:`extremal` (the sphere functional and its
maximisation), :mod:`coefficients` (Dirichlet and Neumann coefficients),
:mod:`potentials` (layer potentials and the inequality harness) and
:mod:`cli`.
"""

from .coefficients import (CoefficientResult, Exponent, HeatPoint, dirichlet_params,
                           dirichlet_sharp_coefficient, neumann_params,
                           neumann_sharp_coefficient, sharp_coefficient)
from .errors import (ConvergenceError, DomainError, HeatGradError, PreconditionError,
                     UnsupportedExponentError)
from .extremal import SphereFunctionalParams, eval_F, maximize_F
from .sphere_quad import QuadratureConfig

__version__ = "0.1.0"
