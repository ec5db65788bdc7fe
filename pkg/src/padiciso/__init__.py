"""padiciso: p-adic differential-equation solving and isogeny rational
representations for Jacobians of hyperelliptic curves.

The package solves first-order systems H(X(t)) X'(t) = G(t) over unramified
p-adic rings by Newton doubling with a provably bounded precision loss, and
applies the solver to compute explicit rational representations of
multiplication maps and supplied isogenies between hyperelliptic Jacobians,
reconstructing them through half-gcd Pade approximation over the residue
field.
"""

from .errors import (ContextMismatchError, DegreeError, DivisionPrecisionError,
                     GenericityError, NonUnitInversionError, NotInvertibleError,
                     PadicError, ReconstructionError, RepeatedRootError,
                     WeierstrassError)
from .kernels import active_lane
from .padic import PadicContext, PadicElement, arith, divide, is_prime
from .series import (SquareRootError, TruncSeries, compose, derivative,
                     integrate, newton_inverse, newton_sqrt, series_div,
                     series_mul)
from .reconstruct import expand_fraction, pade_reconstruct
from .linalg import (SeriesMatrix, SeriesVector, gauss_jordan_inverse,
                     inverse_newton_step)
from .ode import (GenericSeriesH, HyperellipticH, OdeProblem, diff_solve,
                  naive_solve, random_integral_problem, required_precision)
from .curves import (CurvePoint, HyperellipticCurve, MumfordDivisor,
                     cantor_add, divisor_from_point, divisor_points,
                     hensel_lift_factor, hensel_lift_point, random_curve,
                     scalar_mul, sqrt_mod_p)
from .pipeline import (DegreeBounds, IsogenyProblem, RationalRepresentation,
                       build_system, degree_bounds, multiplication_problem,
                       reconstruct_representation, run_multiplication,
                       run_supplied, solve_isogeny, supplied_problem,
                       symmetric_series, verify_representation)

__version__ = "0.1.0"
