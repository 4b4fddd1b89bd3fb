"""Numerical q-calculus: q-special functions, transforms of q-derivatives and
spectral solvers for q-difference-differential equations."""

from .errors import (ConditioningError, ConsistencyError, ConvergenceError, DomainError,
                     NonDecayingInput, NonDecayingInputError, PoleError, QCalcError, StripError)
from .qcore import (DEFAULT_CONTROL, QParameter, SeriesControl, SeriesInfo, q_cos, q_exp,
                    q_gamma, q_gamma_residue, q_number, q_pochhammer_inf, q_shifted_factorial,
                    q_sin)
from .qderiv import (EvaluableFunction, dq_forward, dq_forward_power, dq_standard,
                     dq_standard_power, q_derivative, q_derivative_power)
from .transforms import (GridFunction, GridSpec, SpectralField, fourier_forward, fourier_inverse,
                         inverse_mellin_qgamma_kernel, inverse_mellin_residue_sum,
                         laplace_numeric, laplace_of_dq_forward_rhs, laplace_of_dq_standard_rhs,
                         mellin_numeric, mellin_of_dq_forward_power_rhs, mellin_of_dq_forward_rhs,
                         mellin_of_dq_standard_power_rhs, mellin_of_dq_standard_rhs)
from .solvers import (DiffusionProblem, NthOrderProblem, SolveReport, SpectralSolution,
                      WaveProblem, solve_q_diffusion, solve_q_nth, solve_q_wave)

__version__ = "0.1.0"
