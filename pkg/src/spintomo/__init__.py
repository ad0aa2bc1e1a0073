"""Tomographic-probability representation of spin states.

Forward maps from density matrices to spin tomograms, their inversion by
integration over the rotation group, Shannon-type tomographic entropies and
informations, and minimization of tomographic entropy over U(n).
"""

from ._backend import kernels as _kernels
from .entropy import (complete_conditional_entropy, conditional_entropy_given, joint_entropy,
                      joint_tomographic_entropy, kullback_mutual_information, mutual_information,
                      shannon_entropy, subsystem_tomographic_entropy, tomographic_entropy,
                      tomographic_mutual_information, von_neumann_entropy)
from .errors import (DimensionError, QuadratureError, ReconstructionError, SpinTomoError,
                     ValidationError, ZeroProbabilityError)
from .minimizer import (MinimizationResult, MinimizerConfig, UnitaryParametrization, analytic_minimum,
                        entropy_landscape_scan, entropy_objective, minimize)
from .state import (BipartiteShape, DensityMatrix, PureState, bell_state, check, from_pure,
                    maximally_mixed, partial_trace, random_density, spectrum, tensor_product, validate)
from .su2 import (EulerAngles, GroupQuadrature, HalfInteger, compose, half, quadrature_grid,
                  su2_fundamental, wigner_3j, wigner_D, wigner_small_d)
from .tomography import (JointTomogram, SpinTomogram, UnitaryFrame, conditional, marginal,
                         reconstruct_density, spin_tomogram, two_spin_tomogram,
                         two_spin_unitary_tomogram, unitary_tomogram)

__version__ = "0.1.0"
BACKEND = _kernels.NAME
