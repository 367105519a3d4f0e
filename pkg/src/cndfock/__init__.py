"""Gaussian white-noise measures built from conditionally negative definite functions.

Finite-dimensional, machine-checkable versions of the objects involved:
Hermite-coordinate test functions, quadratic CND models and their kernels,
the Gaussian measures ``P_lambda`` through their marginals, a truncated
symmetric Fock space, the transforms between them, and the
equivalence/singularity dichotomy for the ``lambda`` family.
"""
from .cnd import (CallableModel, CndModel, FourierType, KernelGram, L2Type, Mixture,
                  check_cnd, check_pd_gram, evaluate_N, phi_kernel, q_lambda)
from .config import RunConfig, load_config
from .dichotomy import (BetaSequence, distinguishability_experiment, hellinger_affinity,
                        jorsboe_decide, lambda_family_verdict, mixture_family_compare)
from .errors import (CndFockError, ModelError, PositivityError, QuadratureError,
                     RepresentationError)
from .fock import (FockSpace, FockVector, annihilate, apply, create, exponential_vector,
                   fock_space)
from .gaussian import GaussianField, covariance, covariance_matrix, sample
from .hermite import HermiteBasis, QuadratureRule, hermite_functions
from .measures import Atoms, Density, Lebesgue, PowerLaw, parse_measure
from .testfn import TestFunction, basis_function, hermite, indicator
from .transforms import (L2Element, r_lambda, t_adjoint_isometry_gram,
                         t_lambda_on_exponential, w_lambda, w_wick)

__version__ = "0.1.0"
