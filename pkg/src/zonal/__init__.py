"""Zonal spherical functions on SU(N)/SO(N): exact construction, Haar Monte
Carlo checks, radial-operator eigenchecks and the N=3 generating function."""

from ._kernels import BACKEND
from .errors import *  # noqa: F401,F403
from .exact import EvalPoint, Poly, evaluate, exact_quotient, pochhammer, to_elementary_basis
from .genfun import GenFunParams, QuadratureResult, quad_F, series_extract
from .haar import MCEstimate, OrthoFrame, mc_bc_sphere, mc_genfun, mc_phi, sample_haar, xi_values
from .radial import Convention, OperatorSpec, apply_radial, eigencheck
from .series import WeightLabel, phi_fundamental, phi_n2, phi_pq_oracle, series_coefficient, sphere_moment

__version__ = "0.1.0"
