"""Conservative local discontinuous Galerkin solver for the 1D NLS equation."""

from .basis import LegendreBasis, QuadratureRule, cell_mass_inverse, gauss_rule, legendre_eval
from .diagnostics import (
    ConvergenceRecord,
    charge,
    convergence_study,
    entropy_flux,
    l2_error,
)
from .field import DGField, project_l2
from .mesh import Mesh1D, make_uniform_mesh, map_from_reference, map_to_reference
from .operator import (
    FluxParam,
    Nonlinearity,
    NonFiniteFieldError,
    SpatialOperator,
    flux_u_hat,
    flux_v_hat,
)
from .projections import (
    ProjectionSpec,
    SingularSystemError,
    circulant_correction,
    gauss_radau_project,
    generalized_project,
    projection_order_study,
)
from .solutions import InitialCondition, double_soliton_ic, gaussian_ic, soliton_exact
from .stepping import EvolveError, NonConvergenceError, StepperConfig, Trajectory, evolve, step

__version__ = "0.1.0"

__all__ = [
    "LegendreBasis",
    "QuadratureRule",
    "cell_mass_inverse",
    "gauss_rule",
    "legendre_eval",
    "ConvergenceRecord",
    "charge",
    "convergence_study",
    "entropy_flux",
    "l2_error",
    "DGField",
    "project_l2",
    "Mesh1D",
    "make_uniform_mesh",
    "map_from_reference",
    "map_to_reference",
    "FluxParam",
    "Nonlinearity",
    "NonFiniteFieldError",
    "SpatialOperator",
    "flux_u_hat",
    "flux_v_hat",
    "ProjectionSpec",
    "SingularSystemError",
    "circulant_correction",
    "gauss_radau_project",
    "generalized_project",
    "projection_order_study",
    "InitialCondition",
    "double_soliton_ic",
    "gaussian_ic",
    "soliton_exact",
    "EvolveError",
    "NonConvergenceError",
    "StepperConfig",
    "Trajectory",
    "evolve",
    "step",
    "__version__",
]
