from .asymptotic import AsymptoticConstants, asymptotic_constants
from .branch import BranchError, BranchPath, continue_branch
from .chamber import chamber_integrals, integrate_chamber
from .cone import cone_integrals, i_minus, i_plus, integrate_cone, select_rho
from .core import IntegralValue, QuadConfig

__all__ = [
    "AsymptoticConstants",
    "asymptotic_constants",
    "BranchError",
    "BranchPath",
    "IntegralValue",
    "QuadConfig",
    "chamber_integrals",
    "cone_integrals",
    "i_minus",
    "i_plus",
    "integrate_cone",
    "select_rho",
    "continue_branch",
    "integrate_chamber",
]
