"""Van der Waals interactions between few-level emitters with radiative dressing."""

from .backaction import (
    DressedSystem,
    SelfEnergyMatrix,
    SolveResult,
    dress,
    self_consistent_solve,
    self_energy_matrix,
)
from .config import RunConfig, load_config, parse_config, serialize
from .green import near_field_green, scaled_green, vacuum_green
from .levels import LevelSystem, three_level_default, two_level, validate
from .potential import (
    c6_bare_analytic,
    c6_eff,
    mixing_estimate,
    r_star,
    vdw_potential,
)
from .quad import QuadratureSpec, integrate_semi_infinite
from .response import (
    Response,
    alpha_bare,
    alpha_dressed,
    alpha_transition,
    bare_response,
    delta_alpha_en,
    delta_alpha_wf,
)
from .sweep import PotentialPoint, SweepResult, run_sweep

__version__ = "0.1.0"
