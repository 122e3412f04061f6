"""Numerical toolkit for the Poincare-Maxwell group PM(2+1): its Lie algebra,
coadjoint orbits, orbit dynamics and the equivalent Lorentz-force motion."""
from .casimir_orbits import (
    CasimirTriple,
    ChartDomainError,
    ChartError,
    ChartSingularError,
    OrbitChartPoint,
    OrbitClass,
    chart_embed,
    chart_project,
    classify,
    eval_casimirs,
    kernel_residual,
)
from .extended_phase import (
    ExtendedPhaseState,
    ParticleParams,
    bracket_table_check,
    extended_bracket,
    hamiltonian,
    moment_map,
)
from .lie_core import (
    BASIS,
    Generator,
    GroupParams,
    StructureConstants,
    ad_matrix,
    bracket,
    coad_apply,
    coadjoint_matrix,
    exp_ad_closed,
    exp_matrix_generic,
)
from .lorentz_sim import ClassicalTrajectory, equivalence_check, integrate_lorentz
from .orbit_dynamics import (
    IntegrationError,
    IntegratorConfig,
    orbit_flow,
    orbit_hamiltonian,
    poisson_matrix,
    symplectic_matrix,
)

__version__ = "0.1.0"
