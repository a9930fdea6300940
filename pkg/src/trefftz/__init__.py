"""Generate and analyze absorbing boundary schemes from local Trefftz bases.

A scheme is the nullspace of the matrix of degrees of freedom applied to a set
of outgoing-wave basis functions; its quality is measured by the plane-wave
reflection coefficient.
"""

from .basisgen import (
    BasisSet,
    asymptotic_radial_basis,
    plane_wave_fan,
    theta_derivative_basis,
    trig_theta_basis,
)
from .dof import (
    LineIntegral,
    MixedDerivative,
    Nodal,
    QuadratureRule,
    RadialDerivative,
    VolumeIntegral,
    apply,
    apply_to_plane_wave,
)
from .errors import FamilyMismatchError, SchemeError, SolverError, TrefftzError
from .machine import (
    Scheme,
    TrefftzMatrix,
    assemble,
    flame_corner_scheme,
    flame_side_scheme,
    generate,
    method2_schemes,
    normalize,
    nullspace_scheme,
    scheme_apply,
)
from .reflection import ReflectionSample, SweepConfig, compare_sweeps, reflection, sweep
from .wavecore import (
    Mode,
    Point,
    PolyExpFunction,
    RadialFunction,
    WaveContext,
    theta_derivative_plane_wave,
)

__version__ = "0.1.0"
