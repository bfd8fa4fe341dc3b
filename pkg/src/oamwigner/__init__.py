"""Wigner functions for the angle/angular-momentum pair on the cylinder, plus the qudit torus."""

from .cylinder import (
    INVERSE_CONSTANT,
    TRACIALITY_CONSTANT,
    CylinderGrid,
    PhasePoint,
    WignerField,
    covariance_check,
    displacement,
    inverse_map,
    kernel_element,
    kernel_matrix,
    kernel_oracle,
    marginals,
    min_nphi,
    overlap,
    wigner_map,
)
from .lattice import (
    DensityMatrix,
    LWindow,
    Operator,
    StateVector,
    angmom_op,
    basis_state,
    euler_ops,
    make_window,
    rotation,
    shift_op,
)
from .qudit import (
    QuditPhaseSpace,
    measured_constants,
    pauli_ops,
    qudit_displacement,
    qudit_inverse,
    qudit_kernel,
    qudit_overlap,
    qudit_wigner_map,
)
from .states import (
    CoherentLabel,
    SuperpositionLabel,
    analytic_wigner_coherent,
    analytic_wigner_superposition,
    coherent_state,
    superposition_state,
)
from .theta import theta3, theta3_tail_bound

__version__ = "0.1.0"
