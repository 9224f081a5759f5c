"""Assignment maps, dynamical-map positivity and collision models for
open quantum systems with initial system-environment correlation."""
from .assignment import (
    AssignmentMap, BasisAssignment, HermBasis, Witness, apply, check_consistency, dual_basis,
    from_basis, herm_basis, negativity_witness, product_assignment,
)
from .collision import CollisionConfig, Trajectory, collision_step, simulate, step_hiding_check, step_map
from .dynamics import (
    DynamicalMap, PositivityReport, apply_map, compose, cp_test, positivity_scan,
    positivity_weights,
)
from .errors import (
    DimensionError, NotHermitianError, NotUnitaryError, NumericalError, ValidationError,
)
from .hide import CorrelationDecomposition, decompose, hidden_map_is_cp, hiding_residual
from .reveal import RevealPlan, build_reveal, shift_op, verify_reveal, witness_assignment
from .tensor_core import (
    DimSpec, EigDecomp, expm_hermitian, hermitian_eig, is_psd, kron, min_eigenvalue,
    partial_trace,
)

__version__ = "0.1.0"
