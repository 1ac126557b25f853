"""Qudit monitoring maps and the emergence of realism through environment fragments."""

from .darwinism import (
    DimensionCapError,
    EnvironmentModel,
    FragmentProfile,
    distance_to_realism,
    evolve_dense,
    info_flow_check,
    mutual_info_profile,
    noisy_cnot,
    pointer_states,
    reduced_state_structured,
    system_state_after,
)
from .monitoring import (
    MonitoringSpec,
    ObservableBasis,
    accessible_info,
    decompose_irreality,
    dephase,
    effective_strength,
    irreality,
    monitor,
    monitor_repeated,
    mutual_information,
)
from .observable import (
    PhaseVector,
    UnitaryObservable,
    alphas_from_phases,
    build_T,
    generalized_observables,
    overlap_matrix,
    povm_from_T,
    vacuum_overlap,
)
from .operators import (
    InvalidStateError,
    ket_to_density,
    partial_trace,
    random_density,
    tensor,
    trace_distance,
    von_neumann_entropy,
)
from .phases import SolverReport, analytic_phases, eta_from_phases, is_solution, residuals, solve_phases
from .qubit import c_maybe, channel_mismatch, compare_with_general_T, monitored_by_cmaybe
from .weyl import clock_Z, fourier_V, omega, shift_X

__version__ = "0.1.0"
