"""Perfect transfer of coherent-state qubits through three coupled cavities."""

from .analytic import (
    RabiFrequencies,
    TransferCoefficients,
    as_printed_u14,
    coefficient_table,
    rabi_frequencies,
    transfer_coefficients,
    unitarity_defect,
)
from .model import (
    InvalidInputError,
    ModeIndex,
    ModelParams,
    build_system_matrix,
    propagator,
    propagator_row_b1,
)
from .qubit import (
    CoherentQubit,
    DegenerateQubitError,
    branch_amplitudes,
    coherent_overlap,
    qubit_normalization,
)
from .transfer import (
    Trajectory,
    TransferResult,
    avg_photon_number,
    cavity_population_factor,
    design_search,
    find_transfer_time,
    population_trajectory,
    qubit_transfer_fidelity,
)

__version__ = "0.1.0"
