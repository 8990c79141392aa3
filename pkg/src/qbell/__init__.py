"""Quantum Fisher information of squeezed quasi-Bell probes for phase estimation."""

from .entanglement import EntanglementResult, concurrence, entanglement_entropy
from .errors import DegenerateProbe, NoRoot, OutOfRange, QbellError, TruncationNotConverged
from .optimizer import OptimizationProblem, OptimizationResult, optimize, sweep_l
from .qfi_disturbed import (
    DisturbanceParams,
    output_photon_number_phi0,
    qfi_disturbed_finite_phi,
    qfi_disturbed_phi0,
)
from .qfi_ideal import QfiReport, gamma1, gamma2, qfi_ideal_l0
from .states import (
    ComponentParams,
    EnergyParams,
    ProbeParams,
    component_energy,
    from_energy,
    input_photon_number,
    invert_energy,
    normalization,
    overlap_kappa,
    probe_from_energy,
)

__version__ = "0.1.0"
