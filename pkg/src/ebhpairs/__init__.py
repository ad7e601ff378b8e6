"""Two-particle states of the one-dimensional extended Bose-Hubbard model."""

__version__ = "0.1.0"

from .bound import (
    BoundState,
    band_edge_limit,
    bound_states,
    bound_wavefunction,
    characteristic_cubic,
    classify_roots,
    existence_report,
    special_case_reference,
)
from .model import (
    ContinuumBand,
    KSector,
    ModelParams,
    continuum_band,
    continuum_energy,
    density_of_states,
    k_sector,
)
from .oracle import build_hamiltonian, residual_check, spectrum
from .scattering import (
    cross_section,
    pair_coupling_W,
    phase_shifts,
    resonance_momentum,
    scattering_lengths,
    scattering_wavefunction,
    sigma_zero_momenta,
)
