"""Multiple-quantum coherence spectra and entanglement certificates.

Simulate dipolar-coupled spin-1/2 systems prepared in thermal equilibrium
and evolved under the two-quantum pair-flip Hamiltonian; decompose the
evolved state into coherence orders; and convert the resulting intensity
distribution into skew information, Fisher information, and many-spin
entanglement-depth certificates.

Two engines cover the size range: a dense product-basis engine for
arbitrary coupling networks (up to 14 spins by default) and a total-spin
sector engine for all-equal couplings (hundreds of spins).
"""

from .config import RunConfig, config_from_dict, load_config
from .dynamics import (CoherenceSpectrum, DensityMatrix, Propagator,
                       coherence_decomposition, coherence_spectrum, evolve,
                       log_equilibrium_purity, log_partition, phase_signal,
                       second_moment, thermal_state)
from .errors import (BasisMismatch, CapExceeded, ConfigError,
                     ConsistencyError, GeometryError, MQSimError,
                     NotADensityMatrix)
from .kernels import backend
from .nanopore import (DEFAULT_NANOPORE_CAP, NanoporeEngine, NanoporeModel,
                       SectorBlock, check_sector_completeness,
                       nanopore_information, nanopore_spectrum,
                       sector_multiplicity_log, sector_spins)
from .qinfo import (DenseEngine, DepthReport, InformationPair,
                    entanglement_depth, fisher_lower_bound,
                    information_report, producibility_bound, qfi,
                    qfi_of_state, wy_skew_direct, wy_skew_via_spectrum)
from .spincore import (DEFAULT_DENSE_CAP, Geometry, HermitianOperator,
                       SpinSystem, ZeemanBasis, build_iz,
                       build_mq_hamiltonian, build_zeeman_basis,
                       dipolar_couplings_from_geometry)
from .sweep import ResultRow, SweepResult, run_sweep

__version__ = "0.1.0"

__all__ = [
    "BasisMismatch", "CapExceeded", "CoherenceSpectrum", "ConfigError",
    "ConsistencyError", "DEFAULT_DENSE_CAP", "DEFAULT_NANOPORE_CAP",
    "DenseEngine", "DensityMatrix", "DepthReport", "Geometry",
    "GeometryError", "HermitianOperator", "InformationPair", "MQSimError",
    "NanoporeEngine", "NanoporeModel", "NotADensityMatrix", "Propagator",
    "ResultRow", "RunConfig", "SectorBlock", "SpinSystem", "SweepResult",
    "ZeemanBasis", "backend", "build_iz", "build_mq_hamiltonian",
    "build_zeeman_basis", "check_sector_completeness",
    "coherence_decomposition", "coherence_spectrum", "config_from_dict",
    "dipolar_couplings_from_geometry", "entanglement_depth", "evolve",
    "fisher_lower_bound", "information_report", "load_config",
    "log_equilibrium_purity", "log_partition", "nanopore_information",
    "nanopore_spectrum", "phase_signal", "producibility_bound", "qfi",
    "qfi_of_state", "run_sweep", "second_moment", "sector_multiplicity_log",
    "sector_spins", "thermal_state", "wy_skew_direct",
    "wy_skew_via_spectrum",
]
