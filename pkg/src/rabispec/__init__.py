"""Spectra of the 2-photon, two-mode and driven Rabi models.

The regular spectrum of each model is computed as the zero set of a
transcendental function built from a minimal-solution continued fraction, and
cross-validated against an independent truncated Fock-space diagonalization.
"""

from .contfrac import (
    CFValue,
    backward_recursion_ratio,
    eval_continued_fraction,
    minimal_ratio_sequence,
)
from .errors import (
    CoefficientPole,
    ConvergenceFailure,
    CouplingOutOfRange,
    DivisionBlowup,
    EmptyWindow,
    NotAnEigenvalueWarning,
    NotDecoupled,
    PoleCollision,
    RabispecError,
    TruncationCeiling,
    TruncationInsufficient,
    ZeroCoupling,
)
from .models import (
    AsymptoticRoots,
    BogoliubovParams,
    ModelKind,
    ModelParams,
    Sector,
    ThreeTermCoeffs,
    asymptotic_roots,
    bogoliubov_params,
    closed_form_spectrum_g0,
    pole_energies,
    three_term_coeffs,
)
from .oracle import (
    OracleSector,
    TruncatedHamiltonian,
    build_hamiltonian,
    eigen_lowest,
    map_sector,
    oracle_spectrum,
)
from .series import (
    SeriesCoefficients,
    eval_wavefunction,
    minimal_series,
    norm_tail_ratio,
)
from .spectral import (
    Bracket,
    SpectralSample,
    SpectrumOptions,
    SpectrumResult,
    compute_spectrum,
    refine_root,
    scan_brackets,
    spectral_function,
    split_spectral_value,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticRoots",
    "BogoliubovParams",
    "Bracket",
    "CFValue",
    "CoefficientPole",
    "ConvergenceFailure",
    "CouplingOutOfRange",
    "DivisionBlowup",
    "EmptyWindow",
    "ModelKind",
    "ModelParams",
    "NotAnEigenvalueWarning",
    "NotDecoupled",
    "OracleSector",
    "PoleCollision",
    "RabispecError",
    "Sector",
    "SeriesCoefficients",
    "SpectralSample",
    "SpectrumOptions",
    "SpectrumResult",
    "ThreeTermCoeffs",
    "TruncatedHamiltonian",
    "TruncationCeiling",
    "TruncationInsufficient",
    "ZeroCoupling",
    "asymptotic_roots",
    "backward_recursion_ratio",
    "bogoliubov_params",
    "build_hamiltonian",
    "closed_form_spectrum_g0",
    "compute_spectrum",
    "eigen_lowest",
    "eval_continued_fraction",
    "eval_wavefunction",
    "map_sector",
    "minimal_ratio_sequence",
    "minimal_series",
    "norm_tail_ratio",
    "oracle_spectrum",
    "pole_energies",
    "refine_root",
    "scan_brackets",
    "spectral_function",
    "split_spectral_value",
    "three_term_coeffs",
]
