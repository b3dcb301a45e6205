"""Emission spectra and decay dynamics of a qubit in a lossy cavity,
with the excitation-non-conserving coupling terms kept.

The public surface re-exports the main types and operations; see the
README for the CLI entry points.
"""

__version__ = "0.1.0"

from .dynamics import (
    AmplitudeTrace,
    QubitState,
    evolve_density_matrix,
    factorization_check,
    memory_kernel_population,
    survival_amplitude,
)
from .errors import ConfigurationError, NumericalFailure
from .oracle import (
    DiscretizedBath,
    OracleSpectrum,
    OracleTrace,
    default_mode_range,
    discretize,
    evolve,
    oracle_spectrum,
    renormalized_weight,
)
from .renormalization import (
    BathRenormalization,
    EnvironmentRenormalization,
    coupling_renorm_factor,
    solve_environment,
    solve_eta,
)
from .response import ResponseKernel, gamma, real_shift
from .spectral_density import (
    Environment,
    LorentzianCavityBath,
    LowFrequencyBath,
    OhmicBath,
    eval_density,
    integrable_cutoff,
    quality_factor,
)
from .spectrum import (
    LABEL_BRIGHT_LOWER,
    LABEL_BRIGHT_UPPER,
    LABEL_SINGLE,
    LABEL_SYMMETRIC,
    LABEL_VERY_ASYMMETRIC,
    Peak,
    PeakReport,
    SpectrumSeries,
    classify,
    emission_spectrum,
    find_peaks,
)
from .cli import (
    ExperimentConfig,
    PRESET_IDS,
    load_config,
    run_experiment,
)

__all__ = [
    "AmplitudeTrace",
    "BathRenormalization",
    "ConfigurationError",
    "DiscretizedBath",
    "Environment",
    "EnvironmentRenormalization",
    "ExperimentConfig",
    "LABEL_BRIGHT_LOWER",
    "LABEL_BRIGHT_UPPER",
    "LABEL_SINGLE",
    "LABEL_SYMMETRIC",
    "LABEL_VERY_ASYMMETRIC",
    "LorentzianCavityBath",
    "LowFrequencyBath",
    "NumericalFailure",
    "OhmicBath",
    "OracleSpectrum",
    "OracleTrace",
    "PRESET_IDS",
    "Peak",
    "PeakReport",
    "QubitState",
    "ResponseKernel",
    "SpectrumSeries",
    "classify",
    "coupling_renorm_factor",
    "default_mode_range",
    "discretize",
    "emission_spectrum",
    "eval_density",
    "evolve",
    "evolve_density_matrix",
    "factorization_check",
    "find_peaks",
    "gamma",
    "integrable_cutoff",
    "load_config",
    "memory_kernel_population",
    "oracle_spectrum",
    "quality_factor",
    "real_shift",
    "renormalized_weight",
    "run_experiment",
    "solve_environment",
    "solve_eta",
    "survival_amplitude",
    "__version__",
]
