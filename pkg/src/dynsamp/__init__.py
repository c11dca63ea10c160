"""Dynamical sampling on the integers.

A signal ``f`` evolves under a convolution operator ``A f = a * f`` and is
observed on a spatial pattern at times ``0, ..., N-1``.  The package builds the
per-frequency systems that decide whether those samples determine ``f``,
reconstructs ``f`` when they do, and estimates frame and density constants.
"""

__version__ = "0.1.0"

from .frames import (
    DecayCurve,
    DensityCertificate,
    FrameBounds,
    LemmaConstants,
    NoCertificateError,
    RegularityEnvelope,
    RegularityError,
    analysis_matrix,
    analytic_frame_bounds,
    density_certificate,
    empirical_frame_bounds,
    finite_set_decay,
    lemma_constants,
    regularity,
)
from .reconstruct import (
    NoiseSpec,
    NoiseSweepRow,
    PeriodicModel,
    ReconstructionResult,
    ZeroReferenceWarning,
    add_noise,
    noise_sweep,
    recon_error,
    reconstruct,
)
from .sampling import (
    DensityReport,
    ExplicitPattern,
    InvalidPatternError,
    PeriodicPattern,
    SpaceTimeSamples,
    WindowCoverageError,
    banach_density,
    collect,
    explicit,
    gap_stats,
    sublattice,
)
from .signals import (
    FrequencyGrid,
    Kernel,
    Signal,
    convolve,
    delta,
    discrete_sinc,
    dtft,
    evolve,
    kernel_power,
    symbol,
    symbol_derivative,
)
from .spectral import (
    StackedSystem,
    Verdict,
    build_system,
    completeness_check,
    diagnostics,
    gautschi_bound,
    inverse_norm,
    multiplicity,
    node_separation,
    nodes,
    refine_sup_inverse_norm,
    sup_inverse_norm,
)

__all__ = [
    "__version__",
    "DecayCurve",
    "DensityCertificate",
    "DensityReport",
    "ExplicitPattern",
    "FrameBounds",
    "FrequencyGrid",
    "InvalidPatternError",
    "Kernel",
    "LemmaConstants",
    "NoCertificateError",
    "NoiseSpec",
    "NoiseSweepRow",
    "PeriodicModel",
    "PeriodicPattern",
    "ReconstructionResult",
    "RegularityEnvelope",
    "RegularityError",
    "Signal",
    "SpaceTimeSamples",
    "StackedSystem",
    "Verdict",
    "WindowCoverageError",
    "ZeroReferenceWarning",
    "add_noise",
    "analysis_matrix",
    "analytic_frame_bounds",
    "banach_density",
    "build_system",
    "collect",
    "completeness_check",
    "convolve",
    "delta",
    "density_certificate",
    "diagnostics",
    "discrete_sinc",
    "dtft",
    "empirical_frame_bounds",
    "evolve",
    "explicit",
    "finite_set_decay",
    "gap_stats",
    "gautschi_bound",
    "inverse_norm",
    "kernel_power",
    "lemma_constants",
    "multiplicity",
    "node_separation",
    "nodes",
    "noise_sweep",
    "recon_error",
    "reconstruct",
    "refine_sup_inverse_norm",
    "regularity",
    "sublattice",
    "sup_inverse_norm",
    "symbol",
    "symbol_derivative",
]
