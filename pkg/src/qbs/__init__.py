"""Two-mode beam splitter simulations.

Fock-state evolution, Schmidt-spectrum entanglement measures, photon
statistics and Hong-Ou-Mandel interference for constant-coefficient and
frequency-dependent (coupled-waveguide) splitters.
"""

from .bs_core import (
    MAX_TOTAL_PHOTONS,
    BsParams,
    FockPair,
    OutputDistribution,
    amplitude_c,
    brute_force_distribution,
    bs_matrix,
    holland_burnett_state,
    lambda_table,
    mean_photon_numbers,
    output_distribution,
)
from .entanglement import (
    SchmidtSpectrum,
    argmax_entanglement,
    entropy_11_closed,
    schmidt_k_11_closed,
    schmidt_k_hb,
    schmidt_k_s0,
    schmidt_spectrum,
    shannon_entropy,
)
from .hom import (
    HomCurve,
    JsaDerived,
    JsaParams,
    balanced_tbs,
    constant_coefficient_dip,
    conventional_curve,
    conventional_dip_closed,
    difference_bandwidth,
    frequency_dependent_curve,
    hom_conventional,
    hom_frequency_dependent,
    hom_identical_zero_delay,
    jsa_derived,
    jsa_norm_constant,
    mean_reflectance,
    p12_frequency_dependent,
    reflectance_moments,
    visibility,
)
from .numerics import (
    ConvergenceError,
    QuadratureRule,
    erf,
    gauss_hermite,
    gaussian_expect,
    hyp2f1_terminating,
    hyp4f3_terminating,
    jacobi_p,
)
from .waveguide import (
    MediumParams,
    SpectralProfile,
    WaveguideParams,
    asymptotic_schmidt_modes,
    averaged_schmidt_modes,
    coincidence_probs_asymptotic,
    coupled_mode_transfer,
    entropy_asymptotic_11,
    omega_from_medium,
    reflectance,
)

__version__ = "0.1.0"

__all__ = [
    "MAX_TOTAL_PHOTONS",
    "BsParams",
    "ConvergenceError",
    "FockPair",
    "HomCurve",
    "JsaDerived",
    "JsaParams",
    "MediumParams",
    "OutputDistribution",
    "QuadratureRule",
    "SchmidtSpectrum",
    "SpectralProfile",
    "WaveguideParams",
    "amplitude_c",
    "argmax_entanglement",
    "asymptotic_schmidt_modes",
    "averaged_schmidt_modes",
    "balanced_tbs",
    "brute_force_distribution",
    "bs_matrix",
    "coincidence_probs_asymptotic",
    "constant_coefficient_dip",
    "conventional_curve",
    "conventional_dip_closed",
    "coupled_mode_transfer",
    "difference_bandwidth",
    "entropy_11_closed",
    "entropy_asymptotic_11",
    "erf",
    "frequency_dependent_curve",
    "gauss_hermite",
    "gaussian_expect",
    "holland_burnett_state",
    "hom_conventional",
    "hom_frequency_dependent",
    "hom_identical_zero_delay",
    "hyp2f1_terminating",
    "hyp4f3_terminating",
    "jacobi_p",
    "jsa_derived",
    "jsa_norm_constant",
    "lambda_table",
    "mean_photon_numbers",
    "mean_reflectance",
    "omega_from_medium",
    "output_distribution",
    "p12_frequency_dependent",
    "reflectance",
    "reflectance_moments",
    "schmidt_k_11_closed",
    "schmidt_k_hb",
    "schmidt_k_s0",
    "schmidt_spectrum",
    "shannon_entropy",
    "visibility",
]
