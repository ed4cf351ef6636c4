"""Operator-space entanglement entropy of evolved operators in the Ising chain.

The transverse-field Ising chain maps onto free Majorana fermions, and a
Heisenberg-evolved basis operator is fully described by which single-particle
modes it occupies.  This package computes the operator's entanglement entropy
across the middle bond from windowed mode correlation matrices -- on a finite
open chain at any field, or directly in the thermodynamic limit at the
critical field through Bessel-function propagators -- plus closed-form
long-time saturation values, a block-Toeplitz spectral route, logarithmic
growth fits, and a brute-force exact-diagonalization oracle.

The pieces compose like this::

    parse_operator_spec  ->  OperatorSpec          (what evolves)
    FiniteEngine / TLEngine                        (how it evolves)
    entropy_series       ->  EntropySeries         (S(t) on a grid)
    fit_log_growth, saturation_entropy, build_psi  (what the curve means)

and the ``osee`` command line wraps the same flow.
"""

from .bessel import BesselTable, bessel_row
from .entropy import (
    CorrelationMatrix,
    EntropySeries,
    SpectralDomainError,
    binary_entropy,
    entropy_from_correlation,
    entropy_from_spectrum,
    entropy_series,
    series_from_csv,
    series_from_json_dict,
    series_to_csv,
    series_to_json_dict,
)
from .finite import (
    FiniteEngine,
    GeneratorMatrix,
    PropagatorMatrix,
    build_generator,
    correlation_matrix_finite,
    propagate,
)
from .growth import LogFit, fit_log_growth, fit_series
from .lattice import (
    ChainConfig,
    OccupationProfile,
    OperatorRangeError,
    OperatorSemanticsError,
    OperatorSpec,
    OperatorSpecError,
    OperatorSyntaxError,
    format_operator_spec,
    occupation_profile,
    parse_operator_spec,
    pauli_to_majorana,
)
from .saturation import (
    OverlapMatrix,
    gram_schmidt_spectrum,
    overlap_matrix,
    psi_overlap,
    saturation_entropy,
    saturation_spectrum,
    two_label_spectrum,
)
from .tl import TLEngine, TruncationError, TruncationPolicy, correlation_matrix_tl, gamma_prime_tl
from .toeplitz import EigenCensus, PsiMatrix, build_psi, eigen_census, spectral_entropy_psi

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # lattice
    "ChainConfig", "OperatorSpec", "OccupationProfile",
    "OperatorSpecError", "OperatorSyntaxError", "OperatorRangeError", "OperatorSemanticsError",
    "parse_operator_spec", "format_operator_spec", "pauli_to_majorana", "occupation_profile",
    # bessel
    "BesselTable", "bessel_row",
    # entropy
    "CorrelationMatrix", "EntropySeries", "SpectralDomainError",
    "binary_entropy", "entropy_from_spectrum", "entropy_from_correlation", "entropy_series",
    "series_to_csv", "series_from_csv", "series_to_json_dict", "series_from_json_dict",
    # finite chain
    "GeneratorMatrix", "PropagatorMatrix", "FiniteEngine",
    "build_generator", "propagate", "correlation_matrix_finite",
    # thermodynamic limit
    "TLEngine", "TruncationPolicy", "TruncationError",
    "correlation_matrix_tl", "gamma_prime_tl",
    # saturation
    "OverlapMatrix", "psi_overlap", "overlap_matrix",
    "saturation_spectrum", "saturation_entropy", "gram_schmidt_spectrum", "two_label_spectrum",
    # toeplitz spectral route
    "PsiMatrix", "EigenCensus", "build_psi", "spectral_entropy_psi", "eigen_census",
    # growth fits
    "LogFit", "fit_log_growth", "fit_series",
]
