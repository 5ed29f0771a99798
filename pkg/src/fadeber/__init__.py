"""
fadeber

Gaussian modelling of AWGN bit error curves and their average over Rayleigh fading.

Main exports:
- ModulationScheme, ber_curve: AWGN BER models for QPSK, M-QAM, M-FSK and M-ASK
- fit_gaussian, GaussianFit: Levenberg-Marquardt fit of a*exp(-((x-b)/c)^2)
- generalized_fading_ber: closed-form fading average of a Gaussian fit
- exact_fading_ber, average_over_rayleigh: exact and numerical references
- estimate_fading_ber: seeded Monte Carlo estimate
"""

__version__ = "1.0.0"

from .core import (
    BerCurve, ComparisonRow, FitOptions, FitReport, GaussianFit, McConfig, McEstimate,
    McMode, ModulationScheme, PUBLISHED_FITS, PUBLISHED_METRICS, SnrDomain, SnrValue,
    average_over_rayleigh, awgn_ber, ber_curve, compare_curves, estimate_fading_ber,
    exact_fading_ber, fit_gaussian, generalized_fading_ber, goodness_of_fit, load_ber_curve,
    q_function,
)
from .exceptions import (
    ConfigurationError, ConvergenceError, DomainMismatchError, FadeberError,
    InvalidParameterError,
)
from .settings import Settings, load_settings

__all__ = [
    "BerCurve",
    "ComparisonRow",
    "FitOptions",
    "FitReport",
    "GaussianFit",
    "McConfig",
    "McEstimate",
    "McMode",
    "ModulationScheme",
    "PUBLISHED_FITS",
    "PUBLISHED_METRICS",
    "SnrDomain",
    "SnrValue",
    "average_over_rayleigh",
    "awgn_ber",
    "ber_curve",
    "compare_curves",
    "estimate_fading_ber",
    "exact_fading_ber",
    "fit_gaussian",
    "generalized_fading_ber",
    "goodness_of_fit",
    "load_ber_curve",
    "q_function",
    "ConfigurationError",
    "ConvergenceError",
    "DomainMismatchError",
    "FadeberError",
    "InvalidParameterError",
    "Settings",
    "load_settings",
]
