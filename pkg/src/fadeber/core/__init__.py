"""
Core numerical modules.

Contains:
- numerics: error functions, Q-function, adaptive quadrature, SNR units
- modulation: AWGN BER models and BER curves
- gaussfit: Gaussian fitting and goodness of fit
- fading: Rayleigh-fading averages (closed form, exact, quadrature)
- montecarlo: seeded channel simulation
- published: published Gaussian constants and fit metrics
"""

from .numerics import (
    QuadratureResult, SnrDomain, SnrValue,
    erf, erfc, erfcx, q_function, q_craig, integrate_adaptive,
    db_to_linear, linear_to_db,
)
from .modulation import (
    BerCurve, ModulationScheme, SchemeConstants, SchemeKind,
    awgn_ber, awgn_ber_linear, ber_curve, load_ber_curve, scheme_constants,
)
from .gaussfit import (
    FitOptions, FitReport, GaussianFit,
    fit_gaussian, gaussian_eval, goodness_of_fit,
)
from .fading import (
    ComparisonRow, FadingPoint,
    average_over_rayleigh, chi2_pdf, compare_curves, exact_fading_ber,
    generalized_fading_ber, generalized_fading_curve,
    rayleigh_q_average, rayleigh_q2_average,
)
from .montecarlo import (
    ChannelSample, McConfig, McEstimate, McMode,
    bitlevel_qpsk_ber, draw_channel, estimate_fading_ber, semi_analytic_ber,
)
from .published import PUBLISHED_FITS, PUBLISHED_METRICS

__all__ = [
    "QuadratureResult", "SnrDomain", "SnrValue",
    "erf", "erfc", "erfcx", "q_function", "q_craig", "integrate_adaptive",
    "db_to_linear", "linear_to_db",
    "BerCurve", "ModulationScheme", "SchemeConstants", "SchemeKind",
    "awgn_ber", "awgn_ber_linear", "ber_curve", "load_ber_curve", "scheme_constants",
    "FitOptions", "FitReport", "GaussianFit",
    "fit_gaussian", "gaussian_eval", "goodness_of_fit",
    "ComparisonRow", "FadingPoint",
    "average_over_rayleigh", "chi2_pdf", "compare_curves", "exact_fading_ber",
    "generalized_fading_ber", "generalized_fading_curve",
    "rayleigh_q_average", "rayleigh_q2_average",
    "ChannelSample", "McConfig", "McEstimate", "McMode",
    "bitlevel_qpsk_ber", "draw_channel", "estimate_fading_ber", "semi_analytic_ber",
    "PUBLISHED_FITS", "PUBLISHED_METRICS",
]
