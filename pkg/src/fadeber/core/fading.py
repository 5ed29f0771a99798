"""
Average bit error probability over flat Rayleigh fading.

Three routes to the same quantity:

- ``generalized_fading_ber``: closed-form average of a Gaussian BER model,
  P = (a c sqrt(pi) / (2 gamma)) exp(-b^2/c^2) erfcx(c/(2 gamma) - b/c).
  Written with erfcx it stays finite as gamma -> 0, where the expanded form
  exp(c^2/(4 gamma^2)) * erfc(...) overflows. For negative erfcx arguments the
  exp(-b^2/c^2) factor is folded into the erfc form instead.
- ``exact_fading_ber``: the exact per-scheme expressions for QPSK, M-QAM, M-FSK, M-ASK.
- ``average_over_rayleigh``: numerical average of any conditional BER against the
  exponential SNR density (1/gamma) exp(-xi/gamma).

gamma is the linear average SNR E[|h|^2] Eb/N0 with E[|h|^2] = 1.

The Gaussian constants are applied to linear xi even when they were fitted against
dB-domain curves; the resulting offset from the exact curves is reported through
``ComparisonRow.ratio``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence

import numpy as np

from ..exceptions import InvalidParameterError
from ..logging import timed_operation
from .gaussfit import GaussianFit
from .modulation import ModulationScheme, SchemeKind, scheme_constants
from .numerics import DEFAULT_MAX_EVALUATIONS, erfc, erfcx, integrate_adaptive

logger = logging.getLogger(__name__)

# Exponential tail beyond gamma * ln(1/TAIL_EPSILON) holds at most TAIL_EPSILON of the mass.
TAIL_EPSILON = 1e-16
# Lowest breakpoint of the geometric ladder used to resolve integrands near xi = 0.
_LADDER_FLOOR = 1e-3


@dataclass(frozen=True)
class FadingPoint:
    """Average BER at one average SNR."""

    gamma: float
    ber: float

    def __post_init__(self) -> None:
        if not self.gamma > 0:
            raise InvalidParameterError(f"gamma must be positive, got {self.gamma}")
        if not 0.0 < self.ber < 1.0:
            raise InvalidParameterError(f"Average BER must lie in (0, 1), got {self.ber}")


@dataclass(frozen=True)
class ComparisonRow:
    """Generalized, exact and numerically averaged BER at one Eb/N0."""

    ebn0_db: float
    ber_generalized: float
    ber_exact: float
    ber_quadrature: float
    ratio: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.ratio) and self.ratio > 0):
            raise InvalidParameterError(f"Ratio must be finite and positive, got {self.ratio}")


def _check_gamma(gamma: float) -> None:
    if not (math.isfinite(gamma) and gamma > 0):
        raise InvalidParameterError(f"Average SNR gamma must be positive and finite, got {gamma}")


def chi2_pdf(xi: float, gamma: float) -> float:
    """Density of xi = |h|^2 Eb/N0 under Rayleigh fading: (1/gamma) exp(-xi/gamma)."""
    _check_gamma(gamma)
    if xi < 0:
        raise InvalidParameterError(f"xi must be non-negative, got {xi}")
    return math.exp(-xi / gamma) / gamma


def generalized_fading_ber(fit: GaussianFit, gamma: float) -> float:
    """
    Closed-form Rayleigh average of the Gaussian model ``fit`` at average SNR ``gamma``.

    Raises:
        InvalidParameterError: If gamma <= 0
    """
    _check_gamma(gamma)
    a, b, c = fit.a, fit.b, fit.c
    z = c / (2.0 * gamma) - b / c
    scale = a * c * math.sqrt(math.pi) / (2.0 * gamma)
    if z < 0:
        # |z| < b/c here, so the exponent is non-positive and erfc(z) <= 2
        return scale * math.exp(z * z - (b * b) / (c * c)) * float(erfc(z))
    return scale * math.exp(-(b * b) / (c * c)) * float(erfcx(z))


def generalized_fading_curve(fit: GaussianFit, gammas: Iterable[float]) -> List[FadingPoint]:
    """Closed-form average BER at each linear average SNR in ``gammas``."""
    return [FadingPoint(gamma=g, ber=generalized_fading_ber(fit, g)) for g in gammas]


def _breakpoint_ladder(upper: float) -> List[float]:
    if upper <= _LADDER_FLOOR:
        return []
    count = int(math.ceil(math.log2(upper / _LADDER_FLOOR)))
    return [float(p) for p in np.geomspace(_LADDER_FLOOR, upper, count + 1)[:-1]]


def average_over_rayleigh(
    ber_fn: Callable[[float], float],
    gamma: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-300,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> float:
    """
    Average a conditional BER over the Rayleigh SNR density by adaptive quadrature.

    The integral runs over [0, gamma * ln(1/1e-16)]; the neglected tail is at most
    1e-16 times the supremum of ber_fn. Breakpoints on a doubling ladder from 1e-3 keep
    narrow features near xi = 0 resolved when gamma is large.

    Raises:
        InvalidParameterError: If gamma <= 0
        ConvergenceError: Propagated from the quadrature
    """
    _check_gamma(gamma)
    upper = gamma * math.log(1.0 / TAIL_EPSILON)

    def integrand(xi: float) -> float:
        return float(ber_fn(xi)) * math.exp(-xi / gamma) / gamma

    result = integrate_adaptive(
        integrand, 0.0, upper,
        abs_tol=abs_tol, rel_tol=rel_tol,
        breakpoints=_breakpoint_ladder(upper),
        max_evaluations=max_evaluations,
    )
    return result.value


def _rayleigh_mu(beta: float, gamma: float) -> float:
    if not (math.isfinite(beta) and beta > 0):
        raise InvalidParameterError(f"beta must be positive, got {beta}")
    _check_gamma(gamma)
    bg = beta * gamma
    return math.sqrt(bg / (bg + 2.0))


def rayleigh_q_average(beta: float, gamma: float) -> float:
    """E[Q(sqrt(beta xi))] = (1 - mu) / 2 with mu = sqrt(beta gamma / (beta gamma + 2))."""
    return 0.5 * (1.0 - _rayleigh_mu(beta, gamma))


def rayleigh_q2_average(beta: float, gamma: float) -> float:
    """E[Q^2(sqrt(beta xi))] = 1/4 - (mu / pi) arctan(1 / mu)."""
    mu = _rayleigh_mu(beta, gamma)
    return 0.25 - (mu / math.pi) * math.atan(1.0 / mu)


def exact_fading_ber(s: ModulationScheme, gamma: float) -> float:
    """
    Exact average BER of scheme ``s`` over Rayleigh fading.

    QPSK:  (1/2)(1 - sqrt(gamma/(gamma+1)))
    M-QAM: K1 + K2 sqrt(beta1 gamma/(beta1 gamma + 2)),
           K1 = (2 alpha1 - alpha1^2)/log2 M,
           K2 = (4 alpha1^2 arctan(sqrt((beta1 gamma + 2)/(beta1 gamma))) - 2 pi alpha1)/(pi log2 M)
    M-FSK: (M/2)(1 - sqrt(gamma log2 M/(gamma log2 M + 2)))
    M-ASK: (alpha2/2)(1 - sqrt(beta2 gamma/(beta2 gamma + 2)))

    The M-FSK expression is twice the Rayleigh average of the M-FSK AWGN model used in
    ``modulation``.

    Raises:
        InvalidParameterError: If gamma <= 0
    """
    _check_gamma(gamma)
    m = s.order
    log2m = s.bits_per_symbol

    if s.kind is SchemeKind.QPSK:
        return 0.5 * (1.0 - math.sqrt(gamma / (gamma + 1.0)))

    if s.kind is SchemeKind.QAM:
        const = scheme_constants(s)
        alpha, beta = const.alpha1, const.beta1
        bg = beta * gamma
        k1 = (2.0 * alpha - alpha * alpha) / log2m
        k2 = (4.0 * alpha * alpha * math.atan(math.sqrt((bg + 2.0) / bg))
              - 2.0 * math.pi * alpha) / (math.pi * log2m)
        return k1 + k2 * math.sqrt(bg / (bg + 2.0))

    if s.kind is SchemeKind.FSK:
        gl = gamma * log2m
        return (m / 2.0) * (1.0 - math.sqrt(gl / (gl + 2.0)))

    const = scheme_constants(s)
    bg = const.beta2 * gamma
    return (const.alpha2 / 2.0) * (1.0 - math.sqrt(bg / (bg + 2.0)))


@timed_operation("fading.compare_curves")
def compare_curves(
    s: ModulationScheme,
    fit: GaussianFit,
    ebn0_db_grid: Sequence[float],
    workers: int = 1,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-300,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> List[ComparisonRow]:
    """
    Generalized, exact and quadrature average BER on an Eb/N0 grid in dB.

    gamma equals the linear Eb/N0 (E[|h|^2] = 1). The quadrature column averages the
    Gaussian model over linear xi numerically, with the given tolerances and budget.
    Rows are computed independently, in parallel when ``workers`` > 1, and returned in
    grid order.

    Raises:
        InvalidParameterError: If the grid is empty or workers < 1
    """
    grid = [float(v) for v in ebn0_db_grid]
    if not grid:
        raise InvalidParameterError("Comparison grid is empty")
    if workers < 1:
        raise InvalidParameterError(f"workers must be at least 1, got {workers}")

    def row(ebn0_db: float) -> ComparisonRow:
        gamma = 10.0 ** (ebn0_db / 10.0)
        generalized = generalized_fading_ber(fit, gamma)
        exact = exact_fading_ber(s, gamma)
        quadrature = average_over_rayleigh(
            fit.evaluate, gamma,
            rel_tol=rel_tol, abs_tol=abs_tol, max_evaluations=max_evaluations,
        )
        return ComparisonRow(
            ebn0_db=ebn0_db,
            ber_generalized=generalized,
            ber_exact=exact,
            ber_quadrature=quadrature,
            ratio=generalized / exact,
        )

    if workers == 1:
        rows = [row(v) for v in grid]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(row, grid))

    logger.info(f"Compared {s.label} over {len(rows)} grid points")
    return rows


def evaluate_mode(
    mode: str,
    s: ModulationScheme,
    fit: Optional[GaussianFit],
    gamma: float,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-300,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> float:
    """
    Average BER at ``gamma`` by 'closed-form', 'exact' or 'quadrature'.

    The tolerances and evaluation budget only apply to 'quadrature'.
    """
    if mode == "exact":
        return exact_fading_ber(s, gamma)
    if fit is None:
        raise InvalidParameterError(f"Mode {mode!r} needs Gaussian constants")
    if mode == "closed-form":
        return generalized_fading_ber(fit, gamma)
    if mode == "quadrature":
        return average_over_rayleigh(
            fit.evaluate, gamma,
            rel_tol=rel_tol, abs_tol=abs_tol, max_evaluations=max_evaluations,
        )
    raise InvalidParameterError(f"Unknown fading mode: {mode!r}")
