"""
Numerical foundations for fadeber.

Error functions, the Gaussian Q-function in both its erfc and Craig forms, adaptive
quadrature and the decibel/linear SNR conversions every other module builds on. All
functions are pure and safe to call from any thread.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate, special

from ..exceptions import ConvergenceError, DomainMismatchError, InvalidParameterError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# QUADPACK's 21-point Gauss-Kronrod rule: evaluations per subinterval.
_KRONROD_POINTS = 21
DEFAULT_MAX_EVALUATIONS = 1_000_000


class SnrDomain(Enum):
    """Unit in which an SNR magnitude is expressed."""
    DECIBEL = "db"
    LINEAR = "linear"

    @classmethod
    def parse(cls, value: Union[str, "SnrDomain"]) -> "SnrDomain":
        """Parse 'db'/'decibel' or 'linear' (case-insensitive)."""
        if isinstance(value, SnrDomain):
            return value
        key = str(value).strip().lower()
        if key in ("db", "decibel"):
            return cls.DECIBEL
        if key == "linear":
            return cls.LINEAR
        raise InvalidParameterError(f"Unknown SNR domain: {value!r}")


@dataclass(frozen=True)
class SnrValue:
    """An SNR magnitude tagged with its domain."""

    magnitude: float
    domain: SnrDomain

    def __post_init__(self) -> None:
        if not isinstance(self.domain, SnrDomain):
            raise InvalidParameterError(f"Invalid SNR domain tag: {self.domain!r}")
        if not math.isfinite(self.magnitude):
            raise InvalidParameterError(f"SNR magnitude must be finite, got {self.magnitude}")
        if self.domain is SnrDomain.LINEAR and self.magnitude < 0:
            raise InvalidParameterError(
                f"Linear SNR must be non-negative, got {self.magnitude}"
            )

    @classmethod
    def db(cls, magnitude: float) -> "SnrValue":
        return cls(float(magnitude), SnrDomain.DECIBEL)

    @classmethod
    def linear(cls, magnitude: float) -> "SnrValue":
        return cls(float(magnitude), SnrDomain.LINEAR)

    def to_linear(self) -> "SnrValue":
        return db_to_linear(self)

    def to_db(self) -> "SnrValue":
        return linear_to_db(self)


@dataclass(frozen=True)
class QuadratureResult:
    """Outcome of an adaptive quadrature."""

    value: float
    error_estimate: float
    evaluations: int


def _scalar_or_array(result: np.ndarray) -> ArrayLike:
    return float(result) if np.ndim(result) == 0 else result


def erf(x: ArrayLike) -> ArrayLike:
    """Error function (2/sqrt(pi)) * integral of exp(-u^2) from 0 to x."""
    return _scalar_or_array(special.erf(x))


def erfc(x: ArrayLike) -> ArrayLike:
    """Complementary error function, accurate in the far positive tail."""
    return _scalar_or_array(special.erfc(x))


def erfcx(x: ArrayLike) -> ArrayLike:
    """Scaled complementary error function exp(x^2) * erfc(x)."""
    return _scalar_or_array(special.erfcx(x))


def q_function(x: ArrayLike) -> ArrayLike:
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    return _scalar_or_array(0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0)))


def q_craig(x: float, abs_tol: float = 1e-12) -> float:
    """
    Q-function through Craig's finite-range integral.

    Evaluates (1/pi) * integral over [0, pi/2] of exp(-x^2 / (2 sin^2 theta)). The
    integrand's limit at theta = 0 is 0 for x > 0.

    Args:
        x: Argument, x >= 0
        abs_tol: Absolute accuracy target

    Returns:
        Q(x)

    Raises:
        InvalidParameterError: If x < 0 or abs_tol <= 0
    """
    if not math.isfinite(x) or x < 0:
        raise InvalidParameterError(f"Craig's form requires finite x >= 0, got {x}")
    if abs_tol <= 0:
        raise InvalidParameterError(f"abs_tol must be positive, got {abs_tol}")

    half_x2 = 0.5 * x * x

    def integrand(theta: float) -> float:
        s = math.sin(theta)
        if s == 0.0:
            return 0.0 if x > 0 else 1.0 / math.pi
        return math.exp(-half_x2 / (s * s)) / math.pi

    result = integrate_adaptive(integrand, 0.0, math.pi / 2, abs_tol=abs_tol, rel_tol=1e-14)
    return result.value


def integrate_adaptive(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-10,
    breakpoints: Optional[Sequence[float]] = None,
    max_evaluations: int = DEFAULT_MAX_EVALUATIONS,
) -> QuadratureResult:
    """
    Adaptive Gauss-Kronrod quadrature of f over [lo, hi].

    Uses QUADPACK through ``scipy.integrate.quad``; with ``breakpoints`` the interval is
    pre-split there before adaptive bisection starts.

    Args:
        f: Integrand, finite on [lo, hi]
        lo: Lower limit
        hi: Upper limit, hi > lo
        abs_tol: Absolute error target
        rel_tol: Relative error target
        breakpoints: Optional interior points where the integrand changes scale
        max_evaluations: Integrand evaluation budget

    Returns:
        QuadratureResult with error_estimate <= max(abs_tol, rel_tol * |value|)

    Raises:
        InvalidParameterError: On invalid limits or tolerances
        ConvergenceError: If the budget runs out first; ``.result`` holds the best estimate
    """
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise InvalidParameterError(f"Quadrature needs finite lo < hi, got [{lo}, {hi}]")
    if abs_tol <= 0 or rel_tol <= 0:
        raise InvalidParameterError("Quadrature tolerances must be positive")

    limit = max(1, max_evaluations // _KRONROD_POINTS)
    points = None
    if breakpoints is not None:
        points = sorted(p for p in breakpoints if lo < p < hi) or None
        if points is not None:
            limit = max(limit, 2 * len(points) + 2)

    output = integrate.quad(
        f, lo, hi,
        epsabs=abs_tol, epsrel=rel_tol, limit=limit, points=points, full_output=1
    )
    value, error, info = float(output[0]), float(output[1]), output[2]
    result = QuadratureResult(
        value=value, error_estimate=abs(error), evaluations=int(info['neval'])
    )

    if not math.isfinite(value):
        raise ConvergenceError(f"Quadrature produced a non-finite value on [{lo}, {hi}]", result)

    if len(output) > 3:
        # QUADPACK flags round-off even when the estimate already meets the target.
        if result.error_estimate > max(abs_tol, rel_tol * abs(value)):
            logger.warning(f"Quadrature did not converge on [{lo}, {hi}]: {output[3]}")
            raise ConvergenceError(f"Quadrature did not converge: {output[3]}", result)
        logger.debug(f"Quadrature accepted despite warning: {output[3]}")

    return result


def db_to_linear(v: SnrValue) -> SnrValue:
    """Convert a decibel SNR to linear (10^(dB/10)); linear values pass through."""
    if v.domain is SnrDomain.LINEAR:
        return v
    return SnrValue(10.0 ** (v.magnitude / 10.0), SnrDomain.LINEAR)


def linear_to_db(v: SnrValue) -> SnrValue:
    """Convert a linear SNR to decibels (10 log10); decibel values pass through."""
    if v.domain is SnrDomain.DECIBEL:
        return v
    if v.magnitude <= 0:
        raise InvalidParameterError(f"Cannot express linear SNR {v.magnitude} in dB")
    return SnrValue(10.0 * math.log10(v.magnitude), SnrDomain.DECIBEL)


def require_domain(
    v: Union[SnrValue, SnrDomain],
    domain: SnrDomain,
    what: str = "SNR",
) -> None:
    """
    Raise DomainMismatchError unless ``v`` (a value or a domain) is in ``domain``.

    ``what`` names the checked item in the error message.
    """
    actual = v.domain if isinstance(v, SnrValue) else v
    if actual is not domain:
        raise DomainMismatchError(
            f"Expected {what} in the {domain.value} domain, got {actual.value}"
        )
