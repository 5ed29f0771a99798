"""
Gaussian modelling of AWGN BER curves.

Fits P(x) = a * exp(-((x - b) / c)^2) to a BerCurve by unweighted least squares with a
Levenberg-Marquardt iteration and reports SSE, R-square, adjusted R-square and RMSE
with degrees-of-freedom denominators (p = 3 parameters).
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..exceptions import InvalidParameterError
from ..logging import timed_operation
from .modulation import BerCurve
from .numerics import ArrayLike, SnrDomain, SnrValue, require_domain

logger = logging.getLogger(__name__)

N_PARAMS = 3

_INITIAL_DAMPING = 1e-3
_DAMPING_FACTOR = 10.0
_MAX_DAMPING = 1e30
_DIAG_FLOOR = 1e-300


@dataclass(frozen=True)
class GaussianFit:
    """
    Constants of a * exp(-((x - b) / c)^2) and the SNR domain of x.

    The model is even in c, so c is stored as |c|.
    """

    a: float
    b: float
    c: float
    domain: SnrDomain = SnrDomain.DECIBEL

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise InvalidParameterError("Gaussian constants must be finite")
        object.__setattr__(self, "c", abs(float(self.c)))
        if self.a <= 0:
            raise InvalidParameterError(f"Gaussian amplitude a must be positive, got {self.a}")
        if self.c == 0:
            raise InvalidParameterError("Gaussian width c must be non-zero")

    @property
    def params(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=float)

    def evaluate(self, x: ArrayLike) -> ArrayLike:
        """Model value at x given in this fit's domain (scalar or array)."""
        u = (np.asarray(x, dtype=float) - self.b) / self.c
        result = self.a * np.exp(-u * u)
        return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class FitReport:
    """Goodness-of-fit metrics and optimizer bookkeeping for one fit."""

    sse: float
    r2: float
    adj_r2: float
    rmse: float
    iterations: int = 0
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            'sse': self.sse,
            'r2': self.r2,
            'adj_r2': self.adj_r2,
            'rmse': self.rmse,
            'iterations': self.iterations,
            'converged': self.converged,
        }


@dataclass(frozen=True)
class FitOptions:
    """Stopping rules for fit_gaussian."""

    max_iter: int = 200
    sse_rel_tol: float = 1e-12

    def __post_init__(self) -> None:
        if self.max_iter < 1:
            raise InvalidParameterError("max_iter must be at least 1")
        if self.sse_rel_tol <= 0:
            raise InvalidParameterError("sse_rel_tol must be positive")


def gaussian_eval(fit: GaussianFit, x: SnrValue) -> float:
    """
    Evaluate the fitted model at ``x``.

    Raises:
        DomainMismatchError: If x is not expressed in the fit's domain
    """
    require_domain(x, fit.domain, "x")
    return float(fit.evaluate(x.magnitude))


def gaussian_model(params: np.ndarray, x: np.ndarray) -> np.ndarray:
    a, b, c = params
    u = (x - b) / c
    return a * np.exp(-u * u)


def gaussian_jacobian(params: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    Analytic Jacobian of the model with respect to (a, b, c).

    With u = (x - b) / c: d/da = e^(-u^2), d/db = 2 a u e^(-u^2) / c,
    d/dc = 2 a u^2 e^(-u^2) / c.
    """
    a, b, c = params
    u = (x - b) / c
    g = np.exp(-u * u)
    return np.column_stack((g, 2.0 * a * u * g / c, 2.0 * a * u * u * g / c))


def _sse(params: np.ndarray, x: np.ndarray, y: np.ndarray) -> float:
    r = y - gaussian_model(params, x)
    return float(r @ r)


def _initial_params(curve: BerCurve) -> np.ndarray:
    x, y = curve.x, curve.y
    peak = int(np.argmax(y))
    return np.array([y[peak], x[peak], (x[-1] - x[0]) / 2.0], dtype=float)


def _metrics(y: np.ndarray, y_hat: np.ndarray) -> Tuple[float, float, float, float]:
    n = y.size
    if n <= N_PARAMS:
        raise InvalidParameterError(
            f"Goodness of fit needs more than {N_PARAMS} points, got {n}"
        )
    residual = y - y_hat
    sse = float(residual @ residual)
    deviation = y - y.mean()
    sst = float(deviation @ deviation)
    if sst == 0.0:
        raise InvalidParameterError("BER data is constant; R-square is undefined")

    dof = n - N_PARAMS
    r2 = 1.0 - sse / sst
    adj_r2 = 1.0 - (sse / dof) / (sst / (n - 1))
    rmse = math.sqrt(sse / dof)
    return sse, r2, adj_r2, rmse


def goodness_of_fit(curve: BerCurve, fit: GaussianFit) -> FitReport:
    """
    SSE, R-square, adjusted R-square and RMSE of ``fit`` against ``curve``.

    Raises:
        DomainMismatchError: If the fit and curve domains differ
        InvalidParameterError: If n <= 3 or the BER data is constant
    """
    require_domain(curve.domain, fit.domain, "curve")
    sse, r2, adj_r2, rmse = _metrics(curve.y, np.asarray(fit.evaluate(curve.x)))
    return FitReport(sse=sse, r2=r2, adj_r2=adj_r2, rmse=rmse, iterations=0, converged=True)


@timed_operation("gaussfit.fit_gaussian")
def fit_gaussian(
    curve: BerCurve,
    init: Optional[GaussianFit] = None,
    options: Optional[FitOptions] = None,
) -> Tuple[GaussianFit, FitReport]:
    """
    Least-squares fit of the Gaussian model to ``curve``.

    Damped Gauss-Newton with a Levenberg-Marquardt schedule: damping starts at 1e-3, is
    multiplied by 10 when a trial step raises the SSE and divided by 10 when it lowers it.
    The damping term is scaled by the diagonal of J^T J.

    Args:
        curve: Data to fit (at least 4 points)
        init: Starting constants; defaults to (max y, x at max y, half the x span)
        options: Iteration limit and relative SSE tolerance

    Returns:
        Tuple of (GaussianFit, FitReport). ``converged`` is False when max_iter ran out
        first; the best parameters found are still returned.

    Raises:
        DomainMismatchError: If ``init`` is in a different domain than ``curve``
    """
    options = options or FitOptions()
    x, y = curve.x, curve.y

    if init is not None:
        require_domain(init.domain, curve.domain, "initial fit")
        params = init.params
    else:
        params = _initial_params(curve)

    sse = _sse(params, x, y)
    damping = _INITIAL_DAMPING
    converged = False
    iterations = 0

    while iterations < options.max_iter:
        iterations += 1
        jac = gaussian_jacobian(params, x)
        residual = y - gaussian_model(params, x)
        normal = jac.T @ jac
        gradient = jac.T @ residual
        scale = np.maximum(np.diag(normal), _DIAG_FLOOR)

        accepted = False
        while damping <= _MAX_DAMPING:
            try:
                step = np.linalg.solve(normal + damping * np.diag(scale), gradient)
            except np.linalg.LinAlgError:
                logger.debug(f"Singular normal equations at damping {damping:g}")
                damping *= _DAMPING_FACTOR
                continue

            trial = params + step
            usable = bool(np.all(np.isfinite(trial))) and trial[2] != 0
            trial_sse = _sse(trial, x, y) if usable else math.inf
            if trial_sse <= sse:
                accepted = True
                break
            damping *= _DAMPING_FACTOR

        if not accepted:
            # No step lowers the SSE at any damping: stationary to working precision.
            converged = True
            break

        change = (sse - trial_sse) / sse if sse > 0 else 0.0
        params, sse = trial, trial_sse
        damping = max(damping / _DAMPING_FACTOR, 1e-300)

        if change < options.sse_rel_tol:
            converged = True
            break

    if not converged:
        logger.warning(
            f"Gaussian fit did not converge in {options.max_iter} iterations",
            extra={'sse': sse}
        )

    fit = GaussianFit(a=float(params[0]), b=float(params[1]), c=float(params[2]),
                      domain=curve.domain)
    sse_final, r2, adj_r2, rmse = _metrics(y, np.asarray(fit.evaluate(x)))
    report = FitReport(sse=sse_final, r2=r2, adj_r2=adj_r2, rmse=rmse,
                       iterations=iterations, converged=converged)
    logger.info(
        f"Fitted a={fit.a:.6g}, b={fit.b:.6g}, c={fit.c:.6g} (rmse={rmse:.3e})",
        extra={'iterations': iterations, 'converged': converged}
    )
    return fit, report
