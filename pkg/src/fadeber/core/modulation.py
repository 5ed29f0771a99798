"""
AWGN bit-error-probability models for QPSK, square M-QAM, M-FSK and M-ASK.

The formula family is the one whose Rayleigh averages reproduce the exact fading
expressions implemented in ``fading``:

- QPSK:   Q(sqrt(2 xi))
- M-ASK:  alpha2 * Q(sqrt(beta2 xi))
- M-FSK:  (M/2) * Q(sqrt(log2(M) xi))
- M-QAM:  (4/log2 M) * [alpha1 Q(sqrt(beta1 xi)) - alpha1^2 Q^2(sqrt(beta1 xi))]

with xi the linear Eb/N0. The M-FSK union bound exceeds 1 at low SNR for M >= 4 and is
not clamped.
"""

import csv
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from ..exceptions import InvalidParameterError
from .numerics import ArrayLike, SnrDomain, SnrValue, db_to_linear, q_function, require_domain

logger = logging.getLogger(__name__)

MIN_CURVE_POINTS = 4

_SCHEME_PATTERN = re.compile(r"^(\d+)-?(qam|fsk|ask)$")
_BINARY_ALIASES = {"bfsk": "fsk", "bask": "ask"}


class SchemeKind(Enum):
    """Modulation families with a known AWGN BER model."""
    QPSK = "qpsk"
    QAM = "qam"
    FSK = "fsk"
    ASK = "ask"


@dataclass(frozen=True)
class ModulationScheme:
    """
    A modulation family and its order M.

    QPSK is fixed at M = 4. All other families need M >= 2 a power of two; QAM needs a
    square M as well.
    """

    kind: SchemeKind
    order: int = 4

    def __post_init__(self) -> None:
        if self.kind is SchemeKind.QPSK:
            if self.order != 4:
                raise InvalidParameterError("QPSK has a fixed order of 4")
            return
        if self.order < 2 or self.order & (self.order - 1):
            raise InvalidParameterError(
                f"{self.kind.value.upper()} order must be a power of two >= 2, got {self.order}"
            )
        if self.kind is SchemeKind.QAM:
            root = math.isqrt(self.order)
            if root * root != self.order:
                raise InvalidParameterError(f"Only square QAM is supported, got M={self.order}")

    @classmethod
    def qpsk(cls) -> "ModulationScheme":
        return cls(SchemeKind.QPSK)

    @classmethod
    def qam(cls, order: int) -> "ModulationScheme":
        return cls(SchemeKind.QAM, order)

    @classmethod
    def fsk(cls, order: int) -> "ModulationScheme":
        return cls(SchemeKind.FSK, order)

    @classmethod
    def ask(cls, order: int) -> "ModulationScheme":
        return cls(SchemeKind.ASK, order)

    @classmethod
    def parse(cls, text: str) -> "ModulationScheme":
        """
        Parse a scheme name such as 'qpsk', '16qam', '16-QAM', 'bfsk', 'bask' or '8fsk'.

        Raises:
            InvalidParameterError: If the name is not recognised or the order is invalid
        """
        key = text.strip().lower()
        if key == "qpsk":
            return cls.qpsk()
        if key in _BINARY_ALIASES:
            return cls(SchemeKind(_BINARY_ALIASES[key]), 2)
        match = _SCHEME_PATTERN.match(key)
        if not match:
            raise InvalidParameterError(f"Unknown modulation scheme: {text!r}")
        return cls(SchemeKind(match.group(2)), int(match.group(1)))

    @property
    def bits_per_symbol(self) -> int:
        return int(math.log2(self.order))

    @property
    def label(self) -> str:
        if self.kind is SchemeKind.QPSK:
            return "QPSK"
        if self.order == 2 and self.kind is not SchemeKind.QAM:
            return f"B{self.kind.value.upper()}"
        return f"{self.order}-{self.kind.value.upper()}"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class SchemeConstants:
    """Formula constants; only the pair used by the scheme is populated."""

    alpha1: Optional[float] = None
    beta1: Optional[float] = None
    alpha2: Optional[float] = None
    beta2: Optional[float] = None


@dataclass(frozen=True)
class BerCurve:
    """
    Sampled (SNR, BER) points sharing one SNR domain.

    BER values may be exactly 0: double precision underflows Q(x) far out in the tail.
    """

    snr: Tuple[float, ...]
    ber: Tuple[float, ...]
    domain: SnrDomain = SnrDomain.DECIBEL

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr", tuple(float(v) for v in self.snr))
        object.__setattr__(self, "ber", tuple(float(v) for v in self.ber))

        if len(self.snr) != len(self.ber):
            raise InvalidParameterError("SNR and BER sequences differ in length")
        if len(self.snr) < MIN_CURVE_POINTS:
            raise InvalidParameterError(
                f"A BER curve needs at least {MIN_CURVE_POINTS} points, got {len(self.snr)}"
            )
        if not all(math.isfinite(v) for v in self.snr):
            raise InvalidParameterError("SNR values must be finite")
        if any(b <= a for a, b in zip(self.snr, self.snr[1:])):
            raise InvalidParameterError("SNR values must be strictly increasing")
        if not all(0.0 <= p < 1.0 for p in self.ber):
            raise InvalidParameterError("BER values must lie in [0, 1)")
        if self.domain is SnrDomain.LINEAR and self.snr[0] < 0:
            raise InvalidParameterError("Linear SNR values must be non-negative")

    @property
    def x(self) -> np.ndarray:
        return np.asarray(self.snr, dtype=float)

    @property
    def y(self) -> np.ndarray:
        return np.asarray(self.ber, dtype=float)

    def __len__(self) -> int:
        return len(self.snr)

    def points(self) -> List[Tuple[SnrValue, float]]:
        return [(SnrValue(s, self.domain), p) for s, p in zip(self.snr, self.ber)]


def scheme_constants(s: ModulationScheme) -> SchemeConstants:
    """
    Constants of the QAM (alpha1, beta1) or ASK (alpha2, beta2) formulas.

    alpha1 = (sqrt(M)-1)/sqrt(M), beta1 = 3/(M-1), alpha2 = 2(M-1)/(M log2 M),
    beta2 = 6 log2 M/(M^2-1), evaluated as exact fractions.
    """
    m = s.order
    k = s.bits_per_symbol
    if s.kind is SchemeKind.QAM:
        root = math.isqrt(m)
        return SchemeConstants(
            alpha1=float(Fraction(root - 1, root)),
            beta1=float(Fraction(3, m - 1)),
        )
    if s.kind is SchemeKind.ASK:
        return SchemeConstants(
            alpha2=float(Fraction(2 * (m - 1), m * k)),
            beta2=float(Fraction(6 * k, m * m - 1)),
        )
    return SchemeConstants()


def awgn_ber_linear(s: ModulationScheme, xi: ArrayLike) -> ArrayLike:
    """
    AWGN bit error probability at linear Eb/N0 ``xi`` (scalar or array).

    Raises:
        InvalidParameterError: If any xi is negative
    """
    arr = np.asarray(xi, dtype=float)
    if np.any(arr < 0) or not np.all(np.isfinite(arr)):
        raise InvalidParameterError("Linear Eb/N0 must be finite and non-negative")

    if s.kind is SchemeKind.QPSK:
        result = q_function(np.sqrt(2.0 * arr))
    elif s.kind is SchemeKind.ASK:
        c = scheme_constants(s)
        result = c.alpha2 * q_function(np.sqrt(c.beta2 * arr))
    elif s.kind is SchemeKind.FSK:
        result = (s.order / 2) * q_function(np.sqrt(s.bits_per_symbol * arr))
    else:
        c = scheme_constants(s)
        q = q_function(np.sqrt(c.beta1 * arr))
        result = (4.0 / s.bits_per_symbol) * (c.alpha1 * q - c.alpha1 ** 2 * q * q)

    return float(result) if np.ndim(result) == 0 else np.asarray(result)


def awgn_ber(s: ModulationScheme, ebn0: SnrValue) -> float:
    """AWGN bit error probability at ``ebn0`` (either domain)."""
    return float(awgn_ber_linear(s, db_to_linear(ebn0).magnitude))


def conditional_ber(s: ModulationScheme) -> Callable[[ArrayLike], ArrayLike]:
    """The scheme's AWGN BER as a function of linear SNR, for fading averages."""
    def ber_fn(xi: ArrayLike) -> ArrayLike:
        return awgn_ber_linear(s, xi)
    return ber_fn


def snr_grid(start: float, stop: float, step: float) -> np.ndarray:
    """
    Evenly spaced grid start, start+step, ... up to stop inclusive.

    Raises:
        InvalidParameterError: If step <= 0 or stop < start
    """
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise InvalidParameterError("Grid bounds and step must be finite")
    if step <= 0:
        raise InvalidParameterError(f"Grid step must be positive, got {step}")
    if stop < start:
        raise InvalidParameterError(f"Grid stop {stop} is below start {start}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count, dtype=float)


def ber_curve(
    s: ModulationScheme,
    start: SnrValue,
    stop: SnrValue,
    step: float,
) -> BerCurve:
    """
    Sample the scheme's AWGN BER on an evenly spaced grid in the domain of ``start``.

    Raises:
        DomainMismatchError: If start and stop use different domains
        InvalidParameterError: If start >= stop, step <= 0 or fewer than 4 points result
    """
    require_domain(stop, start.domain, "grid stop")
    if not start.magnitude < stop.magnitude:
        raise InvalidParameterError(
            f"Grid start {start.magnitude} must be below stop {stop.magnitude}"
        )

    grid = snr_grid(start.magnitude, stop.magnitude, step)
    if len(grid) < MIN_CURVE_POINTS:
        raise InvalidParameterError(
            f"Grid yields {len(grid)} points; at least {MIN_CURVE_POINTS} are needed"
        )

    linear = 10.0 ** (grid / 10.0) if start.domain is SnrDomain.DECIBEL else grid
    ber = awgn_ber_linear(s, linear)
    logger.debug(f"Sampled {s.label} AWGN curve with {len(grid)} points")
    return BerCurve(tuple(grid), tuple(np.atleast_1d(ber)), start.domain)


def load_ber_curve(path: Union[str, Path], domain: SnrDomain = SnrDomain.DECIBEL) -> BerCurve:
    """
    Read a two-column ``snr,ber`` CSV file (header row optional) into a BerCurve.

    Raises:
        InvalidParameterError: If the file is missing, malformed or violates BerCurve rules
    """
    path = Path(path)
    if not path.exists():
        raise InvalidParameterError(f"BER data file not found: {path}")

    snr: List[float] = []
    ber: List[float] = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise InvalidParameterError(f"{path}:{line_no}: expected two columns")
            try:
                snr_value, ber_value = float(row[0]), float(row[1])
            except ValueError:
                if line_no == 1:
                    continue  # header
                raise InvalidParameterError(f"{path}:{line_no}: non-numeric value in {row}")
            snr.append(snr_value)
            ber.append(ber_value)

    logger.info(f"Loaded {len(snr)} BER points from {path}")
    return BerCurve(tuple(snr), tuple(ber), domain)
