"""
Seeded Monte Carlo estimation of average BER over Rayleigh fading.

The channel gain h has independent real and imaginary parts, each N(0, 1/2), so that
E[|h|^2] = 1. Gaussian variates come from the Box-Muller transform applied to PCG64
uniforms.

Work is split into fixed blocks of ``BLOCK_SIZE`` samples. Block k draws from the
substream ``SeedSequence(seed, spawn_key=(k,))`` and partial statistics are merged in
block order, so (seed, n_samples, mode) fix the result bit for bit whatever the number
of workers.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..exceptions import InvalidParameterError
from ..logging import timed_operation
from .modulation import ModulationScheme, SchemeKind, conditional_ber

logger = logging.getLogger(__name__)

BLOCK_SIZE = 1 << 16
MIN_SAMPLES = 1000
_MAX_SEED = 1 << 64
_HALF_VARIANCE_SCALE = math.sqrt(0.5)

ArrayFn = Callable[[np.ndarray], np.ndarray]


class McMode(Enum):
    """Monte Carlo estimator flavour."""
    SEMI_ANALYTIC = "semi_analytic"
    BIT_LEVEL = "bit_level"


@dataclass(frozen=True)
class ChannelSample:
    """One complex Rayleigh channel gain."""

    h_re: float
    h_im: float

    @property
    def power(self) -> float:
        return self.h_re * self.h_re + self.h_im * self.h_im


@dataclass(frozen=True)
class McConfig:
    """Seed, sample count and estimator flavour of a Monte Carlo run."""

    seed: int
    n_samples: int
    mode: McMode = McMode.SEMI_ANALYTIC

    def __post_init__(self) -> None:
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < _MAX_SEED:
            raise InvalidParameterError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.n_samples < MIN_SAMPLES:
            raise InvalidParameterError(
                f"At least {MIN_SAMPLES} samples are required, got {self.n_samples}"
            )
        if not isinstance(self.mode, McMode):
            raise InvalidParameterError(f"Unknown Monte Carlo mode: {self.mode!r}")


@dataclass(frozen=True)
class McEstimate:
    """Sample mean BER with its standard error."""

    mean: float
    std_error: float
    n: int


def make_generator(seed: int, block: int = 0) -> np.random.Generator:
    """PCG64 generator for substream ``block`` of ``seed``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def box_muller(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Two independent arrays of n standard normal variates."""
    u1 = 1.0 - rng.random(n)  # (0, 1], keeps log finite
    u2 = rng.random(n)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return radius * np.cos(angle), radius * np.sin(angle)


def draw_channels(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n Rayleigh channel gains as (real, imaginary) arrays, each component N(0, 1/2)."""
    z_re, z_im = box_muller(rng, n)
    return _HALF_VARIANCE_SCALE * z_re, _HALF_VARIANCE_SCALE * z_im


def draw_channel(rng: np.random.Generator) -> ChannelSample:
    """Draw one channel gain, advancing ``rng``."""
    h_re, h_im = draw_channels(rng, 1)
    return ChannelSample(float(h_re[0]), float(h_im[0]))


# Partial statistics of one block: (count, mean, sum of squared deviations).
_Partial = Tuple[int, float, float]


def _partial(samples: np.ndarray) -> _Partial:
    mean = float(np.mean(samples))
    deviation = samples - mean
    return samples.size, mean, float(deviation @ deviation)


def _merge(partials: List[_Partial]) -> McEstimate:
    count, mean, m2 = 0, 0.0, 0.0
    for n_b, mean_b, m2_b in partials:
        total = count + n_b
        delta = mean_b - mean
        mean += delta * n_b / total
        m2 += m2_b + delta * delta * count * n_b / total
        count = total
    variance = m2 / (count - 1) if count > 1 else 0.0
    return McEstimate(mean=mean, std_error=math.sqrt(max(variance, 0.0) / count), n=count)


def _run_blocks(
    cfg: McConfig,
    block_fn: Callable[[np.random.Generator, int], np.ndarray],
    workers: int,
) -> McEstimate:
    if workers < 1:
        raise InvalidParameterError(f"workers must be at least 1, got {workers}")
    n_blocks = -(-cfg.n_samples // BLOCK_SIZE)

    def run(block: int) -> _Partial:
        size = min(BLOCK_SIZE, cfg.n_samples - block * BLOCK_SIZE)
        return _partial(block_fn(make_generator(cfg.seed, block), size))

    if workers == 1 or n_blocks == 1:
        partials = [run(k) for k in range(n_blocks)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(run, range(n_blocks)))

    return _merge(partials)


def _check_snr(ebn0_linear: float) -> None:
    if not (math.isfinite(ebn0_linear) and ebn0_linear > 0):
        raise InvalidParameterError(f"Eb/N0 must be positive and finite, got {ebn0_linear}")


@timed_operation("montecarlo.semi_analytic_ber")
def semi_analytic_ber(
    ber_fn: ArrayFn,
    ebn0_linear: float,
    cfg: McConfig,
    workers: int = 1,
) -> McEstimate:
    """
    Average a conditional BER over sampled channel states.

    Each sample is ber_fn(|h|^2 * Eb/N0); ``ber_fn`` must accept numpy arrays.

    Raises:
        InvalidParameterError: If Eb/N0 <= 0 or workers < 1
    """
    _check_snr(ebn0_linear)

    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        h_re, h_im = draw_channels(rng, size)
        xi = (h_re * h_re + h_im * h_im) * ebn0_linear
        return np.asarray(ber_fn(xi), dtype=float)

    estimate = _run_blocks(cfg, block, workers)
    logger.debug(f"Semi-analytic estimate {estimate.mean:.6e} +/- {estimate.std_error:.2e}")
    return estimate


@timed_operation("montecarlo.bitlevel_qpsk_ber")
def bitlevel_qpsk_ber(ebn0_linear: float, cfg: McConfig, workers: int = 1) -> McEstimate:
    """
    Bit-level QPSK simulation over r = h s + n with perfect channel knowledge.

    Gray-mapped unit-energy symbols carry two bits, so Eb = 1/2 and each noise component
    has variance N0/2 = 1/(4 Eb/N0). The receiver divides by h and slices each axis. The
    per-symbol sample is the fraction of its two bits in error; the mean is therefore the
    bit error count over 2 * n_samples bits.

    Raises:
        InvalidParameterError: If cfg.mode is not BIT_LEVEL or Eb/N0 <= 0
    """
    if cfg.mode is not McMode.BIT_LEVEL:
        raise InvalidParameterError("bitlevel_qpsk_ber requires a BIT_LEVEL configuration")
    _check_snr(ebn0_linear)
    noise_std = math.sqrt(1.0 / (4.0 * ebn0_linear))
    amplitude = 1.0 / math.sqrt(2.0)

    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        bits = rng.integers(0, 2, size=(size, 2))
        symbols = amplitude * ((1 - 2 * bits[:, 0]) + 1j * (1 - 2 * bits[:, 1]))
        h_re, h_im = draw_channels(rng, size)
        h = h_re + 1j * h_im
        n_re, n_im = box_muller(rng, size)
        received = h * symbols + noise_std * (n_re + 1j * n_im)
        equalized = received / h
        errors = ((equalized.real < 0) != (bits[:, 0] == 1)).astype(float)
        errors += ((equalized.imag < 0) != (bits[:, 1] == 1)).astype(float)
        return 0.5 * errors

    estimate = _run_blocks(cfg, block, workers)
    logger.debug(f"Bit-level estimate {estimate.mean:.6e} +/- {estimate.std_error:.2e}")
    return estimate


def estimate_fading_ber(
    s: ModulationScheme,
    ebn0_linear: float,
    cfg: McConfig,
    workers: int = 1,
    ber_fn: Optional[ArrayFn] = None,
) -> McEstimate:
    """
    Monte Carlo average BER of ``s``: bit-level for QPSK in BIT_LEVEL mode, otherwise
    semi-analytic over ``ber_fn`` (default: the scheme's AWGN model).

    Raises:
        InvalidParameterError: If bit-level simulation is requested for a scheme other
            than QPSK
    """
    if cfg.mode is McMode.BIT_LEVEL:
        if s.kind is not SchemeKind.QPSK:
            raise InvalidParameterError(f"Bit-level simulation supports QPSK only, not {s.label}")
        return bitlevel_qpsk_ber(ebn0_linear, cfg, workers)
    return semi_analytic_ber(ber_fn or conditional_ber(s), ebn0_linear, cfg, workers)
