"""
Test helper utilities for fadeber.
"""

import csv
import io
import math
from pathlib import Path
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from scipy import special


def printed_generalized_ber(a: float, b: float, c: float, gamma: float) -> float:
    """
    Closed-form fading average written the expanded way,
    (a c sqrt(pi) / (2 gamma)) exp(c^2/(4 gamma^2) - b/gamma) (1 + erf(b/c - c/(2 gamma))).

    1 + erf(u) is taken as erfc(-u) so the tail keeps full precision. The exponential
    overflows for small gamma; the result is then inf or nan.
    """
    with np.errstate(over="ignore", invalid="ignore"):
        growth = np.exp(c * c / (4.0 * gamma * gamma) - b / gamma)
        tail = special.erfc(c / (2.0 * gamma) - b / c)
        return float(a * c * math.sqrt(math.pi) / (2.0 * gamma) * growth * tail)


def finite_difference_jacobian(
    model: Callable[[np.ndarray, np.ndarray], np.ndarray],
    params: np.ndarray,
    x: np.ndarray,
    step: float = 1e-6,
) -> np.ndarray:
    """Central-difference Jacobian of model(params, x) with respect to params."""
    columns = []
    for i in range(params.size):
        h = step * max(1.0, abs(params[i]))
        up, down = params.copy(), params.copy()
        up[i] += h
        down[i] -= h
        columns.append((model(up, x) - model(down, x)) / (2.0 * h))
    return np.column_stack(columns)


def write_ber_csv(
    path: Path,
    points: Iterable[Tuple[float, float]],
    header: Sequence[str] = ("snr", "ber"),
) -> Path:
    """Write (snr, ber) pairs as CSV, with a header row unless ``header`` is empty."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        if header:
            writer.writerow(header)
        for snr, ber in points:
            writer.writerow([repr(float(snr)), repr(float(ber))])
    return path


def parse_csv(text: str) -> Tuple[List[str], List[List[str]]]:
    """Split CSV output into its header and data rows."""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def parse_key_values(text: str) -> dict:
    """Parse ``key=value`` lines."""
    pairs = (line.split("=", 1) for line in text.splitlines() if "=" in line)
    return {key: value for key, value in pairs}
