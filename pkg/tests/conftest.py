"""
Shared test configuration and fixtures for fadeber.
"""

import shutil
import tempfile
from pathlib import Path

import pytest

from fadeber.core.gaussfit import GaussianFit
from fadeber.core.modulation import BerCurve, ModulationScheme, ber_curve
from fadeber.core.numerics import SnrValue
from fadeber.core.published import PUBLISHED_FITS


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep FADEBER_* variables from the developer's shell out of the tests."""
    for name in ("FADEBER_CONFIG", "FADEBER_SEED", "FADEBER_LOG_LEVEL",
                 "FADEBER_LOG_FILE", "FADEBER_LOG_JSON"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def qpsk():
    return ModulationScheme.qpsk()


@pytest.fixture
def qam16():
    return ModulationScheme.qam(16)


@pytest.fixture
def bfsk():
    return ModulationScheme.fsk(2)


@pytest.fixture
def bask():
    return ModulationScheme.ask(2)


@pytest.fixture
def qpsk_curve(qpsk) -> BerCurve:
    """QPSK AWGN curve on 0 to 10 dB in 0.1 dB steps."""
    return ber_curve(qpsk, SnrValue.db(0.0), SnrValue.db(10.0), 0.1)


@pytest.fixture
def qpsk_published_fit() -> GaussianFit:
    return PUBLISHED_FITS["QPSK"]


@pytest.fixture(params=sorted(PUBLISHED_FITS))
def published_label(request) -> str:
    """Each scheme label with published Gaussian constants."""
    return request.param


@pytest.fixture
def settings_file(temp_dir):
    """Write a settings override and return its path."""
    def _write(content: str) -> Path:
        path = temp_dir / "settings.yaml"
        path.write_text(content, encoding="utf-8")
        return path
    return _write
