import numpy as np
import pytest
from skimage import data, transform

NATURAL_NAMES = ("camera", "coins", "moon", "page", "text", "clock", "grass", "gravel", "brick", "cell")


def natural_image(name, shape=None):
    img = getattr(data, name)()
    if shape is not None:
        img = transform.resize(img.astype(np.float64), shape, preserve_range=True, anti_aliasing=True)
    return np.floor(np.asarray(img, dtype=np.float64) + 0.5).astype(np.int64)


@pytest.fixture(scope="session")
def natural64():
    return [natural_image(n, (64, 64)) for n in NATURAL_NAMES]


_ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(name, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
