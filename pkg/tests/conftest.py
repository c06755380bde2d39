import math

import numpy as np
import pytest

from waveguide_nls.spectral import DomainSpec, Field, Spectrum


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def small_domain():
    return DomainSpec(math.pi, 16, 16)


@pytest.fixture
def rect_domain():
    return DomainSpec(2.5, 32, 16)


def random_field(domain, rng):
    shape = domain.shape
    return Field(rng.standard_normal(shape) + 1j * rng.standard_normal(shape), domain)


def random_spectrum(domain, rng):
    shape = domain.shape
    return Spectrum(rng.standard_normal(shape) + 1j * rng.standard_normal(shape), domain)


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one part of an acceptance criterion; the terminal summary prints one line per criterion."""

    def record(number, part, ok, detail):
        _ACCEPTANCE.setdefault(number, []).append((part, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[number]
        ok = all(p[1] for p in parts)
        detail = "; ".join(f"{name}: {'PASS' if good else 'FAIL'} ({text})" for name, good, text in parts)
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
