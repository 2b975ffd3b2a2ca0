"""Shared fixtures for the closure test suites."""

import pytest

from src.config import RunConfig
from src.curve_family import CurveFamily, tailed_loop, wobbly_circle


@pytest.fixture
def config():
    return RunConfig(threads=1)


@pytest.fixture
def wobbly():
    """theta(s) = 2*pi*s + 0.9 sin(4*pi*s), c = 1."""
    return wobbly_circle()


@pytest.fixture
def m1_curve():
    return CurveFamily(7).fourier_curve(1)


@pytest.fixture
def m2_curve():
    return CurveFamily(11).fourier_curve(2)


@pytest.fixture
def tailed():
    return tailed_loop()
