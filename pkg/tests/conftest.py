# tests/conftest.py
import numpy as np
import pytest

from src.packing.fixtures import apollonian_fixture, dual_circle_fixture, strip_fixture
from src.packing.packing import generate_packing


@pytest.fixture
def rng():
    """Генератор случайных чисел с фиксированным зерном."""
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def apollonian():
    """Аполлониева упаковка (−1, 2, 2, 3) глубины 3."""
    return generate_packing(apollonian_fixture(depth=3, min_radius=1e-3))


@pytest.fixture(scope="session")
def apollonian_deep():
    """Аполлониева упаковка глубины 4."""
    return generate_packing(apollonian_fixture(depth=4, min_radius=1e-4))


@pytest.fixture(scope="session")
def strip():
    """Полосная упаковка между Im z = −1 и Im z = 1."""
    return generate_packing(strip_fixture(depth=2, min_radius=1e-3))


@pytest.fixture(scope="session")
def dual_circle():
    """Двойственная окружность ℝ̂ аполлониевой упаковки и упаковка глубины 5."""
    fx = dual_circle_fixture(depth=5, min_radius=1e-4)
    return fx, generate_packing(fx.spec)
