# tests/test_trends.py
import pytest

from src.core.errors import DegenerateInputError
from src.dynamics.trends import assess_trend, is_monotone


def test_decreasing_trend():
    """1/n на 100 значениях: первый дециль на порядок больше последнего."""
    values = [1.0 / n for n in range(1, 101)]
    result = assess_trend(values, decreasing=True, threshold=0.02)
    assert result.holds
    assert result.final == pytest.approx(0.01)
    assert not assess_trend(values, decreasing=True, threshold=0.005).holds


def test_increasing_trend():
    values = [float(n) for n in range(1, 101)]
    assert assess_trend(values, decreasing=False).holds
    assert not assess_trend(values, decreasing=True).holds


def test_flat_sequence_has_no_trend():
    assert not assess_trend([1.0] * 50, decreasing=True).holds


def test_none_values_skipped():
    """Пропущенные значения (None) не участвуют в средних."""
    result = assess_trend([10.0, None, 1.0], decreasing=True, factor=5.0)
    assert result.holds
    with pytest.raises(DegenerateInputError):
        assess_trend([None, 1.0], decreasing=True)


def test_to_check():
    check = assess_trend([4.0, 2.0, 1.0], decreasing=True, factor=2.0).to_check("gap")
    assert check.name == "gap"
    assert check.holds
    assert check.first_mean == 4.0
    assert check.last_mean == 1.0


def test_is_monotone():
    assert is_monotone([3, 2, 1])
    assert not is_monotone([3, 3, 1])
    assert is_monotone([3, 3, 1], strict=False)
    assert is_monotone([1, 2, 5], decreasing=False)
    assert is_monotone([7])
