# tests/test_gapset.py
import math

import pytest

from src.core.errors import DomainError
from src.dynamics.gapset import Ambient, GapSet, geometric_points


def test_from_gaps_clips_and_merges():
    """Лакуны обрезаются по окну и сливаются при перекрытии."""
    t_set = GapSet.from_gaps([(-20.0, -5.0), (1.0, 3.0), (2.0, 4.0), (8.0, 50.0)], (-10.0, 10.0))
    assert t_set.gaps == ((-10.0, -5.0), (1.0, 4.0), (8.0, 10.0))
    assert t_set.measure() == pytest.approx(20.0 - 5.0 - 3.0 - 2.0)


def test_invalid_gaps_rejected():
    with pytest.raises(DomainError):
        GapSet((0.0, 1.0), ((0.5, 0.2),))
    with pytest.raises(DomainError):
        GapSet((0.0, 1.0), ((0.1, 0.5), (0.4, 0.6)))
    with pytest.raises(DomainError):
        GapSet((1.0, 1.0))


def test_contains():
    """Общий конец соседних лакун - изолированная точка T."""
    t_set = GapSet.from_gaps([(0.0, 1.0), (1.0, 2.0)], (-5.0, 5.0))
    assert t_set.contains(1.0)
    assert not t_set.contains(0.5)
    assert t_set.contains(0.0)
    assert t_set.contains(-3.0)
    assert not t_set.contains(7.0)


def test_components_on_the_line():
    """Края окна открыты: примыкающая лакуна не оставляет точки на краю."""
    t_set = GapSet.from_gaps([(-10.0, -1.0), (-1.0, 1.0), (1.0, 10.0)], (-10.0, 10.0))
    assert t_set.components() == [(-1.0, -1.0), (1.0, 1.0)]
    full = GapSet.from_gaps([], (-1.0, 1.0))
    assert full.components() == [(-1.0, 1.0)]


def test_components_on_the_circle():
    """Компонента через 0 записывается отрезком с правым концом больше 2π."""
    two_pi = 2 * math.pi
    t_set = GapSet.from_gaps([(1.0, 2.0), (3.0, 6.0)], (0.0, two_pi), Ambient.CIRCLE)
    comps = t_set.components()
    assert comps[0] == (2.0, 3.0)
    assert comps[1][0] == 6.0
    assert comps[1][1] == pytest.approx(two_pi + 1.0)
    whole = GapSet.from_gaps([(0.0, two_pi)], (0.0, two_pi), Ambient.CIRCLE)
    assert whole.is_empty()


def test_from_points():
    t_set = GapSet.from_points([-1.0, 0.0, 1.0, 99.0], (-10.0, 10.0))
    assert [c for c in t_set.components()] == [(-1.0, -1.0), (0.0, 0.0), (1.0, 1.0)]
    assert t_set.measure() == pytest.approx(0.0)


def test_set_algebra():
    """Пересечение - объединение лакун, объединение - пересечение лакун."""
    s = GapSet.from_gaps([(0.0, 2.0)], (-5.0, 5.0))
    t = GapSet.from_gaps([(1.0, 3.0)], (-5.0, 5.0))
    assert s.intersection(t).gaps == ((0.0, 3.0),)
    assert s.union(t).gaps == ((1.0, 2.0),)


def test_complement_is_closure():
    t_set = GapSet.from_gaps([(-1.0, 1.0)], (-5.0, 5.0))
    assert t_set.complement().gaps == ((-5.0, -1.0), (1.0, 5.0))


def test_mirror_and_positive_part():
    t_set = GapSet.from_gaps([(-4.0, -2.0), (-0.5, 1.0)], (-5.0, 5.0))
    assert t_set.mirrored().gaps == ((-1.0, 0.5), (2.0, 4.0))
    assert t_set.positive_gaps() == [(0.0, 1.0)]
    assert t_set.straddles_zero()


def test_resolution():
    t_set = GapSet.from_gaps([(1.0, 2.0)], (-5.0, 5.0)).with_resolution(0.1)
    assert t_set.resolution == 0.1
    with pytest.raises(DomainError):
        GapSet.from_gaps([], (-1.0, 1.0), resolution=-1.0)


def test_geometric_points():
    points = geometric_points(2.0, (-100.0, 100.0), decades_below=2)
    assert 64.0 in points and -64.0 in points
    assert 128.0 not in points
    assert min(p for p in points if p > 0) == pytest.approx(2.0 ** -8)
