# tests/test_packing.py
import cmath
import math
from itertools import product

import pytest

from src.core.errors import DegenerateInputError, InvariantViolationError, NotATangencyError
from src.geometry.circlespace import UNIT_CIRCLE, IntersectionKind, apply_disk, intersect
from src.geometry.moebius import INF, apply_boundary
from src.packing.fixtures import (
    APOLLONIAN_TANGENCIES,
    apollonian_duals,
    apollonian_fixture,
    apollonian_seed,
    round_disk,
    strip_translation,
)
from src.packing.packing import (
    PackingSpec,
    descartes_quadruples,
    descartes_residual,
    descartes_solve,
    double_horocycle_at,
    dual_circles,
    generate_packing,
    inversion_in_circle,
    packing_violations,
    strip_coords_at,
    tangency_points,
)


def test_apollonian_is_a_packing(apollonian):
    """Сгенерированные круги попарно не пересекаются."""
    assert packing_violations(apollonian) == []
    assert len(apollonian.disks) == 56
    assert apollonian.words[:4] == [(), (), (), ()]


def test_apollonian_matches_brute_force(apollonian):
    """Перебор всех слов длины ≤ 3 дает те же круги без повторов."""
    spec = apollonian.spec
    found = []
    for length in range(spec.depth + 1):
        for word in product(spec.generators, repeat=length):
            for disk in spec.seed:
                image = disk
                for g in word:
                    image = apply_disk(g, image)
                if not any(image.is_close(other) for other in found):
                    found.append(image)
    assert len(found) == len(apollonian.disks)
    assert all(any(d.is_close(other) for other in found) for d in apollonian.disks)


def test_seed_curvatures(apollonian):
    assert [d.curvature for d in apollonian.disks[:4]] == pytest.approx([-1.0, 2.0, 2.0, 3.0])


def test_first_level(apollonian):
    """Каждая инверсия порождает на первом уровне ровно один новый круг."""
    level_one = apollonian.truncated(1)
    assert len(level_one.disks) == 8
    assert sorted(d.curvature for d in level_one.disks[4:]) == pytest.approx([3.0, 6.0, 6.0, 15.0])
    assert packing_violations(level_one) == []


def test_descartes_residuals(apollonian):
    """Тождество Декарта для всех найденных четверок касающихся кругов."""
    quadruples = descartes_quadruples(apollonian)
    residuals = dict(quadruples)
    assert residuals[(0, 1, 2, 3)] < 1e-12
    assert len(quadruples) > 10
    assert max(r for _, r in quadruples) < 1e-6


def test_descartes_solve():
    """(−1, 2, 2) дополняется двумя кругами кривизны 3."""
    assert descartes_solve(-1.0, 2.0, 2.0) == pytest.approx((3.0, 3.0))
    big, small = descartes_solve(1.0, 1.0, 1.0)
    assert big == pytest.approx(3.0 + 2.0 * math.sqrt(3.0))
    assert small == pytest.approx(3.0 - 2.0 * math.sqrt(3.0))
    with pytest.raises(DegenerateInputError, match="non-tangent configuration"):
        descartes_solve(1.0, -1.0, -1.0)
    assert descartes_residual([-1.0, 2.0, 2.0, 3.0]) == 0.0


def test_inversion_in_circle():
    """Инверсия в единичной окружности: z ↦ 1/z̄."""
    f = inversion_in_circle(UNIT_CIRCLE)
    assert f.conj
    assert apply_boundary(f, 2 + 0j) == pytest.approx(0.5 + 0j)
    assert apply_boundary(f, 1j) == pytest.approx(1j)
    assert apply_boundary(f, 0j) is INF


def test_seed_tangencies(apollonian):
    """Шесть точек касания затравки найдены среди точек касания упаковки."""
    for name, point in APOLLONIAN_TANGENCIES.items():
        found = apollonian.find_tangency(point)
        assert found is not None, name
    assert len(apollonian.tangencies) > len(apollonian.disks)


def test_seed_tangency_points(apollonian):
    """Четыре затравочных круга попарно касаются: шесть точек."""
    points = tangency_points(apollonian.truncated(0))
    assert sorted(t.disks for t in points) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def test_dual_circles_of_seed():
    """Двойственные окружности затравки совпадают с образующими отражений."""
    for found, expected in zip(dual_circles(apollonian_seed()), apollonian_duals()):
        assert found.is_close(expected)
    with pytest.raises(DegenerateInputError, match="non-tangent configuration"):
        dual_circles(apollonian_seed()[:3] + [round_disk(0.5j, 0.1)])


def test_truncation_keeps_tangencies_consistent(apollonian):
    sub = apollonian.truncated(2)
    assert sub.depth == 2
    assert all(len(w) <= 2 for w in sub.words)
    assert all(max(t.disks) < len(sub.disks) for t in sub.tangencies)


def test_double_horocycle(apollonian):
    """Граничные окружности двух кругов, касающихся в σ, касаются друг друга."""
    l1, l2 = double_horocycle_at(0j, apollonian)
    assert intersect(l1, l2).kind == IntersectionKind.TANGENT
    with pytest.raises(NotATangencyError):
        double_horocycle_at(5 + 0j, apollonian)


def test_strip_coordinates(apollonian):
    """В полосных координатах σ уходит в ∞, двойной орицикл - в прямые Im z = 0 и Im z = 1."""
    f = strip_coords_at(0j, apollonian)
    assert apply_boundary(f, 0j) is INF
    l1, l2 = double_horocycle_at(0j, apollonian)
    for circle, level in ((l1, 0.0), (l2, 1.0)):
        for theta in (0.5, 1.5, 2.5, 4.0, 5.0):
            q = apply_boundary(f, circle.center + circle.radius * cmath.exp(1j * theta))
            assert q.imag == pytest.approx(level, abs=1e-7)


def test_strip_packing(strip):
    """Отражение в Re z = 2 дает единичный круг с центром 4; сдвиг на 4 - композиция отражений."""
    assert packing_violations(strip) == []
    centers = [d.circle.center for d in strip.disks if not d.circle.is_line]
    assert any(abs(c - 4) < 1e-9 for c in centers)
    assert apply_boundary(strip_translation(), 1j) == pytest.approx(4 + 1j)


def test_spec_validation():
    """Перекрывающиеся затравочные круги и отрицательная глубина отклоняются."""
    with pytest.raises(InvariantViolationError):
        PackingSpec(seed=[round_disk(0j, 1.0), round_disk(0.5 + 0j, 1.0)], generators=[])
    with pytest.raises(DegenerateInputError):
        PackingSpec(seed=[round_disk(0j, 1.0)], generators=[], depth=-1)
    with pytest.raises(DegenerateInputError):
        PackingSpec(seed=[round_disk(0j, 1.0)], generators=[], min_radius=0.0)


def test_min_radius_cutoff():
    """Более крупная отсечка дает меньше кругов."""
    coarse = generate_packing(apollonian_fixture(depth=3, min_radius=0.05))
    fine = generate_packing(apollonian_fixture(depth=3, min_radius=1e-3))
    assert len(coarse.disks) < len(fine.disks)
    assert min(coarse.cap_radii) >= 0.05
