# tests/test_circlespace.py
import math

import numpy as np
import pytest

from src.commands.selftest import annulus_suite, random_crossing_pair, random_map, random_near
from src.core.errors import DegenerateInputError, DomainError
from src.geometry.circlespace import (
    REAL_LINE,
    UNIT_CIRCLE,
    Disk,
    GeneralizedCircle,
    IntersectionKind,
    angle_between,
    annulus_contains,
    apply_circle,
    apply_disk,
    circle_distance,
    circle_through,
    covering_phi,
    from_spherical,
    intersect,
    inversive_product,
    sphere_angle,
    sphere_angles,
    to_spherical,
)
from src.geometry.moebius import INF, MoebiusMap, apply_boundary


def test_center_radius_form():
    """Нормированная форма окружности по центру и радиусу."""
    c = GeneralizedCircle.from_center_radius(1 + 1j, 2.0)
    assert c.center == pytest.approx(1 + 1j)
    assert c.radius == pytest.approx(2.0)
    assert abs(c.B) ** 2 - c.A * c.C == pytest.approx(1.0)
    assert c.contains_point(3 + 1j)


def test_line_contains_infinity():
    line = GeneralizedCircle.line(1j, 1)
    assert line.is_line
    assert line.contains_point(INF)
    assert line.contains_point(5 + 1j)
    with pytest.raises(DomainError):
        _ = line.center


def test_degenerate_form_rejected():
    with pytest.raises(DegenerateInputError):
        GeneralizedCircle.from_coefficients(1.0, 0j, 1.0)


def test_circle_through_three_points():
    """Окружность через 1, i, −1 - единичная; через 0, 1, ∞ - вещественная прямая."""
    assert circle_through(1 + 0j, 1j, -1 + 0j).is_close(UNIT_CIRCLE)
    assert circle_through(0j, 1 + 0j, INF).is_close(REAL_LINE)
    with pytest.raises(DegenerateInputError, match="degenerate triple"):
        circle_through(1j, 1j, 0j)


def test_apply_circle_maps_points(rng):
    """Образ окружности проходит через образы ее точек."""
    for _ in range(30):
        f = random_map(rng)
        c = GeneralizedCircle.from_center_radius(complex(*rng.normal(size=2)), rng.uniform(0.3, 2.0))
        image = apply_circle(f, c)
        for p in c.points(6):
            assert image.contains_point(apply_boundary(f, p), 1e-7)


def test_affine_image():
    f = MoebiusMap.from_matrix([[2, 1], [0, 1]])
    image = apply_circle(f, UNIT_CIRCLE)
    assert image.center == pytest.approx(1 + 0j)
    assert image.radius == pytest.approx(2.0)


def test_intersection_kinds():
    """Пересечение, касание, непересечение и совпадение."""
    crossing = intersect(UNIT_CIRCLE, REAL_LINE)
    assert crossing.kind == IntersectionKind.CROSSING
    assert [p.real for p in crossing.points] == pytest.approx([-1.0, 1.0])

    tangent = intersect(GeneralizedCircle.from_center_radius(1j, 1.0), REAL_LINE)
    assert tangent.kind == IntersectionKind.TANGENT
    assert abs(tangent.points[0]) < 1e-9

    far = GeneralizedCircle.from_center_radius(3j, 1.0)
    assert intersect(far, REAL_LINE).kind == IntersectionKind.DISJOINT
    assert intersect(UNIT_CIRCLE, UNIT_CIRCLE).kind == IntersectionKind.EQUAL


def test_angle_law():
    """cos θ = h/r: окружность радиуса 2 с центром на высоте 1 пересекает прямую под углом π/3."""
    c = GeneralizedCircle.from_center_radius(1j, 2.0)
    assert angle_between(c, REAL_LINE) == pytest.approx(math.pi / 3)
    assert abs(inversive_product(c, REAL_LINE)) == pytest.approx(0.5)
    assert angle_between(UNIT_CIRCLE, REAL_LINE) == pytest.approx(math.pi / 2)


def test_angle_of_disjoint_circles():
    with pytest.raises(DomainError, match="no intersection"):
        angle_between(GeneralizedCircle.from_center_radius(3j, 1.0), REAL_LINE)


def test_angle_is_conformal(rng):
    """Угол пересечения сохраняется (анти)отображениями Мёбиуса."""
    for _ in range(50):
        f = random_map(rng)
        c1, c2 = random_crossing_pair(rng)
        before = angle_between(c1, c2)
        after = angle_between(apply_circle(f, c1), apply_circle(f, c2))
        assert after == pytest.approx(before, abs=1e-7)


def test_spherical_roundtrip(rng):
    for _ in range(30):
        c = GeneralizedCircle.from_center_radius(complex(*rng.normal(size=2)), rng.uniform(0.1, 3.0))
        assert from_spherical(to_spherical(c)).is_close(c, 1e-9)


def test_covering_is_two_to_one(rng):
    """φ(x, r) = φ(−x, π − r)."""
    for _ in range(200):
        x = rng.normal(size=3)
        r = rng.uniform(0.05, math.pi - 0.05)
        assert covering_phi(x, r).is_close(covering_phi(-x, math.pi - r), 1e-8)


def test_covering_radius_domain():
    with pytest.raises(DomainError):
        covering_phi(np.array([0.0, 0.0, 1.0]), math.pi)


def test_circle_distance():
    """Расстояние в пространстве окружностей не зависит от выбора шапки."""
    c = GeneralizedCircle.from_center_radius(0.5, 0.7)
    assert circle_distance(c, c) == pytest.approx(0.0, abs=1e-12)
    cap = to_spherical(c)
    shifted = covering_phi(cap.center, cap.radius + 0.01)
    flipped = covering_phi(-cap.center, math.pi - cap.radius - 0.01)
    assert circle_distance(c, shifted) == pytest.approx(0.01)
    assert circle_distance(c, flipped) == pytest.approx(0.01)


def test_sphere_angles_vectorized(rng):
    x = rng.normal(size=3)
    x /= np.linalg.norm(x)
    ys = rng.normal(size=(10, 3))
    ys /= np.linalg.norm(ys, axis=1)[:, None]
    expected = [sphere_angle(x, y) for y in ys]
    assert sphere_angles(x, ys) == pytest.approx(expected)


def test_disk_curvature_and_containment():
    """Внешность единичного круга имеет кривизну −1."""
    outside = Disk(UNIT_CIRCLE, -1)
    inside = Disk(GeneralizedCircle.from_center_radius(0.5, 0.5), 1)
    assert outside.curvature == pytest.approx(-1.0)
    assert inside.curvature == pytest.approx(2.0)
    assert outside.contains(2 + 0j)
    assert not outside.contains(0j)
    assert inside.contains(0.5 + 0j)
    with pytest.raises(DomainError):
        Disk(UNIT_CIRCLE, 0)


def test_apply_disk_keeps_inside(rng):
    """Образ круга содержит образ внутренней точки."""
    disk = Disk(GeneralizedCircle.from_center_radius(0.3j, 0.5), 1)
    for _ in range(30):
        f = random_map(rng)
        image = apply_disk(f, disk)
        p = apply_boundary(f, 0.3j)
        assert p is INF or image.contains(p)


def test_annulus_contains_small_perturbations(rng):
    """Близкие окружности лежат в ε-кольце, далекие - нет."""
    c = GeneralizedCircle.from_center_radius(0j, 1.0)
    cap = to_spherical(c)
    eps = 1e-2
    for _ in range(100):
        tangent = rng.normal(size=3)
        tangent -= float(tangent @ cap.center) * cap.center
        tangent /= np.linalg.norm(tangent)
        alpha = rng.uniform(0, eps / 2)
        x = math.cos(alpha) * cap.center + math.sin(alpha) * tangent
        d = covering_phi(x, cap.radius + rng.uniform(-eps / 2, eps / 2) * 0.9)
        assert annulus_contains(d, c, eps)
    assert not annulus_contains(GeneralizedCircle.from_center_radius(0j, 2.0), c, eps)


def test_annulus_epsilon_range():
    with pytest.raises(DomainError):
        annulus_contains(UNIT_CIRCLE, UNIT_CIRCLE, 2.0)


def test_annulus_epsilon_follows_side():
    """ε ограничено радиусом шапки выбранной стороны."""
    c = GeneralizedCircle.from_center_radius(0j, 0.1)
    with pytest.raises(DomainError, match="outside"):
        annulus_contains(c, c, 0.5)
    assert annulus_contains(c, c, 0.5, side=-1)
    assert annulus_contains(GeneralizedCircle.from_center_radius(0j, 0.12), c, 0.5, side=-1)


def test_annulus_side_independent(rng):
    """Ответ для шапки и дополнительной шапки совпадает."""
    c = GeneralizedCircle.from_center_radius(0.3 + 0.2j, 0.7)
    cap = Disk(c, 1).to_cap()
    eps = 0.05
    answers = set()
    for _ in range(200):
        x = random_near(cap.center, rng.uniform(0, eps), rng)
        d = covering_phi(x, cap.radius + rng.uniform(-2 * eps, 2 * eps))
        inside = annulus_contains(d, c, eps, side=1)
        assert inside == annulus_contains(d, c, eps, side=-1)
        answers.add(inside)
    assert answers == {True, False}


def test_annulus_suite_on_fixture_circles(rng):
    """Все 16 окружностей фикстур проходят проверку кольца."""
    result = annulus_suite(200, rng)
    assert result.checks == 16
    assert result.passed, result.failures
