# tests/test_orbits.py
import math

import numpy as np
import pytest

from src.core.errors import BudgetExceededError, DegenerateInputError, DomainError
from src.dynamics.orbits import (
    accumulation_detector,
    bk_scan,
    discreteness_report,
    discreteness_trend,
    enumerate_group,
    orbit_of_circle,
    parabolic_orbit_report,
    rational_slope_test,
    stabilizer_closure_violations,
    stabilizer_search,
)
from src.geometry.circlespace import REAL_LINE, UNIT_CIRCLE, GeneralizedCircle
from src.geometry.moebius import INF, HyperbolicPoint, MoebiusMap, compose, inverse, u
from src.packing.packing import inversion_in_circle
from src.schemas.report_schemas import AccumulationVerdict, OrbitVerdict, SlopeVerdict

DILATION = MoebiusMap.from_matrix([[2.0, 0.0], [0.0, 0.5]])
BOOST = MoebiusMap.from_matrix([[math.cosh(2.0), math.sinh(2.0)], [math.sinh(2.0), math.cosh(2.0)]])


def test_free_group_ball():
    """Свободная группа ранга 2: 1 + 4 + 12 + 36 = 53 приведенных слова длины ≤ 3."""
    ball = enumerate_group([DILATION, BOOST], 3)
    assert len(ball) == 53
    assert ball.elements[0].word == ()
    assert len(ball.restricted(1)) == 5
    assert ball.find(compose(DILATION, inverse(DILATION))) == 0
    assert ball.find(BOOST) is not None


def test_involution_ball():
    """Инволюция входит в алфавит один раз: шар из двух элементов."""
    ball = enumerate_group([inversion_in_circle(UNIT_CIRCLE)], 5)
    assert len(ball) == 2
    assert ball.inverse_of == [0]


def test_ball_errors():
    with pytest.raises(DomainError):
        enumerate_group([DILATION], -1)
    with pytest.raises(DegenerateInputError):
        enumerate_group([], 2)
    with pytest.raises(BudgetExceededError, match="ball too large"):
        enumerate_group([DILATION, BOOST], 3, budget=20)


def test_orbit_deduplicates_images(apollonian):
    """Двойственная прямая неподвижна при отражении в себе: 4 образа на 5 элементах."""
    ball = enumerate_group(apollonian.spec.generators, 1)
    orbit = orbit_of_circle(REAL_LINE, ball)
    assert len(ball) == 5
    assert len(orbit.entries) == 4
    assert orbit.entries[0].word == ()
    assert len(orbit.restricted(0).entries) == 1


def test_discrete_orbit_report():
    """Орбита единичной окружности под z ↦ 4z дискретна."""
    orbit = orbit_of_circle(UNIT_CIRCLE, enumerate_group([DILATION], 4))
    report = discreteness_report(orbit, HyperbolicPoint(0j, 1.0), 2.0)
    assert report.orbit_size == 9
    assert report.circles_in_ball == 3
    assert report.min_gap > 0.1
    assert report.verdict == OrbitVerdict.LOOKS_DISCRETE.value
    assert report.caveat == "truncated at L=4"


def test_discreteness_trend_discrete():
    trend = discreteness_trend(UNIT_CIRCLE, [DILATION], [1, 2, 3], HyperbolicPoint(0j, 1.0), 2.0)
    assert trend.verdict == OrbitVerdict.LOOKS_DISCRETE.value
    assert len(trend.reports) == 3


def test_discreteness_trend_accumulating():
    """Поворот на 1 радиан: зазоры строго убывают с длиной слов."""
    rotation = MoebiusMap.from_matrix([[np.exp(0.5j), 0], [0, np.exp(-0.5j)]])
    circle = GeneralizedCircle.from_center_radius(0.5 + 0j, 0.2)
    trend = discreteness_trend(circle, [rotation], [1, 4, 10, 30], HyperbolicPoint(0j, 1.0), 5.0)
    assert trend.verdict == OrbitVerdict.ACCUMULATING.value
    assert trend.gaps[-1] < trend.gaps[0] / 10


def test_discreteness_trend_needs_two_lengths():
    with pytest.raises(DegenerateInputError):
        discreteness_trend(UNIT_CIRCLE, [DILATION], [3, 3], HyperbolicPoint(0j, 1.0), 2.0)


def test_dual_circle_orbit_gap_stable(dual_circle):
    """Орбита ℝ̂: минимальный зазор при L = 5 и L = 6 положителен и меняется не более чем на 10%."""
    fx, packing = dual_circle
    trend = discreteness_trend(fx.circle, packing.spec.generators, [5, 6], HyperbolicPoint(0j, 1.0), 2.0)
    assert trend.verdict == OrbitVerdict.LOOKS_DISCRETE.value
    first, second = trend.gaps
    assert first is not None and first > 0
    assert abs(second - first) <= 0.1 * first


def test_stabilizer(apollonian):
    """Стабилизатор двойственной прямой содержит отражение в ней и замкнут в шаре."""
    ball = enumerate_group(apollonian.spec.generators, 2)
    found = stabilizer_search(REAL_LINE, ball)
    words = [e.word for e in found]
    assert () in words
    assert (3,) in words
    assert stabilizer_closure_violations(found, ball) == []


def test_parabolic_orbit():
    """Сдвиг на 1: ℝ инвариантна, единичная окружность дает дискретное семейство."""
    invariant = parabolic_orbit_report(REAL_LINE, u(1.0), 3)
    assert invariant.invariant
    assert invariant.orbit_size == 1
    family = parabolic_orbit_report(UNIT_CIRCLE, u(1.0), 3)
    assert family.orbit_size == 7
    assert not family.invariant
    assert family.min_gap > 0
    assert family.verdict.startswith("closed")


@pytest.mark.parametrize(
    "direction, p, q",
    [
        (1 + 1j, 1, 1),
        (2 + 1j, 1, 2),
        (1 + 0j, 0, 1),
        (1j, 1, 0),
    ],
)
def test_rational_slopes(direction, p, q):
    """Наклон прямой через σ = ∞ в решетке (1, i)."""
    report = rational_slope_test(INF, (1, 1j), GeneralizedCircle.line(0j, direction))
    assert report.verdict == SlopeVerdict.RATIONAL.value
    assert (report.p, report.q) == (p, q)


def test_irrational_slope():
    report = rational_slope_test(INF, (1, 1j), GeneralizedCircle.line(0j, 1 + math.sqrt(2) * 1j))
    assert report.verdict == SlopeVerdict.IRRATIONAL.value
    assert report.slope == pytest.approx(math.sqrt(2))
    assert report.orbit_verdict.startswith("dense predicted")


def test_slope_of_circle_missing_sigma():
    report = rational_slope_test(INF, (1, 1j), UNIT_CIRCLE)
    assert report.verdict == SlopeVerdict.NOT_THROUGH_SIGMA.value
    with pytest.raises(DegenerateInputError, match="basis degenerate"):
        rational_slope_test(INF, (1, 2), REAL_LINE)


def test_accumulation_detector(apollonian):
    ball = enumerate_group(apollonian.spec.generators, 1)
    inside = orbit_of_circle(GeneralizedCircle.from_center_radius(0.5 + 0j, 0.1), ball)
    unmet = accumulation_detector(inside, apollonian)
    assert unmet.verdict == AccumulationVerdict.HYPOTHESIS_UNMET.value
    assert unmet.base_count_lower_bound == 0


def test_accumulation_detector_without_witness(dual_circle):
    """Образы двойственной прямой ортогональны кругам упаковки: касаний нет."""
    fx, packing = dual_circle
    orbit = orbit_of_circle(fx.circle, enumerate_group(packing.spec.generators, 2))
    report = accumulation_detector(orbit, packing)
    assert report.base_count_lower_bound == 3
    assert report.verdict == AccumulationVerdict.NO_WITNESS.value


def test_bk_scan(dual_circle):
    """ℝ̂ - жесткая окружность из B_3; единичная и внутренняя окружности отвергаются."""
    fx, packing = dual_circle
    candidates = [fx.circle, UNIT_CIRCLE, GeneralizedCircle.from_center_radius(0.5 + 0j, 0.1)]
    report = bk_scan(packing, 3, candidates, eps=1e-3, samples=8)
    first, second, third = report.candidates
    assert first.intersection_class == "finite"
    assert first.points == 3
    assert len(first.parabolic_points) == 3
    assert first.perturbation.eps == 1e-3
    assert first.perturbation.sampled == 8
    assert first.perturbation.violations == 0
    assert first.member
    assert not second.member and second.reason.startswith("intersection class")
    assert not third.member and third.reason == "intersection class empty"
    assert report.orbit_classes == [[0]]


def test_bk_scan_needs_k_at_least_three(apollonian):
    with pytest.raises(DomainError):
        bk_scan(apollonian, 2, [REAL_LINE])
