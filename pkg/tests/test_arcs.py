# tests/test_arcs.py
import math

import pytest

from src.core.errors import DomainError
from src.geometry.circlespace import UNIT_CIRCLE, GeneralizedCircle
from src.packing.arcs import (
    IntersectionClass,
    ResidualLabel,
    arc_decomposition,
    limit_arcset,
)
from src.packing.fixtures import apollonian_fixture
from src.packing.packing import generate_packing


@pytest.fixture(scope="module")
def shallow():
    """Аполлониева упаковка глубины 1: касания с внешним кругом вычислены точно."""
    return generate_packing(apollonian_fixture(depth=1))


def test_dual_circle_decomposition(dual_circle):
    """ℝ̂ покрыта тремя дугами кругов O, A, B; остаток - три точки."""
    fx, packing = dual_circle
    decomposition = arc_decomposition(fx.circle, packing)
    assert {a.disk for a in decomposition.arcs} == {0, 1, 2}
    assert decomposition.covered() == pytest.approx(2 * math.pi)
    assert decomposition.residual.measure() == pytest.approx(0.0, abs=1e-9)


def test_dual_circle_meets_limit_set_in_three_parabolic_points(dual_circle):
    fx, packing = dual_circle
    arcset = limit_arcset(fx.circle, packing)
    assert arcset.intersection_class() == IntersectionClass.FINITE
    assert arcset.count_lower_bound() == 3
    assert all(c.label == ResidualLabel.ISOLATED_PARABOLIC for c in arcset.components)
    found = sorted(p.real for p in arcset.parabolic_points)
    assert found == pytest.approx([-1.0, 0.0, 1.0], abs=1e-6)
    assert arcset.closedness_verdict().startswith("closed: finite intersection of size 3")
    assert arcset.measures[-1] <= arcset.measures[0] + 1e-12


def test_circle_inside_a_disk(shallow):
    """Окружность внутри круга A не встречает предельного множества."""
    arcset = limit_arcset(GeneralizedCircle.from_center_radius(0.5 + 0j, 0.1), shallow)
    assert arcset.intersection_class() == IntersectionClass.EMPTY
    assert arcset.count_lower_bound() == 0
    assert arcset.closedness_verdict().startswith("closed: C meets no limit point")


def test_packing_circle_lies_in_limit_set(shallow):
    """Граница внешнего круга целиком в Λ: остаток стабилен и накапливается."""
    arcset = limit_arcset(UNIT_CIRCLE, shallow)
    assert arcset.intersection_class() == IntersectionClass.INFINITE
    assert arcset.components[0].label == ResidualLabel.ACCUMULATING
    assert arcset.measures[-1] == pytest.approx(2 * math.pi)


def test_refine_must_be_positive(apollonian):
    with pytest.raises(DomainError, match="refine must be at least 1"):
        limit_arcset(UNIT_CIRCLE, apollonian, refine=0)


def test_schema(dual_circle):
    """Отчет сериализуется с классом пересечения и точками."""
    fx, packing = dual_circle
    report = limit_arcset(fx.circle, packing).to_schema()
    assert report.intersection_class == "finite"
    assert report.count_lower_bound == 3
    assert len(report.components) == 3
    assert all(c.point is not None for c in report.components)
    assert report.depths[-1] == 5
