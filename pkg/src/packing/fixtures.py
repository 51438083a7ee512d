# src/packing/fixtures
"""
Готовые конфигурации: аполлониева упаковка (−1, 2, 2, 3), полосная
упаковка между прямыми Im z = ±1 и двойственная окружность.
"""
from dataclasses import dataclass
from typing import List

from src.geometry.circlespace import UNIT_CIRCLE, Disk, GeneralizedCircle, circle_through
from src.geometry.moebius import INF, ExtendedComplex, MoebiusMap, compose
from src.packing.packing import PackingSpec, inversion_in_circle


def round_disk(center: complex, radius: float) -> Disk:
    """Ограниченный круг |z − center| < radius"""
    return Disk(GeneralizedCircle.from_center_radius(center, radius), 1)


def half_plane(boundary: GeneralizedCircle, inside: complex) -> Disk:
    """Полуплоскость (или круг), содержащая точку inside"""
    return Disk(boundary, -1 if boundary.value(inside) > 0 else 1)


APOLLONIAN_TANGENCIES = {
    "OA": 1 + 0j,
    "OB": -1 + 0j,
    "AB": 0j,
    "OC": 1j,
    "AC": 0.2 + 0.4j,
    "BC": -0.2 + 0.4j,
}


def apollonian_seed() -> List[Disk]:
    """Внешний круг |z| > 1 и три внутренних: кривизны (−1, 2, 2, 3)"""
    return [
        Disk(UNIT_CIRCLE, -1),
        round_disk(0.5, 0.5),
        round_disk(-0.5, 0.5),
        round_disk(2j / 3, 1.0 / 3.0),
    ]


def apollonian_duals() -> List[GeneralizedCircle]:
    """Двойственные окружности; i-я проходит через точки касания трех кругов, кроме i-го"""
    t = APOLLONIAN_TANGENCIES
    return [
        circle_through(t["AB"], t["AC"], t["BC"]),
        circle_through(t["OB"], t["OC"], t["BC"]),
        circle_through(t["OA"], t["OC"], t["AC"]),
        circle_through(t["OA"], t["OB"], t["AB"]),
    ]


def apollonian_fixture(depth: int = 3, min_radius: float = 1e-3) -> PackingSpec:
    duals = apollonian_duals()
    return PackingSpec(
        seed=apollonian_seed(),
        generators=[inversion_in_circle(c) for c in duals],
        depth=depth,
        min_radius=min_radius,
        dual_circles=duals,
        name="apollonian",
    )


LOWER_LINE = GeneralizedCircle.line(-1j, 1)
UPPER_LINE = GeneralizedCircle.line(1j, 1)


def strip_seed() -> List[Disk]:
    """Полуплоскости Im z < −1, Im z > 1 и единичные круги с центрами 0 и 2"""
    return [
        half_plane(LOWER_LINE, -2j),
        half_plane(UPPER_LINE, 2j),
        round_disk(0j, 1.0),
        round_disk(2 + 0j, 1.0),
    ]


def strip_duals() -> List[GeneralizedCircle]:
    return [
        GeneralizedCircle.from_center_radius(1 + 1j, 1.0),
        GeneralizedCircle.from_center_radius(1 - 1j, 1.0),
        GeneralizedCircle.line(0j, 1j),
        GeneralizedCircle.line(2 + 0j, 1j),
    ]


def strip_fixture(depth: int = 3, min_radius: float = 1e-3) -> PackingSpec:
    duals = strip_duals()
    return PackingSpec(
        seed=strip_seed(),
        generators=[inversion_in_circle(c) for c in duals],
        depth=depth,
        min_radius=min_radius,
        dual_circles=duals,
        name="strip",
    )


def strip_translation() -> MoebiusMap:
    """Сдвиг z ↦ z + 4: композиция отражений в прямых Re z = 2 и Re z = 0"""
    duals = strip_duals()
    return compose(inversion_in_circle(duals[3]), inversion_in_circle(duals[2]))


@dataclass
class DualCircleFixture:
    """Аполлониева упаковка с двойственной окружностью ℝ̂ и кадром на ней"""

    spec: PackingSpec
    circle: GeneralizedCircle
    x_minus: ExtendedComplex
    x_plus: ExtendedComplex


def dual_circle_fixture(depth: int = 3, min_radius: float = 1e-3) -> DualCircleFixture:
    spec = apollonian_fixture(depth, min_radius)
    return DualCircleFixture(spec=spec, circle=spec.dual_circles[3], x_minus=INF, x_plus=0j)


FIXTURES = {
    "apollonian": apollonian_fixture,
    "strip": strip_fixture,
    "dual-circle": lambda depth=3, min_radius=1e-3: dual_circle_fixture(depth, min_radius).spec,
}
