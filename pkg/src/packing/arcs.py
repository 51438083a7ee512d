# src/packing/arcs
"""
Разложение окружности на дуги, лежащие в кругах упаковки, и остаток -
переоценка C ∩ Λ на конечной глубине.

Окружность параметризуется углом сферической окружности; начало отсчета
сдвигается в конец одной из дуг, чтобы ни одна дуга не переходила через 0.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np

from src.core.config import POINT_TOL
from src.core.errors import DomainError
from src.dynamics.gapset import Ambient, GapSet
from src.geometry.circlespace import GeneralizedCircle, to_spherical
from src.geometry.moebius import ExtendedComplex, from_sphere
from src.packing.packing import CirclePacking
from src.schemas.encoding import point_to_json
from src.schemas.report_schemas import LimitArcSetReport, ResidualComponentSchema

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# κ ≥ 1 − _TANGENT_SLACK означает касание, а не дугу
_TANGENT_SLACK = 1e-12
# перекрытие соседних дуг меньше этого - численный шум у общей точки касания
_OVERLAP_TOL = 1e-9


@dataclass(frozen=True)
class Arc:
    """Открытая дуга окружности внутри круга disk в сдвинутом параметре"""

    disk: int
    start: float
    end: float

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass
class ArcDecomposition:
    circle: GeneralizedCircle
    origin: float
    arcs: List[Arc]
    residual: GapSet
    depth: int

    def point_at(self, psi: float) -> ExtendedComplex:
        return from_sphere(to_spherical(self.circle).point(self.origin + psi))

    def covered(self) -> float:
        return sum(a.length for a in self.arcs)


def _raw_arcs(circle: GeneralizedCircle, packing: CirclePacking) -> Tuple[List[Tuple[int, float, float]], Optional[int]]:
    """Дуги (индекс круга, центр φ0, полуширина w); второй элемент - круг, содержащий всю окружность"""
    if not packing.disks:
        return [], None
    s = to_spherical(circle)
    e1, e2 = s.frame()
    centers, radii = packing.cap_centers, packing.cap_radii
    alpha = math.cos(s.radius) * (centers @ s.center)
    p1, p2 = centers @ e1, centers @ e2
    beta = math.sin(s.radius) * np.hypot(p1, p2)
    phi0 = np.arctan2(p2, p1)
    cos_s = np.cos(radii)
    arcs = []
    for i in range(len(radii)):
        if packing.disks[i].circle.is_close(circle):
            continue
        if beta[i] <= 1e-15:
            if alpha[i] > cos_s[i]:
                return [], i
            continue
        kappa = (cos_s[i] - alpha[i]) / beta[i]
        if kappa >= 1.0 - _TANGENT_SLACK:
            continue
        if kappa <= -1.0:
            return [], i
        arcs.append((i, float(phi0[i]), math.acos(kappa)))
    return arcs, None


def arc_decomposition(
    circle: GeneralizedCircle,
    packing: CirclePacking,
    origin: Optional[float] = None,
) -> ArcDecomposition:
    """Дуги C ∩ B по всем кругам упаковки и остаток-дополнение"""
    raw, whole = _raw_arcs(circle, packing)
    window = (0.0, TWO_PI)
    if whole is not None:
        return ArcDecomposition(
            circle, 0.0, [Arc(whole, 0.0, TWO_PI)],
            GapSet(window, ((0.0, TWO_PI),), Ambient.CIRCLE), packing.depth,
        )
    if not raw:
        return ArcDecomposition(circle, origin or 0.0, [], GapSet(window, (), Ambient.CIRCLE), packing.depth)
    if origin is None:
        i, phi0, w = raw[0]
        origin = (phi0 - w) % TWO_PI

    pieces: List[List] = []
    for i, phi0, w in raw:
        start = (phi0 - w - origin) % TWO_PI
        if start > TWO_PI - _OVERLAP_TOL:
            start -= TWO_PI
        end = start + 2 * w
        if end > TWO_PI:
            pieces += [[i, start, TWO_PI], [i, 0.0, end - TWO_PI]]
        else:
            pieces.append([i, max(start, 0.0), end])
    pieces.sort(key=lambda p: (p[1], p[2]))

    for prev, cur in zip(pieces, pieces[1:]):
        overlap = prev[2] - cur[1]
        if overlap <= 0:
            continue
        if overlap <= _OVERLAP_TOL:
            meet = 0.5 * (prev[2] + cur[1])
            prev[2] = cur[1] = meet
        else:
            logger.warning("Дуги кругов %d и %d перекрываются на %.3e", prev[0], cur[0], overlap)
    arcs = [Arc(i, a, b) for i, a, b in pieces if b > a]
    residual = GapSet.from_gaps([(a.start, a.end) for a in arcs], window, Ambient.CIRCLE)
    return ArcDecomposition(circle, origin, arcs, residual, packing.depth)


class ResidualLabel(str, Enum):
    ISOLATED_PARABOLIC = "isolated parabolic"
    UNCLASSIFIED = "unclassified"
    ACCUMULATING = "accumulating"
    UNDETERMINED = "undetermined"


class IntersectionClass(str, Enum):
    EMPTY = "empty"
    ONE_POINT = "one-point"
    FINITE = "finite"
    INFINITE = "infinite"
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ResidualComponent:
    start: float
    end: float
    label: ResidualLabel
    point: Optional[ExtendedComplex] = None

    @property
    def is_point(self) -> bool:
        return self.point is not None


@dataclass
class LimitArcSet:
    circle: GeneralizedCircle
    depths: List[int]
    measures: List[float]
    decomposition: ArcDecomposition
    components: List[ResidualComponent] = field(default_factory=list)

    @property
    def residual(self) -> GapSet:
        return self.decomposition.residual

    @property
    def points(self) -> List[ResidualComponent]:
        return [c for c in self.components if c.is_point]

    @property
    def parabolic_points(self) -> List[ExtendedComplex]:
        return [c.point for c in self.components if c.label == ResidualLabel.ISOLATED_PARABOLIC]

    def count_lower_bound(self) -> int:
        """Нижняя оценка |C ∩ Λ|: 1 за точку, 2 за невырожденную компоненту"""
        return sum(1 if c.is_point else 2 for c in self.components)

    def intersection_class(self) -> IntersectionClass:
        if not self.components:
            return IntersectionClass.EMPTY
        labels = {c.label for c in self.components}
        if ResidualLabel.UNDETERMINED in labels:
            return IntersectionClass.UNDETERMINED
        if ResidualLabel.ACCUMULATING in labels:
            return IntersectionClass.INFINITE
        return IntersectionClass.ONE_POINT if len(self.components) == 1 else IntersectionClass.FINITE

    def closedness_verdict(self) -> str:
        """Вывод элементарных лемм о замкнутости орбиты, с указанием глубины"""
        depth = self.depths[-1]
        kind = self.intersection_class()
        if kind == IntersectionClass.EMPTY:
            return f"closed: C meets no limit point (depth {depth})"
        if kind == IntersectionClass.ONE_POINT:
            parabolic = self.components[0].label == ResidualLabel.ISOLATED_PARABOLIC
            where = "a parabolic point" if parabolic else "one point"
            return f"closed: C meets the limit set in {where} (depth {depth})"
        if kind == IntersectionClass.FINITE:
            return f"closed: finite intersection of size {len(self.components)} (depth {depth})"
        if kind == IntersectionClass.INFINITE:
            return f"not decided by the finite-intersection criteria (depth {depth})"
        return f"undetermined at depth {depth}"

    def to_schema(self) -> LimitArcSetReport:
        return LimitArcSetReport(
            depths=self.depths,
            measures=self.measures,
            components=[
                ResidualComponentSchema(
                    start=c.start,
                    end=c.end,
                    label=c.label.value,
                    point=None if c.point is None else point_to_json(c.point),
                )
                for c in self.components
            ],
            intersection_class=self.intersection_class().value,
            count_lower_bound=self.count_lower_bound(),
            closedness_verdict=self.closedness_verdict(),
        )


def _measure_within(residual: GapSet, a: float, b: float) -> float:
    covered = sum(max(0.0, min(b, hi) - max(a, lo)) for lo, hi in residual.gaps)
    return (b - a) - covered


def limit_arcset(
    circle: GeneralizedCircle,
    packing: CirclePacking,
    refine: int = 2,
    point_tol: float = POINT_TOL,
    stability: float = 0.01,
) -> LimitArcSet:
    """
    Сравнение остатков на глубинах depth − refine + 1 … depth.

    Вырожденные компоненты - точки (параболические, если совпадают с точкой
    касания); невырожденные - накапливающиеся, если их мера стабилизировалась.
    """
    if refine < 1:
        raise DomainError("refine must be at least 1")
    final = arc_decomposition(circle, packing)
    depths = list(range(max(0, packing.depth - refine + 1), packing.depth + 1))
    residuals = [
        arc_decomposition(circle, packing.truncated(d), origin=final.origin).residual
        for d in depths[:-1]
    ] + [final.residual]
    measures = [r.measure() for r in residuals]

    components: List[ResidualComponent] = []
    for a, b in final.residual.components():
        if b - a <= point_tol:
            p = final.point_at(0.5 * (a + b))
            label = ResidualLabel.ISOLATED_PARABOLIC if packing.find_tangency(p) else ResidualLabel.UNCLASSIFIED
            components.append(ResidualComponent(a, b, label, p))
            continue
        label = ResidualLabel.UNDETERMINED
        if len(residuals) >= 2:
            prev = _measure_within(residuals[-2], a, min(b, TWO_PI))
            if b > TWO_PI:
                prev += _measure_within(residuals[-2], 0.0, b - TWO_PI)
            cur = b - a
            if prev > 0 and abs(prev - cur) <= stability * prev:
                label = ResidualLabel.ACCUMULATING
        components.append(ResidualComponent(a, b, label))
    logger.info(
        "Остаток на глубинах %s: меры %s, компонент %d", depths, ["%.3e" % m for m in measures], len(components)
    )
    return LimitArcSet(circle, depths, measures, final, components)
