# src/geometry/halfspace
"""
Геометрия верхнего полупространства H³: расстояния, геодезические,
орисферы, высоты и выпуклые оболочки окружностей.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from scipy.optimize import minimize_scalar

from src.core.config import ALGEBRAIC_TOL
from src.core.errors import DomainError, DegenerateInputError
from src.geometry.circlespace import (
    Disk,
    GeneralizedCircle,
    IntersectionKind,
    intersect,
    inversive_product,
)
from src.geometry.moebius import (
    INF,
    ExtendedComplex,
    HyperbolicPoint,
    MoebiusMap,
    apply_boundary,
    apply_halfspace,
    chordal_distance,
    inverse,
    is_inf,
    to_infinity_coords,
)
from src.schemas.encoding import point_to_json
from src.schemas.report_schemas import CuspFamilyReport, CuspViolation

logger = logging.getLogger(__name__)

# предел параметра длины дуги при поиске минимума (e^64 еще представимо)
_ARCLENGTH_LIMIT = 64.0


@dataclass(frozen=True)
class Geodesic:
    """Геодезическая l(u, v) с различными концами на границе"""

    endpoints: Tuple[ExtendedComplex, ExtendedComplex]

    def __post_init__(self):
        u, v = self.endpoints
        if chordal_distance(u, v) <= 1e-10:
            raise DegenerateInputError("geodesic endpoints must be distinct")

    @classmethod
    def between(cls, u: ExtendedComplex, v: ExtendedComplex) -> "Geodesic":
        return cls((u, v))


@dataclass(frozen=True)
class Horoball:
    """Открытый орисферический шар: при base = ∞ это {t > size}, иначе евклидов шар диаметра size"""

    base: ExtendedComplex
    size: float

    def __post_init__(self):
        if not self.size > 0:
            raise DomainError("horoball size must be positive")


@dataclass(frozen=True)
class HeightChart:
    """Карта высоты height_σ: chart(σ) = ∞"""

    sigma: ExtendedComplex
    chart: MoebiusMap

    def __post_init__(self):
        if not is_inf(apply_boundary(self.chart, self.sigma)):
            raise DomainError("height chart must send sigma to infinity")

    @classmethod
    def at(cls, sigma: ExtendedComplex) -> "HeightChart":
        return cls(sigma, to_infinity_coords(sigma))


def dist(p: HyperbolicPoint, q: HyperbolicPoint) -> float:
    """Гиперболическое расстояние: cosh d = 1 + (|Δz|² + Δt²)/(2 t_p t_q)"""
    chord = math.sqrt(abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2)
    return 2.0 * math.asinh(chord / (2.0 * math.sqrt(p.t * q.t)))


def same_height_distance(d: float, z: float) -> float:
    """Точное расстояние между точками на одной высоте z с горизонтальным зазором d"""
    return math.acosh(1.0 + d * d / (2.0 * z * z))


def log_height_bound(d: float, z: float) -> float:
    """Оценка ½ ln(1 + d²/z²); не превосходит same_height_distance"""
    return 0.5 * math.log1p(d * d / (z * z))


def _axis_chart(u: ExtendedComplex, v: ExtendedComplex) -> MoebiusMap:
    """Отображение, переводящее u → 0 и v → ∞"""
    if is_inf(v):
        return MoebiusMap.from_matrix([[1, -u], [0, 1]])
    if is_inf(u):
        return MoebiusMap.from_matrix([[0, 1], [1, -v]])
    return MoebiusMap.from_matrix([[1, -u], [1, -v]])


def dist_point_geodesic(p: HyperbolicPoint, line: Geodesic) -> float:
    image = apply_halfspace(_axis_chart(*line.endpoints), p)
    return math.asinh(abs(image.z) / image.t)


def dist_geodesics(l1: Geodesic, l2: Geodesic) -> float:
    """Расстояние между геодезическими; 0 при пересечении или общем конце"""
    for p in l1.endpoints:
        for q in l2.endpoints:
            if chordal_distance(p, q) <= 1e-10:
                return 0.0
    chart = _axis_chart(*l2.endpoints)
    a_img = apply_boundary(chart, l1.endpoints[0])
    b_img = apply_boundary(chart, l1.endpoints[1])
    ratio = a_img / b_img
    if abs(ratio.imag) <= ALGEBRAIC_TOL * abs(ratio) and ratio.real < 0:
        return 0.0

    # l1 в образе параметризуется длиной дуги s через ось (0, e^s)
    param = inverse(_axis_chart(a_img, b_img))

    def objective(s: float) -> float:
        q = apply_halfspace(param, HyperbolicPoint(0j, math.exp(s)))
        return math.asinh(abs(q.z) / q.t)

    span = 1.0
    while span < _ARCLENGTH_LIMIT:
        grid = [objective(-span + 2 * span * k / 32) for k in range(33)]
        inner = min(grid[1:-1])
        if grid[0] > inner and grid[-1] > inner:
            break
        span *= 2
    res = minimize_scalar(objective, bounds=(-span, span), method="bounded", options={"xatol": 1e-9})
    return float(res.fun)


def highest_point(line: Geodesic) -> HyperbolicPoint:
    u, v = line.endpoints
    if is_inf(u) or is_inf(v):
        raise DomainError("vertical geodesic has no apex")
    return HyperbolicPoint((u + v) / 2, abs(u - v) / 2)


def height_of(p: HyperbolicPoint, chart: HeightChart) -> float:
    return apply_halfspace(chart.chart, p).t


def horoball_contains(h: Horoball, p: HyperbolicPoint) -> bool:
    if is_inf(h.base):
        return p.t > h.size
    return abs(p.z - h.base) ** 2 + p.t ** 2 < h.size * p.t


def _horosphere_point(h: Horoball) -> HyperbolicPoint:
    if is_inf(h.base):
        return HyperbolicPoint(0j, h.size)
    return HyperbolicPoint(h.base, h.size)


def horoball_image(f: MoebiusMap, h: Horoball) -> Horoball:
    """Образ орисферы; размер пересчитывается по образу точки на ее границе"""
    base = apply_boundary(f, h.base)
    q = apply_halfspace(f, _horosphere_point(h))
    if is_inf(base):
        return Horoball(INF, q.t)
    return Horoball(base, (abs(q.z - base) ** 2 + q.t ** 2) / q.t)


def dist_to_horoball(p: HyperbolicPoint, h: Horoball) -> float:
    """Расстояние от точки до замкнутого орисферического шара"""
    chart = to_infinity_coords(h.base)
    level = horoball_image(chart, h).size
    height = apply_halfspace(chart, p).t
    return max(0.0, math.log(level / height))


def horoballs_disjoint(h1: Horoball, h2: Horoball) -> bool:
    """Не пересекаются ли замкнутые орисферические шары"""
    if chordal_distance(h1.base, h2.base) <= 1e-10:
        return False
    if is_inf(h1.base):
        return h2.size < h1.size
    if is_inf(h2.base):
        return h1.size < h2.size
    return abs(h1.base - h2.base) ** 2 > h1.size * h2.size


def horoballs_equal(h1: Horoball, h2: Horoball, tol: float = 1e-8) -> bool:
    return chordal_distance(h1.base, h2.base) <= tol and abs(h1.size - h2.size) <= tol * max(1.0, h1.size)


def is_shrinking(horoballs: Sequence[Horoball], o: HyperbolicPoint, min_growth: float = 1.0) -> bool:
    """
    Проверка конечного отрезка последовательности на «сжатие»:
    общая база, вложенность H_{n+1} ⊂ H_n и рост d(o, H_n) не менее чем на min_growth.
    """
    if len(horoballs) < 2:
        return False
    base = horoballs[0].base
    for prev, cur in zip(horoballs, horoballs[1:]):
        if chordal_distance(cur.base, base) > 1e-10:
            return False
        nested = cur.size > prev.size if is_inf(base) else cur.size < prev.size
        if not nested:
            return False
    distances = [dist_to_horoball(o, h) for h in horoballs]
    increasing = all(b > a for a, b in zip(distances, distances[1:]))
    return increasing and distances[-1] - distances[0] >= min_growth


def cusp_family_check(
    horoballs: Sequence[Horoball],
    group: Iterable[Tuple[Sequence[int], MoebiusMap]],
) -> CuspFamilyReport:
    """Попарная непересекаемость сдвигов замкнутых орисфер словами из шара группы"""
    translated: List[Tuple[int, List[int], Horoball]] = []
    for word, g in group:
        for i, h in enumerate(horoballs):
            image = horoball_image(g, h)
            if any(horoballs_equal(image, other) for _, _, other in translated):
                continue
            translated.append((i, list(word), image))
    pairs = 0
    for x in range(len(translated)):
        for y in range(x + 1, len(translated)):
            pairs += 1
            i, wi, hi = translated[x]
            j, wj, hj = translated[y]
            if not horoballs_disjoint(hi, hj):
                logger.info("Пересечение орисфер %d и %d (слова %s, %s)", i, j, wi, wj)
                return CuspFamilyReport(
                    passed=False,
                    horoballs_checked=len(translated),
                    pairs_checked=pairs,
                    violation=CuspViolation(
                        first_index=i,
                        first_word=wi,
                        first_base=point_to_json(hi.base),
                        first_size=hi.size,
                        second_index=j,
                        second_word=wj,
                        second_base=point_to_json(hj.base),
                        second_size=hj.size,
                    ),
                )
    return CuspFamilyReport(passed=True, horoballs_checked=len(translated), pairs_checked=pairs)


def dist_to_hull(circle: GeneralizedCircle, p: HyperbolicPoint) -> float:
    """Расстояние до геодезической плоскости над окружностью: sinh d = |A(|z|²+t²) + 2Re(B̄z) + C|/(2t)"""
    z, t = p.z, p.t
    value = circle.A * (abs(z) ** 2 + t * t) + 2.0 * (circle.B.conjugate() * z).real + circle.C
    return math.asinh(abs(value) / (2.0 * t))


def hull_meets_ball(circle: GeneralizedCircle, center: HyperbolicPoint, r: float) -> bool:
    if not r > 0:
        raise DomainError("ball radius must be positive")
    return dist_to_hull(circle, center) <= r


def arc_geodesic_curvature(circle: GeneralizedCircle, disk: Disk) -> float:
    """
    Геодезическая кривизна дуги circle ∩ disk в гиперболической метрике круга:
    0 для геодезической, 1 для орицикла, <1 для эквидистанты, >1 для метрической окружности.
    """
    boundary = disk.circle
    kind = intersect(circle, boundary).kind
    if kind == IntersectionKind.EQUAL:
        raise DomainError("circle coincides with the disk boundary")
    if kind in (IntersectionKind.TANGENT, IntersectionKind.DISJOINT):
        sample = max(circle.points(8), key=boundary.residual)
        if not disk.contains(sample):
            raise DomainError("circle does not meet the disk")
        if kind == IntersectionKind.TANGENT:
            return 1.0
    return abs(inversive_product(circle, boundary))
