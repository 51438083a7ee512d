# src/dynamics/recurrence
"""
Возвраты геодезической в выпуклое ядро: множество времен возврата в
нормированных координатах, K-толщина, эксперимент с углами в полосе и
симметризация четверок (u, v, w, z).

Нормировка кадра x = (C, x⁻, x⁺): x⁺ → 0, p₀ → 1, x⁻ → ∞, так что C
переходит в ℝ̂, а время возврата t соответствует точке t ∈ ℝ.
"""
import bisect
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.core.config import K_CAP, THREADS, T_MAX, TREND_FACTOR
from src.core.errors import DegenerateInputError, DomainError
from src.dynamics.gapset import GapSet, Interval
from src.dynamics.orbits import GroupBall
from src.dynamics.trends import assess_trend, is_monotone
from src.geometry.circlespace import GeneralizedCircle, IntersectionKind, angle_between, intersect
from src.geometry.halfspace import (
    Geodesic,
    HeightChart,
    dist_geodesics,
    height_of,
    highest_point,
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
    to_zero_one_infinity,
)
from src.packing.arcs import arc_decomposition
from src.packing.packing import CirclePacking, double_horocycle_at, resolve_tangency
from src.schemas.encoding import complex_to_json
from src.schemas.report_schemas import (
    AnglesRow,
    AnglesTable,
    ExcursionPoint,
    ExcursionTrace,
    ExcursionTrend,
    SymmetrizationReport,
    SymmetrizationRow,
    SymmetrizationWitness,
    ThicknessReport,
    ThicknessSummary,
    ThicknessVerdict,
    TrendCheck,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
# концы лакун ближе этого (относительно) считаются одной точкой
_SNAP_TOL = 1e-12


@dataclass(frozen=True)
class FrameSpec:
    """Кадр: окружность C и две различные точки x⁻, x⁺ на ней; p0 - необязательная третья точка нормировки"""

    circle: GeneralizedCircle
    x_minus: ExtendedComplex
    x_plus: ExtendedComplex
    p0: Optional[ExtendedComplex] = None

    def __post_init__(self):
        named = [("x_minus", self.x_minus), ("x_plus", self.x_plus)]
        if self.p0 is not None:
            named.append(("p0", self.p0))
        for name, p in named:
            if not self.circle.contains_point(p):
                raise DomainError(f"{name} is off the circle")
        points = [p for _, p in named]
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                if chordal_distance(points[i], points[j]) <= 1e-10:
                    raise DegenerateInputError("frame points must be distinct")


def base_point(frame: FrameSpec) -> ExtendedComplex:
    """p₀: заданная точка или середина положительной дуги от x⁺ к x⁻"""
    if frame.p0 is not None:
        return frame.p0
    c = frame.circle
    start = c.angle_of(frame.x_plus)
    span = (c.angle_of(frame.x_minus) - start) % TWO_PI
    return c.point_at(start + span / 2)


def normalization_map(frame: FrameSpec) -> MoebiusMap:
    return to_zero_one_infinity(frame.x_plus, base_point(frame), frame.x_minus)


def _real(p: ExtendedComplex) -> float:
    return math.inf if is_inf(p) else p.real


def _arc_image(g: MoebiusMap, ends: Tuple[ExtendedComplex, ExtendedComplex], inner: ExtendedComplex) -> List[Interval]:
    """Образ открытой дуги на ℝ̂: интервал или пара лучей через ∞"""
    e1, e2, m = (_real(apply_boundary(g, p)) for p in (*ends, inner))
    if math.isinf(e1) or math.isinf(e2):
        other = e2 if math.isinf(e1) else e1
        return [(other, math.inf)] if m > other else [(-math.inf, other)]
    lo, hi = min(e1, e2), max(e1, e2)
    if lo < m < hi:
        return [(lo, hi)]
    return [(-math.inf, lo), (hi, math.inf)]


def _snap_endpoints(gaps: List[Interval], tol: float = _SNAP_TOL) -> List[Interval]:
    """
    Общие концы соседних дуг после нормировки совпадают лишь с точностью
    округления; такие концы (и концы около 0 = образа x⁺) делаются равными.
    """
    ends = sorted({x for gap in gaps for x in gap if math.isfinite(x) and abs(x) > tol})
    anchors = {}
    anchor = None
    for x in ends:
        if anchor is None or x - anchor > tol * max(1.0, abs(anchor)):
            anchor = x
        anchors[x] = anchor

    def snap(x: float) -> float:
        if math.isfinite(x) and abs(x) <= tol:
            return 0.0
        return anchors.get(x, x)

    return [(snap(a), snap(b)) for a, b in gaps]


def return_time_set(
    frame: FrameSpec,
    packing: CirclePacking,
    t_max: float = T_MAX,
    resolution: float = 0.0,
) -> GapSet:
    """
    T ⊇ R(x) на окне [−t_max, t_max]: лакуны - образы дуг C внутри кругов
    упаковки при нормировке кадра.
    """
    if not t_max > 0:
        raise DomainError("t_max must be positive")
    window = (-t_max, t_max)
    g = normalization_map(frame)
    decomposition = arc_decomposition(frame.circle, packing)
    gaps: List[Interval] = []
    for arc in decomposition.arcs:
        if arc.length >= TWO_PI:
            gaps.append(window)
            continue
        ends = (decomposition.point_at(arc.start), decomposition.point_at(arc.end))
        inner = decomposition.point_at(arc.start + arc.length / 3)
        gaps += _arc_image(g, ends, inner)
    result = GapSet.from_gaps(_snap_endpoints(gaps), window, resolution=resolution)
    logger.info("Множество возвратов: %d лакун на окне ±%.3g", len(result.gaps), t_max)
    return result


def _overlaps(t_set: GapSet) -> List[Tuple[float, float]]:
    """Пересечения положительных лакун с отраженными отрицательными: (нижний, верхний) конец"""
    pos = t_set.positive_gaps()
    neg = t_set.mirrored().positive_gaps()
    result = []
    i = j = 0
    while i < len(pos) and j < len(neg):
        (a, b), (c, d) = pos[i], neg[j]
        lo, hi = max(a, c), min(b, d)
        if lo < hi:
            result.append((lo, hi))
        if b < d:
            i += 1
        else:
            j += 1
    return result


def _check_window(t_set: GapSet) -> None:
    lo, hi = t_set.window
    if abs(lo + hi) > 1e-9 * max(abs(lo), abs(hi)):
        raise DomainError("window must be symmetric about 0")


def is_witness(t_set: GapSet, t: float, K: float) -> bool:
    """Лежат ли [t, Kt] и [−Kt, −t] целиком в лакунах T"""
    if t <= 0 or t < t_set.resolution:
        return False
    starts = [a for a, _ in t_set.gaps]

    def inside(lo: float, hi: float) -> bool:
        k = bisect.bisect_left(starts, lo) - 1
        return k >= 0 and t_set.gaps[k][0] < lo and hi < t_set.gaps[k][1]

    return inside(t, K * t) and inside(-K * t, -t)


def k_thick_test(t_set: GapSet, K: float) -> ThicknessReport:
    """
    Точная проверка K-толщины в 0 на окне: ищется t ≥ resolution с
    T ∩ ([−Kt, −t] ∪ [t, Kt]) = ∅.
    """
    if not K > 1:
        raise DomainError("K must be greater than 1")
    _check_window(t_set)
    res = t_set.resolution
    best: Optional[Tuple[float, float, float]] = None
    for lo, hi in _overlaps(t_set):
        base = max(lo, res)
        if base * K < hi and (best is None or base < best[0]):
            best = (base, lo, hi)
    if best is None:
        return ThicknessReport(K=K, verdict=ThicknessVerdict.THICK, window=t_set.window)
    base, lo, hi = best
    mid = 0.5 * (base + hi / K)
    t = min(K * lo, mid) if lo > 0 else mid
    t = max(t, res)
    return ThicknessReport(K=K, verdict=ThicknessVerdict.NOT_THICK, witness=t, infimum=base, window=t_set.window)


def max_thickness(t_set: GapSet, k_cap: float = K_CAP) -> Optional[float]:
    """
    Порог K*: T K-толстое ровно при K ≥ K*. 1.0 - толстое при всех K,
    None - ни при каком K ≤ k_cap.
    """
    _check_window(t_set)
    threshold = 1.0
    for lo, hi in _overlaps(t_set):
        base = max(lo, t_set.resolution)
        if base <= 0:
            return None
        threshold = max(threshold, hi / base)
    return None if threshold > k_cap else threshold


def thickness_summary(t_set: GapSet, ks: Sequence[float], k_cap: float = K_CAP) -> ThicknessSummary:
    return ThicknessSummary(
        gap_count=len(t_set.gaps),
        window=t_set.window,
        threshold=max_thickness(t_set, k_cap),
        reports=[k_thick_test(t_set, K) for K in ks],
    )


@dataclass(frozen=True)
class StripCircle:
    """Окружность C_n через λ0 и λ0 + n·d в координатах полосы"""

    n: int
    circle: GeneralizedCircle
    start: complex
    end: complex


def _strip_setup(packing: CirclePacking, lambda0: complex, sigma: ExtendedComplex):
    l1, l2 = double_horocycle_at(sigma, packing)
    if not (l1.is_line and l2.is_line):
        raise DomainError("packing is not in strip coordinates at sigma")
    a_ = abs(l1.value(lambda0)) / 2.0
    if not a_ > 0:
        raise DomainError("lambda0 lies on L1")
    direction = 1j * l1.B / abs(l1.B)
    return l1, l2, a_, direction


def strip_circle(lambda0: complex, direction: complex, n: int) -> StripCircle:
    end = lambda0 + n * direction
    circle = GeneralizedCircle.from_center_radius(lambda0 + 0.5 * n * direction, 0.5 * n)
    return StripCircle(n, circle, lambda0, end)


def _angles_row(n: int, c: GeneralizedCircle, l1: GeneralizedCircle, l2: GeneralizedCircle, a_: float) -> AnglesRow:
    expected = 2.0 * a_ / n
    hit1, hit2 = intersect(c, l1), intersect(c, l2)
    if hit1.kind != IntersectionKind.CROSSING:
        return AnglesRow(n=n, expected_cos=expected, skipped=f"C_n {hit1.kind.value} with L1")
    if hit2.kind != IntersectionKind.CROSSING:
        return AnglesRow(n=n, expected_cos=expected, skipped=f"C_n {hit2.kind.value} with L2")
    u_, v_ = hit1.points
    w_, z_ = hit2.points
    theta = angle_between(c, l1)
    lower, upper = Geodesic.between(u_, v_), Geodesic.between(w_, z_)
    return AnglesRow(
        n=n,
        theta=theta,
        complement=math.pi / 2 - theta,
        cos_rho=math.cos(theta),
        expected_cos=expected,
        chord=abs(u_ - v_),
        apex_height=highest_point(lower).t,
        d_n=dist_geodesics(lower, upper),
    )


def angles_experiment(
    packing: CirclePacking,
    lambda0: complex = 1 + 0j,
    n_values: Sequence[int] = tuple(range(3, 201)),
    sigma: ExtendedComplex = INF,
    d_threshold: Optional[float] = None,
) -> AnglesTable:
    """
    Таблица θ_n, хорды |u_n − v_n|, высоты вершины и d_n для окружностей
    C_n, проходящих через λ0 и λ0 + n вдоль двойного орицикла в σ = ∞.

    d_threshold - верхняя граница последнего d_n в тренде "d_n -> 0";
    d_n убывает как 4/n, так что порог имеет смысл только на длинном ряду.
    """
    l1, l2, a_, direction = _strip_setup(packing, lambda0, sigma)
    circles = [strip_circle(lambda0, direction, n).circle for n in n_values]
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        rows = list(pool.map(lambda item: _angles_row(item[0], item[1], l1, l2, a_), zip(n_values, circles)))
    table = AnglesTable(lambda0=complex_to_json(lambda0), a=a_, rows=rows)
    done = [r for r in rows if r.skipped is None]
    if len(done) >= 2:
        thetas = [r.theta for r in done]
        table.trends = [
            TrendCheck(
                name="theta bounded below by 0.5",
                holds=min(thetas) >= 0.5,
                first_mean=thetas[0],
                last_mean=min(thetas),
                final=thetas[-1],
            ),
            assess_trend([r.complement for r in done], decreasing=True).to_check("rho -> pi/2"),
            assess_trend([r.chord for r in done], decreasing=False).to_check("chord -> infinity"),
            assess_trend([r.d_n for r in done], decreasing=True, threshold=d_threshold).to_check("d_n -> 0"),
            TrendCheck(
                name="d_n decreasing",
                holds=is_monotone([r.d_n for r in done], decreasing=True, strict=False),
                first_mean=done[0].d_n,
                last_mean=done[-1].d_n,
                final=done[-1].d_n,
            ),
        ]
    logger.info("Эксперимент с углами: %d строк, пропущено %d", len(rows), len(rows) - len(done))
    return table


def _check_quadruple(index: int, u_: float, v_: float, w_: float, z_: float, tol: float = 1e-12) -> None:
    scale = max(abs(u_), abs(v_), abs(w_), abs(z_), 1.0) * tol
    checks = [
        (v_ >= u_ - scale, "v >= u"),
        (u_ > 0, "u > 0"),
        (w_ < 0, "0 > w"),
        (w_ > z_, "w > z"),
        (abs(w_) >= u_ - scale, "|w| >= u"),
    ]
    for ok, name in checks:
        if not ok:
            raise DomainError(f"quadruple {index}: expected {name}")


def symmetrization_ratios(
    quadruples: Sequence[Tuple[float, float, float, float]],
    ks: Sequence[float] = (2.0, 10.0, 100.0),
    return_times: Optional[GapSet] = None,
) -> SymmetrizationReport:
    """
    Для четверок (u, v, w, z) с (z, w) ∪ (u, v) ⊂ лакун: отношение
    (v − w)/(u − w), окно t = |w| и наибольшее K = min(v, |z|)/|w|.
    Свидетель для K - первая четверка с k_max > K и t = √(|w| · min(v, |z|)/K),
    проверенный точно по лакунам.
    """
    rows: List[SymmetrizationRow] = []
    for index, (u_, v_, w_, z_) in enumerate(quadruples):
        _check_quadruple(index, u_, v_, w_, z_)
        rows.append(
            SymmetrizationRow(
                index=index,
                u=u_,
                v=v_,
                w=w_,
                z=z_,
                ratio=(v_ - w_) / (u_ - w_),
                window_t=abs(w_),
                k_max=min(v_, abs(z_)) / abs(w_),
                case=1 if abs(z_) >= v_ else 2,
            )
        )
    witnesses: List[SymmetrizationWitness] = []
    for K in ks:
        if not K > 1:
            raise DomainError("K must be greater than 1")
        found = SymmetrizationWitness(K=K)
        for row in rows:
            if row.k_max <= K:
                continue
            t = math.sqrt(row.window_t * min(row.v, abs(row.z)) / K)
            if return_times is not None:
                t_set = return_times
            else:
                bound = 2.0 * max(row.v, abs(row.z))
                t_set = GapSet.from_gaps([(row.z, row.w), (row.u, row.v)], (-bound, bound))
            found = SymmetrizationWitness(K=K, row=row.index, t=t, verified=is_witness(t_set, t, K))
            break
        witnesses.append(found)
    return SymmetrizationReport(rows=rows, witnesses=witnesses)


@dataclass(frozen=True)
class QuadrupleRecord:
    n: int
    frame: FrameSpec
    quadruple: Tuple[float, float, float, float]


def strip_quadruples(
    packing: CirclePacking,
    lambda0: complex = 1 + 0j,
    n_values: Sequence[int] = (4, 8, 16, 32),
    sigma: ExtendedComplex = INF,
) -> List[QuadrupleRecord]:
    """
    Четверки из дуг C_n внутри полуплоскостей за L1 и L2 для кадров
    x⁻ = λ0, x⁺ = λ0 + n, с отражением t ↦ −t там, где |w| < u.
    """
    l1, l2, _, direction = _strip_setup(packing, lambda0, sigma)
    records = []
    for n in n_values:
        sc = strip_circle(lambda0, direction, n)
        frame = FrameSpec(sc.circle, sc.start, sc.end)
        g = normalization_map(frame)
        arcs = []
        for line in (l1, l2):
            hit = intersect(sc.circle, line)
            if hit.kind != IntersectionKind.CROSSING:
                raise DomainError(f"C_{n} does not cross the double horocycle")
            p, q = hit.points
            # внутренняя точка дуги за прямой: Q растет вдоль B
            center, radius = sc.circle.center, sc.circle.radius
            far = center + (1.0 if line.value(center) < 0 else -1.0) * radius * line.B / abs(line.B)
            arcs += _arc_image(g, (p, q), far)
        pos = [gap for gap in arcs if gap[0] >= 0]
        neg = [gap for gap in arcs if gap[1] <= 0]
        if len(pos) != 1 or len(neg) != 1:
            raise DomainError(f"C_{n}: arcs beyond L1 and L2 do not separate 0")
        (u_, v_), (z_, w_) = pos[0], neg[0]
        if abs(w_) < u_:
            u_, v_, w_, z_ = -w_, -z_, -u_, -v_
        records.append(QuadrupleRecord(n, frame, (u_, v_, w_, z_)))
    return records


def cusp_excursion_probe(
    frame: FrameSpec,
    packing: CirclePacking,
    ball: GroupBall,
    sigma,
    times: Sequence[float],
    chart: Optional[HeightChart] = None,
    horoball_size: Optional[float] = None,
) -> ExcursionTrace:
    """
    Эвристика: вдоль луча r(t) = g⁻¹(0, e^t) к x⁻ - наибольшая высота
    γ·r(t) в карте точки касания σ по элементам шара.

    Рост: пики монотонно растут и последний в TREND_FACTOR раз больше
    первого. Ограниченность: пики второй половины не превышают бегущий
    максимум первой.
    """
    tangency = resolve_tangency(sigma, packing)
    chart = chart or HeightChart.at(tangency.point)
    back = inverse(normalization_map(frame))
    points: List[ExcursionPoint] = []
    running = 0.0
    for t in times:
        p = apply_halfspace(back, HyperbolicPoint(0j, math.exp(t)))
        heights = [height_of(apply_halfspace(e.map, p), chart) for e in ball.elements]
        k = max(range(len(heights)), key=heights.__getitem__)
        running = max(running, heights[k])
        points.append(
            ExcursionPoint(
                t=t,
                max_height=heights[k],
                word=list(ball.elements[k].word),
                running_max=running,
                in_horoball=None if horoball_size is None else heights[k] > horoball_size,
            )
        )
    peaks = [p.max_height for p in points]
    trend = ExcursionTrend.INCONCLUSIVE
    if len(peaks) >= 2:
        half = len(peaks) // 2
        if is_monotone(peaks, decreasing=False) and peaks[-1] >= TREND_FACTOR * peaks[0]:
            trend = ExcursionTrend.GROWING
        elif max(peaks[half:]) <= points[half - 1].running_max:
            trend = ExcursionTrend.BOUNDED
    logger.info("Экскурсии в касп %s: %s", tangency.point, trend.value)
    return ExcursionTrace(points=points, trend=trend)
