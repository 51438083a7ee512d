# src/dynamics/orbits
"""
Орбиты окружностей под действием конечных шаров группы: перечисление
шара, дискретность орбиты, стабилизаторы, поиск жестких окружностей B_k,
детектор накопления и рациональность наклона в параболической точке.

Все выводы здесь относятся к конечному шару слов длины ≤ L и
сопровождаются оговоркой об усечении.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.config import ALGEBRAIC_TOL, BALL_BUDGET, EQUALITY_TOL, GEOMETRIC_TOL, RATIONAL_BOUND, THREADS
from src.core.errors import BudgetExceededError, DegenerateInputError, DomainError
from src.core.tolerance_index import ToleranceIndex
from src.dynamics.trends import is_monotone
from src.geometry.circlespace import (
    GeneralizedCircle,
    annulus_contains,
    apply_circle,
    covering_phi,
    sphere_angles,
    to_spherical,
)
from src.geometry.halfspace import hull_meets_ball
from src.geometry.moebius import (
    ExtendedComplex,
    HyperbolicPoint,
    MoebiusMap,
    compose,
    identity,
    inverse,
    to_infinity_coords,
)
from src.packing.arcs import IntersectionClass, limit_arcset
from src.packing.packing import CirclePacking, Word
from src.schemas.encoding import complex_to_json, points_to_json
from src.schemas.report_schemas import (
    AccumulationReport,
    AccumulationVerdict,
    BkCandidateReport,
    BkScanReport,
    DiscretenessReport,
    DiscretenessTrendReport,
    OrbitVerdict,
    ParabolicOrbitReport,
    PerturbationReport,
    SlopeReport,
    SlopeVerdict,
)

logger = logging.getLogger(__name__)

# допуск совпадения элементов шара по матрице
_MAP_TOL = 1e-8


@dataclass(frozen=True)
class BallElement:
    word: Word
    map: MoebiusMap


@dataclass
class GroupBall:
    """
    Элементы группы со словами длины ≤ max_length, без повторов.

    Буквы - индексы расширенного списка образующих: инволюции входят один
    раз, остальные образующие сопровождаются обратными.
    """

    letters: List[MoebiusMap]
    inverse_of: List[int]
    max_length: int
    elements: List[BallElement] = field(default_factory=list)
    _indexes: Dict[bool, ToleranceIndex] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def _index(self, conj: bool) -> ToleranceIndex:
        if conj not in self._indexes:
            self._indexes[conj] = ToleranceIndex(dim=8, tol=_MAP_TOL, symmetric=True)
        return self._indexes[conj]

    def find(self, g: MoebiusMap) -> Optional[int]:
        """Номер элемента шара, совпадающего с g, или None"""
        idx = self._index(g.conj).find(g.key())
        return None if idx is None else self._index(g.conj).items[idx]

    def _add(self, element: BallElement) -> bool:
        _, added = self._index(element.map.conj).add(element.map.key(), len(self.elements))
        if added:
            self.elements.append(element)
        return added

    def restricted(self, length: int) -> List[BallElement]:
        return [e for e in self.elements if len(e.word) <= length]


def enumerate_group(
    generators: Sequence[MoebiusMap],
    max_length: int,
    budget: int = BALL_BUDGET,
) -> GroupBall:
    """
    Перечисление приведенных слов в shortlex порядке с отбрасыванием
    элементов, уже встречавшихся (с точностью до ±матрицы).
    """
    if max_length < 0:
        raise DomainError("word length must be non-negative")
    if not generators:
        raise DegenerateInputError("at least one generator required")
    letters: List[MoebiusMap] = []
    inverse_of: List[int] = []
    for g in generators:
        k = len(letters)
        letters.append(g)
        if compose(g, g).is_identity(_MAP_TOL):
            inverse_of.append(k)
        else:
            letters.append(inverse(g))
            inverse_of += [k + 1, k]

    ball = GroupBall(letters=letters, inverse_of=inverse_of, max_length=max_length)
    ball._add(BallElement((), identity()))
    frontier = [ball.elements[0]]
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        for length in range(1, max_length + 1):
            tasks = [
                (parent, j)
                for parent in frontier
                for j in range(len(letters))
                if not parent.word or inverse_of[parent.word[-1]] != j
            ]
            maps = list(pool.map(lambda task: compose(task[0].map, letters[task[1]]), tasks))
            frontier = []
            for (parent, j), g in zip(tasks, maps):
                element = BallElement(parent.word + (j,), g)
                if ball._add(element):
                    frontier.append(element)
                    if len(ball) > budget:
                        raise BudgetExceededError(f"ball too large: more than {budget} elements at length {length}")
            logger.info("Длина %d: новых элементов %d, всего %d", length, len(frontier), len(ball))
            if not frontier:
                break
    return ball


@dataclass(frozen=True)
class OrbitEntry:
    word: Word
    circle: GeneralizedCircle


@dataclass
class OrbitRecord:
    base: GeneralizedCircle
    max_length: int
    entries: List[OrbitEntry]

    @property
    def circles(self) -> List[GeneralizedCircle]:
        return [e.circle for e in self.entries]

    def restricted(self, length: int) -> "OrbitRecord":
        return OrbitRecord(self.base, length, [e for e in self.entries if len(e.word) <= length])


def orbit_of_circle(circle: GeneralizedCircle, ball: GroupBall) -> OrbitRecord:
    """Образы окружности элементами шара; у совпадающих образов остается наименьшее слово"""
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        images = list(pool.map(lambda e: apply_circle(e.map, circle), ball.elements))
    index: ToleranceIndex[OrbitEntry] = ToleranceIndex(dim=4, tol=EQUALITY_TOL, symmetric=True)
    for element, image in zip(ball.elements, images):
        index.add(image.key(), OrbitEntry(element.word, image))
    logger.info("Орбита окружности: %d различных образов из %d", len(index), len(ball))
    return OrbitRecord(circle, ball.max_length, list(index.items))


def _spherical_arrays(circles: Sequence[GeneralizedCircle]) -> Tuple[np.ndarray, np.ndarray]:
    caps = [to_spherical(c) for c in circles]
    return np.array([c.center for c in caps]), np.array([c.radius for c in caps])


def _min_pairwise_gap(circles: Sequence[GeneralizedCircle]) -> Tuple[Optional[float], Optional[Tuple[int, int]]]:
    """Минимум расстояния d(C, C') по парам; None для менее чем двух окружностей"""
    if len(circles) < 2:
        return None, None
    centers, radii = _spherical_arrays(circles)
    best, pair = math.inf, None
    for i in range(len(circles) - 1):
        angles = sphere_angles(centers[i], centers[i + 1:])
        rest = radii[i + 1:]
        direct = angles + np.abs(radii[i] - rest)
        flipped = (math.pi - angles) + np.abs(math.pi - radii[i] - rest)
        dists = np.minimum(direct, flipped)
        j = int(np.argmin(dists))
        if dists[j] < best:
            best, pair = float(dists[j]), (i, i + 1 + j)
    return best, pair


def discreteness_report(orbit: OrbitRecord, center: HyperbolicPoint, radius: float) -> DiscretenessReport:
    """Минимальный попарный зазор среди окружностей орбиты, чьи оболочки пересекают шар"""
    inside = [e for e in orbit.entries if hull_meets_ball(e.circle, center, radius)]
    gap, pair = _min_pairwise_gap([e.circle for e in inside])
    verdict = OrbitVerdict.LOOKS_DISCRETE if gap is None or gap > GEOMETRIC_TOL else OrbitVerdict.ACCUMULATING
    return DiscretenessReport(
        max_length=orbit.max_length,
        center=complex_to_json(center.z),
        center_height=center.t,
        radius=radius,
        orbit_size=len(orbit.entries),
        circles_in_ball=len(inside),
        min_gap=gap,
        closest_pair=None if pair is None else (list(inside[pair[0]].word), list(inside[pair[1]].word)),
        verdict=verdict,
        caveat=f"truncated at L={orbit.max_length}",
    )


def discreteness_trend(
    circle: GeneralizedCircle,
    generators: Sequence[MoebiusMap],
    lengths: Sequence[int],
    center: HyperbolicPoint,
    radius: float,
    stable_ratio: float = 0.9,
) -> DiscretenessTrendReport:
    """
    Зазоры по возрастающим длинам слов: строго убывающий зазор - накопление,
    зазор, изменившийся на последнем шаге не более чем на 10%, - дискретность.
    """
    lengths = sorted(set(lengths))
    if len(lengths) < 2:
        raise DegenerateInputError("trend needs at least two word lengths")
    orbit = orbit_of_circle(circle, enumerate_group(generators, lengths[-1]))
    reports = [discreteness_report(orbit.restricted(length), center, radius) for length in lengths]
    gaps = [r.min_gap for r in reports]
    finite = [math.inf if g is None else g for g in gaps]
    if all(g == math.inf for g in finite):
        verdict = OrbitVerdict.LOOKS_DISCRETE
    elif finite[0] < math.inf and is_monotone(finite, decreasing=True) and finite[-1] < stable_ratio * finite[0]:
        verdict = OrbitVerdict.ACCUMULATING
    elif finite[-1] >= stable_ratio * finite[-2]:
        verdict = OrbitVerdict.LOOKS_DISCRETE
    else:
        verdict = OrbitVerdict.INCONCLUSIVE
    return DiscretenessTrendReport(lengths=lengths, gaps=gaps, verdict=verdict, reports=reports)


def stabilizer_search(circle: GeneralizedCircle, ball: GroupBall, tol: float = EQUALITY_TOL) -> List[BallElement]:
    return [e for e in ball.elements if apply_circle(e.map, circle).is_close(circle, tol)]


def stabilizer_closure_violations(found: Sequence[BallElement], ball: GroupBall) -> List[Tuple[Word, Word]]:
    """Пары (g, h) из найденного множества, для которых g∘h или g⁻¹ лежит в шаре, но не найден"""
    members = {ball.find(e.map) for e in found}
    bad = []
    for g in found:
        inv = ball.find(inverse(g.map))
        if inv is not None and inv not in members:
            bad.append((g.word, ()))
        for h in found:
            prod = ball.find(compose(g.map, h.map))
            if prod is not None and prod not in members:
                bad.append((g.word, h.word))
    return bad


def _perturbations(circle: GeneralizedCircle, eps: float, samples: int, rng: np.random.Generator):
    """Окружности φ(x, d) с |x − ξ| ∈ [ε/8, ε/2) и |d − r| ∈ [ε/8, ε/2): внутри ε-кольца и не ближе ε/4 к C"""
    cap = to_spherical(circle)
    xi, r = cap.center, cap.radius
    for _ in range(samples):
        tangent = rng.normal(size=3)
        tangent -= float(tangent @ xi) * xi
        tangent /= np.linalg.norm(tangent)
        alpha = rng.uniform(eps / 8, eps / 2)
        shift = rng.uniform(eps / 8, eps / 2) * rng.choice((-1.0, 1.0))
        x = math.cos(alpha) * xi + math.sin(alpha) * tangent
        yield covering_phi(x, r + shift)


def _perturbation_check(
    circle: GeneralizedCircle,
    k: int,
    packing: CirclePacking,
    eps: float,
    samples: int,
    refine: int,
    rng: np.random.Generator,
) -> PerturbationReport:
    sampled = inside = violations = 0
    for d in _perturbations(circle, eps, samples, rng):
        sampled += 1
        inside += annulus_contains(d, circle, eps)
        las = limit_arcset(d, packing, refine)
        finite = las.intersection_class() in (IntersectionClass.ONE_POINT, IntersectionClass.FINITE)
        if finite and len(las.components) == k:
            violations += 1
    return PerturbationReport(
        eps=eps, sampled=sampled, inside_annulus=inside, violations=violations, passed=violations == 0
    )


def _orbit_classes(members: List[Tuple[int, GeneralizedCircle]], ball: GroupBall) -> List[List[int]]:
    parent = {i: i for i, _ in members}

    def root(i: int) -> int:
        while parent[i] != i:
            i = parent[i]
        return i

    for x, (i, ci) in enumerate(members):
        images = [apply_circle(e.map, ci) for e in ball.elements]
        for j, cj in members[x + 1:]:
            if any(img.is_close(cj) for img in images):
                parent[root(j)] = root(i)
    classes: Dict[int, List[int]] = {}
    for i, _ in members:
        classes.setdefault(root(i), []).append(i)
    return sorted(classes.values())


def bk_scan(
    packing: CirclePacking,
    k: int,
    candidates: Sequence[GeneralizedCircle],
    eps: float = 1e-3,
    samples: int = 16,
    ball: Optional[GroupBall] = None,
    refine: int = 2,
    seed: int = 0,
) -> BkScanReport:
    """
    Кандидаты с ровно k точками пересечения с Λ на глубине; для них
    проверяется, что ни одна возмущенная окружность из ε-кольца не имеет
    тех же k точек.
    """
    if k < 3:
        raise DomainError("B_k is defined for k >= 3")
    rng = np.random.default_rng(seed)
    reports: List[BkCandidateReport] = []
    members: List[Tuple[int, GeneralizedCircle]] = []
    for idx, circle in enumerate(candidates):
        las = limit_arcset(circle, packing, refine)
        kind = las.intersection_class()
        count = len(las.components)
        report = BkCandidateReport(
            index=idx,
            intersection_class=kind.value,
            points=len(las.points),
            parabolic_points=points_to_json(las.parabolic_points),
            member=False,
        )
        if kind not in (IntersectionClass.ONE_POINT, IntersectionClass.FINITE):
            report.reason = f"intersection class {kind.value}"
        elif count != k:
            report.reason = f"meets the limit set in {count} points, expected {k}"
        else:
            report.perturbation = _perturbation_check(circle, k, packing, eps, samples, refine, rng)
            report.member = report.perturbation.passed
            if not report.member:
                report.reason = "a perturbed circle has the same intersection count"
        if report.member:
            members.append((idx, circle))
        reports.append(report)
    classes = _orbit_classes(members, ball) if ball is not None else [[i] for i, _ in members]
    logger.info("B_%d: %d из %d кандидатов, классов %d", k, len(members), len(candidates), len(classes))
    return BkScanReport(k=k, depth=packing.depth, candidates=reports, orbit_classes=classes)


def accumulation_detector(
    orbit: OrbitRecord,
    packing: CirclePacking,
    tol: float = GEOMETRIC_TOL,
    refine: int = 2,
) -> AccumulationReport:
    """
    Ищет в орбите окружность, почти внутренне касающуюся границы круга
    упаковки (орицикл). При |C ∩ Λ| ≥ 2 такой свидетель означает плотность
    орбиты в пространстве окружностей, пересекающих Λ.
    """
    base = limit_arcset(orbit.base, packing, refine)
    bound = base.count_lower_bound()
    common = dict(base_count_lower_bound=bound, depth=packing.depth, max_length=orbit.max_length)
    if bound < 2:
        return AccumulationReport(verdict=AccumulationVerdict.HYPOTHESIS_UNMET, **common)

    centers, radii = packing.cap_centers, packing.cap_radii
    for entry in orbit.entries:
        cap = to_spherical(entry.circle)
        for xi, s in ((cap.center, cap.radius), (-cap.center, math.pi - cap.radius)):
            d = sphere_angles(xi, centers)
            same = (d <= tol) & (np.abs(s - radii) <= tol)
            defect = d + s - radii
            hits = np.nonzero((np.abs(defect) <= tol) & ~same)[0]
            if len(hits):
                j = int(hits[np.argmin(np.abs(defect[hits]))])
                logger.info("Свидетель накопления: слово %s, круг %d", list(entry.word), j)
                return AccumulationReport(
                    verdict=AccumulationVerdict.DENSE_PREDICTED,
                    witness_word=list(entry.word),
                    witness_disk=j,
                    tangency_defect=float(defect[j]),
                    note="orbit limits onto a horocycle; dense in the space of circles meeting the limit set",
                    **common,
                )
    return AccumulationReport(verdict=AccumulationVerdict.NO_WITNESS, **common)


def rational_slope_test(
    sigma: ExtendedComplex,
    basis: Tuple[complex, complex],
    circle: GeneralizedCircle,
    bound: int = RATIONAL_BOUND,
    tol: float = ALGEBRAIC_TOL,
) -> SlopeReport:
    """Наклон прямой g(C) в решетке (u, v) стабилизатора σ: рационален ли b/a"""
    u_, v_ = complex(basis[0]), complex(basis[1])
    if abs((u_.conjugate() * v_).imag) <= 1e-12 * abs(u_) * abs(v_):
        raise DegenerateInputError("basis degenerate")
    line = apply_circle(to_infinity_coords(sigma), circle)
    if not line.is_line:
        return SlopeReport(verdict=SlopeVerdict.NOT_THROUGH_SIGMA)
    w = 1j * line.B
    a_, b_ = np.linalg.solve(np.array([[u_.real, v_.real], [u_.imag, v_.imag]]), np.array([w.real, w.imag]))
    if abs(a_) <= tol * abs(b_):
        return SlopeReport(verdict=SlopeVerdict.RATIONAL, p=1, q=0, orbit_verdict="closed (rational)")
    slope = float(b_ / a_)
    frac = Fraction(slope).limit_denominator(bound)
    if abs(frac.denominator * slope - frac.numerator) <= tol:
        return SlopeReport(
            verdict=SlopeVerdict.RATIONAL,
            slope=slope,
            p=frac.numerator,
            q=frac.denominator,
            orbit_verdict="closed (rational)",
        )
    return SlopeReport(
        verdict=SlopeVerdict.IRRATIONAL, slope=slope, orbit_verdict="dense predicted (no small rational)"
    )


def parabolic_orbit_report(
    circle: GeneralizedCircle,
    translation: MoebiusMap,
    max_length: int,
) -> ParabolicOrbitReport:
    """Орбита окружности под циклической параболической подгруппой ранга 1"""
    orbit = orbit_of_circle(circle, enumerate_group([translation], max_length))
    gap, _ = _min_pairwise_gap(orbit.circles)
    invariant = len(orbit.entries) == 1
    verdict = "closed: invariant circle" if invariant else "closed: discrete family under a rank-1 parabolic"
    return ParabolicOrbitReport(orbit_size=len(orbit.entries), invariant=invariant, min_gap=gap, verdict=verdict)
