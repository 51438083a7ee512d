# src/packing/packing
"""
Упаковки окружностей: генерация орбиты затравочных кругов под действием
образующих, точки касания (параболические точки ранга 1), двойные
орициклы и полосные координаты.

Радиусы и расстояния берутся в сферической метрике, поэтому прямые и
большие окружности обрабатываются единообразно.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from src.core.config import ALGEBRAIC_TOL, EQUALITY_TOL, THREADS
from src.core.errors import DegenerateInputError, InvariantViolationError, NotATangencyError
from src.core.tolerance_index import ToleranceIndex
from src.geometry.circlespace import (
    Disk,
    GeneralizedCircle,
    IntersectionKind,
    apply_circle,
    apply_disk,
    circle_through,
    intersect,
    sphere_angles,
)
from src.geometry.moebius import (
    ExtendedComplex,
    MoebiusMap,
    chordal_distance,
    compose,
    from_sphere,
    to_infinity_coords,
)

logger = logging.getLogger(__name__)

Word = Tuple[int, ...]


@dataclass(frozen=True)
class TangencyPoint:
    """Точка касания двух кругов упаковки"""

    point: ExtendedComplex
    disks: Tuple[int, int]


@dataclass
class PackingSpec:
    """Затравочные круги, образующие, глубина и отсечка по сферическому радиусу"""

    seed: List[Disk]
    generators: List[MoebiusMap]
    depth: int = 3
    min_radius: float = 1e-3
    dual_circles: List[GeneralizedCircle] = field(default_factory=list)
    name: str = "custom"
    tol: float = ALGEBRAIC_TOL

    def __post_init__(self):
        if self.depth < 0:
            raise DegenerateInputError("depth must be non-negative")
        if not self.min_radius > 0:
            raise DegenerateInputError("min_radius must be positive")
        caps = [d.to_cap() for d in self.seed]
        for i, j in combinations(range(len(caps)), 2):
            gap = _cap_gap(caps[i].center, caps[i].radius, caps[j].center, caps[j].radius)
            if gap < -self.tol:
                raise InvariantViolationError(f"seed disks {i} and {j} overlap", ())

    @property
    def holomorphic(self) -> bool:
        """Лежит ли группа в голоморфной подгруппе индекса 2"""
        return not any(g.conj for g in self.generators)


def _cap_gap(c1: np.ndarray, r1: float, c2: np.ndarray, r2: float) -> float:
    return _sphere_dist(c1, c2) - r1 - r2


def _sphere_dist(x: np.ndarray, y: np.ndarray) -> float:
    return 2.0 * math.atan2(float(np.linalg.norm(x - y)), float(np.linalg.norm(x + y)))


@dataclass
class CirclePacking:
    """Конечное приближение упаковки: круги Ω, слова, точки касания"""

    spec: PackingSpec
    disks: List[Disk]
    words: List[Word]
    seeds: List[int]
    tangencies: List[TangencyPoint] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.spec.depth

    @cached_property
    def cap_centers(self) -> np.ndarray:
        if not self.disks:
            return np.zeros((0, 3))
        return np.array([d.to_cap().center for d in self.disks])

    @cached_property
    def cap_radii(self) -> np.ndarray:
        return np.array([d.to_cap().radius for d in self.disks])

    def truncated(self, depth: int) -> "CirclePacking":
        """Подупаковка из кругов со словами длины ≤ depth"""
        keep = [i for i, w in enumerate(self.words) if len(w) <= depth]
        remap = {old: new for new, old in enumerate(keep)}
        tangencies = [
            TangencyPoint(t.point, (remap[t.disks[0]], remap[t.disks[1]]))
            for t in self.tangencies
            if t.disks[0] in remap and t.disks[1] in remap
        ]
        spec = PackingSpec(
            seed=self.spec.seed,
            generators=self.spec.generators,
            depth=depth,
            min_radius=self.spec.min_radius,
            dual_circles=self.spec.dual_circles,
            name=self.spec.name,
            tol=self.spec.tol,
        )
        return CirclePacking(
            spec=spec,
            disks=[self.disks[i] for i in keep],
            words=[self.words[i] for i in keep],
            seeds=[self.seeds[i] for i in keep],
            tangencies=tangencies,
        )

    def find_tangency(self, point: ExtendedComplex, tol: float = 1e-7) -> Optional[TangencyPoint]:
        for t in self.tangencies:
            if chordal_distance(t.point, point) <= tol:
                return t
        return None


def descartes_solve(k1: float, k2: float, k3: float) -> Tuple[float, float]:
    """Обе кривизны четвертой окружности, касающейся трех данных"""
    radicand = k1 * k2 + k2 * k3 + k3 * k1
    if radicand < -1e-12:
        raise DegenerateInputError("non-tangent configuration")
    root = 2.0 * math.sqrt(max(0.0, radicand))
    s = k1 + k2 + k3
    return s + root, s - root


def descartes_residual(curvatures: Sequence[float]) -> float:
    """Относительная невязка тождества (Σk)² = 2Σk²"""
    ks = np.asarray(curvatures, dtype=float)
    squares = float(np.sum(ks ** 2))
    return abs(float(np.sum(ks)) ** 2 - 2.0 * squares) / max(1.0, squares)


def inversion_in_circle(circle: GeneralizedCircle) -> MoebiusMap:
    """Антиголоморфная инволюция, неподвижная на окружности"""
    return MoebiusMap.from_matrix(
        [[-circle.B, -circle.C], [circle.A, circle.B.conjugate()]], conj=True
    )


def _first_overlap(center: np.ndarray, radius: float, centers: np.ndarray, radii: np.ndarray, tol: float) -> int:
    if len(radii) == 0:
        return -1
    gaps = sphere_angles(center, centers) - radii - radius
    bad = np.nonzero(gaps < -tol)[0]
    return int(bad[0]) if len(bad) else -1


def generate_packing(spec: PackingSpec) -> CirclePacking:
    """
    Обход в ширину: образующие применяются к фронтиру предыдущего уровня,
    круги меньше min_radius отбрасываются, дубликаты сливаются по ключу с
    допуском, при равенстве побеждает наименьшее в shortlex порядке слово.
    """
    index: ToleranceIndex[int] = ToleranceIndex(dim=4, tol=EQUALITY_TOL)
    disks: List[Disk] = []
    words: List[Word] = []
    seeds: List[int] = []
    centers: List[np.ndarray] = []
    radii: List[float] = []

    for i, disk in enumerate(spec.seed):
        _, added = index.add(disk.key(), i)
        if not added:
            raise InvariantViolationError(f"seed disk {i} duplicates an earlier seed", ())
        cap = disk.to_cap()
        disks.append(disk)
        words.append(())
        seeds.append(i)
        centers.append(cap.center)
        radii.append(cap.radius)

    frontier = list(range(len(disks)))
    gens = spec.generators
    with ThreadPoolExecutor(max_workers=THREADS) as pool:
        for level in range(1, spec.depth + 1):
            tasks = [(parent, g) for parent in frontier for g in range(len(gens))]
            images = list(pool.map(lambda task: apply_disk(gens[task[1]], disks[task[0]]), tasks))
            candidates = sorted(
                (((g,) + words[parent], seeds[parent], image) for (parent, g), image in zip(tasks, images)),
                key=lambda item: (len(item[0]), item[0], item[1]),
            )
            frontier = []
            known_centers = np.array(centers)
            known_radii = np.array(radii)
            level_start = len(disks)
            for word, seed, image in candidates:
                cap = image.to_cap()
                if cap.radius < spec.min_radius:
                    continue
                if index.find(image.key()) is not None:
                    continue
                clash = _first_overlap(cap.center, cap.radius, known_centers, known_radii, spec.tol)
                if clash < 0 and len(disks) > level_start:
                    clash = _first_overlap(
                        cap.center, cap.radius,
                        np.array(centers[level_start:]), np.array(radii[level_start:]), spec.tol,
                    )
                    if clash >= 0:
                        clash += level_start
                if clash >= 0:
                    raise InvariantViolationError(
                        f"generated disk overlaps disk {clash} (word {list(words[clash])})", word
                    )
                index.add(image.key(), len(disks))
                frontier.append(len(disks))
                disks.append(image)
                words.append(word)
                seeds.append(seed)
                centers.append(cap.center)
                radii.append(cap.radius)
            logger.info("Уровень %d: добавлено %d кругов, всего %d", level, len(frontier), len(disks))
            if not frontier:
                break

    packing = CirclePacking(spec=spec, disks=disks, words=words, seeds=seeds)
    packing.tangencies = tangency_points(packing)
    return packing


def tangency_points(packing: CirclePacking, tol: Optional[float] = None) -> List[TangencyPoint]:
    """Все попарные касания; точка лежит на дуге большого круга между центрами шапок"""
    tol = packing.spec.tol if tol is None else tol
    centers, radii = packing.cap_centers, packing.cap_radii
    result: List[TangencyPoint] = []
    for i in range(len(radii) - 1):
        rest = centers[i + 1:]
        gaps = sphere_angles(centers[i], rest) - radii[i + 1:] - radii[i]
        for off in np.nonzero(np.abs(gaps) <= tol)[0]:
            j = i + 1 + int(off)
            eta, other = centers[i], centers[j]
            direction = other - float(eta @ other) * eta
            direction /= np.linalg.norm(direction)
            x = math.cos(radii[i]) * eta + math.sin(radii[i]) * direction
            result.append(TangencyPoint(from_sphere(x), (i, j)))
    return result


def packing_violations(packing: CirclePacking, tol: Optional[float] = None) -> List[Tuple[int, int, float]]:
    """Пары пересекающихся кругов (i, j, перекрытие); пустой список для корректной упаковки"""
    tol = packing.spec.tol if tol is None else tol
    centers, radii = packing.cap_centers, packing.cap_radii
    bad = []
    for i in range(len(radii) - 1):
        gaps = sphere_angles(centers[i], centers[i + 1:]) - radii[i + 1:] - radii[i]
        for off in np.nonzero(gaps < -tol)[0]:
            bad.append((i, i + 1 + int(off), float(-gaps[off])))
    return bad


def descartes_quadruples(packing: CirclePacking) -> List[Tuple[Tuple[int, int, int, int], float]]:
    """Четверки попарно касающихся кругов и их невязки тождества Декарта"""
    neighbours: Dict[int, Set[int]] = {}
    for t in packing.tangencies:
        i, j = t.disks
        neighbours.setdefault(i, set()).add(j)
        neighbours.setdefault(j, set()).add(i)
    result = []
    for i in sorted(neighbours):
        for j in sorted(n for n in neighbours[i] if n > i):
            common = neighbours[i] & neighbours[j]
            for k in sorted(n for n in common if n > j):
                for m in sorted(n for n in common & neighbours[k] if n > k):
                    quad = (i, j, k, m)
                    ks = [packing.disks[q].curvature for q in quad]
                    result.append((quad, descartes_residual(ks)))
    return result


def dual_circles(quadruple: Sequence[Disk], tol: float = ALGEBRAIC_TOL) -> List[GeneralizedCircle]:
    """Для четверки попарно касающихся кругов: i-я окружность проходит через точки касания трех кругов, кроме i-го"""
    if len(quadruple) != 4:
        raise DegenerateInputError(f"dual circles need 4 disks, got {len(quadruple)}")
    points: Dict[Tuple[int, int], ExtendedComplex] = {}
    for i, j in combinations(range(4), 2):
        hit = intersect(quadruple[i].circle, quadruple[j].circle, tol)
        if hit.kind != IntersectionKind.TANGENT:
            raise DegenerateInputError(f"non-tangent configuration: disks {i} and {j} are {hit.kind.value}")
        points[(i, j)] = hit.points[0]
    return [circle_through(*(p for pair, p in points.items() if k not in pair)) for k in range(4)]


def resolve_tangency(sigma, packing: CirclePacking) -> TangencyPoint:
    point = sigma.point if isinstance(sigma, TangencyPoint) else sigma
    found = packing.find_tangency(point)
    if found is None:
        raise NotATangencyError(f"point {point} is not a tangency of the packing")
    return found


def double_horocycle_at(sigma, packing: CirclePacking) -> Tuple[GeneralizedCircle, GeneralizedCircle]:
    """Две граничные окружности кругов Ω, касающихся в σ"""
    tangency = resolve_tangency(sigma, packing)
    l1 = packing.disks[tangency.disks[0]].circle
    l2 = packing.disks[tangency.disks[1]].circle
    if intersect(l1, l2).kind != IntersectionKind.TANGENT:
        raise NotATangencyError("bounding circles of the tangency are not tangent")
    return l1, l2


def strip_coords_at(sigma, packing: CirclePacking) -> MoebiusMap:
    """Карта σ → ∞, переводящая двойной орицикл в прямые Im z = 0 (L1) и Im z = 1 (L2)"""
    tangency = resolve_tangency(sigma, packing)
    l1, l2 = double_horocycle_at(tangency, packing)
    g = to_infinity_coords(tangency.point)
    m1, m2 = apply_circle(g, l1), apply_circle(g, l2)
    b1, c1 = m1.B, m1.C
    b2, c2 = (m2.B, m2.C) if (m2.B * b1.conjugate()).real > 0 else (-m2.B, -m2.C)
    level1, level2 = -c1 / 2.0, -c2 / 2.0
    # w = iB̄z переводит прямые Re(B̄z) = level в Im w = level
    h = MoebiusMap.from_matrix([[1j * b1.conjugate(), -1j * level1], [0, level2 - level1]])
    return compose(h, g)
