# src/dynamics/gapset
"""
Замкнутое множество T на прямой (или на окружности в угловом параметре),
заданное своими дополнительными открытыми интервалами внутри окна.
"""
import bisect
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, List, Tuple

from src.core.errors import DomainError

Interval = Tuple[float, float]


class Ambient(str, Enum):
    REAL_LINE = "real-line"
    CIRCLE = "circle-parameter"


@dataclass(frozen=True)
class GapSet:
    """
    T = window \\ ⋃ gaps.

    Лакуны отсортированы, попарно не пересекаются, непусты и лежат в окне;
    соседние лакуны могут иметь общий конец - тогда он изолированная точка T.
    resolution - наименьшее |t|, для которого T известно (0 - известно всюду).
    """

    window: Interval
    gaps: Tuple[Interval, ...] = ()
    ambient: Ambient = Ambient.REAL_LINE
    resolution: float = 0.0

    def __post_init__(self):
        lo, hi = self.window
        if not lo < hi:
            raise DomainError("gap set window must be a nonempty interval")
        if self.resolution < 0:
            raise DomainError("resolution must be non-negative")
        prev_end = lo
        for a, b in self.gaps:
            if not a < b:
                raise DomainError(f"empty gap ({a}, {b})")
            if a < prev_end or b > hi:
                raise DomainError(f"gap ({a}, {b}) overlaps its neighbour or leaves the window")
            prev_end = b

    @classmethod
    def from_gaps(
        cls,
        gaps: Iterable[Interval],
        window: Interval,
        ambient: Ambient = Ambient.REAL_LINE,
        resolution: float = 0.0,
    ) -> "GapSet":
        """Обрезать по окну, отсортировать и слить перекрывающиеся лакуны"""
        lo, hi = window
        clipped = sorted((max(a, lo), min(b, hi)) for a, b in gaps)
        merged: List[List[float]] = []
        for a, b in clipped:
            if not a < b:
                continue
            if merged and a < merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], b)
            else:
                merged.append([a, b])
        return cls((lo, hi), tuple((a, b) for a, b in merged), ambient, resolution)

    @classmethod
    def from_points(cls, points: Iterable[float], window: Interval, resolution: float = 0.0) -> "GapSet":
        """T - конечное множество точек в окне"""
        lo, hi = window
        inside = sorted({p for p in points if lo <= p <= hi})
        edges = [lo] + inside + [hi]
        return cls.from_gaps(zip(edges, edges[1:]), window, resolution=resolution)

    @property
    def length(self) -> float:
        return self.window[1] - self.window[0]

    def measure(self) -> float:
        """Мера T внутри окна"""
        return max(0.0, self.length - sum(b - a for a, b in self.gaps))

    def contains(self, t: float) -> bool:
        lo, hi = self.window
        if not lo <= t <= hi:
            return False
        starts = [a for a, _ in self.gaps]
        k = bisect.bisect_right(starts, t) - 1
        return not (k >= 0 and self.gaps[k][0] < t < self.gaps[k][1])

    def components(self) -> List[Interval]:
        """
        Компоненты связности T (возможно вырожденные отрезки).

        На прямой края окна открыты: точка края, к которой примыкает лакуна,
        не считается точкой T. На окружности 0 и 2π отождествляются, и
        компонента через 0 записывается отрезком с правым концом больше 2π.
        """
        lo, hi = self.window
        if self.ambient == Ambient.CIRCLE and self.gaps and self.gaps[0][1] - self.gaps[0][0] >= self.length:
            return []
        result: List[Interval] = []
        cursor = lo
        for a, b in self.gaps:
            if a >= cursor:
                result.append((cursor, a))
            cursor = b
        if cursor <= hi:
            result.append((cursor, hi))
        if self.ambient == Ambient.REAL_LINE:
            return [(a, b) for a, b in result if not (a == b and a in (lo, hi))]
        if len(result) > 1 and result[0][0] == lo and result[-1][1] == hi:
            result = result[1:-1] + [(result[-1][0], result[0][1] + self.length)]
        return result

    def is_empty(self) -> bool:
        return not self.components()

    def intersection(self, other: "GapSet") -> "GapSet":
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        return GapSet.from_gaps(
            list(self.gaps) + list(other.gaps), (lo, hi), self.ambient, max(self.resolution, other.resolution)
        )

    def union(self, other: "GapSet") -> "GapSet":
        """Объединение на общем окне: лакуны - пересечения лакун"""
        lo = max(self.window[0], other.window[0])
        hi = min(self.window[1], other.window[1])
        common = []
        for a, b in self.gaps:
            for c, d in other.gaps:
                if max(a, c) < min(b, d):
                    common.append((max(a, c), min(b, d)))
        return GapSet.from_gaps(common, (lo, hi), self.ambient, max(self.resolution, other.resolution))

    def complement(self) -> "GapSet":
        """Замыкание дополнения: лакуны - внутренности невырожденных компонент T"""
        lo, hi = self.window
        interiors: List[Interval] = []
        for a, b in self.components():
            if b <= a:
                continue
            if b > hi:
                interiors += [(a, hi), (lo, b - self.length)]
            else:
                interiors.append((a, b))
        return GapSet.from_gaps(interiors, self.window, self.ambient, self.resolution)

    def mirrored(self) -> "GapSet":
        """Образ при t ↦ −t"""
        lo, hi = self.window
        return GapSet.from_gaps([(-b, -a) for a, b in self.gaps], (-hi, -lo), self.ambient, self.resolution)

    def restricted(self, window: Interval) -> "GapSet":
        return GapSet.from_gaps(self.gaps, window, self.ambient, self.resolution)

    def with_resolution(self, resolution: float) -> "GapSet":
        return replace(self, resolution=resolution)

    def positive_gaps(self) -> List[Interval]:
        """Лакуны на (0, +∞), обрезанные по нулю"""
        return [(max(a, 0.0), b) for a, b in self.gaps if b > 0]

    def straddles_zero(self) -> bool:
        return any(a < 0 < b for a, b in self.gaps)


def geometric_points(base: float, window: Interval, symmetric: bool = True, decades_below: int = 40) -> List[float]:
    """Точки ±base^n в окне, от base^(−n_max − decades_below) до края окна"""
    lo, hi = window
    bound = max(abs(lo), abs(hi))
    n_max = int(math.floor(math.log(bound) / math.log(base)))
    points = [base ** n for n in range(-n_max - decades_below, n_max + 1)]
    if symmetric:
        points += [-p for p in points]
    return [p for p in points if lo <= p <= hi]
