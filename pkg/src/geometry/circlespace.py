# src/geometry/circlespace
"""
Пространство окружностей на граничной сфере.

Обобщенная окружность хранится эрмитовой формой
Q(z) = A|z|² + 2Re(B̄z) + C, нормированной условием |B|² − AC = 1.
Стереографическая проекция ведется из северного полюса единичной сферы
на экваториальную плоскость, отождествленную с ℂ.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np

from src.core.config import ALGEBRAIC_TOL, EQUALITY_TOL
from src.core.errors import DegenerateInputError, DomainError
from src.geometry.moebius import (
    INF,
    ExtendedComplex,
    MoebiusMap,
    chordal_distance,
    from_sphere,
    inverse,
    is_inf,
    to_sphere,
    to_zero_one_infinity,
)

logger = logging.getLogger(__name__)


def sphere_angle(x: np.ndarray, y: np.ndarray) -> float:
    """Сферическое расстояние между единичными векторами"""
    return math.atan2(float(np.linalg.norm(np.cross(x, y))), float(np.dot(x, y)))


def sphere_angles(x: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Углы между точкой сферы и строками массива, устойчиво около 0 и π"""
    chord = np.linalg.norm(ys - x, axis=1)
    summ = np.linalg.norm(ys + x, axis=1)
    return 2.0 * np.arctan2(chord, summ)


def _normalize(A: float, B: complex, C: float) -> Tuple["GeneralizedCircle", int]:
    """Нормировать форму; вернуть окружность и знак, на который умножена форма"""
    disc = abs(B) ** 2 - A * C
    if not disc > 1e-24 * max(abs(A), abs(B), abs(C), 1e-300) ** 2:
        raise DegenerateInputError("hermitian form does not define a circle")
    scale = 1.0 / math.sqrt(disc)
    A, B, C = A * scale, B * scale, C * scale
    if abs(A) > ALGEBRAIC_TOL:
        sign = 1 if A > 0 else -1
    elif abs(B.real) > ALGEBRAIC_TOL:
        sign = 1 if B.real > 0 else -1
    else:
        sign = 1 if B.imag > 0 else -1
    return GeneralizedCircle(sign * A, complex(sign * B), sign * C), sign


@dataclass(frozen=True, eq=False)
class SphericalCircle:
    """Окружность на S²: центр шапки и сферический радиус в (0, π)"""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        if abs(np.linalg.norm(center) - 1.0) > 1e-12:
            raise DomainError("spherical circle center must be a unit vector")
        if not 0.0 < self.radius < math.pi:
            raise DomainError("spherical radius must lie in (0, pi)")
        object.__setattr__(self, "center", center)

    def frame(self) -> Tuple[np.ndarray, np.ndarray]:
        """Ортонормированный правый базис (e1, e2) плоскости, ортогональной центру"""
        n = self.center
        axis = np.eye(3)[int(np.argmin(np.abs(n)))]
        e1 = np.cross(n, axis)
        e1 /= np.linalg.norm(e1)
        return e1, np.cross(n, e1)

    def point(self, phi: float) -> np.ndarray:
        e1, e2 = self.frame()
        return math.cos(self.radius) * self.center + math.sin(self.radius) * (
            math.cos(phi) * e1 + math.sin(phi) * e2
        )

    def angle_of(self, x: np.ndarray) -> float:
        """Угловой параметр в [0, 2π) проекции точки сферы на окружность"""
        e1, e2 = self.frame()
        return math.atan2(float(x @ e2), float(x @ e1)) % (2 * math.pi)


@dataclass(frozen=True, eq=False)
class GeneralizedCircle:
    """Окружность или прямая {A|z|² + 2Re(B̄z) + C = 0}; ∞ лежит на ней при A = 0"""

    A: float
    B: complex
    C: float

    @classmethod
    def from_coefficients(cls, A: float, B: complex, C: float) -> "GeneralizedCircle":
        return _normalize(float(A), complex(B), float(C))[0]

    @classmethod
    def from_center_radius(cls, center: complex, radius: float) -> "GeneralizedCircle":
        if not radius > 0:
            raise DomainError("radius must be positive")
        center = complex(center)
        return cls.from_coefficients(1.0, -center, abs(center) ** 2 - radius ** 2)

    @classmethod
    def line(cls, point: complex, direction: complex) -> "GeneralizedCircle":
        """Прямая через точку с заданным направлением"""
        if abs(direction) == 0:
            raise DegenerateInputError("line direction must be nonzero")
        normal = 1j * complex(direction) / abs(direction)
        return cls.from_coefficients(0.0, normal, -2.0 * (normal.conjugate() * complex(point)).real)

    @property
    def hermitian(self) -> np.ndarray:
        return np.array([[self.A, self.B], [self.B.conjugate(), self.C]], dtype=complex)

    @property
    def is_line(self) -> bool:
        return abs(self.A) <= ALGEBRAIC_TOL

    @property
    def center(self) -> complex:
        if self.is_line:
            raise DomainError("a line has no finite center")
        return -self.B / self.A

    @property
    def radius(self) -> float:
        if self.is_line:
            raise DomainError("a line has no finite radius")
        return 1.0 / abs(self.A)

    def value(self, p: ExtendedComplex) -> float:
        """Q(p); для ∞ - однородное значение A"""
        if is_inf(p):
            return self.A
        return self.A * abs(p) ** 2 + 2.0 * (self.B.conjugate() * p).real + self.C

    def residual(self, p: ExtendedComplex) -> float:
        """Масштабно-инвариантная невязка |Q(p)|/(|p|² + 1)"""
        if is_inf(p):
            return abs(self.A)
        return abs(self.value(p)) / (abs(p) ** 2 + 1.0)

    def contains_point(self, p: ExtendedComplex, tol: float = 1e-8) -> bool:
        return self.residual(p) <= tol

    def key(self) -> np.ndarray:
        return np.array([self.A, self.B.real, self.B.imag, self.C])

    def is_close(self, other: "GeneralizedCircle", tol: float = EQUALITY_TOL) -> bool:
        k1, k2 = self.key(), other.key()
        return min(np.max(np.abs(k1 - k2)), np.max(np.abs(k1 + k2))) <= tol

    def negated(self) -> Tuple[float, complex, float]:
        return -self.A, -self.B, -self.C

    def points(self, n: int = 16) -> List[ExtendedComplex]:
        """n точек окружности, равномерно по угловому параметру"""
        s = to_spherical(self)
        return [from_sphere(s.point(2 * math.pi * k / n)) for k in range(n)]

    def point_at(self, phi: float) -> ExtendedComplex:
        return from_sphere(to_spherical(self).point(phi))

    def angle_of(self, p: ExtendedComplex) -> float:
        return to_spherical(self).angle_of(to_sphere(p))


REAL_LINE = GeneralizedCircle(0.0, 1j, 0.0)
UNIT_CIRCLE = GeneralizedCircle(1.0, 0j, -1.0)


class IntersectionKind(str, Enum):
    DISJOINT = "disjoint"
    TANGENT = "tangent"
    CROSSING = "crossing"
    EQUAL = "equal"


@dataclass(frozen=True)
class Intersection:
    kind: IntersectionKind
    points: Tuple[ExtendedComplex, ...] = ()


def _transform_form(f: MoebiusMap, A: float, B: complex, C: float) -> Tuple[float, complex, float]:
    # H' = M⁻¹* H M⁻¹ (для антиголоморфных f форма предварительно сопрягается)
    H = np.array([[A, B], [np.conj(B), C]], dtype=complex)
    if f.conj:
        H = np.conj(H)
    m = np.array([[f.d, -f.b], [-f.c, f.a]], dtype=complex)
    Hn = m.conj().T @ H @ m
    return float(Hn[0, 0].real), complex(Hn[0, 1]), float(Hn[1, 1].real)


def transform_oriented(f: MoebiusMap, A: float, B: complex, C: float) -> Tuple["GeneralizedCircle", int]:
    """Образ формы с сохранением знака Q: вернуть окружность и знак нормировки"""
    return _normalize(*_transform_form(f, A, B, C))


def apply_circle(f: MoebiusMap, circle: GeneralizedCircle) -> GeneralizedCircle:
    return transform_oriented(f, circle.A, circle.B, circle.C)[0]


def circle_through(p1: ExtendedComplex, p2: ExtendedComplex, p3: ExtendedComplex) -> GeneralizedCircle:
    """Единственная обобщенная окружность через три различные точки"""
    pts = (p1, p2, p3)
    for i in range(3):
        for j in range(i + 1, 3):
            if chordal_distance(pts[i], pts[j]) <= 1e-10:
                raise DegenerateInputError("degenerate triple")
    rows = []
    for p in pts:
        if is_inf(p):
            row = np.array([1.0, 0.0, 0.0, 0.0])
        else:
            row = np.array([abs(p) ** 2, 2 * p.real, 2 * p.imag, 1.0])
        rows.append(row / np.linalg.norm(row))
    _, _, vh = np.linalg.svd(np.array(rows))
    A, bx, by, C = vh[-1]
    return GeneralizedCircle.from_coefficients(A, complex(bx, by), C)


def inversive_product(c1: GeneralizedCircle, c2: GeneralizedCircle) -> float:
    """Нормированное инверсивное произведение: косинус угла пересечения, >1 для непересекающихся"""
    return (c1.B * c2.B.conjugate()).real - 0.5 * (c1.A * c2.C + c2.A * c1.C)


def _real_line_chart(c1: GeneralizedCircle, c2: GeneralizedCircle) -> MoebiusMap:
    # точка c1, отображаемая в ∞, выбирается дальше всего от c2
    samples = c1.points(8)
    far = max(range(8), key=lambda k: c2.residual(samples[k]))
    p3 = samples[far]
    p1, p2 = samples[(far + 3) % 8], samples[(far + 5) % 8]
    return to_zero_one_infinity(p1, p2, p3)


def _sort_points(points: List[ExtendedComplex]) -> Tuple[ExtendedComplex, ...]:
    return tuple(sorted(points, key=lambda p: (1, 0.0, 0.0) if is_inf(p) else (0, round(p.real, 12), p.imag)))


def intersect(c1: GeneralizedCircle, c2: GeneralizedCircle, tol: float = ALGEBRAIC_TOL) -> Intersection:
    """Классификация взаимного расположения двух окружностей с точками-свидетелями"""
    if c1.is_close(c2):
        return Intersection(IntersectionKind.EQUAL)
    prod = abs(inversive_product(c1, c2))
    if prod > 1.0 + tol:
        return Intersection(IntersectionKind.DISJOINT)
    chart = _real_line_chart(c1, c2)
    image = apply_circle(chart, c2)
    back = inverse(chart)
    bre = image.B.real
    if abs(prod - 1.0) <= tol:
        root = -bre / image.A
        return Intersection(IntersectionKind.TANGENT, (back(complex(root)),))
    delta = math.sqrt(max(0.0, 1.0 - image.B.imag ** 2))
    roots = [(-bre + delta) / image.A, (-bre - delta) / image.A]
    return Intersection(IntersectionKind.CROSSING, _sort_points([back(complex(r)) for r in roots]))


def angle_between(c1: GeneralizedCircle, c2: GeneralizedCircle) -> float:
    """Неориентированный угол пересечения в [0, π/2]: cos θ = |⟨C1, C2⟩|"""
    kind = intersect(c1, c2).kind
    if kind == IntersectionKind.DISJOINT:
        raise DomainError("no intersection")
    if kind in (IntersectionKind.EQUAL, IntersectionKind.TANGENT):
        return 0.0
    return math.acos(min(1.0, abs(inversive_product(c1, c2))))


def to_spherical(circle: GeneralizedCircle) -> SphericalCircle:
    """Шапка {Q > 0} канонического представителя"""
    return _cap_of(circle.A, circle.B, circle.C)


def _cap_of(A: float, B: complex, C: float) -> SphericalCircle:
    cot_r = -(A + C) / 2.0
    r = math.atan2(1.0, cot_r)
    s = math.sin(r)
    n = np.array([B.real * s, B.imag * s, s * (A - C) / 2.0])
    return SphericalCircle(n / np.linalg.norm(n), r)


def from_spherical(s: SphericalCircle) -> GeneralizedCircle:
    n, r = s.center, s.radius
    sr = math.sin(r)
    return GeneralizedCircle.from_coefficients(
        (n[2] - math.cos(r)) / sr, complex(n[0], n[1]) / sr, -(n[2] + math.cos(r)) / sr
    )


def covering_phi(x: np.ndarray, r: float) -> GeneralizedCircle:
    """Двулистное накрытие φ: S² × (0, π) → 𝒞, φ(x, r) = φ(−x, π − r)"""
    if not 0.0 < r < math.pi:
        raise DomainError("radius must lie in (0, pi)")
    x = np.asarray(x, dtype=float)
    return from_spherical(SphericalCircle(x / np.linalg.norm(x), r))


def circle_distance(c1: GeneralizedCircle, c2: GeneralizedCircle) -> float:
    s1, s2 = to_spherical(c1), to_spherical(c2)
    direct = sphere_angle(s1.center, s2.center) + abs(s1.radius - s2.radius)
    flipped = sphere_angle(-s1.center, s2.center) + abs(math.pi - s1.radius - s2.radius)
    return min(direct, flipped)


@dataclass(frozen=True, eq=False)
class Disk:
    """Открытый круг {side · Q < 0}, ограниченный окружностью circle"""

    circle: GeneralizedCircle
    side: int

    def __post_init__(self):
        if self.side not in (1, -1):
            raise DomainError("disk side must be +1 or -1")

    @classmethod
    def from_cap(cls, cap: SphericalCircle) -> "Disk":
        """Круг, совпадающий со сферической шапкой"""
        n, r = cap.center, cap.radius
        sr = math.sin(r)
        circle, sign = _normalize(
            (n[2] - math.cos(r)) / sr, complex(n[0], n[1]) / sr, -(n[2] + math.cos(r)) / sr
        )
        # шапка = {Q_cap > 0} = {sign·Q < 0} после смены знака
        return cls(circle, -sign)

    def oriented_form(self) -> Tuple[float, complex, float]:
        """Форма, положительная внутри круга"""
        s = -self.side
        return s * self.circle.A, s * self.circle.B, s * self.circle.C

    def key(self) -> np.ndarray:
        A, B, C = self.oriented_form()
        return np.array([A, B.real, B.imag, C])

    def contains(self, p: ExtendedComplex) -> bool:
        return self.side * self.circle.value(p) < 0

    def to_cap(self) -> SphericalCircle:
        return _cap_of(*self.oriented_form())

    @property
    def curvature(self) -> float:
        """Знаковая кривизна: положительна для ограниченного круга, отрицательна для круга с ∞"""
        return self.side * self.circle.A

    def witness_point(self) -> ExtendedComplex:
        return from_sphere(self.to_cap().center)

    def is_close(self, other: "Disk", tol: float = EQUALITY_TOL) -> bool:
        return float(np.max(np.abs(self.key() - other.key()))) <= tol


def apply_disk(f: MoebiusMap, disk: Disk) -> Disk:
    circle, sign = transform_oriented(f, disk.circle.A, disk.circle.B, disk.circle.C)
    return Disk(circle, disk.side * sign)


def annulus_contains(
    d: GeneralizedCircle,
    c: GeneralizedCircle,
    eps: float,
    side: int = 1,
) -> bool:
    """
    Лежит ли окружность d в ε-кольце вокруг c.

    Кольцо строится по шапке круга c со стороны side радиуса r, ε должно
    лежать в (0, r). Дополнительная шапка (−η, π − r) задает то же кольцо,
    поэтому ответ от стороны не зависит.
    """
    cap = Disk(c, side).to_cap()
    r = cap.radius
    if not 0.0 < eps < r:
        raise DomainError(f"epsilon {eps} outside (0, {r})")
    sd = to_spherical(d)
    delta = sphere_angle(cap.center, sd.center)
    nearest = abs(delta - sd.radius)
    farthest = min(delta + sd.radius, 2 * math.pi - delta - sd.radius)
    return nearest > r - eps and farthest < r + eps
