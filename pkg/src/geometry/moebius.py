# src/geometry/moebius
"""
Преобразования Мёбиуса и анти-Мёбиуса расширенной комплексной плоскости
и их продолжение Пуанкаре на верхнее полупространство H³.

Точка ∞ - отдельный тег INF, а не большое число с плавающей точкой.
"""
import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Union

import numpy as np

from src.core.config import ALGEBRAIC_TOL
from src.core.errors import DegenerateInputError, DomainError


class _Infinity:
    """Точка ∞ сферы Римана (синглтон)"""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()

ExtendedComplex = Union[complex, _Infinity]


def is_inf(p: ExtendedComplex) -> bool:
    return p is INF


def as_point(p) -> ExtendedComplex:
    """Привести число или "inf" к ExtendedComplex"""
    if p is INF or (isinstance(p, str) and p == "inf"):
        return INF
    value = complex(p)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError("finite point expected, use INF for infinity")
    return value


def to_sphere(p: ExtendedComplex) -> np.ndarray:
    """Обратная стереографическая проекция из северного полюса на единичную сферу"""
    if is_inf(p):
        return np.array([0.0, 0.0, 1.0])
    r2 = abs(p) ** 2
    return np.array([2 * p.real, 2 * p.imag, r2 - 1.0]) / (r2 + 1.0)


def from_sphere(v: np.ndarray) -> ExtendedComplex:
    x, y, z = (float(c) for c in v)
    if 1.0 - z <= 1e-15:
        return INF
    return complex(x, y) / (1.0 - z)


def chordal_distance(p: ExtendedComplex, q: ExtendedComplex) -> float:
    """Хордовое расстояние на единичной сфере Римана"""
    if is_inf(p) and is_inf(q):
        return 0.0
    if is_inf(p):
        return 2.0 / math.sqrt(1.0 + abs(q) ** 2)
    if is_inf(q):
        return 2.0 / math.sqrt(1.0 + abs(p) ** 2)
    return 2.0 * abs(p - q) / math.sqrt((1.0 + abs(p) ** 2) * (1.0 + abs(q) ** 2))


def _canonical_sign(entries: np.ndarray, tol: float) -> np.ndarray:
    # первый ненулевой элемент с аргументом в [0, π); мнимая часть ниже tol считается нулем
    for x in entries:
        if abs(x) > tol:
            if abs(x.imag) > tol:
                negate = x.imag < 0
            else:
                negate = x.real < 0
            return -entries if negate else entries
    return entries


class MapKind(str, Enum):
    """Тип голоморфного преобразования по квадрату следа"""

    IDENTITY = "identity"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    LOXODROMIC = "hyperbolic/loxodromic"


@dataclass(frozen=True)
class HyperbolicPoint:
    """Точка (z, t) верхнего полупространства, t > 0"""

    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"height must be positive, got t={self.t}")
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "t", float(self.t))


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """
    Изометрия H³, заданная нормированной матрицей (a b; c d), det = 1.

    conj=True означает антиголоморфное отображение z ↦ (a z̄ + b)/(c z̄ + d).
    """

    a: complex
    b: complex
    c: complex
    d: complex
    conj: bool = False

    @classmethod
    def from_matrix(cls, m, conj: bool = False) -> "MoebiusMap":
        """Нормировать матрицу на det = 1 и выбрать канонический знак"""
        m = np.asarray(m, dtype=complex).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        scale = np.max(np.abs(m))
        if scale == 0 or abs(det) <= 1e-24 * scale ** 2:
            raise DegenerateInputError("singular matrix cannot define a Moebius map")
        entries = (m / cmath.sqrt(det)).ravel()
        entries = _canonical_sign(entries, ALGEBRAIC_TOL)
        a, b, c, d = (complex(x) for x in entries)
        return cls(a, b, c, d, bool(conj))

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def key(self) -> np.ndarray:
        """Вещественный ключ матрицы для индекса дедупликации (флаг conj в него не входит)"""
        e = np.array([self.a, self.b, self.c, self.d])
        return np.concatenate([e.real, e.imag])

    def is_close(self, other: "MoebiusMap", tol: float = 1e-8) -> bool:
        if self.conj != other.conj:
            return False
        diff = self.matrix - other.matrix
        summ = self.matrix + other.matrix
        return min(np.max(np.abs(diff)), np.max(np.abs(summ))) <= tol

    def is_identity(self, tol: float = 1e-8) -> bool:
        return self.is_close(IDENTITY, tol)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __call__(self, p: ExtendedComplex) -> ExtendedComplex:
        return apply_boundary(self, p)


IDENTITY = MoebiusMap(1 + 0j, 0j, 0j, 1 + 0j, False)


def identity() -> MoebiusMap:
    return IDENTITY


def u(t: complex) -> MoebiusMap:
    """Параболический сдвиг z ↦ z + t"""
    return MoebiusMap.from_matrix([[1, t], [0, 1]])


def a(t: float) -> MoebiusMap:
    """Гиперболическое растяжение z ↦ e^t z"""
    return MoebiusMap.from_matrix([[math.exp(t / 2), 0], [0, math.exp(-t / 2)]])


def complex_conjugation() -> MoebiusMap:
    """Отражение z ↦ z̄"""
    return MoebiusMap(1 + 0j, 0j, 0j, 1 + 0j, True)


def compose(f: MoebiusMap, g: MoebiusMap) -> MoebiusMap:
    """Композиция f∘g: сначала g, затем f"""
    mg = np.conj(g.matrix) if f.conj else g.matrix
    return MoebiusMap.from_matrix(f.matrix @ mg, f.conj ^ g.conj)


def inverse(f: MoebiusMap) -> MoebiusMap:
    inv = np.array([[f.d, -f.b], [-f.c, f.a]], dtype=complex)
    if f.conj:
        inv = np.conj(inv)
    return MoebiusMap.from_matrix(inv, f.conj)


def apply_boundary(f: MoebiusMap, p: ExtendedComplex) -> ExtendedComplex:
    """Действие на сфере Римана; полюс переходит в ∞, ∞ переходит в a/c"""
    if is_inf(p):
        if f.c == 0 or abs(f.c) <= 1e-15 * abs(f.a):
            return INF
        # ∞̄ = ∞, поэтому флаг conj здесь не участвует
        return f.a / f.c
    if f.conj:
        p = p.conjugate()
    num = f.a * p + f.b
    den = f.c * p + f.d
    if den == 0 or abs(den) <= 1e-15 * abs(num):
        return INF
    return num / den


def apply_halfspace(f: MoebiusMap, p: HyperbolicPoint) -> HyperbolicPoint:
    """Продолжение Пуанкаре на H³"""
    z, t = p.z, p.t
    if f.conj:
        z = z.conjugate()
    cz_d = f.c * z + f.d
    denom = abs(cz_d) ** 2 + abs(f.c) ** 2 * t * t
    z_img = ((f.a * z + f.b) * cz_d.conjugate() + f.a * f.c.conjugate() * t * t) / denom
    return HyperbolicPoint(z_img, t / denom)


def classify(f: MoebiusMap, tol: float = 1e-8) -> MapKind:
    """Классификация по квадрату следа"""
    if f.conj:
        raise DomainError("classification defined for holomorphic maps only")
    if f.is_identity(tol):
        return MapKind.IDENTITY
    tr2 = (f.a + f.d) ** 2
    if abs(tr2 - 4) <= tol:
        return MapKind.PARABOLIC
    if abs(tr2.imag) <= tol and 0 <= tr2.real < 4:
        return MapKind.ELLIPTIC
    return MapKind.LOXODROMIC


def fixed_points(f: MoebiusMap, tol: float = 1e-8) -> List[ExtendedComplex]:
    """Неподвижные точки: корни c z² + (d − a) z − b = 0, с ∞ при c = 0"""
    if f.conj:
        raise DomainError("fixed points are computed for holomorphic maps only")
    if f.is_identity(tol):
        raise DegenerateInputError("all points fixed")
    a_, b_, c_, d_ = f.a, f.b, f.c, f.d
    if abs(c_) <= ALGEBRAIC_TOL:
        if abs(a_ - d_) <= tol:
            return [INF]
        return [b_ / (d_ - a_), INF]
    disc = (a_ + d_) ** 2 - 4
    if abs(disc) <= tol:
        return [(a_ - d_) / (2 * c_)]
    root = cmath.sqrt(disc)
    return [(a_ - d_ + root) / (2 * c_), (a_ - d_ - root) / (2 * c_)]


def to_infinity_coords(sigma: ExtendedComplex) -> MoebiusMap:
    """Каноническая карта g с g(σ) = ∞: тождество или z ↦ −1/(z − σ)"""
    if is_inf(sigma):
        return IDENTITY
    return MoebiusMap.from_matrix([[0, -1], [1, -sigma]])


def to_zero_one_infinity(p1: ExtendedComplex, p2: ExtendedComplex, p3: ExtendedComplex) -> MoebiusMap:
    """Отображение, переводящее p1 → 0, p2 → 1, p3 → ∞"""
    pts = (p1, p2, p3)
    for i in range(3):
        for j in range(i + 1, 3):
            if chordal_distance(pts[i], pts[j]) <= 1e-10:
                raise DegenerateInputError("degenerate triple")
    if is_inf(p1):
        m = [[0, p2 - p3], [1, -p3]]
    elif is_inf(p2):
        m = [[1, -p1], [1, -p3]]
    elif is_inf(p3):
        m = [[1, -p1], [0, p2 - p1]]
    else:
        m = [[p2 - p3, -p1 * (p2 - p3)], [p2 - p1, -p3 * (p2 - p1)]]
    return MoebiusMap.from_matrix(m)


def from_three_points(src, dst) -> MoebiusMap:
    """Единственное голоморфное отображение, переводящее тройку src в тройку dst"""
    s = to_zero_one_infinity(*src)
    t = to_zero_one_infinity(*dst)
    return compose(inverse(t), s)
