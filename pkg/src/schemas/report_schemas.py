# src/schemas/report_schemas
"""
Pydantic схемы отчетов: вердикты, таблицы экспериментов, ошибки
"""
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.schemas.encoding import ComplexJSON, PointJSON


# Базовая схема
class BaseSchema(BaseModel):
    model_config = ConfigDict(from_attributes=True, use_enum_values=True)


# Вердикты
class OrbitVerdict(str, Enum):
    LOOKS_DISCRETE = "looks-discrete"
    ACCUMULATING = "accumulating"
    INCONCLUSIVE = "inconclusive"


class AccumulationVerdict(str, Enum):
    DENSE_PREDICTED = "dense in C_Lambda predicted"
    NO_WITNESS = "no witness at this truncation"
    HYPOTHESIS_UNMET = "hypothesis unmet: base meets the limit set in fewer than 2 points"


class SlopeVerdict(str, Enum):
    RATIONAL = "rational"
    IRRATIONAL = "irrational-at-tolerance"
    NOT_THROUGH_SIGMA = "not-through-sigma"


class ThicknessVerdict(str, Enum):
    THICK = "thick-on-window"
    NOT_THICK = "not-thick"


class ExcursionTrend(str, Enum):
    GROWING = "excursions growing"
    BOUNDED = "bounded"
    INCONCLUSIVE = "inconclusive"


# Орисферы
class CuspViolation(BaseSchema):
    first_index: int = Field(..., description="Номер первой орисферы во входном списке")
    first_word: List[int] = Field(..., description="Слово, сдвигающее первую орисферу")
    first_base: PointJSON = Field(..., description="База образа первой орисферы")
    first_size: float = Field(..., description="Размер образа первой орисферы")
    second_index: int = Field(..., description="Номер второй орисферы во входном списке")
    second_word: List[int] = Field(..., description="Слово, сдвигающее вторую орисферу")
    second_base: PointJSON = Field(..., description="База образа второй орисферы")
    second_size: float = Field(..., description="Размер образа второй орисферы")


class CuspFamilyReport(BaseSchema):
    passed: bool = Field(..., description="Все сдвиги замкнутых орисфер попарно не пересекаются")
    horoballs_checked: int = Field(..., description="Число различных сдвинутых орисфер")
    pairs_checked: int = Field(..., description="Число проверенных пар до первого нарушения")
    violation: Optional[CuspViolation] = Field(None, description="Первое найденное пересечение")


# Орбиты
class DiscretenessReport(BaseSchema):
    max_length: int = Field(..., description="Длина слов шара группы")
    center: ComplexJSON = Field(..., description="Горизонтальная координата центра шара")
    center_height: float = Field(..., description="Высота центра шара")
    radius: float = Field(..., description="Гиперболический радиус шара")
    orbit_size: int = Field(..., description="Число различных окружностей орбиты")
    circles_in_ball: int = Field(..., description="Окружности, чьи оболочки пересекают шар")
    min_gap: Optional[float] = Field(None, description="Минимальное попарное расстояние; None - бесконечность")
    closest_pair: Optional[Tuple[List[int], List[int]]] = Field(None, description="Слова ближайшей пары")
    verdict: OrbitVerdict = Field(..., description="Вердикт на данной длине слов")
    caveat: str = Field(..., description="Оговорка об усечении")


class DiscretenessTrendReport(BaseSchema):
    lengths: List[int] = Field(..., description="Длины слов")
    gaps: List[Optional[float]] = Field(..., description="Минимальные зазоры по длинам")
    verdict: OrbitVerdict = Field(..., description="Вердикт по тренду зазоров")
    reports: List[DiscretenessReport] = Field(default_factory=list)


class ParabolicOrbitReport(BaseSchema):
    orbit_size: int = Field(..., description="Число окружностей в орбите циклической подгруппы")
    invariant: bool = Field(..., description="Окружность инвариантна относительно сдвига")
    min_gap: Optional[float] = Field(None, description="Минимальный зазор между окружностями орбиты")
    verdict: str = Field(..., description="Вывод о замкнутости орбиты")


class PerturbationReport(BaseSchema):
    eps: float = Field(..., description="Ширина кольца")
    sampled: int = Field(..., description="Число возмущенных окружностей")
    inside_annulus: int = Field(..., description="Сколько из них лежат в ε-кольце")
    violations: int = Field(..., description="Отличные от C окружности с тем же k")
    passed: bool


class BkCandidateReport(BaseSchema):
    index: int = Field(..., description="Номер кандидата")
    intersection_class: str = Field(..., description="Класс |C ∩ Λ| на глубине")
    points: int = Field(..., description="Число изолированных точек остатка")
    parabolic_points: List[PointJSON] = Field(default_factory=list)
    member: bool = Field(..., description="Кандидат принадлежит B_k")
    reason: str = Field("", description="Причина отказа")
    perturbation: Optional[PerturbationReport] = None


class BkScanReport(BaseSchema):
    k: int
    depth: int
    candidates: List[BkCandidateReport]
    orbit_classes: List[List[int]] = Field(
        default_factory=list, description="Классы членов, связанных элементом шара"
    )


class AccumulationReport(BaseSchema):
    verdict: AccumulationVerdict
    base_count_lower_bound: int = Field(..., description="Нижняя оценка |C ∩ Λ| для базы")
    witness_word: Optional[List[int]] = Field(None, description="Слово окружности-свидетеля")
    witness_disk: Optional[int] = Field(None, description="Круг упаковки, к границе которого она почти касается")
    tangency_defect: Optional[float] = Field(None, description="Отклонение от внутреннего касания")
    depth: int
    max_length: int
    note: str = Field("", description="Ссылка на теорему, из которой следует вывод")


class SlopeReport(BaseSchema):
    verdict: SlopeVerdict
    slope: Optional[float] = None
    p: Optional[int] = None
    q: Optional[int] = None
    orbit_verdict: str = Field("", description="closed (rational) / dense predicted (no small rational)")


# Возвраты и толщина
class ThicknessReport(BaseSchema):
    K: float
    verdict: ThicknessVerdict
    witness: Optional[float] = Field(None, description="Конкретное t, для которого оба K-окна в лакунах")
    infimum: Optional[float] = Field(None, description="Инфимум множества свидетелей")
    window: Tuple[float, float]


class ThicknessSummary(BaseSchema):
    gap_count: int
    window: Tuple[float, float]
    threshold: Optional[float] = Field(None, description="Порог K*: толщина при K ≥ K*; None - ни при каком K")
    reports: List[ThicknessReport]


class AnglesRow(BaseSchema):
    n: int
    theta: Optional[float] = Field(None, description="Угол между C_n и L1")
    complement: Optional[float] = Field(None, description="π/2 − θ")
    cos_rho: Optional[float] = None
    expected_cos: float = Field(..., description="2a/n")
    chord: Optional[float] = Field(None, description="|u_n − v_n|")
    apex_height: Optional[float] = Field(None, description="Высота вершины l(u_n, v_n)")
    d_n: Optional[float] = Field(None, description="d(l(u_n,v_n), l(w_n,z_n))")
    skipped: Optional[str] = None


class TrendCheck(BaseSchema):
    name: str
    holds: bool
    first_mean: float
    last_mean: float
    final: float


class AnglesTable(BaseSchema):
    lambda0: ComplexJSON
    a: float = Field(..., description="Расстояние от λ0 до L1")
    rows: List[AnglesRow]
    trends: List[TrendCheck] = Field(default_factory=list)


class SymmetrizationRow(BaseSchema):
    index: int
    u: float
    v: float
    w: float
    z: float
    ratio: float = Field(..., description="(v − w)/(u − w)")
    window_t: float = Field(..., description="|w|")
    k_max: float = Field(..., description="Наибольшее K, при котором оба окна помещаются в лакуны")
    case: int = Field(..., description="1: |z| ≥ v, 2: |z| < v")


class SymmetrizationWitness(BaseSchema):
    K: float
    row: Optional[int] = None
    t: Optional[float] = None
    verified: bool = False


class SymmetrizationReport(BaseSchema):
    rows: List[SymmetrizationRow]
    witnesses: List[SymmetrizationWitness]


class ExcursionPoint(BaseSchema):
    t: float
    max_height: float
    word: List[int]
    running_max: float
    in_horoball: Optional[bool] = None


class ExcursionTrace(BaseSchema):
    points: List[ExcursionPoint]
    trend: ExcursionTrend
    heuristic: bool = True
    note: str = "heuristic depth estimate; not a certification of rank-1 unboundedness"


# Дуги
class ResidualComponentSchema(BaseSchema):
    start: float
    end: float
    label: str
    point: Optional[PointJSON] = None


class LimitArcSetReport(BaseSchema):
    depths: List[int]
    measures: List[float]
    components: List[ResidualComponentSchema]
    intersection_class: str
    count_lower_bound: int
    closedness_verdict: str


# Ошибки и самопроверка
class ErrorReport(BaseSchema):
    error: str
    detail: str
    exit_code: int
    word: Optional[List[int]] = None


class SuiteResult(BaseSchema):
    name: str
    passed: bool
    checks: int
    failures: List[str] = Field(default_factory=list)


class SelftestReport(BaseSchema):
    passed: bool
    suites: List[SuiteResult]
