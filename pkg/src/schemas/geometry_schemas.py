# src/schemas/geometry_schemas
"""
Pydantic схемы JSON-представлений геометрических объектов и входных
файлов CLI, с преобразованием в доменные объекты и обратно
"""
from typing import List, Optional, Tuple

from pydantic import Field, field_validator, model_validator

from src.dynamics.gapset import Ambient, GapSet
from src.dynamics.orbits import OrbitEntry, OrbitRecord
from src.dynamics.recurrence import FrameSpec
from src.geometry.circlespace import Disk, GeneralizedCircle
from src.geometry.halfspace import Geodesic, Horoball
from src.geometry.moebius import HyperbolicPoint, MoebiusMap
from src.packing.fixtures import FIXTURES
from src.packing.packing import CirclePacking, PackingSpec, TangencyPoint
from src.schemas.encoding import ComplexJSON, PointJSON, complex_from_json, complex_to_json, point_from_json, point_to_json
from src.schemas.report_schemas import (
    AccumulationReport,
    BaseSchema,
    DiscretenessReport,
    LimitArcSetReport,
    ThicknessSummary,
)


# Отображения и окружности
class MapJSON(BaseSchema):
    a: ComplexJSON = Field(..., description="Элемент a нормированной матрицы")
    b: ComplexJSON = Field(..., description="Элемент b")
    c: ComplexJSON = Field(..., description="Элемент c")
    d: ComplexJSON = Field(..., description="Элемент d")
    conj: bool = Field(False, description="Антиголоморфное отображение z ↦ (a z̄ + b)/(c z̄ + d)")

    def to_domain(self) -> MoebiusMap:
        m = [[complex_from_json(self.a), complex_from_json(self.b)], [complex_from_json(self.c), complex_from_json(self.d)]]
        return MoebiusMap.from_matrix(m, self.conj)

    @classmethod
    def from_domain(cls, f: MoebiusMap) -> "MapJSON":
        return cls(
            a=complex_to_json(f.a), b=complex_to_json(f.b), c=complex_to_json(f.c), d=complex_to_json(f.d), conj=f.conj
        )


class CircleJSON(BaseSchema):
    A: float = Field(..., description="Коэффициент при |z|²")
    B: ComplexJSON = Field(..., description="Комплексный коэффициент B")
    C: float = Field(..., description="Свободный член")

    def to_domain(self) -> GeneralizedCircle:
        return GeneralizedCircle.from_coefficients(self.A, complex_from_json(self.B), self.C)

    @classmethod
    def from_domain(cls, c: GeneralizedCircle) -> "CircleJSON":
        return cls(A=c.A, B=complex_to_json(c.B), C=c.C)


class DiskJSON(BaseSchema):
    circle: CircleJSON
    side: int = Field(..., description="+1: круг {Q < 0}, −1: круг {Q > 0}")

    @field_validator("side")
    @classmethod
    def check_side(cls, v: int) -> int:
        if v not in (1, -1):
            raise ValueError("side must be +1 or -1")
        return v

    def to_domain(self) -> Disk:
        return Disk(self.circle.to_domain(), self.side)

    @classmethod
    def from_domain(cls, d: Disk) -> "DiskJSON":
        return cls(circle=CircleJSON.from_domain(d.circle), side=d.side)


class HyperbolicPointJSON(BaseSchema):
    z: ComplexJSON
    t: float = Field(..., gt=0, description="Высота над плоскостью")

    def to_domain(self) -> HyperbolicPoint:
        return HyperbolicPoint(complex_from_json(self.z), self.t)


class GeodesicJSON(BaseSchema):
    endpoints: Tuple[PointJSON, PointJSON]

    def to_domain(self) -> Geodesic:
        return Geodesic.between(point_from_json(self.endpoints[0]), point_from_json(self.endpoints[1]))


class HoroballJSON(BaseSchema):
    base: PointJSON
    size: float = Field(..., gt=0)

    def to_domain(self) -> Horoball:
        return Horoball(point_from_json(self.base), self.size)


# Упаковки
class PackingSpecJSON(BaseSchema):
    """Либо имя готовой конфигурации, либо затравка с образующими"""

    fixture: Optional[str] = Field(None, description="apollonian, strip или dual-circle")
    seed: List[DiskJSON] = Field(default_factory=list, description="Затравочные круги")
    generators: List[MapJSON] = Field(default_factory=list, description="Образующие группы")
    dual_circles: List[CircleJSON] = Field(default_factory=list, description="Двойственные окружности")
    depth: int = Field(3, ge=0, description="Глубина слов")
    min_radius: float = Field(1e-3, gt=0, description="Отсечка по сферическому радиусу")
    name: str = Field("custom", description="Название упаковки")

    @model_validator(mode="after")
    def check_source(self) -> "PackingSpecJSON":
        if self.fixture is None and not self.seed:
            raise ValueError("either fixture or seed must be given")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise ValueError(f"unknown fixture {self.fixture!r}, expected one of {sorted(FIXTURES)}")
        return self

    def to_domain(self) -> PackingSpec:
        if self.fixture is not None:
            return FIXTURES[self.fixture](depth=self.depth, min_radius=self.min_radius)
        return PackingSpec(
            seed=[d.to_domain() for d in self.seed],
            generators=[g.to_domain() for g in self.generators],
            depth=self.depth,
            min_radius=self.min_radius,
            dual_circles=[c.to_domain() for c in self.dual_circles],
            name=self.name,
        )

    @classmethod
    def from_domain(cls, spec: PackingSpec) -> "PackingSpecJSON":
        return cls(
            seed=[DiskJSON.from_domain(d) for d in spec.seed],
            generators=[MapJSON.from_domain(g) for g in spec.generators],
            dual_circles=[CircleJSON.from_domain(c) for c in spec.dual_circles],
            depth=spec.depth,
            min_radius=spec.min_radius,
            name=spec.name,
        )


class PackedDiskJSON(BaseSchema):
    disk: DiskJSON
    word: List[int] = Field(..., description="Слово, переводящее затравочный круг в данный")
    seed: int = Field(..., description="Номер затравочного круга")
    curvature: float


class TangencyJSON(BaseSchema):
    point: PointJSON
    disks: Tuple[int, int]


class PackingJSON(BaseSchema):
    spec: PackingSpecJSON
    disks: List[PackedDiskJSON]
    tangencies: List[TangencyJSON] = Field(default_factory=list)

    def to_domain(self) -> CirclePacking:
        return CirclePacking(
            spec=self.spec.to_domain(),
            disks=[d.disk.to_domain() for d in self.disks],
            words=[tuple(d.word) for d in self.disks],
            seeds=[d.seed for d in self.disks],
            tangencies=[TangencyPoint(point_from_json(t.point), tuple(t.disks)) for t in self.tangencies],
        )

    @classmethod
    def from_domain(cls, packing: CirclePacking) -> "PackingJSON":
        return cls(
            spec=PackingSpecJSON.from_domain(packing.spec),
            disks=[
                PackedDiskJSON(disk=DiskJSON.from_domain(d), word=list(w), seed=s, curvature=d.curvature)
                for d, w, s in zip(packing.disks, packing.words, packing.seeds)
            ],
            tangencies=[TangencyJSON(point=point_to_json(t.point), disks=t.disks) for t in packing.tangencies],
        )


# Орбиты
class OrbitEntryJSON(BaseSchema):
    word: List[int]
    circle: CircleJSON


class OrbitJSON(BaseSchema):
    base: CircleJSON
    max_length: int = Field(..., ge=0)
    entries: List[OrbitEntryJSON]

    def to_domain(self) -> OrbitRecord:
        return OrbitRecord(
            base=self.base.to_domain(),
            max_length=self.max_length,
            entries=[OrbitEntry(tuple(e.word), e.circle.to_domain()) for e in self.entries],
        )

    @classmethod
    def from_domain(cls, orbit: OrbitRecord) -> "OrbitJSON":
        return cls(
            base=CircleJSON.from_domain(orbit.base),
            max_length=orbit.max_length,
            entries=[OrbitEntryJSON(word=list(e.word), circle=CircleJSON.from_domain(e.circle)) for e in orbit.entries],
        )


class OrbitResultJSON(BaseSchema):
    """Выход команды orbit"""

    orbit: OrbitJSON
    discreteness: DiscretenessReport
    stabilizer_words: List[List[int]] = Field(default_factory=list, description="Слова элементов шара, сохраняющих окружность")
    limit_arcset: LimitArcSetReport
    accumulation: AccumulationReport


class OrbitRequestJSON(BaseSchema):
    """Вход команды orbit"""

    circle: CircleJSON
    packing: PackingSpecJSON
    center: HyperbolicPointJSON = Field(
        default_factory=lambda: HyperbolicPointJSON(z=(0.0, 0.0), t=1.0), description="Центр шара в H³"
    )
    radius: float = Field(2.0, gt=0, description="Радиус шара")


# Кадры и множества возвратов
class FrameJSON(BaseSchema):
    circle: CircleJSON
    x_minus: PointJSON
    x_plus: PointJSON
    p0: Optional[PointJSON] = None

    def to_domain(self) -> FrameSpec:
        return FrameSpec(
            self.circle.to_domain(),
            point_from_json(self.x_minus),
            point_from_json(self.x_plus),
            None if self.p0 is None else point_from_json(self.p0),
        )


class ThicknessRequestJSON(BaseSchema):
    """Вход команды thickness"""

    frame: FrameJSON
    packing: PackingSpecJSON


class GapSetJSON(BaseSchema):
    window: Tuple[float, float]
    gaps: List[Tuple[float, float]]
    ambient: Ambient = Ambient.REAL_LINE
    resolution: float = Field(0.0, ge=0)

    def to_domain(self) -> GapSet:
        return GapSet.from_gaps(self.gaps, self.window, Ambient(self.ambient), self.resolution)

    @classmethod
    def from_domain(cls, t_set: GapSet) -> "GapSetJSON":
        return cls(window=t_set.window, gaps=list(t_set.gaps), ambient=t_set.ambient, resolution=t_set.resolution)


class ThicknessResultJSON(BaseSchema):
    """Выход команды thickness"""

    return_times: GapSetJSON
    summary: ThicknessSummary


class BkScanRequestJSON(BaseSchema):
    """Вход команды bk-scan"""

    packing: PackingSpecJSON
    k: int = Field(..., ge=3)
    candidates: List[CircleJSON]
    generators: List[MapJSON] = Field(default_factory=list, description="Образующие для классов орбит")


# Параметры экспериментов
class ExperimentConfig(BaseSchema):
    K_values: List[float] = Field([2.0, 10.0, 100.0], description="Значения K для проверки толщины")
    t_max: float = Field(1e4, gt=0, description="Полуширина окна времен")
    n_max: int = Field(200, ge=3, description="Наибольшее n в эксперименте с углами")
    word_length: int = Field(4, ge=0, description="Длина слов шара группы")
    eps: float = Field(1e-3, gt=0, description="Ширина кольца для возмущений")

    @field_validator("K_values")
    @classmethod
    def check_k(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("at least one K required")
        for K in values:
            if not K > 1:
                raise ValueError(f"K must be greater than 1, got {K}")
        return values
