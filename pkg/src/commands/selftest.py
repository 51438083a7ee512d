# src/commands/selftest
"""
Наборы проверок инвариантов для команды selftest
"""
import cmath
import logging
import math
import time
from typing import Callable, List, Optional

import numpy as np

from src.core.errors import KlabError
from src.dynamics.gapset import GapSet
from src.dynamics.recurrence import (
    angles_experiment,
    is_witness,
    k_thick_test,
    max_thickness,
    symmetrization_ratios,
    strip_quadruples,
)
from src.geometry.circlespace import (
    Disk,
    GeneralizedCircle,
    angle_between,
    annulus_contains,
    apply_circle,
    covering_phi,
)
from src.geometry.halfspace import Geodesic, dist, dist_geodesics, dist_point_geodesic
from src.geometry.moebius import HyperbolicPoint, MoebiusMap, apply_boundary, apply_halfspace
from src.packing.arcs import IntersectionClass, limit_arcset
from src.packing.fixtures import apollonian_fixture, dual_circle_fixture, strip_fixture
from src.packing.packing import descartes_quadruples, dual_circles, generate_packing, packing_violations
from src.schemas.report_schemas import SelftestReport, SuiteResult, ThicknessVerdict

logger = logging.getLogger(__name__)

# наибольшее число сообщений о провалах в одном наборе
MAX_FAILURES = 10


def random_map(rng: np.random.Generator, allow_conj: bool = True) -> MoebiusMap:
    """Случайное отображение с |det| исходной матрицы не меньше 0.1"""
    while True:
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) >= 0.1:
            return MoebiusMap.from_matrix(m, allow_conj and bool(rng.integers(2)))


def random_point(rng: np.random.Generator) -> HyperbolicPoint:
    return HyperbolicPoint(complex(*rng.normal(size=2)), rng.uniform(0.5, 2.0))


def random_crossing_pair(rng: np.random.Generator):
    """Две пересекающиеся окружности с углом, далеким от 0 и π/2"""
    r1, r2 = rng.uniform(0.5, 1.5, size=2)
    c1 = complex(*rng.normal(size=2))
    delta = rng.uniform(abs(r1 - r2) + 0.2, r1 + r2 - 0.2)
    c2 = c1 + delta * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
    return GeneralizedCircle.from_center_radius(c1, r1), GeneralizedCircle.from_center_radius(c2, r2)


def _close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x))


class _Suite:
    def __init__(self, name: str):
        self.name = name
        self.checks = 0
        self.failures: List[str] = []

    def check(self, ok: bool, message: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < MAX_FAILURES:
            self.failures.append(message)

    def result(self) -> SuiteResult:
        return SuiteResult(name=self.name, passed=not self.failures, checks=self.checks, failures=self.failures)


def isometry_suite(samples: int, rng: np.random.Generator, tol: float = 1e-7) -> SuiteResult:
    """dist, dist_point_geodesic, dist_geodesics и angle_between инвариантны относительно изометрий"""
    suite = _Suite("isometry invariance")
    for k in range(samples):
        f = random_map(rng)
        p, q = random_point(rng), random_point(rng)
        u_, v_, w_, z_ = (complex(*rng.normal(size=2)) for _ in range(4))
        l1, l2 = Geodesic.between(u_, v_), Geodesic.between(w_, z_)
        m1 = Geodesic.between(apply_boundary(f, u_), apply_boundary(f, v_))
        m2 = Geodesic.between(apply_boundary(f, w_), apply_boundary(f, z_))
        fp, fq = apply_halfspace(f, p), apply_halfspace(f, q)
        c1, c2 = random_crossing_pair(rng)
        pairs = [
            ("dist", dist(p, q), dist(fp, fq)),
            ("dist_point_geodesic", dist_point_geodesic(p, l1), dist_point_geodesic(fp, m1)),
            ("dist_geodesics", dist_geodesics(l1, l2), dist_geodesics(m1, m2)),
            ("angle_between", angle_between(c1, c2), angle_between(apply_circle(f, c1), apply_circle(f, c2))),
        ]
        for name, before, after in pairs:
            suite.check(_close(before, after, tol), f"sample {k}: {name} {before!r} -> {after!r}")
    return suite.result()


def covering_suite(samples: int, rng: np.random.Generator, tol: float = 1e-8) -> SuiteResult:
    """φ(x, r) = φ(−x, π − r)"""
    suite = _Suite("covering map")
    for k in range(samples):
        x = rng.normal(size=3)
        r = rng.uniform(0.05, math.pi - 0.05)
        suite.check(covering_phi(x, r).is_close(covering_phi(-x, math.pi - r), tol), f"sample {k}: r={r:.6f}")
    return suite.result()


def packing_suite(depth: int, tol: float = 1e-9) -> SuiteResult:
    """Аполлониева упаковка: круги не пересекаются, четверки удовлетворяют тождеству Декарта"""
    suite = _Suite("apollonian packing")
    packing = generate_packing(apollonian_fixture(depth=depth, min_radius=1e-4))
    bad = packing_violations(packing, tol)
    suite.check(not bad, f"overlapping disks: {bad[:3]}")
    quadruples = descartes_quadruples(packing)
    suite.check(bool(quadruples), "no tangent quadruples found")
    for quad, residual in quadruples:
        suite.check(residual <= tol, f"quadruple {quad}: Descartes residual {residual:.3e}")
    for k, (found, expected) in enumerate(zip(dual_circles(packing.spec.seed), packing.spec.dual_circles)):
        suite.check(found.is_close(expected), f"dual circle {k} misses the seed tangencies")
    return suite.result()


def random_near(eta: np.ndarray, angle: float, rng: np.random.Generator) -> np.ndarray:
    """Точка сферы на угловом расстоянии angle от η в случайном направлении"""
    v = rng.normal(size=3)
    v -= (v @ eta) * eta
    v /= np.linalg.norm(v)
    x = math.cos(angle) * eta + math.sin(angle) * v
    return x / np.linalg.norm(x)


def annulus_suite(samples: int, rng: np.random.Generator) -> SuiteResult:
    """
    Окружности φ(x, d) с x рядом с η и d в (r − ε + δ, r + ε − δ) лежат
    в ε-кольце вокруг окружности с шапкой (η, r) для обеих сторон.
    """
    suite = _Suite("annulus inclusion")
    circles = []
    for spec in (apollonian_fixture(depth=0), strip_fixture(depth=0)):
        circles += [d.circle for d in spec.seed] + list(spec.dual_circles)
    for k, c in enumerate(circles):
        cap = Disk(c, 1).to_cap()
        r = cap.radius
        eps = 0.5 * min(r, math.pi - r)
        delta = eps / 4
        misses = 0
        for _ in range(samples):
            x = random_near(cap.center, rng.uniform(0.0, delta / 2), rng)
            d = covering_phi(x, rng.uniform(r - eps + delta, r + eps - delta))
            if not (annulus_contains(d, c, eps, side=1) and annulus_contains(d, c, eps, side=-1)):
                misses += 1
        suite.check(misses == 0, f"circle {k}: {misses} of {samples} samples outside the annulus")
    return suite.result()


def brute_force_witness(t_set: GapSet, K: float, grid: np.ndarray) -> bool:
    """Есть ли на сетке t, для которого оба окна [t, Kt] и [−Kt, −t] лежат в лакунах"""
    if not t_set.gaps:
        return False
    starts = np.array([a for a, _ in t_set.gaps])
    ends = np.array([b for _, b in t_set.gaps])

    def covered(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        k = np.searchsorted(starts, lo, side="left") - 1
        safe = np.clip(k, 0, None)
        return (k >= 0) & (starts[safe] < lo) & (hi < ends[safe])

    grid = grid[grid >= t_set.resolution]
    return bool(np.any(covered(grid, K * grid) & covered(-K * grid, -grid)))


def random_gap_set(rng: np.random.Generator, t_max: float = 100.0) -> GapSet:
    """Случайные лакуны на окне [−t_max, t_max] с узлами, равномерными по log|t|"""
    count = int(rng.integers(2, 12))
    nodes = np.sort(np.exp(rng.uniform(math.log(1e-3), math.log(t_max), size=2 * count)))
    signs = rng.choice((-1.0, 1.0), size=count)
    gaps = [
        (a, b) if s > 0 else (-b, -a)
        for (a, b), s in zip(zip(nodes[::2], nodes[1::2]), signs)
    ]
    return GapSet.from_gaps(gaps, (-t_max, t_max))


def thickness_suite(sets: int, grid_size: int, rng: np.random.Generator) -> SuiteResult:
    """Точный интервальный алгоритм против перебора по сетке t"""
    suite = _Suite("K-thickness")
    example = GapSet.from_gaps([(-100.0, -1.0), (1.0, 100.0)], (-1000.0, 1000.0))
    report = k_thick_test(example, 2.0)
    suite.check(report.verdict == ThicknessVerdict.NOT_THICK.value and report.witness == 2.0, f"gaps ±(1,100): {report}")
    suite.check(max_thickness(example) == 100.0, "gaps ±(1,100): threshold 100")
    empty = GapSet.from_gaps([], (-1000.0, 1000.0))
    suite.check(k_thick_test(empty, 2.0).verdict == ThicknessVerdict.THICK.value, "no gaps: thick")

    grid = np.exp(np.linspace(math.log(1e-4), math.log(100.0), grid_size))
    for k in range(sets):
        t_set = random_gap_set(rng)
        K = float(rng.choice((1.5, 2.0, 10.0)))
        exact = k_thick_test(t_set, K)
        if exact.verdict == ThicknessVerdict.NOT_THICK.value:
            suite.check(is_witness(t_set, exact.witness, K), f"set {k}: witness {exact.witness} fails for K={K}")
        else:
            suite.check(not brute_force_witness(t_set, K, grid), f"set {k}: scan finds a witness for K={K}")
    return suite.result()


def symmetrization_suite(ks=(2.0, 10.0, 100.0)) -> SuiteResult:
    """Свидетели нетолщины из четверок окружностей C_n полосной упаковки"""
    suite = _Suite("symmetrization")
    packing = generate_packing(strip_fixture(depth=1))
    records = strip_quadruples(packing, n_values=(4, 8, 16, 32, 64))
    report = symmetrization_ratios([r.quadruple for r in records], ks)
    for w in report.witnesses:
        suite.check(w.row is not None and w.verified, f"K={w.K}: no verified witness")
    return suite.result()


def angles_suite(n_max: int, d_threshold: Optional[float] = None) -> SuiteResult:
    """cos ρ_n = 2a/n, θ_n ≥ 0.5, d_n убывает до d_threshold"""
    suite = _Suite("angles")
    packing = generate_packing(strip_fixture(depth=1))
    table = angles_experiment(packing, n_values=range(10, n_max + 1), d_threshold=d_threshold)
    for row in table.rows:
        if row.skipped is None:
            suite.check(abs(row.cos_rho - row.expected_cos) <= 1e-9, f"n={row.n}: cos {row.cos_rho} vs {row.expected_cos}")
    for trend in table.trends:
        suite.check(trend.holds, f"trend failed: {trend.name}")
    return suite.result()


def dual_circle_suite(depth: int) -> SuiteResult:
    """Двойственная окружность пересекает Λ ровно в трех точках касания"""
    suite = _Suite("dual circle arcs")
    fx = dual_circle_fixture(depth=depth)
    packing = generate_packing(fx.spec)
    las = limit_arcset(fx.circle, packing, refine=depth)
    suite.check(las.intersection_class() == IntersectionClass.FINITE, f"class {las.intersection_class().value}")
    suite.check(len(las.parabolic_points) == 3, f"{len(las.parabolic_points)} parabolic points")
    suite.check(las.measures[-1] <= las.measures[0] / 5, f"measures {las.measures}")
    return suite.result()


def _guarded(name: str, run: Callable[[], SuiteResult]) -> SuiteResult:
    started = time.perf_counter()
    try:
        result = run()
    except KlabError as exc:
        result = SuiteResult(name=name, passed=False, checks=0, failures=[f"{type(exc).__name__}: {exc.detail}"])
    logger.info("Набор %s: %s за %.2f с", name, "ok" if result.passed else "FAIL", time.perf_counter() - started)
    return result


def run_selftest(quick: bool = False, seed: int = 0) -> SelftestReport:
    rng = np.random.default_rng(seed)
    samples = 100 if quick else 1000
    suites = [
        _guarded("isometry invariance", lambda: isometry_suite(samples, rng)),
        _guarded("covering map", lambda: covering_suite(samples, rng)),
        _guarded("apollonian packing", lambda: packing_suite(3 if quick else 4)),
        _guarded("K-thickness", lambda: thickness_suite(20 if quick else 200, 10_000 if quick else 100_000, rng)),
        _guarded("symmetrization", symmetrization_suite),
        _guarded("annulus inclusion", lambda: annulus_suite(100 if quick else 1000, rng)),
        _guarded("angles", lambda: angles_suite(200) if quick else angles_suite(10_000, 1e-2)),
        _guarded("dual circle arcs", lambda: dual_circle_suite(3 if quick else 5)),
    ]
    return SelftestReport(passed=all(s.passed for s in suites), suites=suites)
