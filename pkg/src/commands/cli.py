# src/commands/cli
"""
Команды CLI klab: генерация упаковок, орбиты, толщина множеств возвратов,
эксперимент с углами, поиск B_k, рисунки и самопроверка.

Ошибки библиотеки и ошибки валидации входных файлов печатаются как JSON
отчет ErrorReport, процесс завершается кодом ошибки.
"""
import csv
import functools
import json
import logging
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

import click
from pydantic import BaseModel, ValidationError

from src.core.config import ALGEBRAIC_TOL, APP_VERSION, T_MAX
from src.core.errors import InvariantViolationError, KlabError
from src.dynamics.orbits import (
    accumulation_detector,
    bk_scan,
    discreteness_report,
    enumerate_group,
    orbit_of_circle,
    stabilizer_search,
)
from src.dynamics.recurrence import FrameSpec, angles_experiment, return_time_set, thickness_summary
from src.packing.arcs import limit_arcset
from src.packing.fixtures import FIXTURES, dual_circle_fixture, strip_fixture
from src.packing.packing import CirclePacking, PackingSpec, descartes_quadruples, generate_packing, packing_violations
from src.packing.render import render_svg
from src.schemas.geometry_schemas import (
    BkScanRequestJSON,
    ExperimentConfig,
    GapSetJSON,
    OrbitJSON,
    OrbitRequestJSON,
    OrbitResultJSON,
    PackingJSON,
    PackingSpecJSON,
    ThicknessRequestJSON,
    ThicknessResultJSON,
)
from src.schemas.report_schemas import ErrorReport
from src.utils.report_viewer import print_selftest, print_thickness

logger = logging.getLogger(__name__)

# код выхода для некорректного JSON
VALIDATION_EXIT_CODE = 2


def handle_errors(command: Callable) -> Callable:
    """Перевод KlabError и ValidationError в JSON отчет и ненулевой код выхода"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KlabError as exc:
            report = ErrorReport(**exc.to_dict())
        except ValidationError as exc:
            report = ErrorReport(
                error="ValidationError",
                detail=json.dumps(exc.errors(include_url=False), default=str),
                exit_code=VALIDATION_EXIT_CODE,
            )
        except json.JSONDecodeError as exc:
            report = ErrorReport(error="JSONDecodeError", detail=str(exc), exit_code=VALIDATION_EXIT_CODE)
        logger.error("❌ %s: %s", report.error, report.detail)
        click.echo(report.model_dump_json(indent=2))
        sys.exit(report.exit_code)

    return wrapper


def _emit(model: BaseModel, out: Optional[Path]) -> None:
    text = model.model_dump_json(indent=2)
    if out is None:
        click.echo(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info("💾 Записано: %s", out)


def _write_svg(svg: str, path: Path) -> None:
    path.write_text(svg, encoding="utf-8")
    logger.info("🖼 SVG: %s", path)


def _load_packing_spec(
    spec_file: Optional[Path],
    fixture: Optional[str],
    depth: Optional[int],
    min_radius: Optional[float],
) -> PackingSpecJSON:
    if spec_file is not None:
        spec = PackingSpecJSON.model_validate_json(spec_file.read_text(encoding="utf-8"))
    elif fixture is not None:
        spec = PackingSpecJSON(fixture=fixture)
    else:
        raise click.UsageError("either SPEC_FILE or --fixture is required")
    updates = {}
    if depth is not None:
        updates["depth"] = depth
    if min_radius is not None:
        updates["min_radius"] = min_radius
    return PackingSpecJSON.model_validate({**spec.model_dump(), **updates})


def _build_packing(spec: PackingSpec, tol: float = ALGEBRAIC_TOL) -> CirclePacking:
    spec.tol = tol
    packing = generate_packing(spec)
    bad = packing_violations(packing, tol)
    if bad:
        i, j, overlap = bad[0]
        raise InvariantViolationError(f"disks {i} and {j} overlap by {overlap:.3e}", packing.words[j])
    return packing


fixture_option = click.option(
    "--fixture", type=click.Choice(sorted(FIXTURES)), default=None, help="Готовая конфигурация"
)
out_option = click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Файл вывода")


@click.group()
@click.version_option(APP_VERSION, prog_name="klab")
def cli():
    """klab: динамика окружностей для клейновых групп с упаковками окружностей"""


@cli.command("gen-packing")
@click.argument("spec_file", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@fixture_option
@click.option("--depth", type=click.IntRange(min=0), default=None, help="Глубина слов")
@click.option("--min-radius", type=click.FloatRange(min=0, min_open=True), default=None, help="Отсечка радиуса")
@click.option("--tol", type=click.FloatRange(min=0, min_open=True), default=ALGEBRAIC_TOL, help="Допуск касаний")
@out_option
@click.option("--svg", type=click.Path(dir_okay=False, path_type=Path), default=None, help="SVG-рисунок")
@handle_errors
def gen_packing(spec_file, fixture, depth, min_radius, tol, out, svg):
    """Упаковка по описанию SPEC_FILE или по готовой конфигурации"""
    spec = _load_packing_spec(spec_file, fixture, depth, min_radius)
    packing = _build_packing(spec.to_domain(), tol)
    worst = max((r for _, r in descartes_quadruples(packing)), default=0.0)
    logger.info("📊 Кругов: %d, касаний: %d, невязка Декарта ≤ %.2e", len(packing.disks), len(packing.tangencies), worst)
    if svg is not None:
        _write_svg(render_svg(packing, title=packing.spec.name), svg)
    _emit(PackingJSON.from_domain(packing), out)


@cli.command("orbit")
@click.argument("request_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--word-length", type=click.IntRange(min=0), default=4, show_default=True, help="Длина слов шара")
@out_option
@click.option("--svg", type=click.Path(dir_okay=False, path_type=Path), default=None, help="SVG-рисунок орбиты")
@handle_errors
def orbit(request_file, word_length, out, svg):
    """Орбита окружности: дискретность, стабилизатор, C ∩ Λ и детектор накопления"""
    request = OrbitRequestJSON.model_validate_json(request_file.read_text(encoding="utf-8"))
    packing = _build_packing(request.packing.to_domain())
    circle = request.circle.to_domain()
    ball = enumerate_group(packing.spec.generators, word_length)
    record = orbit_of_circle(circle, ball)
    result = OrbitResultJSON(
        orbit=OrbitJSON.from_domain(record),
        discreteness=discreteness_report(record, request.center.to_domain(), request.radius),
        stabilizer_words=[list(e.word) for e in stabilizer_search(circle, ball)],
        limit_arcset=limit_arcset(circle, packing).to_schema(),
        accumulation=accumulation_detector(record, packing),
    )
    if svg is not None:
        _write_svg(render_svg(packing, orbit=record.circles, title="orbit"), svg)
    _emit(result, out)


@cli.command("thickness")
@click.argument("request_file", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@fixture_option
@click.option("--K", "ks", type=float, multiple=True, help="Значения K > 1, можно несколько раз")
@click.option("--t-max", type=float, default=T_MAX, show_default=True, help="Полуширина окна")
@click.option("--depth", type=click.IntRange(min=0), default=None, help="Глубина упаковки")
@out_option
@handle_errors
def thickness(request_file, fixture, ks, t_max, depth, out):
    """Множество возвратов кадра и K-толщина при заданных K"""
    config = ExperimentConfig(K_values=list(ks) or [2.0, 10.0, 100.0], t_max=t_max)
    if request_file is not None:
        request = ThicknessRequestJSON.model_validate_json(request_file.read_text(encoding="utf-8"))
        spec = request.packing if depth is None else request.packing.model_copy(update={"depth": depth})
        packing = _build_packing(spec.to_domain())
        frame = request.frame.to_domain()
    elif fixture == "dual-circle":
        fx = dual_circle_fixture(**({} if depth is None else {"depth": depth}))
        packing = _build_packing(fx.spec)
        frame = FrameSpec(fx.circle, fx.x_minus, fx.x_plus)
    else:
        raise click.UsageError("thickness needs REQUEST_FILE or --fixture dual-circle")
    t_set = return_time_set(frame, packing, config.t_max)
    result = ThicknessResultJSON(
        return_times=GapSetJSON.from_domain(t_set),
        summary=thickness_summary(t_set, config.K_values),
    )
    for report in result.summary.reports:
        logger.info("K = %g: %s (t = %s)", report.K, report.verdict, report.witness)
    _emit(result, out)
    if out is not None:
        print_thickness(result.summary)


ANGLES_COLUMNS = ("n", "theta", "complement", "cos_rho", "expected_cos", "chord", "apex_height", "d_n", "skipped")


def write_angles_csv(rows: Sequence, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow(ANGLES_COLUMNS)
    for row in rows:
        data = row.model_dump()
        writer.writerow(["" if data[c] is None else data[c] for c in ANGLES_COLUMNS])


@cli.command("angles-demo")
@click.option("--n-max", type=click.IntRange(min=4), default=200, show_default=True, help="Наибольшее n")
@click.option("--depth", type=click.IntRange(min=0), default=1, show_default=True, help="Глубина полосной упаковки")
@out_option
@handle_errors
def angles_demo(n_max, depth, out):
    """Таблица углов θ_n и расстояний d_n в полосной упаковке (CSV)"""
    config = ExperimentConfig(n_max=n_max)
    packing = generate_packing(strip_fixture(depth=depth))
    table = angles_experiment(packing, n_values=range(3, config.n_max + 1))
    for trend in table.trends:
        logger.info("%s %s", "✅" if trend.holds else "⚠️", trend.name)
    if out is None:
        write_angles_csv(table.rows, sys.stdout)
    else:
        with out.open("w", newline="", encoding="utf-8") as f:
            write_angles_csv(table.rows, f)
        logger.info("💾 Записано: %s", out)


@cli.command("bk-scan")
@click.argument("request_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--word-length", type=click.IntRange(min=0), default=2, show_default=True, help="Длина слов для классов")
@click.option("--eps", type=click.FloatRange(min=0, min_open=True), default=1e-3, show_default=True, help="Ширина кольца")
@out_option
@handle_errors
def bk_scan_command(request_file, word_length, eps, out):
    """Кандидаты в B_k: ровно k точек C ∩ Λ и устойчивость к возмущениям"""
    request = BkScanRequestJSON.model_validate_json(request_file.read_text(encoding="utf-8"))
    config = ExperimentConfig(word_length=word_length, eps=eps)
    packing = _build_packing(request.packing.to_domain())
    generators = [g.to_domain() for g in request.generators] or packing.spec.generators
    ball = enumerate_group(generators, config.word_length)
    report = bk_scan(packing, request.k, [c.to_domain() for c in request.candidates], eps=config.eps, ball=ball)
    _emit(report, out)


@cli.command("render")
@click.argument("json_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--packing", "packing_file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="Упаковка-фон для орбиты")
@click.option("--width", type=click.IntRange(min=16), default=800, show_default=True)
@out_option
@handle_errors
def render(json_file, packing_file, width, out):
    """SVG из JSON упаковки или орбиты"""
    data = json.loads(json_file.read_text(encoding="utf-8"))
    if "disks" in data:
        packing = PackingJSON.model_validate(data).to_domain()
        svg = render_svg(packing, width=width, title=packing.spec.name)
    else:
        if "orbit" in data:
            data = data["orbit"]
        record = OrbitJSON.model_validate(data).to_domain()
        background = None
        if packing_file is not None:
            background = PackingJSON.model_validate_json(packing_file.read_text(encoding="utf-8")).to_domain()
        svg = render_svg(background, orbit=record.circles, width=width, title="orbit")
    if out is None:
        click.echo(svg)
    else:
        _write_svg(svg, out)


@cli.command("selftest")
@click.option("--quick", is_flag=True, help="Уменьшенные выборки")
@click.option("--seed", type=int, default=0, show_default=True)
@out_option
@handle_errors
def selftest(quick, seed, out):
    """Наборы проверок инвариантов; код выхода 0, если все прошли"""
    from src.commands.selftest import run_selftest

    report = run_selftest(quick=quick, seed=seed)
    print_selftest(report)
    if out is not None:
        _emit(report, out)
    sys.exit(0 if report.passed else 1)
