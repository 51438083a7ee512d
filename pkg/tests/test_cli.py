# tests/test_cli.py
import json

import pytest
from click.testing import CliRunner

from src.commands.cli import ANGLES_COLUMNS, cli

REAL_LINE_JSON = {"A": 0, "B": [0, 1], "C": 0}


@pytest.fixture
def runner():
    return CliRunner()


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


def test_version(runner):
    result = runner.invoke(cli, ["--version"])
    assert result.exit_code == 0
    assert "klab, version 1.0.0" in result.output


def test_gen_packing_fixture(runner, tmp_path):
    """Аполлониева упаковка глубины 1: четыре затравки и четыре образа."""
    result = runner.invoke(cli, ["gen-packing", "--fixture", "apollonian", "--depth", "1"])
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert len(data["disks"]) == 8
    assert data["spec"]["depth"] == 1

    out, svg = tmp_path / "packing.json", tmp_path / "packing.svg"
    result = runner.invoke(
        cli, ["gen-packing", "--fixture", "apollonian", "--depth", "1", "--out", str(out), "--svg", str(svg)]
    )
    assert result.exit_code == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))["disks"]) == 8
    assert "<circle" in svg.read_text(encoding="utf-8")


def test_gen_packing_needs_source(runner):
    result = runner.invoke(cli, ["gen-packing"])
    assert result.exit_code == 2


def test_gen_packing_invalid_json(runner, tmp_path):
    """Битый файл описания: отчет ValidationError и код 2."""
    spec = tmp_path / "spec.json"
    spec.write_text("{", encoding="utf-8")
    result = runner.invoke(cli, ["gen-packing", str(spec)])
    assert result.exit_code == 2
    assert json.loads(result.stdout)["error"] == "ValidationError"


def test_gen_packing_overlapping_seed(runner, tmp_path):
    """Пересекающиеся затравки: InvariantViolationError и код 4."""
    spec = write_json(
        tmp_path / "spec.json",
        {
            "seed": [
                {"circle": {"A": 1, "B": [0, 0], "C": -1}, "side": 1},
                {"circle": {"A": 1, "B": [-0.5, 0], "C": -0.75}, "side": 1},
            ]
        },
    )
    result = runner.invoke(cli, ["gen-packing", spec])
    assert result.exit_code == 4
    report = json.loads(result.stdout)
    assert report["error"] == "InvariantViolationError"
    assert report["exit_code"] == 4


def test_thickness_dual_circle(runner):
    """Для ℝ̂ при K = 2 находится свидетель t = 1/4, порога нет."""
    result = runner.invoke(
        cli, ["thickness", "--fixture", "dual-circle", "--K", "2", "--t-max", "100", "--depth", "2"]
    )
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    (report,) = data["summary"]["reports"]
    assert report["verdict"] == "not-thick"
    assert report["witness"] == pytest.approx(0.25)
    assert data["summary"]["threshold"] is None
    assert data["return_times"]["window"] == [-100.0, 100.0]


def test_thickness_summary_printed_with_out(runner, tmp_path):
    out = tmp_path / "thickness.json"
    result = runner.invoke(
        cli, ["thickness", "--fixture", "dual-circle", "--K", "2", "--t-max", "100", "--depth", "2", "--out", str(out)]
    )
    assert result.exit_code == 0
    assert "Порог K*: не найден" in result.stdout
    assert json.loads(out.read_text(encoding="utf-8"))["summary"]["reports"][0]["verdict"] == "not-thick"


def test_thickness_needs_source(runner):
    result = runner.invoke(cli, ["thickness"])
    assert result.exit_code == 2


def test_thickness_frame_off_circle(runner, tmp_path):
    """Точка кадра вне окружности: DomainError и код 3."""
    request = write_json(
        tmp_path / "request.json",
        {
            "frame": {"circle": REAL_LINE_JSON, "x_minus": [0, 1], "x_plus": [0, 0]},
            "packing": {"fixture": "apollonian", "depth": 1},
        },
    )
    result = runner.invoke(cli, ["thickness", request, "--t-max", "10"])
    assert result.exit_code == 3
    assert json.loads(result.stdout)["error"] == "DomainError"


def test_thickness_rejects_small_k(runner):
    result = runner.invoke(cli, ["thickness", "--fixture", "dual-circle", "--K", "1", "--depth", "1"])
    assert result.exit_code == 2
    assert json.loads(result.stdout)["error"] == "ValidationError"


def test_angles_demo(runner):
    """CSV: заголовок и строки для n = 3..20."""
    result = runner.invoke(cli, ["angles-demo", "--n-max", "20"])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0].split(",") == list(ANGLES_COLUMNS)
    assert len(lines) == 1 + 18
    assert lines[1].startswith("3,")


def test_orbit_and_render(runner, tmp_path):
    """Орбита ℝ̂: четыре окружности, конечное пересечение с Λ, отражение в стабилизаторе."""
    request = write_json(
        tmp_path / "request.json",
        {"circle": REAL_LINE_JSON, "packing": {"fixture": "dual-circle", "depth": 2}},
    )
    out = tmp_path / "orbit.json"
    result = runner.invoke(cli, ["orbit", request, "--word-length", "1", "--out", str(out)])
    assert result.exit_code == 0
    data = json.loads(out.read_text(encoding="utf-8"))
    assert len(data["orbit"]["entries"]) == 4
    assert data["limit_arcset"]["intersection_class"] == "finite"
    assert [3] in data["stabilizer_words"]
    assert data["discreteness"]["orbit_size"] == 4

    svg = tmp_path / "orbit.svg"
    result = runner.invoke(cli, ["render", str(out), "--out", str(svg)])
    assert result.exit_code == 0
    text = svg.read_text(encoding="utf-8")
    assert text.count("<circle") == 3
    assert text.count("<line") == 1


def test_bk_scan_rejects_small_k(runner, tmp_path):
    request = write_json(
        tmp_path / "request.json",
        {"packing": {"fixture": "apollonian", "depth": 1}, "k": 2, "candidates": [REAL_LINE_JSON]},
    )
    result = runner.invoke(cli, ["bk-scan", request])
    assert result.exit_code == 2


def test_selftest_report(runner, tmp_path):
    """Код выхода selftest согласован с итоговым отчетом."""
    out = tmp_path / "selftest.json"
    result = runner.invoke(cli, ["selftest", "--quick", "--out", str(out)])
    report = json.loads(out.read_text(encoding="utf-8"))
    assert len(report["suites"]) == 8
    assert result.exit_code == (0 if report["passed"] else 1)
    assert "САМОПРОВЕРКА KLAB" in result.stdout
