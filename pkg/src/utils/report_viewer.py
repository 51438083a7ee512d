# src/utils/report_viewer
"""
Утилита для просмотра отчетов klab в терминале
"""
import json
import sys
from pathlib import Path

from src.schemas.report_schemas import SelftestReport, ThicknessSummary


def print_selftest(report: SelftestReport) -> None:
    """Вывести итоги самопроверки по наборам"""
    print("=" * 80)
    print("САМОПРОВЕРКА KLAB")
    print("=" * 80)
    for suite in report.suites:
        mark = "✅" if suite.passed else "❌"
        print(f"\n{mark} Набор: {suite.name}")
        print(f"   📊 Проверок: {suite.checks}")
        if suite.failures:
            print(f"   ⚠️ Провалы ({len(suite.failures)}):")
            for failure in suite.failures:
                print(f"      • {failure}")
    print("-" * 80)
    print("ИТОГ:", "все наборы прошли" if report.passed else "есть провалы")


def print_thickness(summary: ThicknessSummary) -> None:
    """Вывести вердикты K-толщины"""
    lo, hi = summary.window
    print(f"📚 Лакун: {summary.gap_count}, окно [{lo:g}, {hi:g}]")
    if summary.threshold is None:
        print("   🔑 Порог K*: не найден (не толстое ни при каком K из диапазона)")
    else:
        print(f"   🔑 Порог K*: {summary.threshold:g}")
    for report in summary.reports:
        print(f"      • K = {report.K:g}: {report.verdict}", end="")
        if report.witness is not None:
            print(f" → t = {report.witness:g}")
        else:
            print()


if __name__ == "__main__":
    data = json.loads(Path(sys.argv[1]).read_text(encoding="utf-8"))
    if "suites" in data:
        print_selftest(SelftestReport.model_validate(data))
    else:
        print_thickness(ThicknessSummary.model_validate(data.get("summary", data)))
