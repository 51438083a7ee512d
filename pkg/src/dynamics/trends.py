# src/dynamics/trends
"""
Проверка трендов в конечных последовательностях: сравнение средних по
первому и последнему дециль-окну с коэффициентом и порогом.
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from src.core.config import TREND_FACTOR
from src.core.errors import DegenerateInputError
from src.schemas.report_schemas import TrendCheck


@dataclass(frozen=True)
class TrendResult:
    holds: bool
    first_mean: float
    last_mean: float
    final: float

    def to_check(self, name: str) -> TrendCheck:
        return TrendCheck(
            name=name, holds=self.holds, first_mean=self.first_mean, last_mean=self.last_mean, final=self.final
        )


def assess_trend(
    values: Sequence[float],
    decreasing: bool,
    factor: float = TREND_FACTOR,
    threshold: Optional[float] = None,
) -> TrendResult:
    """
    Убывающий тренд: среднее первого дециля ≥ factor × среднее последнего
    и последнее значение < threshold. Возрастающий - симметрично.
    """
    data = np.asarray([v for v in values if v is not None], dtype=float)
    if len(data) < 2:
        raise DegenerateInputError("trend needs at least two values")
    k = max(1, len(data) // 10)
    first, last, final = float(data[:k].mean()), float(data[-k:].mean()), float(data[-1])
    if decreasing:
        holds = first >= factor * last and (threshold is None or final < threshold)
    else:
        holds = last >= factor * first and (threshold is None or final > threshold)
    return TrendResult(holds, first, last, final)


def is_monotone(values: Sequence[float], decreasing: bool = True, strict: bool = True) -> bool:
    pairs = list(zip(values, values[1:]))
    if decreasing:
        return all(b < a if strict else b <= a for a, b in pairs)
    return all(b > a if strict else b >= a for a, b in pairs)
