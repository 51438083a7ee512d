# src/core/tolerance_index
"""
Индекс для дедупликации объектов с точностью до допуска.

Ключ объекта - вещественный вектор канонических коэффициентов. Вектор
проецируется на три фиксированных направления, проекции квантуются с шагом
сетки, и при поиске просматриваются все соседние ячейки (3^3 = 27), чтобы
близкие ключи на границе ячейки не терялись. Кандидаты проверяются по полной
sup-норме. При symmetric=True ключи v и -v считаются равными (представитель
определен с точностью до знака).
"""
import itertools
import logging
from typing import Dict, Generic, List, Optional, Tuple, TypeVar

import numpy as np

from src.core.config import EQUALITY_TOL, HASH_GRID
from src.core.errors import DomainError

logger = logging.getLogger(__name__)

T = TypeVar("T")

_NEIGHBOURS = list(itertools.product((-1, 0, 1), repeat=3))


def _projection(dim: int) -> np.ndarray:
    rng = np.random.default_rng(20240501 + dim)
    w = rng.uniform(0.1, 1.0, size=(3, dim))
    # строки нормированы по L1: проекция не увеличивает sup-расстояние
    return w / w.sum(axis=1, keepdims=True)


class ToleranceIndex(Generic[T]):
    """Хранилище элементов с поиском по ключу с допуском"""

    def __init__(
        self,
        dim: int,
        tol: float = EQUALITY_TOL,
        grid: float = HASH_GRID,
        symmetric: bool = False,
    ):
        if tol >= grid:
            raise DomainError("tol must be smaller than the hash grid")
        self.dim = dim
        self.tol = tol
        self.grid = grid
        self.symmetric = symmetric
        self._proj = _projection(dim)
        self._buckets: Dict[Tuple[int, int, int], List[int]] = {}
        self._keys: List[np.ndarray] = []
        self.items: List[T] = []

    def __len__(self) -> int:
        return len(self.items)

    def _cell(self, key: np.ndarray) -> Tuple[int, int, int]:
        q = np.floor(self._proj @ key / self.grid).astype(np.int64)
        return int(q[0]), int(q[1]), int(q[2])

    def _lookup(self, key: np.ndarray) -> Optional[int]:
        cx, cy, cz = self._cell(key)
        for dx, dy, dz in _NEIGHBOURS:
            for idx in self._buckets.get((cx + dx, cy + dy, cz + dz), ()):
                if np.max(np.abs(self._keys[idx] - key)) <= self.tol:
                    return idx
        return None

    def find(self, key: np.ndarray) -> Optional[int]:
        """Индекс ранее добавленного элемента с тем же ключом или None"""
        key = np.asarray(key, dtype=float)
        idx = self._lookup(key)
        if idx is None and self.symmetric:
            idx = self._lookup(-key)
        return idx

    def add(self, key: np.ndarray, item: T) -> Tuple[int, bool]:
        """Добавить элемент, если его ключ новый; вернуть (индекс, добавлен ли)"""
        key = np.asarray(key, dtype=float)
        idx = self.find(key)
        if idx is not None:
            logger.debug("Дубликат ключа, совпадение с элементом %d", idx)
            return idx, False
        idx = len(self.items)
        self._keys.append(key)
        self.items.append(item)
        self._buckets.setdefault(self._cell(key), []).append(idx)
        return idx, True
