# src/core/errors
"""
Иерархия исключений klab.

Каждое исключение несет человекочитаемое поле detail и код выхода CLI,
подобно HTTPException(status_code, detail).
"""
from typing import Optional, Sequence


class KlabError(Exception):
    """Базовая ошибка библиотеки"""

    exit_code: int = 1

    def __init__(self, detail: str, exit_code: Optional[int] = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code

    def to_dict(self) -> dict:
        return {
            "error": type(self).__name__,
            "detail": self.detail,
            "exit_code": self.exit_code,
        }


class DegenerateInputError(KlabError):
    """Вырожденные входные данные (совпавшие точки, тождество, вырожденный базис)"""

    exit_code = 2


class DomainError(KlabError):
    """Аргумент вне области определения"""

    exit_code = 3


class InvariantViolationError(KlabError):
    """Нарушение инварианта упаковки при генерации"""

    exit_code = 4

    def __init__(self, detail: str, word: Sequence[int] = ()):
        self.word = list(word)
        super().__init__(f"{detail} (word={self.word})")

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["word"] = self.word
        return data


class BudgetExceededError(KlabError):
    """Превышен бюджет перечисления элементов"""

    exit_code = 5


class NotATangencyError(KlabError):
    """Точка не является точкой касания упаковки"""

    exit_code = 6
