#!/usr/bin/env python3
"""
Иерархия исключений qstfield
Каждый класс соответствует одному коду выхода CLI (см. main.py)
"""

from typing import Optional


class QSTFieldError(Exception):
    """Базовое исключение пакета"""

    exit_code = 1


class ParameterError(QSTFieldError, ValueError):
    """Недопустимые параметры (λ ≤ 0, β у нетермального ядра и т.п.)"""

    exit_code = 3


class DomainError(QSTFieldError, ValueError):
    """Аргумент вне области определения (u > β, r = 0 у классического ядра, t < 0 у коцикла)"""

    exit_code = 3


class ComplexityGuardError(QSTFieldError):
    """Превышен один из лимитов сложности из GUARDS"""

    exit_code = 3

    def __init__(self, guard: str, message: str, limit: Optional[int] = None):
        self.guard = guard
        self.limit = limit
        super().__init__(f"[{guard}] {message}")


class NumericError(QSTFieldError, ArithmeticError):
    """NaN/Inf в подынтегральном выражении"""

    exit_code = 4


class UnderflowError(NumericError):
    """Значения в окне аппроксимации ниже 1e-300"""


class StructureError(QSTFieldError, AssertionError):
    """Нарушение структурных инвариантов графов (self-edge, компонента без наблюдаемой)"""

    exit_code = 4


class ScenarioError(QSTFieldError, ValueError):
    """Ошибка разбора или валидации файла сценария"""

    exit_code = 2
