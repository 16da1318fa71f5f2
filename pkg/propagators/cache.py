#!/usr/bin/env python3
"""
Кэш значений пропагаторов
Ключи - квантованные аргументы (t, u, r) плюс вид ядра и параметры квадратуры
"""

import logging
import threading
from typing import Dict, Hashable, Optional

from config.qst_config import get_cache_config

logger = logging.getLogger(__name__)


class PropagatorCache:
    """Кэш значений радиальных преобразований"""

    def __init__(self, quantum: float = 1e-9, max_entries: int = 500_000, enabled: bool = True):
        self.cache: Dict[Hashable, complex] = {}
        self.quantum = quantum
        self.max_entries = max_entries
        self.enabled = enabled
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()
        self._full_warned = False

    def quantize(self, value: float) -> int:
        return int(round(value / self.quantum))

    def get(self, key: Hashable) -> Optional[complex]:
        """Получение значения из кэша (чтение без блокировки)"""
        if not self.enabled:
            return None
        value = self.cache.get(key)
        if value is None:
            self.misses += 1
        else:
            self.hits += 1
        return value

    def set(self, key: Hashable, value: complex):
        """Запись; при заполнении новые ключи не добавляются"""
        if not self.enabled:
            return
        with self._lock:
            if len(self.cache) >= self.max_entries and key not in self.cache:
                if not self._full_warned:
                    logger.warning(f"⚠️ Propagator cache full ({self.max_entries:,} entries), new keys are not stored")
                    self._full_warned = True
                return
            self.cache[key] = value

    def clear(self):
        """Очистка кэша"""
        with self._lock:
            self.cache.clear()
            self.hits = 0
            self.misses = 0
            self._full_warned = False

    def get_stats(self) -> Dict[str, float]:
        total = self.hits + self.misses
        return {
            "entries": len(self.cache),
            "hits": self.hits,
            "misses": self.misses,
            "hit_rate": self.hits / total if total else 0.0,
            "enabled": self.enabled,
        }


def make_default_cache() -> PropagatorCache:
    config = get_cache_config()
    return PropagatorCache(quantum=config["quantum"], max_entries=config["max_entries"],
                           enabled=config["enabled"])


# Глобальный кэш пропагаторов
propagator_cache = make_default_cache()
