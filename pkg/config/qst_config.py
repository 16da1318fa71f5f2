#!/usr/bin/env python3
"""
QST Field Configuration
Значения по умолчанию для квадратур, кэша пропагаторов, лимитов сложности и сканов
"""

import os
from typing import Any, Dict

# Радиальная квадратура и Монте-Карло
QUADRATURE_DEFAULTS = {
    "nodes": 256,              # узлы Гаусса–Лежандра в радиальном интеграле
    "p_max_sigmas": 40.0,      # W: хвост подынтегрального выражения ≤ e^{-W}
    "mc_samples": 200_000,
    "seed": 20240601,
    "oracle_nodes": 512,       # для перекрестных проверок
    "tensor_nodes": 12,        # узлы на координату в тензорном методе
    "chunk_size": 20_000,      # размер блока MC (одна подпоследовательность RNG на блок)
    "sampler": "radial",       # radial | uniform
}

# Кэш значений пропагаторов
CACHE_CONFIG = {
    "enabled": True,
    "quantum": 1e-9,           # шаг округления ключей (t, u, r)
    "max_entries": 500_000,
}

# Лимиты сложности; превышение -> ComplexityGuardError
GUARDS = {
    "max_order": 4,
    "max_bogoliubov_order_quartic": 3,
    "max_degree": 16,
    "max_partition": 6,
    "max_tensor_dimension": 8,
    "max_tensor_points": 4_000_000,
    "max_commutator_order": 2,
    "max_kms_truncation": 1,
    "max_kms_order": 2,
    "max_canonical_permutations": 720,
}

# Сканы по радиусу, β и времени
SCAN_DEFAULTS = {
    "tolerance": 0.01,
    "radii": [2.0, 4.0, 8.0, 16.0],
    "betas": [2.0, 4.0, 8.0],
    "times": [0.25, 0.5, 1.0],
    "kms_u_nodes": 12,
    "simplex_nodes": 12,
}

# Окна аппроксимации затухания (в единицах 1/m, пространственное - в единицах λ)
DECAY_WINDOWS = {
    "spatial": (5.0, 15.0),
    "temporal": (10.0, 100.0),
    "beta": (2.0, 8.0),
    "points": 16,
}

# Проверки verify
VERIFY_DEFAULTS = {
    "tol_scale": 1.0,
    "random_points": 200,
    "mc_samples": 200_000,
}

THREADS_ENV = "QSTFIELD_THREADS"


def get_thread_count() -> int:
    """Число рабочих потоков: QSTFIELD_THREADS или число CPU"""
    value = os.getenv(THREADS_ENV)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


def get_cache_config() -> Dict[str, Any]:
    """Настройки кэша с учетом переменных окружения"""
    config = dict(CACHE_CONFIG)
    enabled = os.getenv("QSTFIELD_CACHE")
    if enabled is not None:
        config["enabled"] = enabled.strip().lower() not in ("0", "false", "off", "no")
    quantum = os.getenv("QSTFIELD_CACHE_QUANTUM")
    if quantum:
        config["quantum"] = float(quantum)
    return config


def print_configuration_summary():
    """Вывод сводки конфигурации"""
    print("\n" + "=" * 80)
    print("⚛️  QST FIELD CONFIGURATION")
    print("=" * 80)

    print("\n📐 QUADRATURE:")
    for key, value in QUADRATURE_DEFAULTS.items():
        print(f"  • {key}: {value}")

    cache = get_cache_config()
    print("\n🗄️  PROPAGATOR CACHE:")
    print(f"  • Enabled: {cache['enabled']}")
    print(f"  • Key quantum: {cache['quantum']:g}")
    print(f"  • Max entries: {cache['max_entries']:,}")

    print("\n🛑 COMPLEXITY GUARDS:")
    for key, value in GUARDS.items():
        print(f"  • {key}: {value:,}")

    print("\n📈 SCANS:")
    print(f"  • Tolerance: {SCAN_DEFAULTS['tolerance']:.2%}")
    print(f"  • Radii: {SCAN_DEFAULTS['radii']}")
    print(f"  • Betas: {SCAN_DEFAULTS['betas']}")

    print(f"\n🧵 THREADS: {get_thread_count()} ({THREADS_ENV})")
    print("=" * 80)
