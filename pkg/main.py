#!/usr/bin/env python3
"""
QST Field - Основной скрипт запуска
Пропагаторы, проверки, ожидания и сканы для пертурбативной теории поля
на квантовом пространстве-времени
"""

import argparse
import json
import logging
import os
import sys
import traceback
from typing import Any, Dict, Optional

# Загружаем переменные окружения из .env файла
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

# Добавляем текущую директорию в путь для импортов
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import colorlog

from config.qst_config import (GUARDS, QUADRATURE_DEFAULTS, SCAN_DEFAULTS, VERIFY_DEFAULTS,
                               get_cache_config, get_thread_count, print_configuration_summary)
from config.scenario import ScenarioConfig, load_scenario
from model.cutoffs import CutoffSpec
from model.geometry import ModelParams
from perturbation.bogoliubov import bogoliubov
from perturbation.graphs import GRAPH_SERIES, build_series, write_graphs
from perturbation.interaction import Interaction
from propagators.diagnostics import parse_grid_spec, tabulate_propagator
from propagators.evaluator import evaluate_propagator, get_evaluator
from propagators.kinds import KernelFamily, PropagatorKind, QuadratureSpec
from states.evolution import evolution_scan
from states.expectation import adiabatic_scan, expectation, kms_scan
from states.integration import IntegrationResult
from states.kms import interacting_kms
from states.spec import ScanResult, StateKind
from utils.errors import ComplexityGuardError, ParameterError, QSTFieldError
from verification.suites import SUITES, report_to_json, run_suite

RUN_MODES = ("expect", "adiabatic-scan", "kms-scan", "interacting-kms", "evolve")
GRAPH_CUTOFFS = CutoffSpec(eps=0.5, T=1.0, R=2.0, delta=0.5)


# Настройка логирования
def setup_logging(log_level: str = 'INFO', log_file: Optional[str] = None):
    """Настройка системы логирования: цветная консоль (stderr) и опциональный файл"""

    level = getattr(logging, log_level.upper(), logging.INFO)
    log_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    datefmt = '%Y-%m-%d %H:%M:%S'

    root = logging.getLogger()
    root.setLevel(level)
    for handler in list(root.handlers):
        root.removeHandler(handler)

    console_handler = colorlog.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(colorlog.ColoredFormatter('%(log_color)s' + log_format, datefmt=datefmt))
    root.addHandler(console_handler)

    # Дополнительно логируем в файл если указан
    if log_file:
        file_handler = logging.FileHandler(log_file, mode='a', encoding='utf-8')
        file_handler.setLevel(level)
        file_handler.setFormatter(logging.Formatter(log_format, datefmt=datefmt))
        root.addHandler(file_handler)

    # Настраиваем логи для внешних библиотек
    for name in ('numexpr', 'matplotlib', 'urllib3'):
        logging.getLogger(name).setLevel(logging.WARNING)


def load_config() -> Dict[str, Any]:
    """Сводная конфигурация приложения"""
    return {
        'quadrature': dict(QUADRATURE_DEFAULTS),
        'cache': get_cache_config(),
        'guards': dict(GUARDS),
        'scan': dict(SCAN_DEFAULTS),
        'verify': dict(VERIFY_DEFAULTS),
        'threads': get_thread_count(),
        'log_level': 'INFO'
    }


def format_component(value: float) -> str:
    """1.5 -> '1.500000e0', 0 -> '0.000000e0' (без знака у нуля)"""
    mantissa, exponent = f"{value + 0.0:.6e}".split("e")
    return f"{mantissa}e{int(exponent)}"


def _emit(text: str, out: Optional[str] = None):
    """Результат в stdout и, если указан, в файл"""
    if out:
        with open(out, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    sys.stdout.flush()


class QSTFieldApp:
    """Приложение командной строки: одна команда - один метод cmd_*"""

    def __init__(self, config: Dict[str, Any]):
        self.config = config
        self.logger = logging.getLogger(self.__class__.__name__)
        self.spec = QuadratureSpec.from_dict(config.get('quadrature'))

    # ------------------------------------------------------------------
    # propagator
    # ------------------------------------------------------------------
    def cmd_propagator(self, args: argparse.Namespace) -> int:
        params = ModelParams(args.m, args.lam)
        kind = PropagatorKind.from_name(args.kind, args.beta)

        if args.table:
            grid = parse_grid_spec(args.table)
            grid.setdefault('t', [args.t])
            grid.setdefault('u', [args.u])
            grid.setdefault('r', [args.r])
            frame = tabulate_propagator(kind, params, grid, self.spec)
            self.logger.info(f"✅ Tabulated {kind.label} on {len(frame)} points")
            _emit(frame.to_csv(index=False, float_format="%.12e", lineterminator="\n"), args.out)
            return 0

        value = evaluate_propagator(kind, params, args.t, args.u, args.r, self.spec)
        self.logger.debug(f"🔍 {kind.label}(t={args.t}, u={args.u}, r={args.r}) = {value}")
        _emit(f"{format_component(value.real)} {format_component(value.imag)}", args.out)
        return 0

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------
    def cmd_verify(self, args: argparse.Namespace) -> int:
        self.logger.info(f"🚀 Verify suite '{args.suite}' (seed={args.seed}, tol-scale={args.tol_scale:g})")
        report = run_suite(args.suite, args.seed, args.tol_scale)
        _emit(report_to_json(report), args.out)

        failed = [c["name"] for c in report["checks"] if not c["passed"]]
        if failed:
            self.logger.error(f"❌ {len(failed)} check(s) failed: {', '.join(failed)}")
            return 1
        self.logger.info(f"✅ All {len(report['checks'])} checks passed")
        return 0

    # ------------------------------------------------------------------
    # run
    # ------------------------------------------------------------------
    def _run_result(self, scenario: ScenarioConfig, mode: str) -> Any:
        evaluator = get_evaluator(scenario.model, scenario.quadrature)
        cutoffs = scenario.cutoffs
        V = Interaction(scenario.degree, cutoffs)
        A = scenario.observable_functional()
        k = scenario.order
        spec = scenario.quadrature
        state = scenario.state()
        tolerance = scenario.scan.tolerance

        if mode == "interacting-kms":
            if state.kind is StateKind.DRESSED:
                raise ParameterError("interacting-kms needs a vacuum or thermal state")
            return interacting_kms(A, V, state.beta, evaluator, cutoffs, k, scenario.kms_truncation,
                                   scenario.method, spec, scenario.kms_u_nodes)
        if mode == "evolve":
            return evolution_scan(A, V, scenario.scan.times, evaluator, cutoffs, state, k, scenario.method,
                                  spec, tolerance, scenario.commutator_order, scenario.simplex_nodes)

        series = bogoliubov(V, A, k)
        if mode == "expect":
            return expectation(state, series, k, evaluator, cutoffs, scenario.method, spec)
        if mode == "adiabatic-scan":
            return adiabatic_scan(state, series, k, scenario.scan.radii, evaluator, cutoffs, scenario.method,
                                  spec, tolerance)
        return kms_scan(series, k, scenario.scan.betas, evaluator, cutoffs, scenario.method, spec, tolerance)

    def cmd_run(self, args: argparse.Namespace) -> int:
        scenario = load_scenario(args.scenario)
        self.logger.info(f"🚀 Run '{args.mode}' on {args.scenario} (seed={scenario.seed})")
        result = self._run_result(scenario, args.mode)

        if isinstance(result, ScanResult):
            status = "✅ converged" if result.converged else "⚠️ not converged"
            self.logger.info(f"{status} over {result.parameter_name} = {result.parameters}")
            _emit(result.to_csv(), args.out)
            return 0

        assert isinstance(result, IntegrationResult)
        payload = {
            "mode": args.mode,
            **result.to_dict(),
            "order": scenario.order,
            "seed": scenario.seed,
            "scenario": scenario.to_dict(),
        }
        _emit(json.dumps(payload, indent=2, ensure_ascii=False), args.out)
        return 0

    # ------------------------------------------------------------------
    # graphs
    # ------------------------------------------------------------------
    def cmd_graphs(self, args: argparse.Namespace) -> int:
        series = build_series(args.series, args.degree, args.order, GRAPH_CUTOFFS, args.observable_power)
        text = write_graphs(series, args.out)
        if not args.out:
            _emit(text)
        return 0

    def cmd_config(self, args: argparse.Namespace) -> int:
        print_configuration_summary()
        return 0

    def dispatch(self, args: argparse.Namespace) -> int:
        handler = getattr(self, f"cmd_{args.command}")
        return handler(args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qstfield', description='QST Field: perturbative QFT on quantum spacetime')
    parser.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        default='INFO', help='Уровень логирования')
    parser.add_argument('--log-file', help='Файл для логов')
    commands = parser.add_subparsers(dest='command', required=True)

    propagator = commands.add_parser('propagator', help='Значение или таблица пропагатора')
    propagator.add_argument('--kind', required=True, choices=[f.value for f in KernelFamily])
    propagator.add_argument('--m', type=float, required=True, help='Масса')
    propagator.add_argument('--lambda', dest='lam', type=float, required=True, help='Масштаб λ')
    propagator.add_argument('--t', type=float, default=0.0)
    propagator.add_argument('--u', type=float, default=0.0, help='Мнимое время (тепловые ядра)')
    propagator.add_argument('--r', type=float, default=0.0)
    propagator.add_argument('--beta', type=float)
    propagator.add_argument('--table', help="Сетка, например 't=0:1:5,r=0.5'")
    propagator.add_argument('--out', help='Файл результата')

    verify = commands.add_parser('verify', help='Наборы проверок')
    verify.add_argument('--suite', choices=SUITES, default='all')
    verify.add_argument('--tol-scale', type=float, default=VERIFY_DEFAULTS['tol_scale'])
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--out', help='Файл JSON-отчета')

    run = commands.add_parser('run', help='Расчет по сценарию')
    run.add_argument('--scenario', required=True, help='JSON-файл сценария')
    run.add_argument('--mode', choices=RUN_MODES, default='expect')
    run.add_argument('--out', help='Файл результата')

    graphs = commands.add_parser('graphs', help='Дамп графов ряда')
    graphs.add_argument('--series', choices=GRAPH_SERIES, required=True)
    graphs.add_argument('--degree', type=int, required=True)
    graphs.add_argument('--order', type=int, required=True)
    graphs.add_argument('--observable-power', type=int, default=1)
    graphs.add_argument('--out', help='Файл JSON')

    commands.add_parser('config', help='Сводка конфигурации')
    return parser


def main(argv: Optional[list] = None) -> int:
    """Основная функция; возвращает код выхода"""
    args = build_parser().parse_args(argv)

    setup_logging(args.log_level, args.log_file)
    logger = logging.getLogger('main')
    logger.debug(f"Command: {args.command}")

    try:
        config = load_config()
        config['log_level'] = args.log_level
        app = QSTFieldApp(config)
        return app.dispatch(args)
    except ComplexityGuardError as e:
        logger.error(f"❌ Complexity guard '{e.guard}' violated: {e}")
        return e.exit_code
    except QSTFieldError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        logger.debug(traceback.format_exc())
        return e.exit_code
    except OSError as e:
        logger.error(f"❌ I/O error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
