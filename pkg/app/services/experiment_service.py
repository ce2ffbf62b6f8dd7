"""Varredura (estimador x T x seed): gerar -> simular -> estimar -> pontuar."""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

from app.core.exceptions import BarError
from app.core.rng import RandomStreams
from app.crud.results import CsvResultRepository, summarize, write_gnuplot, write_summary
from app.interfaces.data_interfaces import ExperimentPipeline
from app.models.estimate import OptimizerOptions
from app.models.experiment import ExperimentConfig
from app.services.estimation_service import get_estimator
from app.services.evaluation_service import evaluate_estimate
from app.services.simulation_service import generate_graph, simulate
from app.services.stats_service import count_transitions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentCell:
    estimator: str
    T: int
    seed: int


@dataclass(frozen=True)
class ExperimentOutcome:
    results_path: str
    summary_path: str
    plot_path: str
    rows: List[Dict[str, Any]]


def experiment_cells(config: ExperimentConfig) -> List[ExperimentCell]:
    """Células na ordem determinística (estimador, T, seed)"""
    return [
        ExperimentCell(estimator, T, seed)
        for estimator in config.estimators
        for T in config.T_grid
        for seed in config.seeds
    ]


class NetworkRecoveryPipeline(ExperimentPipeline):
    """Uma célula do experimento.

    A rede verdadeira depende só de (master_seed, seed) e a trajetória de
    (master_seed, seed, T): todos os estimadores veem os mesmos dados.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.streams = RandomStreams(config.master_seed)
        self.space = config.space_config()
        self.generic = config.variant == "generic"
        solver = {"solver": config.solver} if config.solver else {}
        self.opts = OptimizerOptions(**solver)

    def extract(self, cell: Dict[str, Any]) -> Dict[str, Any]:
        graph_seed = self.streams.child_seed("graph", cell["seed"])
        trajectory_seed = self.streams.child_seed("trajectory", cell["seed"], cell["T"])
        truth = generate_graph(self.config.graph_spec(), self.space, graph_seed)
        traj = simulate(truth, cell["T"], self.config.initial, trajectory_seed)
        return {**cell, "truth": truth, "counts": count_transitions(traj)}

    def transform(self, data: Dict[str, Any]) -> Dict[str, Any]:
        estimator = get_estimator(data["estimator"], generic=self.generic, opts=self.opts,
                                  shared_noise=self.config.shared_noise)
        started = time.perf_counter()
        result = estimator.estimate(data["counts"], self.space)
        elapsed = (time.perf_counter() - started) * 1000.0
        report = evaluate_estimate(result.params, data["truth"], self.config.a_min, self.config.c_thresh)
        return {**data, "result": result, "report": report, "runtime_ms": elapsed}

    def _base_row(self, cell: Dict[str, Any]) -> Dict[str, Any]:
        return {
            "variant": self.config.variant,
            "estimator": cell["estimator"],
            "p": self.config.p,
            "d_max": self.config.d_max,
            "T": cell["T"],
            "seed": cell["seed"],
        }

    def load(self, data: Dict[str, Any]) -> Dict[str, Any]:
        report = data["report"]
        errors = report.errors
        return {
            **self._base_row(data),
            "f1": report.f1,
            "precision": report.precision,
            "recall": report.recall,
            "max_abs_err_A": errors.max_abs_A,
            "frob_err_A": errors.frob_A,
            "err_b": errors.max_abs_b,
            "err_rho": errors.max_abs_rho,
            "converged": data["result"].converged,
            "runtime_ms": round(data["runtime_ms"], 3) if self.config.record_runtime else None,
            "error": None,
        }

    def execute(self, cell: Dict[str, Any]) -> Dict[str, Any]:
        try:
            return self.load(self.transform(self.extract(cell)))
        except (BarError, ValueError) as e:
            logger.warning(f"⚠️ Célula {cell} falhou: {e}")
            return {**self._base_row(cell), "error": f"{type(e).__name__}: {e}"}


def _run_cell(config_payload: Dict[str, Any], cell: ExperimentCell) -> Dict[str, Any]:
    """Ponto de entrada dos processos do pool (argumentos serializáveis)"""
    config = ExperimentConfig.model_validate(config_payload)
    pipeline = NetworkRecoveryPipeline(config)
    return pipeline.execute({"estimator": cell.estimator, "T": cell.T, "seed": cell.seed})


def provenance_lines(config: ExperimentConfig) -> List[str]:
    return [
        f"variant={config.variant} p={config.p} d_max={config.d_max} master_seed={config.master_seed}",
        f"defaults: a_min={config.a_min} b_min={config.b_min} rho_min={config.rho_min} "
        f"rho_max={config.rho_max} c_thresh={config.c_thresh} initial={config.initial.kind}",
        f"estimators={','.join(config.estimators)} T_grid={','.join(map(str, config.T_grid))} "
        f"seeds={','.join(map(str, config.seeds))}",
    ]


def run_cells(config: ExperimentConfig, workers: Optional[int] = None) -> List[Dict[str, Any]]:
    workers = config.workers if workers is None else workers
    cells = experiment_cells(config)
    payload = config.model_dump(mode="json")
    logger.info(f"🧪 Experimento: {len(cells)} células, {workers} processo(s)")
    if workers <= 1:
        return [_run_cell(payload, cell) for cell in cells]
    # map devolve na ordem de submissão, independente da ordem de término
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_cell, [payload] * len(cells), cells))


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> ExperimentOutcome:
    rows = run_cells(config, workers)
    out = Path(config.output_dir)
    header = provenance_lines(config)

    results_path = CsvResultRepository(out / "results.csv", header).save(rows)
    summary = summarize(rows)
    summary_path = write_summary(summary, out / "summary.csv", header)
    plot_path = write_gnuplot(summary, out / "f1.dat")

    failed = sum(1 for row in rows if row.get("error"))
    if failed:
        logger.warning(f"⚠️ {failed} célula(s) com erro registradas em {results_path}")
    logger.info(f"✅ Experimento concluído: {results_path}")
    return ExperimentOutcome(results_path, summary_path, plot_path, rows)
