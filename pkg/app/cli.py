"""Linha de comando: bar <subcomando> [opções].

Códigos de saída: 0 sucesso, 1 erro de uso, 2 falha de pré-condição/domínio.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.core.config import settings
from app.core.exceptions import BarError
from app.crud.params_store import load_params, save_params, write_params_document
from app.crud.tables import write_counts_csv, write_stationary_csv, write_transition_csv
from app.crud.trajectory_store import load_trajectory, save_trajectory
from app.models.estimate import OptimizerOptions
from app.models.experiment import ExperimentConfig
from app.models.params import GraphSpec, SpaceConfig
from app.models.trajectory import InitialDistribution
from app.processors.param_validator import validate
from app.schemas.params import ParamsDocument
from app.services.estimation_service import get_estimator
from app.services.evaluation_service import infer_edges, parameter_errors, score, true_edges
from app.services.exact_service import build_chain, entropy_rate
from app.services.experiment_service import run_experiment
from app.services.simulation_service import generate_graph, simulate
from app.services.stats_service import count_transitions

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PRECONDITION = 2


class UsageError(Exception):
    pass


class BarArgumentParser(argparse.ArgumentParser):
    """ArgumentParser que sinaliza erro de uso sem encerrar o processo"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def open_unit_interval(text: str) -> float:
    """Tipo argparse para valores em (0, 1)"""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid float value: {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must be in (0, 1), got {value}")
    return value


def _add_space_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--b-min", type=float, default=None, help=f"Peso mínimo de ruído (padrão {settings.b_min})")
    parser.add_argument("--rho-min", type=float, default=None, help=f"Limite inferior de ρ_w (padrão {settings.rho_min})")
    parser.add_argument("--rho-max", type=float, default=None, help=f"Limite superior de ρ_w (padrão {settings.rho_max})")


def _space_config(args: argparse.Namespace, p: int) -> SpaceConfig:
    return SpaceConfig.default(p, b_min=args.b_min, rho_min=args.rho_min, rho_max=args.rho_max)


def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_generate(args: argparse.Namespace) -> int:
    config = _space_config(args, args.p)
    a_min = settings.a_min if args.a_min is None else args.a_min
    spec = GraphSpec(p=args.p, d_max=args.d_max, a_min=a_min, signed=args.signed)
    params = generate_graph(spec, config, args.seed)
    save_params(params, config, args.out)
    return EXIT_OK


def _initial(args: argparse.Namespace) -> InitialDistribution:
    if args.initial_state:
        return InitialDistribution.point_mass([int(bit) for bit in args.initial_state])
    return InitialDistribution()


def cmd_simulate(args: argparse.Namespace) -> int:
    params, _ = load_params(args.params)
    traj = simulate(params, args.T, _initial(args), args.seed)
    save_trajectory(traj, args.out)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace) -> int:
    traj = load_trajectory(args.trajectory)
    counts = count_transitions(traj)
    if args.counts_out:
        write_counts_csv(counts, args.counts_out)
    config = _space_config(args, counts.p)
    opts = OptimizerOptions(**({"solver": args.solver} if args.solver else {}))
    estimator = get_estimator(args.method, generic=args.variant == "generic", opts=opts,
                              shared_noise=args.shared_noise)
    result = estimator.estimate(counts, config)
    document = ParamsDocument.from_estimate(result, config)
    if args.out:
        write_params_document(document, args.out)
    else:
        sys.stdout.write(document.dump())
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    params, _ = load_params(args.params)
    chain = build_chain(params)
    summary = {
        "p": chain.p,
        "entropy_rate": entropy_rate(chain),
        "power_iterations": chain.power_iterations,
        "dense": chain.dense,
    }
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        summary["pi_csv"] = write_stationary_csv(chain, out / "pi.csv")
        if chain.dense:
            summary["P_csv"] = write_transition_csv(chain, out / "P.csv")
    _emit(summary, None)
    return EXIT_OK


def cmd_score(args: argparse.Namespace) -> int:
    truth, _ = load_params(args.truth)
    estimate, _ = load_params(args.estimate)
    a_min = settings.a_min if args.a_min is None else args.a_min
    c_thresh = settings.c_thresh if args.c_thresh is None else args.c_thresh
    report = score(true_edges(truth), infer_edges(estimate, a_min, c_thresh), parameter_errors(estimate, truth))
    _emit(report.model_dump(), args.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    params, config = load_params(args.params)
    report = validate(params, config)
    if report.is_valid:
        sys.stdout.write("ok\n")
        return EXIT_OK
    for error in report.errors:
        sys.stderr.write(f"{error}\n")
    return EXIT_PRECONDITION


def cmd_experiment(args: argparse.Namespace) -> int:
    payload = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if args.output_dir:
        payload["output_dir"] = args.output_dir
    if args.workers:
        payload["workers"] = args.workers
    config = ExperimentConfig.model_validate(payload)
    outcome = run_experiment(config)
    _emit({"results": outcome.results_path, "summary": outcome.summary_path, "plot": outcome.plot_path}, None)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port, log_level=settings.log_level.lower())
    return EXIT_OK


def build_parser() -> BarArgumentParser:
    parser = BarArgumentParser(prog="bar", description="Redes Bernoulli autorregressivas: simulação, estimação e avaliação")
    parser.add_argument("--log-level", default=settings.log_level, help="Nível de log")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="Gera uma rede verdadeira")
    gen.add_argument("--p", type=int, required=True)
    gen.add_argument("--d-max", type=int, required=True)
    gen.add_argument("--a-min", type=open_unit_interval, default=None)
    gen.add_argument("--signed", action="store_true", help="Modelo genérico (influências negativas)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    _add_space_flags(gen)
    gen.set_defaults(handler=cmd_generate)

    sim = sub.add_parser("simulate", help="Simula uma trajetória")
    sim.add_argument("--params", required=True)
    sim.add_argument("--T", type=int, required=True)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--initial-state", default=None, help="Estado inicial fixo, ex.: 0101 (padrão: uniforme)")
    sim.add_argument("--out", required=True, help="Arquivo de saída (.bin para o formato binário)")
    sim.set_defaults(handler=cmd_simulate)

    est = sub.add_parser("estimate", help="Estima θ a partir de uma trajetória")
    est.add_argument("--trajectory", required=True)
    est.add_argument("--method", choices=["ml", "closed-form"], default="ml")
    est.add_argument("--variant", choices=["positive", "generic"], default="positive")
    est.add_argument("--solver", choices=["pga", "slsqp"], default=None)
    est.add_argument("--shared-noise", action="store_true")
    est.add_argument("--counts-out", default=None, help="CSV u,v,count das transições")
    est.add_argument("--out", default=None)
    _add_space_flags(est)
    est.set_defaults(handler=cmd_estimate)

    exact = sub.add_parser("exact", help="Oráculo exato: P, π e taxa de entropia")
    exact.add_argument("--params", required=True)
    exact.add_argument("--out-dir", default=None, help="Diretório para P.csv e pi.csv")
    exact.set_defaults(handler=cmd_exact)

    sc = sub.add_parser("score", help="Pontua a recuperação de arestas")
    sc.add_argument("--truth", required=True)
    sc.add_argument("--estimate", required=True)
    sc.add_argument("--a-min", type=open_unit_interval, default=None)
    sc.add_argument("--c-thresh", type=open_unit_interval, default=None)
    sc.add_argument("--out", default=None)
    sc.set_defaults(handler=cmd_score)

    val = sub.add_parser("validate", help="Valida um arquivo de parâmetros")
    val.add_argument("--params", required=True)
    val.set_defaults(handler=cmd_validate)

    exp = sub.add_parser("experiment", help="Varredura (estimador x T x seed)")
    exp.add_argument("--config", required=True, help="Arquivo JSON do experimento")
    exp.add_argument("--output-dir", default=None)
    exp.add_argument("--workers", type=int, default=None)
    exp.set_defaults(handler=cmd_experiment)

    srv = sub.add_parser("serve", help="Sobe a API HTTP")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8000)
    srv.set_defaults(handler=cmd_serve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE

    logging.basicConfig(level=args.log_level)
    try:
        return args.handler(args)
    except (BarError, ValueError, OSError) as e:
        logger.error(f"❌ {args.command}: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_PRECONDITION
