"""Command-line pipeline: synth -> ingest -> build -> precompute -> train -> predict/evaluate/sweep."""

from __future__ import annotations

import argparse
import json
import sys

from . import data, evaluation, graphs, markov, shortest, synth
from .config import ConfigError, PipelineConfig, load_config, parse_r_list
from .joint import JointModel
from .ttdm import InverseFunction, TravelTimeModel


def _config_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="key=value config file")
    for flag in ("records", "train", "test", "graphs", "table", "markov", "results"):
        parent.add_argument(f"--{flag}", help=f"path of the {flag} artifact")
    parent.add_argument("--slot-seconds", type=int, dest="slot_seconds")
    parent.add_argument("--gap", type=int)
    parent.add_argument("--min-len", type=int, dest="min_len")
    parent.add_argument("--train-fraction", type=float, dest="train_fraction")
    parent.add_argument("--seed", type=int)
    parent.add_argument("--lambda", type=float, dest="lam")
    parent.add_argument("--f", choices=("reciprocal", "exp"))
    parent.add_argument("--epsilon", type=float)
    parent.add_argument("--r", help="comma-separated ranking cutoffs, e.g. 1,2,3,4,5")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nextloc", description=__doc__)
    parent = _config_parent()
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("ingest", parents=[parent], help="records CSV -> train/test trajectory JSONL")
    sub.add_parser("build", parents=[parent], help="train JSONL -> transfer graphs CSV")
    sub.add_parser("precompute", parents=[parent], help="graphs CSV -> shortest-time table CSV")
    sub.add_parser("train", parents=[parent], help="train JSONL -> transition model CSV")

    p = sub.add_parser("predict", parents=[parent], help="rank next locations for one trajectory")
    p.add_argument("--trajectory", required=True, help="inline trajectory as loc:time,loc:time,...")
    p.add_argument("--model", choices=("markov", "ttdm", "joint"), default="joint")
    p.add_argument("--top", type=int, default=5)

    p = sub.add_parser("evaluate", parents=[parent], help="score markov/ttdm/joint on the test set")
    p.add_argument("--runs", type=int, default=1)

    p = sub.add_parser("sweep", parents=[parent], help="joint-model metrics over a lambda grid")
    p.add_argument("--lambdas", help="comma-separated lambda values (default 0,0.1,...,1)")

    p = sub.add_parser("synth", parents=[parent], help="generate grid-city records")
    p.add_argument("--rows", type=int, default=5)
    p.add_argument("--cols", type=int, default=5)
    p.add_argument("--edge-seconds", type=int, default=60, dest="edge_seconds")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--agents", type=int, default=100)
    p.add_argument("--trips", type=int, default=1)
    p.add_argument("--fidelity", type=float, default=1.0)
    p.add_argument("--truth-out", default=None, help="also write the true graph CSV here")
    return parser


def _effective_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    for key in (
        "records", "train", "test", "graphs", "table", "markov", "results",
        "slot_seconds", "gap", "min_len", "train_fraction", "seed", "lam", "f", "epsilon",
    ):
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    if getattr(args, "r", None) is not None:
        cfg.r = parse_r_list(args.r)
    cfg.validate()
    return cfg


def _slot_config(cfg: PipelineConfig) -> graphs.SlotConfig:
    return graphs.SlotConfig(cfg.slot_seconds)


def _inverse(cfg: PipelineConfig) -> InverseFunction:
    return InverseFunction(cfg.f, cfg.epsilon)


def _load_models(cfg: PipelineConfig) -> tuple[markov.MarkovModel, TravelTimeModel]:
    built = graphs.read_graphs_csv(cfg.graphs, _slot_config(cfg))
    table = shortest.read_table_csv(cfg.table)
    model = markov.read_markov_csv(cfg.markov)
    return model, TravelTimeModel(built, table, _inverse(cfg))


def cmd_ingest(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    locations = data.LocationIndex()
    with open(cfg.records, "r", encoding="utf-8", newline="") as fh:
        records = data.parse_records(fh, locations)
    trajectories = data.filter_min_length(
        data.sessionize(records, cfg.gap), cfg.min_len
    )
    dataset = data.as_dataset(trajectories, len(locations))
    train_ds, test_ds = data.split(dataset, data.SplitConfig(cfg.train_fraction, cfg.seed))
    data.write_trajectories_jsonl(train_ds.trajectories, cfg.train)
    data.write_trajectories_jsonl(test_ds.trajectories, cfg.test)
    print(
        f"ingest: {len(records)} records -> {len(trajectories)} trajectories "
        f"(train {len(train_ds.trajectories)}, test {len(test_ds.trajectories)}), "
        f"{len(locations)} locations"
    )
    return 0


def cmd_build(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    train_ds = data.as_dataset(data.read_trajectories_jsonl(cfg.train))
    built = graphs.build_graphs(train_ds, _slot_config(cfg))
    n_edges = graphs.write_graphs_csv(built, cfg.graphs)
    stats = graphs.candidate_count_cdf(built)
    print(
        f"build: {len(train_ds.trajectories)} trajectories -> {n_edges} edges over "
        f"{len(built)} slot(s), {built.dropped_negative} negative durations dropped, "
        f"mean candidates {stats.mean:.2f}"
    )
    return 0


def cmd_precompute(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    built = graphs.read_graphs_csv(cfg.graphs, _slot_config(cfg))
    table = shortest.precompute(built)
    n = shortest.write_table_csv(table, cfg.table)
    print(f"precompute: {built.n_edges} edges -> {n} shortest-time entries")
    return 0


def cmd_train(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    train_ds = data.as_dataset(data.read_trajectories_jsonl(cfg.train))
    model = markov.train(train_ds)
    markov.write_markov_csv(model, cfg.markov)
    print(
        f"train: {len(train_ds.trajectories)} trajectories -> "
        f"{len(model.bigram)} transitions, {len(model.unigram)} locations"
    )
    return 0


def _parse_inline_trajectory(text: str) -> list[tuple[int, int]]:
    points: list[tuple[int, int]] = []
    for part in text.split(","):
        loc_text, _, time_text = part.partition(":")
        try:
            points.append((int(loc_text), int(time_text)))
        except ValueError:
            raise ConfigError(
                f"trajectory: expected loc:time pairs, got {part!r}"
            ) from None
    if not points:
        raise ConfigError("trajectory: no points given")
    return points


def cmd_predict(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    points = _parse_inline_trajectory(args.trajectory)
    model, ttdm_model = _load_models(cfg)
    if args.model == "markov":
        candidates = ttdm_model.candidates(points[-1][0])
        ranking = model.rank(points[-1][0], candidates) if candidates else []
    elif args.model == "ttdm":
        ranking = ttdm_model.rank(points)
    else:
        ranking = JointModel(model, ttdm_model, cfg.lam).rank(points)
    out = {"truth": None, "ranking": [[loc, prob] for loc, prob in ranking[: args.top]]}
    print(json.dumps(out, separators=(",", ":")))
    return 0


def _evaluate_rows(
    cfg: PipelineConfig, queries, model: markov.MarkovModel, ttdm_model: TravelTimeModel, runs: int
) -> list[evaluation.ResultRow]:
    predictors = [
        ("markov", None, evaluation.markov_predictor(model, ttdm_model)),
        ("ttdm", None, ttdm_model.rank),
        ("joint", cfg.lam, JointModel(model, ttdm_model, cfg.lam).rank),
    ]
    rows: list[evaluation.ResultRow] = []
    for name, lam, predictor in predictors:
        for r in cfg.r:
            res = evaluation.run_repeated(
                lambda p=predictor, rr=r: evaluation.evaluate(queries, p, rr), runs
            )
            rows.append(
                evaluation.ResultRow(name, lam, r, res.acc, res.ap, res.n_queries, res.n_skipped)
            )
    return rows


def cmd_evaluate(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    test_ds = data.as_dataset(data.read_trajectories_jsonl(cfg.test))
    queries = evaluation.make_queries(test_ds)
    model, ttdm_model = _load_models(cfg)
    rows = _evaluate_rows(cfg, queries, model, ttdm_model, args.runs)
    evaluation.write_results_csv(rows, cfg.results)
    for row in rows:
        print(f"{row.model} r={row.r} acc={row.acc:.4f} ap={row.ap:.4f}")
    print(f"evaluate: {len(queries)} queries -> {cfg.results}")
    return 0


def cmd_sweep(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    if args.lambdas:
        lambdas = [float(part) for part in args.lambdas.split(",") if part.strip()]
    else:
        lambdas = [i / 10 for i in range(11)]
    test_ds = data.as_dataset(data.read_trajectories_jsonl(cfg.test))
    queries = evaluation.make_queries(test_ds)
    model, ttdm_model = _load_models(cfg)
    rows = evaluation.lambda_sweep(queries, model, ttdm_model, lambdas, cfg.r)
    evaluation.write_results_csv(rows, cfg.results)
    print(f"sweep: {len(lambdas)} lambdas x {len(cfg.r)} cutoffs over {len(queries)} queries -> {cfg.results}")
    return 0


def cmd_synth(cfg: PipelineConfig, args: argparse.Namespace) -> int:
    grid = synth.GridSpec(args.rows, args.cols, args.edge_seconds, args.noise, cfg.seed)
    agents = synth.AgentSpec(args.agents, args.trips, args.fidelity)
    dataset, truth = synth.generate(grid, agents)
    n = synth.write_records_csv(dataset, cfg.records)
    if args.truth_out:
        graphs.write_graphs_csv(truth, args.truth_out)
    print(
        f"synth: {args.rows}x{args.cols} grid, {args.agents} agents -> "
        f"{len(dataset.trajectories)} trajectories, {n} records"
    )
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "build": cmd_build,
    "precompute": cmd_precompute,
    "train": cmd_train,
    "predict": cmd_predict,
    "evaluate": cmd_evaluate,
    "sweep": cmd_sweep,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _effective_config(args)
        return _COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: missing input file: {exc.filename}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
