"""Top-r accuracy and average precision over held-out queries, plus lambda sweeps."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

from .data import Dataset, Trajectory
from .markov import MarkovModel
from .ranking import rank_candidates, rank_of_truth
from .ttdm import TravelTimeModel

RESULTS_HEADER = ["model", "lambda", "r", "acc", "ap", "n_queries", "n_skipped"]

Predictor = Callable[[Sequence[tuple[int, int]]], list[tuple[int, float]]]


@dataclass
class EvalQuery:
    prefix: Trajectory  # all points but the last
    truth: int  # held-out final location


@dataclass
class EvalResult:
    r: int
    acc: float
    ap: float
    n_queries: int
    n_skipped: int


@dataclass
class ResultRow:
    model: str
    lam: float | None
    r: int
    acc: float
    ap: float
    n_queries: int
    n_skipped: int


def make_queries(test: Dataset) -> list[EvalQuery]:
    """One query per test trajectory: hold out the last point as the truth."""
    queries: list[EvalQuery] = []
    for traj in test.trajectories:
        if len(traj) < 2:
            continue
        queries.append(
            EvalQuery(Trajectory(traj.user, traj.points[:-1]), traj.points[-1][0])
        )
    return queries


def _truth_ranks(queries: Sequence[EvalQuery], predictor: Predictor) -> tuple[list[int | None], int]:
    """Rank of the truth per query (None for a miss), plus the no-candidate count."""
    ranks: list[int | None] = []
    skipped = 0
    for query in queries:
        ranking = predictor(query.prefix.points)
        if not ranking:
            skipped += 1
            ranks.append(None)
            continue
        ranks.append(rank_of_truth(ranking, query.truth))
    return ranks, skipped


def _result_for(ranks: Sequence[int | None], skipped: int, r: int) -> EvalResult:
    n = len(ranks)
    if n == 0:
        return EvalResult(r, 0.0, 0.0, 0, skipped)
    hits = sum(1 for w in ranks if w is not None and w <= r)
    ap_sum = sum(1.0 / w for w in ranks if w is not None and w <= r)
    return EvalResult(r, hits / n, ap_sum / n, n, skipped)


def evaluate(queries: Sequence[EvalQuery], predictor: Predictor, r: int) -> EvalResult:
    """Accuracy@r and average precision@r over all queries.

    The truth's rank comes from the predictor's full candidate ranking. A truth
    missing from the ranking counts as a miss; a query with no candidates at
    all is counted in n_skipped and as a miss.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    ranks, skipped = _truth_ranks(queries, predictor)
    return _result_for(ranks, skipped, r)


def evaluate_many(
    queries: Sequence[EvalQuery], predictor: Predictor, r_values: Sequence[int]
) -> list[EvalResult]:
    """Evaluate several cutoffs while ranking each query only once."""
    if any(r < 1 for r in r_values):
        raise ValueError("all r values must be >= 1")
    ranks, skipped = _truth_ranks(queries, predictor)
    return [_result_for(ranks, skipped, r) for r in r_values]


def markov_predictor(model: MarkovModel, ttdm: TravelTimeModel) -> Predictor:
    """Markov ranking restricted to the graph-derived candidate set."""

    def predict(points: Sequence[tuple[int, int]]) -> list[tuple[int, float]]:
        candidates = ttdm.candidates(points[-1][0])
        if not candidates:
            return []
        return model.rank(points[-1][0], candidates)

    return predict


def lambda_sweep(
    queries: Sequence[EvalQuery],
    markov: MarkovModel,
    ttdm: TravelTimeModel,
    lambdas: Sequence[float],
    r_values: Sequence[int],
) -> list[ResultRow]:
    """Joint-model metrics over the full (lambda, r) grid.

    Per-query candidate scores are computed once and recombined per lambda, so
    the sweep costs one scoring pass regardless of grid size.
    """
    if any(not 0.0 <= lam <= 1.0 for lam in lambdas):
        raise ValueError("all lambda values must be in [0, 1]")
    ranks: dict[float, list[int | None]] = {lam: [] for lam in lambdas}
    skipped = 0
    for query in queries:
        last = query.prefix.points[-1][0]
        candidates = sorted(ttdm.candidates(last))
        if not candidates:
            skipped += 1
            for lam in lambdas:
                ranks[lam].append(None)
            continue
        tt = ttdm.probabilities(query.prefix.points)
        mk = {c: markov.prob(last, c) for c in candidates}
        for lam in lambdas:
            scores = {c: lam * mk[c] + (1.0 - lam) * tt[c] for c in candidates}
            ranks[lam].append(rank_of_truth(rank_candidates(scores), query.truth))
    rows: list[ResultRow] = []
    for lam in lambdas:
        for r in r_values:
            res = _result_for(ranks[lam], skipped, r)
            rows.append(ResultRow("joint", lam, r, res.acc, res.ap, res.n_queries, res.n_skipped))
    return rows


def run_repeated(run: Callable[[], EvalResult], runs: int) -> EvalResult:
    """Arithmetic mean of acc/ap across repeated runs of the same evaluation."""
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    results = [run() for _ in range(runs)]
    first = results[0]
    return EvalResult(
        first.r,
        sum(res.acc for res in results) / runs,
        sum(res.ap for res in results) / runs,
        first.n_queries,
        first.n_skipped,
    )


def write_results_csv(rows: Sequence[ResultRow], path) -> None:
    """Write ``model,lambda,r,acc,ap,n_queries,n_skipped`` rows (plot-ready)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for row in rows:
            lam = "" if row.lam is None else str(row.lam)
            writer.writerow(
                [row.model, lam, row.r, str(row.acc), str(row.ap), row.n_queries, row.n_skipped]
            )
