"""Travel-time-difference scoring of candidate next locations.

For a query trajectory prefix, each candidate is scored by comparing two
quantities summed over every passed location: the precomputed shortest travel
time to the candidate, and the actual travel time along the trajectory (elapsed
time to the current location plus the average final hop). The smaller the mean
difference, the more plausible the candidate; a decreasing inverse function
turns differences into normalized probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .graphs import SlotConfig, TransferGraphs, slot_of
from .ranking import rank_candidates
from .shortest import ShortestTimeTable

INVERSE_KINDS = ("reciprocal", "exp")


@dataclass(frozen=True)
class InverseFunction:
    """Strictly decreasing map from time difference (seconds) to a raw score.

    The argument is clamped below at ``epsilon`` seconds, so differences that
    are zero or negative (actual time beats the precomputed shortest time,
    which slot mixing can produce) score maximal plausibility while staying
    finite. The ``exp`` kind evaluates exp(-x) with x in minutes to keep the
    exponent in range.
    """

    kind: str = "reciprocal"
    epsilon: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in INVERSE_KINDS:
            raise ValueError(f"inverse function kind must be one of {INVERSE_KINDS}, got {self.kind!r}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")

    def __call__(self, x: float) -> float:
        x = max(x, self.epsilon)
        if self.kind == "reciprocal":
            return 1.0 / x
        return math.exp(-x / 60.0)


@dataclass
class TtdmScore:
    """Per-candidate breakdown: summed times, mean difference, and probability."""

    candidate: int
    sum_shortest: float
    sum_actual: float
    diff_per_point: float
    probability: float
    fallback: bool = False  # True when every candidate was unreachable


def actual_travel_time(
    points: Sequence[tuple[int, int]], i: int, candidate: int, graphs: TransferGraphs
) -> float:
    """Actual travel time from passed point ``i`` (0-based) to the candidate.

    Elapsed time from point i to the last point, plus the average travel time
    of the final hop. The final-hop average is taken from the slot of the last
    timestamp, falling back to the hop's all-slot average.
    """
    if not 0 <= i < len(points):
        raise ValueError(f"passed index {i} out of range for {len(points)} points")
    last_loc, last_time = points[-1]
    hop = graphs.hop_average(last_loc, candidate, last_time)
    if hop is None:
        raise ValueError(
            f"candidate {candidate} is not an observed successor of location {last_loc}"
        )
    return (last_time - points[i][1]) + hop


def sum_shortest(
    points: Sequence[tuple[int, int]],
    candidate: int,
    table: ShortestTimeTable,
    config: SlotConfig,
) -> float:
    """Sum of shortest travel times from every passed location to the candidate.

    Each term uses the slot of that point's arrival time; any unreachable term
    makes the sum infinite.
    """
    return sum(table.lookup(slot_of(t, config), loc, candidate) for loc, t in points)


def sum_actual(
    points: Sequence[tuple[int, int]], candidate: int, graphs: TransferGraphs
) -> float:
    """Sum of actual travel times from every passed location to the candidate."""
    return sum(actual_travel_time(points, i, candidate, graphs) for i in range(len(points)))


def score_candidates(
    points: Sequence[tuple[int, int]],
    candidates: set[int] | Sequence[int],
    table: ShortestTimeTable,
    graphs: TransferGraphs,
    inverse: InverseFunction | None = None,
) -> list[TtdmScore]:
    """Score candidates by mean travel-time difference and normalize to probabilities.

    For candidate c: x = (sum_actual - sum_shortest) / n over the n passed
    points; raw score = inverse(x); probability = raw / sum of raws. Candidates
    with an infinite shortest-time sum get probability 0. If every candidate is
    unreachable, probabilities fall back to uniform and are flagged.
    """
    if inverse is None:
        inverse = InverseFunction()
    n = len(points)
    if n == 0:
        raise ValueError("query trajectory is empty")
    scores: list[TtdmScore] = []
    raws: list[float] = []
    for candidate in sorted(candidates):
        shortest = sum_shortest(points, candidate, table, graphs.config)
        actual = sum_actual(points, candidate, graphs)
        if math.isinf(shortest) or math.isinf(actual):
            diff = math.inf
            raw = 0.0
        else:
            diff = (actual - shortest) / n
            raw = inverse(diff)
        scores.append(TtdmScore(candidate, shortest, actual, diff, 0.0))
        raws.append(raw)
    total = sum(raws)
    if total > 0.0:
        for score, raw in zip(scores, raws):
            score.probability = raw / total
    elif scores:
        uniform = 1.0 / len(scores)
        for score in scores:
            score.probability = uniform
            score.fallback = True
    return scores


def predict_topk(
    points: Sequence[tuple[int, int]],
    candidates: set[int] | Sequence[int],
    table: ShortestTimeTable,
    graphs: TransferGraphs,
    inverse: InverseFunction | None = None,
    r: int = 5,
) -> list[tuple[int, float]]:
    """Top-r candidates by travel-time-difference probability."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not candidates:
        return []
    scored = score_candidates(points, candidates, table, graphs, inverse)
    return rank_candidates({s.candidate: s.probability for s in scored}, r)


class TravelTimeModel:
    """Bundles the slot graphs, shortest-time table, and inverse function for queries."""

    def __init__(
        self,
        graphs: TransferGraphs,
        table: ShortestTimeTable,
        inverse: InverseFunction | None = None,
    ):
        self.graphs = graphs
        self.table = table
        self.inverse = inverse if inverse is not None else InverseFunction()

    def candidates(self, location: int) -> set[int]:
        return self.graphs.candidates(location)

    def score(self, points: Sequence[tuple[int, int]]) -> list[TtdmScore]:
        cands = self.candidates(points[-1][0])
        if not cands:
            return []
        return score_candidates(points, cands, self.table, self.graphs, self.inverse)

    def probabilities(self, points: Sequence[tuple[int, int]]) -> dict[int, float]:
        return {s.candidate: s.probability for s in self.score(points)}

    def rank(self, points: Sequence[tuple[int, int]]) -> list[tuple[int, float]]:
        return rank_candidates(self.probabilities(points))

    def predict_topk(self, points: Sequence[tuple[int, int]], r: int) -> list[tuple[int, float]]:
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        return self.rank(points)[:r]
