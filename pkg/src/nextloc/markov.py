"""First-order location transition model estimated by maximum likelihood."""

from __future__ import annotations

import csv
from typing import Sequence

from .data import Dataset
from .ranking import rank_candidates


class MarkovModel:
    """Unigram/bigram location counts with conditional next-location probabilities.

    With the default alpha=0 the conditional is the pure count ratio
    count(current, next) / count(current). Additive smoothing (alpha > 0)
    is available but off by default.
    """

    def __init__(
        self,
        unigram: dict[int, int],
        bigram: dict[tuple[int, int], int],
        alpha: float = 0.0,
        location_count: int = 0,
    ):
        self.unigram = unigram
        self.bigram = bigram
        self.alpha = alpha
        self.location_count = location_count

    def prob(self, current: int, nxt: int) -> float:
        seen = self.unigram.get(current, 0)
        pair = self.bigram.get((current, nxt), 0)
        if self.alpha > 0.0:
            denom = seen + self.alpha * self.location_count
            return (pair + self.alpha) / denom if denom > 0 else 0.0
        if seen == 0:
            return 0.0
        return pair / seen

    def rank(self, current: int, candidates: set[int] | Sequence[int]) -> list[tuple[int, float]]:
        return rank_candidates({c: self.prob(current, c) for c in candidates})


def train(dataset: Dataset, alpha: float = 0.0) -> MarkovModel:
    """Count every location occurrence and every consecutive pair in the dataset."""
    unigram: dict[int, int] = {}
    bigram: dict[tuple[int, int], int] = {}
    for traj in dataset.trajectories:
        pts = traj.points
        for loc, _ in pts:
            unigram[loc] = unigram.get(loc, 0) + 1
        for (a, _), (b, _) in zip(pts, pts[1:]):
            bigram[(a, b)] = bigram.get((a, b), 0) + 1
    return MarkovModel(unigram, bigram, alpha=alpha, location_count=dataset.location_count)


def predict_topk(
    model: MarkovModel,
    points: Sequence[tuple[int, int]],
    candidates: set[int] | Sequence[int],
    r: int,
) -> list[tuple[int, float]]:
    """Top-r candidates by conditional probability given the last visited location."""
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if not candidates:
        return []
    return model.rank(points[-1][0], candidates)[:r]


def write_markov_csv(model: MarkovModel, path) -> None:
    """Write bigram rows under ``from,to,count`` then unigram rows under ``location,count``."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["from", "to", "count"])
        for (a, b), count in sorted(model.bigram.items()):
            writer.writerow([a, b, count])
        writer.writerow(["location", "count"])
        for loc, count in sorted(model.unigram.items()):
            writer.writerow([loc, count])


def read_markov_csv(path, alpha: float = 0.0) -> MarkovModel:
    unigram: dict[int, int] = {}
    bigram: dict[tuple[int, int], int] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty model file") from None
        if header != ["from", "to", "count"]:
            raise ValueError(f"{path} line 1: expected header 'from,to,count'")
        section = "bigram"
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if row == ["location", "count"]:
                section = "unigram"
                continue
            try:
                if section == "bigram":
                    bigram[(int(row[0]), int(row[1]))] = int(row[2])
                else:
                    unigram[int(row[0])] = int(row[1])
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path} line {lineno}: {exc}") from None
    location_count = 1 + max(
        (loc for loc in unigram), default=-1
    )
    return MarkovModel(unigram, bigram, alpha=alpha, location_count=location_count)
