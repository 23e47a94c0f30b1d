"""Linear interpolation of the Markov conditional and the travel-time-difference score."""

from __future__ import annotations

from typing import Sequence

from .markov import MarkovModel
from .ranking import rank_candidates
from .ttdm import TravelTimeModel


def joint_prob(
    points: Sequence[tuple[int, int]],
    candidate: int,
    markov: MarkovModel,
    ttdm_probs: dict[int, float],
    lam: float,
) -> float:
    """lam * markov conditional + (1 - lam) * travel-time probability."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    if candidate not in ttdm_probs:
        raise ValueError(f"candidate {candidate} missing from travel-time scores")
    return lam * markov.prob(points[-1][0], candidate) + (1.0 - lam) * ttdm_probs[candidate]


class JointModel:
    """Fused predictor over the graph-derived candidate set of the current location."""

    def __init__(self, markov: MarkovModel, ttdm: TravelTimeModel, lam: float = 0.3):
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lambda must be in [0, 1], got {lam}")
        self.markov = markov
        self.ttdm = ttdm
        self.lam = lam

    def rank(self, points: Sequence[tuple[int, int]]) -> list[tuple[int, float]]:
        last = points[-1][0]
        candidates = self.ttdm.candidates(last)
        if not candidates:
            return []
        tt = self.ttdm.probabilities(points)
        scores = {
            c: self.lam * self.markov.prob(last, c) + (1.0 - self.lam) * tt[c]
            for c in candidates
        }
        return rank_candidates(scores)

    def predict_topk(self, points: Sequence[tuple[int, int]], r: int) -> list[tuple[int, float]]:
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        return self.rank(points)[:r]
