"""Shared candidate ordering: score descending, location index ascending on ties."""

from __future__ import annotations


def rank_candidates(scores: dict[int, float], r: int | None = None) -> list[tuple[int, float]]:
    """Order (location, score) pairs by score desc, then location asc; truncate to r."""
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return ordered if r is None else ordered[:r]


def rank_of_truth(ranking: list[tuple[int, float]], truth: int) -> int | None:
    """One-based position of ``truth`` in a ranking, or None if absent."""
    for idx, (loc, _) in enumerate(ranking, start=1):
        if loc == truth:
            return idx
    return None
