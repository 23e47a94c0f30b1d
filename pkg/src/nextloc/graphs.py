"""Per-time-slot weighted location transfer graphs built from observed segment times.

Nodes are locations, directed edges are observed consecutive-location moves,
and the edge weight is the mean observed travel time in seconds for the slot.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

from .data import Dataset

GRAPHS_HEADER = ["slot", "from", "to", "avg_seconds", "count"]

SECONDS_PER_DAY = 86400


@dataclass(frozen=True)
class SlotConfig:
    """Partition of the day into equal slots; slot_seconds must divide 86400."""

    slot_seconds: int = SECONDS_PER_DAY

    def __post_init__(self) -> None:
        if self.slot_seconds <= 0:
            raise ValueError(f"slot_seconds must be positive, got {self.slot_seconds}")
        if SECONDS_PER_DAY % self.slot_seconds != 0:
            raise ValueError(f"slot_seconds must divide 86400, got {self.slot_seconds}")

    @property
    def slots_per_day(self) -> int:
        return SECONDS_PER_DAY // self.slot_seconds


def slot_of(time: int, config: SlotConfig) -> int:
    """Zero-based slot index of a timestamp; slot 0 starts at 00:00 UTC."""
    return (time % SECONDS_PER_DAY) // config.slot_seconds


@dataclass
class SegmentStats:
    """Accumulated observations for one directed segment in one slot."""

    total_time: float
    count: int

    @property
    def average(self) -> float:
        return self.total_time / self.count


class TransferGraph:
    """Directed graph for one time slot: adjacency[from][to] -> SegmentStats."""

    __slots__ = ("slot", "adjacency")

    def __init__(self, slot: int, adjacency: dict[int, dict[int, SegmentStats]] | None = None):
        self.slot = slot
        self.adjacency: dict[int, dict[int, SegmentStats]] = adjacency if adjacency is not None else {}

    def weight(self, u: int, v: int) -> float | None:
        stats = self.adjacency.get(u, {}).get(v)
        return None if stats is None else stats.average

    def out_neighbors(self, u: int) -> dict[int, SegmentStats]:
        return self.adjacency.get(u, {})

    def edges(self) -> Iterator[tuple[int, int, SegmentStats]]:
        for u, outs in self.adjacency.items():
            for v, stats in outs.items():
                yield u, v, stats

    @property
    def n_edges(self) -> int:
        return sum(len(outs) for outs in self.adjacency.values())


class TransferGraphs:
    """All per-slot transfer graphs for one training set, plus derived candidate sets.

    Candidate sets are slot-independent: the out-neighbors of a location in
    the union of the slot graphs. Travel times stay slot-dependent.
    """

    def __init__(self, config: SlotConfig, slots: list[TransferGraph], dropped_negative: int = 0):
        if len(slots) != config.slots_per_day:
            raise ValueError(f"expected {config.slots_per_day} slot graphs, got {len(slots)}")
        self.config = config
        self.slots = slots
        self.dropped_negative = dropped_negative
        self._union: dict[int, dict[int, SegmentStats]] | None = None

    def __len__(self) -> int:
        return len(self.slots)

    def __iter__(self) -> Iterator[TransferGraph]:
        return iter(self.slots)

    def __getitem__(self, slot: int) -> TransferGraph:
        return self.slots[slot]

    def slot_of(self, time: int) -> int:
        return slot_of(time, self.config)

    def _union_adjacency(self) -> dict[int, dict[int, SegmentStats]]:
        if self._union is None:
            union: dict[int, dict[int, SegmentStats]] = {}
            for graph in self.slots:
                for u, v, stats in graph.edges():
                    merged = union.setdefault(u, {}).get(v)
                    if merged is None:
                        union[u][v] = SegmentStats(stats.total_time, stats.count)
                    else:
                        merged.total_time += stats.total_time
                        merged.count += stats.count
            self._union = union
        return self._union

    def union_average(self, u: int, v: int) -> float | None:
        """Mean travel time of segment u->v pooled over all slots."""
        stats = self._union_adjacency().get(u, {}).get(v)
        return None if stats is None else stats.average

    def hop_average(self, u: int, v: int, time: int) -> float | None:
        """Segment average in the slot containing ``time``, else the all-slot average."""
        w = self.slots[self.slot_of(time)].weight(u, v)
        return w if w is not None else self.union_average(u, v)

    def candidates(self, location: int) -> set[int]:
        return set(self._union_adjacency().get(location, {}))

    def nodes(self) -> set[int]:
        seen: set[int] = set()
        for u, outs in self._union_adjacency().items():
            seen.add(u)
            seen.update(outs)
        return seen

    @property
    def n_edges(self) -> int:
        return sum(g.n_edges for g in self.slots)


def build_graphs(train: Dataset, config: SlotConfig | None = None) -> TransferGraphs:
    """Accumulate consecutive-pair travel times into one graph per slot.

    Each consecutive pair (l_i, t_i), (l_{i+1}, t_{i+1}) contributes the
    duration t_{i+1} - t_i to the slot of t_i. Negative durations (clock
    anomalies) are dropped and counted in ``dropped_negative``.
    """
    if config is None:
        config = SlotConfig()
    acc: list[dict[int, dict[int, list[int]]]] = [{} for _ in range(config.slots_per_day)]
    dropped = 0
    for traj in train.trajectories:
        pts = traj.points
        for (l0, t0), (l1, t1) in zip(pts, pts[1:]):
            duration = t1 - t0
            if duration < 0:
                dropped += 1
                continue
            cell = acc[slot_of(t0, config)].setdefault(l0, {}).setdefault(l1, [0, 0])
            cell[0] += duration
            cell[1] += 1
    slots = [
        TransferGraph(
            k,
            {
                u: {v: SegmentStats(float(tot), cnt) for v, (tot, cnt) in outs.items()}
                for u, outs in acc[k].items()
            },
        )
        for k in range(config.slots_per_day)
    ]
    return TransferGraphs(config, slots, dropped)


def candidate_next_locations(graphs: TransferGraphs, location: int) -> set[int]:
    """Locations reachable from ``location`` in one observed move (union over slots)."""
    return graphs.candidates(location)


class CandidateCdf(NamedTuple):
    points: list[tuple[int, float]]  # (candidate count, cumulative fraction), count ascending
    mean: float


def candidate_count_cdf(graphs: TransferGraphs) -> CandidateCdf:
    """Distribution of candidate-set sizes over all graph locations."""
    sizes = sorted(len(graphs.candidates(u)) for u in graphs.nodes())
    if not sizes:
        return CandidateCdf([], 0.0)
    n = len(sizes)
    points: list[tuple[int, float]] = []
    seen = 0
    for size in sizes:
        seen += 1
        if points and points[-1][0] == size:
            points[-1] = (size, seen / n)
        else:
            points.append((size, seen / n))
    return CandidateCdf(points, sum(sizes) / n)


def graphs_from_edges(
    config: SlotConfig, edges: Iterable[tuple[int, int, int, float, int]]
) -> TransferGraphs:
    """Build TransferGraphs from (slot, from, to, avg_seconds, count) tuples."""
    slots = [TransferGraph(k) for k in range(config.slots_per_day)]
    for slot, u, v, avg, count in edges:
        if not 0 <= slot < config.slots_per_day:
            raise ValueError(f"slot {slot} out of range for {config.slots_per_day} slots")
        if count < 1:
            raise ValueError(f"edge ({u}, {v}) has count {count} < 1")
        slots[slot].adjacency.setdefault(u, {})[v] = SegmentStats(avg * count, count)
    return TransferGraphs(config, slots)


def write_graphs_csv(graphs: TransferGraphs, path) -> int:
    """Write edges as ``slot,from,to,avg_seconds,count`` in (slot, from, to) order."""
    rows = sorted(
        (g.slot, u, v, stats) for g in graphs for u, v, stats in g.edges()
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRAPHS_HEADER)
        for slot, u, v, stats in rows:
            writer.writerow([slot, u, v, str(stats.average), stats.count])
    return len(rows)


def read_graphs_csv(path, config: SlotConfig) -> TransferGraphs:
    edges: list[tuple[int, int, int, float, int]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty graphs CSV") from None
        if header != GRAPHS_HEADER:
            raise ValueError(f"{path} line 1: expected header {','.join(GRAPHS_HEADER)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                slot, u, v = int(row[0]), int(row[1]), int(row[2])
                avg, count = float(row[3]), int(row[4])
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path} line {lineno}: {exc}") from None
            edges.append((slot, u, v, avg, count))
    return graphs_from_edges(config, edges)
