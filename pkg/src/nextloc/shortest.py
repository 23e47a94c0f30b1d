"""Precomputed shortest travel times between locations, one table per slot graph.

Single-source Dijkstra searches run from every origin with outgoing edges;
unreachable pairs are reported as ``math.inf``.
"""

from __future__ import annotations

import csv
import heapq
import math

from .graphs import SegmentStats, TransferGraphs

TABLE_HEADER = ["slot", "origin", "dest", "seconds"]

INFINITY = math.inf


class ShortestTimeTable:
    """Maps (slot, origin, destination) to shortest travel seconds.

    Self-distances are always 0; pairs without a stored entry are unreachable
    and look up as infinity.
    """

    def __init__(self, tables: dict[int, dict[int, dict[int, float]]]):
        self.tables = tables

    def lookup(self, slot: int, origin: int, dest: int) -> float:
        if origin == dest:
            return 0.0
        return self.tables.get(slot, {}).get(origin, {}).get(dest, INFINITY)

    def n_entries(self) -> int:
        return sum(
            len(dists) for per_origin in self.tables.values() for dists in per_origin.values()
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ShortestTimeTable) and self.tables == other.tables


def _single_source(adjacency: dict[int, dict[int, SegmentStats]], source: int) -> dict[int, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, stats in adjacency.get(u, {}).items():
            nd = d + stats.average
            if nd < dist.get(v, INFINITY):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def precompute(graphs: TransferGraphs) -> ShortestTimeTable:
    """Shortest travel times from every origin with outgoing edges, per slot."""
    tables: dict[int, dict[int, dict[int, float]]] = {}
    for graph in graphs:
        per_origin = {
            origin: _single_source(graph.adjacency, origin)
            for origin in sorted(graph.adjacency)
        }
        if per_origin:
            tables[graph.slot] = per_origin
    return ShortestTimeTable(tables)


def write_table_csv(table: ShortestTimeTable, path) -> int:
    """Write entries as ``slot,origin,dest,seconds`` ascending; infinity as ``inf``."""
    rows = sorted(
        (slot, origin, dest, seconds)
        for slot, per_origin in table.tables.items()
        for origin, dists in per_origin.items()
        for dest, seconds in dists.items()
    )
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TABLE_HEADER)
        for slot, origin, dest, seconds in rows:
            text = "inf" if math.isinf(seconds) else str(seconds)
            writer.writerow([slot, origin, dest, text])
    return len(rows)


def read_table_csv(path) -> ShortestTimeTable:
    tables: dict[int, dict[int, dict[int, float]]] = {}
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty table file") from None
        if header != TABLE_HEADER:
            raise ValueError(f"{path} line 1: expected header {','.join(TABLE_HEADER)!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                slot, origin, dest = int(row[0]), int(row[1]), int(row[2])
                seconds = INFINITY if row[3] == "inf" else float(row[3])
            except (IndexError, ValueError) as exc:
                raise ValueError(f"{path} line {lineno}: {exc}") from None
            if seconds < 0:
                raise ValueError(f"{path} line {lineno}: negative travel time {seconds}")
            tables.setdefault(slot, {}).setdefault(origin, {})[dest] = seconds
    return ShortestTimeTable(tables)
