"""Synthetic grid-city trajectories with a known ground-truth transfer graph.

Agents pick random origin/destination cells on a 4-connected grid and walk
toward the destination, usually along a shortest path; a fidelity parameter
controls how often they take a random detour step instead, and a noise
parameter jitters per-edge travel times. The true graph is returned alongside
the trajectories so learned weights and shortest times can be checked exactly.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass

from .data import Dataset, Trajectory
from .graphs import SegmentStats, SlotConfig, TransferGraph, TransferGraphs


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    edge_seconds: int = 60
    noise: float = 0.0  # multiplicative jitter fraction, uniform in [1-noise, 1+noise]
    seed: int = 0

    def __post_init__(self) -> None:
        if self.rows < 2 or self.cols < 2:
            raise ValueError(f"grid must be at least 2x2, got {self.rows}x{self.cols}")
        if self.edge_seconds <= 0:
            raise ValueError(f"edge_seconds must be positive, got {self.edge_seconds}")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError(f"noise must be in [0, 1), got {self.noise}")

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    def cell(self, row: int, col: int) -> int:
        return row * self.cols + col

    def position(self, cell: int) -> tuple[int, int]:
        return divmod(cell, self.cols)

    def neighbors(self, cell: int) -> list[int]:
        row, col = self.position(cell)
        out: list[int] = []
        if row > 0:
            out.append(self.cell(row - 1, col))
        if row < self.rows - 1:
            out.append(self.cell(row + 1, col))
        if col > 0:
            out.append(self.cell(row, col - 1))
        if col < self.cols - 1:
            out.append(self.cell(row, col + 1))
        return out

    def distance(self, a: int, b: int) -> int:
        (r1, c1), (r2, c2) = self.position(a), self.position(b)
        return abs(r1 - r2) + abs(c1 - c2)


@dataclass(frozen=True)
class AgentSpec:
    n_agents: int
    trips_per_agent: int = 1
    shortest_path_fidelity: float = 1.0  # probability of a shortest-path step vs. a random one

    def __post_init__(self) -> None:
        if self.n_agents < 1 or self.trips_per_agent < 1:
            raise ValueError("n_agents and trips_per_agent must be >= 1")
        if not 0.0 <= self.shortest_path_fidelity <= 1.0:
            raise ValueError(
                f"shortest_path_fidelity must be in [0, 1], got {self.shortest_path_fidelity}"
            )


def grid_truth_graphs(grid: GridSpec) -> TransferGraphs:
    """Single-slot graph with every directed grid edge at exactly edge_seconds."""
    adjacency: dict[int, dict[int, SegmentStats]] = {}
    for cell in range(grid.n_cells):
        adjacency[cell] = {
            nb: SegmentStats(float(grid.edge_seconds), 1) for nb in grid.neighbors(cell)
        }
    return TransferGraphs(SlotConfig(), [TransferGraph(0, adjacency)])


def _walk(grid: GridSpec, agents: AgentSpec, rng: random.Random, origin: int, dest: int, start: int) -> list[tuple[int, int]]:
    points = [(origin, start)]
    current, now = origin, start
    max_steps = 4 * grid.n_cells
    for _ in range(max_steps):
        if current == dest:
            break
        nbs = grid.neighbors(current)
        toward = [nb for nb in nbs if grid.distance(nb, dest) < grid.distance(current, dest)]
        if toward and rng.random() < agents.shortest_path_fidelity:
            step = rng.choice(toward)
        else:
            step = rng.choice(nbs)
        jitter = 1.0 if grid.noise == 0.0 else rng.uniform(1.0 - grid.noise, 1.0 + grid.noise)
        now += max(1, round(grid.edge_seconds * jitter))
        points.append((step, now))
        current = step
    return points


def generate(grid: GridSpec, agents: AgentSpec) -> tuple[Dataset, TransferGraphs]:
    """Agent trajectories plus the ground-truth graph they were generated on.

    Deterministic under the grid seed: each agent walks with its own derived
    RNG and trips land on separate days, so default sessionization recovers
    them. Origin/destination pairs are at least two hops apart, which keeps
    every trajectory at three points or longer.
    """
    master = random.Random(grid.seed)
    agent_seeds = [master.getrandbits(64) for _ in range(agents.n_agents)]
    trajectories: list[Trajectory] = []
    for idx, agent_seed in enumerate(agent_seeds):
        rng = random.Random(agent_seed)
        user = f"a{idx:05d}"
        for trip in range(agents.trips_per_agent):
            origin = rng.randrange(grid.n_cells)
            dest = rng.randrange(grid.n_cells)
            while grid.distance(origin, dest) < 2:
                dest = rng.randrange(grid.n_cells)
            start = trip * 86400 + rng.randrange(0, 43200)
            trajectories.append(Trajectory(user, _walk(grid, agents, rng, origin, dest, start)))
    return Dataset(trajectories, grid.n_cells), grid_truth_graphs(grid)


def write_records_csv(dataset: Dataset, path) -> int:
    """Flatten trajectories into the ``user,location,timestamp`` records CSV."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user", "location", "timestamp"])
        for traj in dataset.trajectories:
            for loc, sec in traj.points:
                writer.writerow([traj.user, loc, sec])
                n += 1
    return n
