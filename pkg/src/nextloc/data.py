"""Record parsing, sessionization, length filtering, and train/test splitting."""

from __future__ import annotations

import csv
import json
import math
import random
from dataclasses import dataclass
from typing import Iterable

RECORDS_HEADER = ["user", "location", "timestamp"]


class LocationIndex:
    """Interns location names to dense integer ids in first-seen order."""

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._names: list[str] = []

    def intern(self, name: str) -> int:
        idx = self._ids.get(name)
        if idx is None:
            idx = len(self._names)
            self._ids[name] = idx
            self._names.append(name)
        return idx

    def name(self, index: int) -> str:
        return self._names[index]

    @property
    def names(self) -> list[str]:
        return list(self._names)

    def __len__(self) -> int:
        return len(self._names)


@dataclass(frozen=True)
class Record:
    """One raw observation: a user seen at a location at a point in time."""

    user: str
    location: int
    time: int  # seconds since epoch, UTC


@dataclass
class Trajectory:
    """Time-ordered sequence of (location, time) visits by one user."""

    user: str
    points: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class Dataset:
    trajectories: list[Trajectory]
    location_count: int


@dataclass(frozen=True)
class SplitConfig:
    train_fraction: float = 0.8
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def parse_records(lines: Iterable[str], locations: LocationIndex | None = None) -> list[Record]:
    """Parse a records CSV with header ``user,location,timestamp`` into Records.

    Location names are interned to dense integer ids in first-seen order; pass
    a LocationIndex to keep the id-to-name mapping around.
    """
    if locations is None:
        locations = LocationIndex()
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise ValueError("records CSV is empty (missing header)") from None
    if [h.strip() for h in header] != RECORDS_HEADER:
        raise ValueError(
            f"records CSV line 1: expected header 'user,location,timestamp', got {','.join(header)!r}"
        )
    records: list[Record] = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"records CSV line {lineno}: expected 3 fields, got {len(row)}")
        user, name, stamp = row
        try:
            time = int(stamp)
        except ValueError:
            raise ValueError(
                f"records CSV line {lineno}: timestamp {stamp!r} is not an integer"
            ) from None
        if time < 0:
            raise ValueError(f"records CSV line {lineno}: negative timestamp {time}")
        records.append(Record(user, locations.intern(name), time))
    return records


def sessionize(records: Iterable[Record], gap: int = 1800) -> list[Trajectory]:
    """Group records per user and cut a new trajectory where the time gap exceeds ``gap``.

    Records are stable-sorted by time within each user, so ties keep input
    order. Output is ordered by user, then time.
    """
    if gap <= 0:
        raise ValueError(f"gap must be positive, got {gap}")
    by_user: dict[str, list[Record]] = {}
    for rec in records:
        by_user.setdefault(rec.user, []).append(rec)
    trajectories: list[Trajectory] = []
    for user in sorted(by_user):
        points: list[tuple[int, int]] = []
        for rec in sorted(by_user[user], key=lambda r: r.time):
            if points and rec.time - points[-1][1] > gap:
                trajectories.append(Trajectory(user, points))
                points = []
            points.append((rec.location, rec.time))
        if points:
            trajectories.append(Trajectory(user, points))
    return trajectories


def filter_min_length(trajectories: Iterable[Trajectory], min_len: int = 3) -> list[Trajectory]:
    """Keep trajectories with at least ``min_len`` points."""
    if min_len < 1:
        raise ValueError(f"min_len must be >= 1, got {min_len}")
    return [t for t in trajectories if len(t) >= min_len]


def as_dataset(trajectories: list[Trajectory], location_count: int | None = None) -> Dataset:
    """Wrap trajectories in a Dataset, inferring location_count when absent."""
    if location_count is None:
        location_count = 1 + max(
            (loc for t in trajectories for loc, _ in t.points), default=-1
        )
    return Dataset(trajectories, location_count)


def split(dataset: Dataset, config: SplitConfig) -> tuple[Dataset, Dataset]:
    """Deterministic shuffled split; train gets round(train_fraction * N) trajectories."""
    n = len(dataset.trajectories)
    if n == 0:
        raise ValueError("cannot split an empty dataset")
    order = list(range(n))
    random.Random(config.seed).shuffle(order)
    n_train = math.floor(config.train_fraction * n + 0.5)
    train = [dataset.trajectories[i] for i in order[:n_train]]
    test = [dataset.trajectories[i] for i in order[n_train:]]
    return (
        Dataset(train, dataset.location_count),
        Dataset(test, dataset.location_count),
    )


def write_trajectories_jsonl(trajectories: Iterable[Trajectory], path) -> int:
    """Write one JSON object per line: {"user": ..., "points": [[loc, sec], ...]}."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for t in trajectories:
            obj = {"user": t.user, "points": [[loc, sec] for loc, sec in t.points]}
            fh.write(json.dumps(obj, separators=(",", ":")) + "\n")
            n += 1
    return n


def read_trajectories_jsonl(path) -> list[Trajectory]:
    trajectories: list[Trajectory] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                points = [(int(loc), int(sec)) for loc, sec in obj["points"]]
                trajectories.append(Trajectory(str(obj["user"]), points))
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"trajectories JSONL line {lineno}: {exc}") from None
    return trajectories
