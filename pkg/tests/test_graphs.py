import pytest
from hypothesis import given
from hypothesis import strategies as st

from nextloc.data import Dataset, Trajectory, as_dataset
from nextloc.graphs import (
    SlotConfig,
    build_graphs,
    candidate_count_cdf,
    candidate_next_locations,
    read_graphs_csv,
    slot_of,
    write_graphs_csv,
)

from gridworld import L3, L5, L6, L7, L9, grid_dataset


def test_slot_of_30_minute_slots():
    config = SlotConfig(1800)
    assert config.slots_per_day == 48
    assert slot_of(9 * 3600 + 13 * 60, config) == 18  # 09:13


def test_slot_of_single_slot():
    config = SlotConfig(86400)
    assert slot_of(0, config) == 0
    assert slot_of(12 * 3600 + 345, config) == 0
    assert slot_of(86400 * 3 + 5, config) == 0


def test_slot_of_boundary():
    assert slot_of(0, SlotConfig(1800)) == 0
    assert slot_of(1800, SlotConfig(1800)) == 1


def test_slot_config_must_divide_day():
    with pytest.raises(ValueError):
        SlotConfig(7000)
    with pytest.raises(ValueError):
        SlotConfig(0)


def test_build_weight_is_mean():
    dataset = Dataset(
        [
            Trajectory("u1", [(0, 0), (1, 60)]),
            Trajectory("u2", [(0, 10), (1, 130)]),
        ],
        2,
    )
    built = build_graphs(dataset, SlotConfig())
    assert built[0].weight(0, 1) == 90.0


def test_build_zero_duration_edge():
    dataset = Dataset([Trajectory("u", [(0, 5), (1, 5)])], 2)
    built = build_graphs(dataset, SlotConfig())
    assert built[0].weight(0, 1) == 0.0


def test_build_drops_negative_durations():
    dataset = Dataset([Trajectory("u", [(0, 100), (1, 40), (2, 100)])], 3)
    built = build_graphs(dataset, SlotConfig())
    assert built.dropped_negative == 1
    assert built[0].weight(0, 1) is None
    assert built[0].weight(1, 2) == 60.0


def test_build_assigns_slot_by_origin_arrival():
    config = SlotConfig(1800)
    # departs at 1790 (slot 0), arrives at 1910 (slot 1): observation lands in slot 0
    dataset = Dataset([Trajectory("u", [(0, 1790), (1, 1910)])], 2)
    built = build_graphs(dataset, config)
    assert built[0].weight(0, 1) == 120.0
    assert built[1].weight(0, 1) is None


def test_grid_fixture_symmetric_edge_averages():
    built = build_graphs(grid_dataset(), SlotConfig())
    assert built[0].weight(1, 2) == 60.0  # L2 -> L3
    assert built[0].weight(2, 1) == 60.0  # L3 -> L2


def test_grid_fixture_candidates_of_l6():
    built = build_graphs(grid_dataset(), SlotConfig())
    assert candidate_next_locations(built, L6) == {L3, L5, L7, L9}


def test_candidates_unknown_location_empty():
    built = build_graphs(grid_dataset(), SlotConfig())
    assert candidate_next_locations(built, 99) == set()


def test_candidates_union_over_slots():
    config = SlotConfig(43200)
    dataset = Dataset(
        [
            Trajectory("u1", [(0, 100), (1, 160)]),          # slot 0
            Trajectory("u2", [(0, 43300), (2, 43400)]),      # slot 1
        ],
        3,
    )
    built = build_graphs(dataset, config)
    assert built.candidates(0) == {1, 2}
    for graph in built:
        assert set(graph.out_neighbors(0)) <= built.candidates(0)


def test_single_slot_equals_aggregate():
    trajectories = [
        Trajectory("u1", [(0, 100), (1, 700), (0, 50_000)]),
        Trajectory("u2", [(1, 200), (0, 500), (1, 86_300)]),
    ]
    dataset = as_dataset(trajectories)
    single = build_graphs(dataset, SlotConfig(86400))
    sliced = build_graphs(dataset, SlotConfig(1800))
    for u, v, stats in single[0].edges():
        assert sliced.union_average(u, v) == pytest.approx(stats.average, rel=1e-9)
        assert single.union_average(u, v) == stats.average


@given(
    st.lists(
        st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 5000), st.integers(0, 3000)),
        min_size=1,
        max_size=40,
    )
)
def test_build_additivity_over_concatenation(moves):
    # each move: (from, to, start_time, duration) becomes a 2-point trajectory
    trajectories = [
        Trajectory(f"u{i}", [(a, t0), (b, t0 + d)]) for i, (a, b, t0, d) in enumerate(moves)
    ]
    half = len(trajectories) // 2
    first = build_graphs(as_dataset(trajectories[:half], 4), SlotConfig())
    second = build_graphs(as_dataset(trajectories[half:], 4), SlotConfig())
    whole = build_graphs(as_dataset(trajectories, 4), SlotConfig())
    for u, v, stats in whole[0].edges():
        parts = [g[0].adjacency.get(u, {}).get(v) for g in (first, second)]
        total = sum(p.total_time for p in parts if p is not None)
        count = sum(p.count for p in parts if p is not None)
        assert count == stats.count
        assert total / count == pytest.approx(stats.average, rel=1e-9)


def test_candidate_count_cdf_uniform():
    dataset = Dataset(
        [
            Trajectory("u", [(0, 0), (1, 60)]),
            Trajectory("u", [(1, 200), (0, 260)]),
        ],
        2,
    )
    built = build_graphs(dataset, SlotConfig())
    cdf = candidate_count_cdf(built)
    assert cdf.points == [(1, 1.0)]
    assert cdf.mean == 1.0


def test_candidate_count_cdf_grid():
    # pure grid: 4 corners with 2, 4 edge-centers with 3, 1 center with 4
    dataset = grid_dataset()
    dataset.trajectories = [t for t in dataset.trajectories if t.user.startswith("e")]
    cdf = candidate_count_cdf(build_graphs(dataset, SlotConfig()))
    assert cdf.mean == pytest.approx(24 / 9, rel=1e-12)
    assert cdf.points == [(2, 4 / 9), (3, 8 / 9), (4, 1.0)]


def test_graphs_csv_roundtrip(tmp_path):
    built = build_graphs(grid_dataset(), SlotConfig())
    path = tmp_path / "graphs.csv"
    n = write_graphs_csv(built, path)
    assert n == built.n_edges
    loaded = read_graphs_csv(path, SlotConfig())
    for u, v, stats in built[0].edges():
        assert loaded[0].weight(u, v) == stats.average
        assert loaded[0].adjacency[u][v].count == stats.count


def test_graphs_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "graphs.csv"
    path.write_text("nope\n")
    with pytest.raises(ValueError, match="header"):
        read_graphs_csv(path, SlotConfig())


def test_graphs_csv_rejects_bad_row(tmp_path):
    path = tmp_path / "graphs.csv"
    path.write_text("slot,from,to,avg_seconds,count\n0,1,2,x,1\n")
    with pytest.raises(ValueError, match="line 2"):
        read_graphs_csv(path, SlotConfig())
