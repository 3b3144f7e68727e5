import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from moveprint.cluster import ClusterModel
from moveprint.profile import (
    GAME,
    MovementFilter,
    build_characteristic,
    build_profiles,
    read_profiles,
    season_from_games,
    top_features,
    write_profiles,
)

from helpers import mv, profile

# three well-separated centres along x1
MODEL = ClusterModel(centroids=np.array([[0.0, 0, 0, 0], [50, 0, 0, 0], [100, 0, 0, 0]]))


def test_frequencies_sum_to_one_and_count_assignments():
    ms = [mv(1, 0, 0, 0), mv(2, 0, 0, 0), mv(49, 0, 0, 0), mv(99, 0, 0, 0)]
    cv = build_characteristic(ms, MODEL)
    assert cv.freq.tolist() == [0.5, 0.25, 0.25]
    assert cv.n_movements == 4 and cv.counts.tolist() == [2, 1, 1]


def test_single_cluster_and_even_split():
    model = ClusterModel(centroids=np.array([[float(j), 0, 0, 0] for j in range(10)]))
    cv = build_characteristic([mv(7, 0, 0, 0)] * 4, model)
    assert cv.freq[7] == 1.0 and cv.freq.sum() == 1.0
    cv = build_characteristic([mv(0, 0, 0, 0)] * 2 + [mv(3, 0, 0, 0)] * 2, model)
    assert cv.freq[0] == cv.freq[3] == 0.5
    assert top_features(build_characteristic([mv(7, 0, 0, 0)] * 4, model), 50) == [(7, 1.0)]


def test_ball_filter_without_possession_is_empty():
    cv = build_characteristic([mv(1, 0, 0, 0, ball=False)] * 3, MODEL, MovementFilter("ball"))
    assert cv.is_empty


def test_top_features_uniform_tie_break():
    top = top_features(profile("u", np.ones(200)), 50)
    assert [j for j, _ in top] == list(range(50)) and all(f == 0.005 for _, f in top)


def test_filter_leaving_nothing_gives_empty_profile():
    cv = build_characteristic([mv(1, 0, 0, 0, speed=3)], MODEL, MovementFilter("speed", 14))
    assert cv.is_empty and cv.freq.tolist() == [0, 0, 0]


def test_filter_parse_and_labels():
    assert MovementFilter.parse("speed:20") == MovementFilter("speed", 20.0)
    assert MovementFilter.parse("speed").threshold_kmh == 14.0
    assert MovementFilter.parse("ball").label == "ball"
    assert MovementFilter.parse("speed:14").label == "speed:14"
    for bad in ("fast", "ball:3", "speed:-1"):
        with pytest.raises(ValueError):
            MovementFilter.parse(bad)


def test_speed_filter_inclusive():
    ms = [mv(1, 0, 0, 0, speed=14.0), mv(99, 0, 0, 0, speed=13.99)]
    cv = build_characteristic(ms, MODEL, MovementFilter("speed", 14.0))
    assert cv.counts.tolist() == [1, 0, 0]


def test_mixed_players_rejected():
    with pytest.raises(ValueError):
        build_characteristic([mv(1, 0, 0, 0, player="a"), mv(1, 0, 0, 0, player="b")], MODEL)


def test_build_profiles_season_and_game():
    ms = [
        mv(1, 0, 0, 0, player="b", match="m2"),
        mv(51, 0, 0, 0, player="a", match="m1"),
        mv(99, 0, 0, 0, player="a", match="m2"),
        mv(0, 0, 0, 0, player="a", match="m2", ball=True),
    ]
    season = build_profiles(ms, MODEL)
    assert [(p.player_id, p.n_movements) for p in season] == [("a", 3), ("b", 1)]
    games = build_profiles(ms, MODEL, scope=GAME)
    assert [(p.player_id, p.match_id, p.n_movements) for p in games] == [("a", "m1", 1), ("a", "m2", 2), ("b", "m2", 1)]
    ball = build_profiles(ms, MODEL, filter=MovementFilter("ball"))
    assert [(p.player_id, p.n_movements, p.filter) for p in ball] == [("a", 1, "ball"), ("b", 0, "ball")]


def test_season_equals_weighted_mean_of_games():
    rng = np.random.default_rng(1)
    ms = [
        mv(rng.uniform(0, 100), 0, 0, 0, player="a", match=f"m{rng.integers(4)}")
        for _ in range(200)
    ]
    season = build_profiles(ms, MODEL)[0]
    games = build_profiles(ms, MODEL, scope=GAME)
    combined = season_from_games(games)
    assert combined.n_movements == season.n_movements
    np.testing.assert_allclose(combined.freq, season.freq, atol=1e-12)


def test_top_features_order():
    cv = profile("p", [1, 3, 3, 0, 2])
    assert [j for j, _ in top_features(cv, 50)] == [1, 2, 4, 0]
    assert [j for j, _ in top_features(cv, 2)] == [1, 2]
    assert top_features(cv, 0) == []


def test_csv_roundtrip_is_exact(tmp_path):
    rng = np.random.default_rng(2)
    ps = [profile(f"p{i}", rng.integers(0, 9, 7), n=int(rng.integers(1, 900))) for i in range(5)]
    ps.append(profile("g", [1, 0, 0, 0, 0, 0, 1], scope=GAME, match="m3"))
    write_profiles(ps, tmp_path / "p.csv")
    back = read_profiles(tmp_path / "p.csv")
    for a, b in zip(ps, back):
        assert (a.player_id, a.scope, a.match_id, a.n_movements) == (b.player_id, b.scope, b.match_id, b.n_movements)
        assert np.array_equal(a.freq, b.freq)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 105, allow_nan=False), min_size=1, max_size=60))
def test_profile_is_a_distribution(xs):
    cv = build_characteristic([mv(x, 0, 0, 0) for x in xs], MODEL)
    assert cv.n_movements == len(xs)
    assert np.all(cv.freq >= 0)
    assert cv.freq.sum() == pytest.approx(1.0, abs=1e-12)
