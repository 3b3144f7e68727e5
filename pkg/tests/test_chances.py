import pytest

from moveprint.chances import format_preshot, preshot_player, preshot_team, shots
from moveprint.extract import extract_all
from moveprint.ingest import parse_event_log

from helpers import jsonl, row


@pytest.fixture()
def scene():
    rows = [
        row(t=50, player="a2", kind="tackle", x=10, y=10),
        row(t=70, player="a2", kind="pass", x=15, y=15),
        row(t=80, player="a2", kind="pass", x=20, y=20),
        row(t=95, player="a2", kind="reception", x=60, y=30),
        row(t=115, player="a2", kind="pass", x=70, y=30),
        row(t=100, player="a1", kind="recovery", x=40, y=50),
        row(t=110, player="a1", kind="shot", x=88, y=50),
        row(t=5, period=2, player="a1", kind="shot", x=80, y=40),
        row(t=92, player="b1", team="B", kind="tackle", x=50, y=50),
        row(t=100, player="b1", team="B", kind="clearance", x=30, y=50),
    ]
    matches, _ = parse_event_log(jsonl(*rows), "jsonl")
    return matches, extract_all(matches)


def test_shots(scene):
    matches, _ = scene
    assert [(s.player_id, s.period, s.timestamp_s) for s in shots(matches)] == [("a1", 1, 110), ("a1", 2, 5)]


def test_player_preshot_is_the_movement_ending_in_the_shot(scene):
    matches, ms = scene
    (m,) = preshot_player(matches, ms, "a1")
    assert (m.T, m.dt, m.ball) == (100, 10, True)
    assert m.x2 == pytest.approx(0.88 * 105)
    assert preshot_player(matches, ms, "a2") == []


def test_team_preshot_window(scene):
    matches, ms = scene
    shot = shots(matches)[0]
    ps = preshot_team(matches, ms, shot, window_s=20)
    assert sorted(ps.groups) == ["a1", "a2"]
    assert [(m.T, m.end_T) for m in ps.groups["a2"]] == [(80, 95)]
    assert [(m.T, m.end_T) for m in ps.groups["a1"]] == [(100, 110)]
    assert all(m.player_id != "b1" for m in ps.movements)


def test_team_preshot_window_edges(scene):
    matches, ms = scene
    shot = shots(matches)[0]
    wide = preshot_team(matches, ms, shot, window_s=40)
    assert [m.end_T for m in wide.groups["a2"]] == [70, 80, 95]
    zero = preshot_team(matches, ms, shot, window_s=0)
    assert list(zero.groups) == ["a1"]
    with pytest.raises(ValueError):
        preshot_team(matches, ms, shot, window_s=-1)


def test_team_preshot_without_provenance_uses_events(scene, tmp_path):
    from moveprint.extract import read_movements, write_movements

    matches, ms = scene
    write_movements(ms, tmp_path / "m.csv")
    plain = read_movements(tmp_path / "m.csv")
    shot = shots(matches)[0]
    a = preshot_team(matches, plain, shot)
    b = preshot_team(matches, ms, shot)
    assert [(m.player_id, m.T) for m in a.movements] == [(m.player_id, m.T) for m in b.movements]
    assert len(preshot_player(matches, plain, "a1")) == 1


def test_format(scene):
    matches, ms = scene
    text = format_preshot([("m1@110", m) for m in preshot_player(matches, ms, "a1")])
    head, line = text.splitlines()
    assert head.startswith("shot,match_id,player_id,T,dt")
    assert line.startswith("m1@110,m1,a1,100,10,")


def test_striker_shots_from_left_channel():
    from moveprint.synthgen import ArchetypeSpec, Component, SeasonSpec, generate_season

    striker = ArchetypeSpec("s", (Component((60.0, 10.0, 90.0, 25.0), 1.0, end_kind="shot"),), 0.5, (10, 10))
    season = generate_season(SeasonSpec(1, 1, 1, {"s": striker}, {"t01p01": "s"}, seed=4))
    got = preshot_player(season.matches, extract_all(season.matches), "t01p01")
    assert len(got) == 10 and all(m.x2 > 70.0 for m in got)


def test_five_teammates_in_window():
    rows = []
    for i, p in enumerate(["a1", "a2", "a3", "a4", "a5"]):
        rows += [row(t=80 + i, player=p, kind="pass", x=20 + i, y=30), row(t=95 + i, player=p, kind="reception", x=40 + i, y=30)]
    rows.append(row(t=100, player="a1", kind="shot", x=85, y=45))
    rows += [row(t=90, player="b1", team="B", kind="tackle", x=50, y=50), row(t=99, player="b1", team="B", kind="clearance", x=30, y=50)]
    matches, _ = parse_event_log(jsonl(*rows), "jsonl")
    ps = preshot_team(matches, extract_all(matches), shots(matches)[0])
    assert sorted(ps.groups) == ["a1", "a2", "a3", "a4", "a5"]


def test_window_monotone_and_player_subset(scene):
    matches, ms = scene
    shot = shots(matches)[0]
    prev = set()
    for w in range(0, 80, 5):
        cur = {(m.player_id, m.T) for m in preshot_team(matches, ms, shot, w).movements}
        assert prev <= cur
        prev = cur
    assert set(preshot_player(matches, ms, "a1")) <= {m for m in ms if m.player_id == "a1"}
