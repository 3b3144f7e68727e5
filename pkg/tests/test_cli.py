import csv
import json

import pytest

from moveprint.cli import main
from moveprint.ingest import write_canonical

from helpers import jsonl, row


@pytest.fixture()
def pipeline(tmp_path, small_season):
    d = tmp_path
    write_canonical(small_season.matches, d / "events.jsonl")
    assert main(["extract", "--input", str(d / "events.jsonl"), "--out", str(d / "mv.csv")]) == 0
    assert main(["cluster", "--movements", str(d / "mv.csv"), "--k", "12", "--iters", "50", "--batch", "256", "--out", str(d / "model.json")]) == 0
    assert main(["profile", "--movements", str(d / "mv.csv"), "--model", str(d / "model.json"), "--out", str(d / "season.csv")]) == 0
    assert main(["profile", "--movements", str(d / "mv.csv"), "--model", str(d / "model.json"), "--scope", "game", "--out", str(d / "games.csv")]) == 0
    return d


def test_ingest_writes_canonical_and_rejects(tmp_path):
    rows = [row(t=i) for i in range(20)] + [row(t=30, x=150)]
    (tmp_path / "in.jsonl").write_bytes(jsonl(*rows))
    code = main(["ingest", "--input", str(tmp_path / "in.jsonl"), "--out", str(tmp_path / "c.jsonl"), "--rejects", str(tmp_path / "r.csv")])
    assert code == 0
    assert len((tmp_path / "c.jsonl").read_text().splitlines()) == 20
    assert "coordinate out of range" in (tmp_path / "r.csv").read_text()


def test_ingest_fatal_reject_rate(tmp_path):
    (tmp_path / "in.jsonl").write_bytes(jsonl(row(x=150)))
    assert main(["ingest", "--input", str(tmp_path / "in.jsonl"), "--out", str(tmp_path / "c.jsonl")]) == 1


def test_model_json_schema(pipeline):
    doc = json.loads((pipeline / "model.json").read_text())
    assert doc["k"] == 12 and len(doc["centroids"]) == 12


def test_similar_uniqueness_consistency(pipeline, capsys):
    season = str(pipeline / "season.csv")
    assert main(["similar", "--profiles", season, "--player", "t01p01", "--min-movements", "50"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "rank,player_id,distance" and len(out) == 6
    assert main(["uniqueness", "--profiles", season, "--min-movements", "50", "--out", str(pipeline / "u.csv")]) == 0
    rows = list(csv.DictReader((pipeline / "u.csv").open()))
    assert len(rows) == 100
    assert main(["consistency", "--profiles", str(pipeline / "games.csv"), "--player", "t01p01"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 5


def test_preshot(pipeline, capsys):
    events = str(pipeline / "events.jsonl")
    mv = str(pipeline / "mv.csv")
    assert main(["preshot", "--movements", mv, "--events", events, "--team", "t01"]) == 0
    assert capsys.readouterr().out.startswith("shot,match_id")


def test_render_commands(pipeline):
    d = pipeline
    assert main(["render", "movements", "--movements", str(d / "mv.csv"), "--player", "t01p01", "--out", str(d / "a.svg")]) == 0
    assert main(["render", "profile", "--profiles", str(d / "season.csv"), "--model", str(d / "model.json"), "--player", "t01p01", "--out", str(d / "b.svg")]) == 0
    assert main(["render", "coverage", "--model", str(d / "model.json"), "--movements", str(d / "mv.csv"), "--clusters", "0,3", "--out", str(d / "c.svg")]) == 0
    assert main(["render", "metrics", "--profiles", str(d / "season.csv"), "--game-profiles", str(d / "games.csv"), "--min-movements", "50", "--out", str(d / "plots")]) == 0
    for name in ("a.svg", "b.svg", "c.svg"):
        assert (d / name).read_text().startswith("<?xml")
    assert (d / "plots" / "scatter.csv").exists()


def test_render_missing_arguments(capsys):
    with pytest.raises(SystemExit):
        main(["render", "profile", "--out", "x.svg"])


def test_synth_from_spec_and_preset(tmp_path):
    from moveprint.synthgen import scale_preset

    spec = scale_preset("clones", seed=1)
    spec.n_games = 1
    (tmp_path / "spec.json").write_text(spec.to_json())
    out = tmp_path / "s.jsonl"
    assert main(["synth", "--spec", str(tmp_path / "spec.json"), "--out", str(out), "--manifest", str(tmp_path / "man.json")]) == 0
    man = json.loads((tmp_path / "man.json").read_text())
    assert man["n_matches"] == 5 and len(man["clone_pairs"]) == 5
    first = out.read_bytes()
    assert main(["synth", "--spec", str(tmp_path / "spec.json"), "--out", str(out)]) == 0
    assert out.read_bytes() == first
