"""``moveprint`` command line."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import chances, cluster, extract, ingest, metrics, profile, report, synthgen

log = logging.getLogger("moveprint")


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def _venues(path: str | None) -> dict[str, ingest.Venue]:
    return ingest.load_venues(path) if path else {}


def cmd_ingest(args) -> int:
    matches, rejects = ingest.read_event_log(args.input, args.format)
    ingest.write_canonical(matches, args.out)
    if args.venues:
        registry = ingest.load_venues(args.venues)
        for m in matches:
            ingest.lookup_venue(m.venue_id, registry)
    if args.rejects:
        lines = ["line,reason"] + [f"{r.line},\"{r.reason}\"" for r in rejects]
        Path(args.rejects).write_text("\n".join(lines) + "\n", encoding="utf-8")
    n_events = sum(len(m.events) for m in matches)
    log.info("%d matches, %d events, %d rejects", len(matches), n_events, len(rejects))
    return 0


def cmd_extract(args) -> int:
    matches, _ = ingest.read_event_log(args.input, "jsonl")
    movements = extract.extract_all(matches, _venues(args.venues), max_gap_s=args.max_gap_s)
    extract.write_movements(movements, args.out)
    log.info("%d movements", len(movements))
    return 0


def cmd_cluster(args) -> int:
    pts = cluster.movement_points(extract.read_movements(args.movements))
    model = cluster.minibatch_kmeans(pts, k=args.k, batch_size=args.batch, iterations=args.iters, seed=args.seed)
    model.save(args.out)
    if model.empty_clusters:
        log.warning("%d empty clusters: %s", len(model.empty_clusters), list(model.empty_clusters))
    return 0


def cmd_profile(args) -> int:
    movements = extract.read_movements(args.movements)
    model = cluster.ClusterModel.load(args.model)
    flt = profile.MovementFilter.parse(args.filter)
    profiles = profile.build_profiles(movements, model, args.scope, flt)
    profile.write_profiles(profiles, args.out)
    return 0


def _season(path: str) -> list[profile.CharacteristicVector]:
    rows = [p for p in profile.read_profiles(path) if p.scope == profile.SEASON]
    if not rows:
        raise SystemExit(f"{path}: no season-scope profiles")
    return rows


def _games(path: str) -> list[profile.CharacteristicVector]:
    rows = [p for p in profile.read_profiles(path) if p.scope == profile.GAME]
    if not rows:
        raise SystemExit(f"{path}: no game-scope profiles")
    return rows


def cmd_similar(args) -> int:
    sim = metrics.most_similar(args.player, _season(args.profiles), args.m, args.min_movements)
    _write(metrics.format_similarity(sim), args.out)
    return 0


def cmd_uniqueness(args) -> int:
    scores = metrics.uniqueness_table(_season(args.profiles), args.m, args.min_movements)
    _write(metrics.format_uniqueness(scores), args.out)
    return 0


def cmd_consistency(args) -> int:
    games = [g for g in _games(args.profiles) if g.player_id == args.player]
    if not games:
        raise SystemExit(f"no game profiles for {args.player!r}")
    _write(metrics.format_consistency(metrics.consistency_series(games)), args.out)
    return 0


def cmd_preshot(args) -> int:
    matches, _ = ingest.read_event_log(args.events, "jsonl")
    movements = extract.read_movements(args.movements)
    rows = []
    if args.player:
        for m in chances.preshot_player(matches, movements, args.player):
            rows.append((f"{m.match_id}@{m.end_T}", m))
    else:
        for shot in chances.shots(matches):
            if shot.team_id != args.team:
                continue
            ps = chances.preshot_team(matches, movements, shot, args.window)
            rows.extend((f"{ps.match_id}@{ps.shot_t}", m) for m in ps.movements)
    _write(chances.format_preshot(rows), args.out)
    return 0


def cmd_render(args) -> int:
    if args.what == "movements":
        movements = extract.read_movements(args.movements)
        if args.player:
            movements = [m for m in movements if m.player_id == args.player]
        if args.match:
            movements = [m for m in movements if m.match_id == args.match]
        _write(report.render_movements(movements, args.color), args.out)
    elif args.what == "profile":
        model = cluster.ClusterModel.load(args.model)
        cv = next((p for p in _season(args.profiles) if p.player_id == args.player), None)
        if cv is None:
            raise SystemExit(f"no season profile for {args.player!r}")
        _write(report.render_characteristic(cv, model, args.n), args.out)
    elif args.what == "coverage":
        model = cluster.ClusterModel.load(args.model)
        pts = cluster.movement_points(extract.read_movements(args.movements))
        idx = [int(v) for v in args.clusters.split(",") if v.strip()]
        _write(report.render_cluster_coverage(model, pts, idx), args.out)
    else:
        season = _season(args.profiles)
        games = _games(args.game_profiles)
        scores = metrics.uniqueness_table(season, args.m, args.min_movements)
        report.emit_metric_plots(scores, metrics.consistency_by_player(games), args.out)
    return 0


def cmd_synth(args) -> int:
    if args.preset:
        spec = synthgen.scale_preset(args.preset, args.seed if args.seed is not None else 42)
    else:
        spec = synthgen.SeasonSpec.from_json(Path(args.spec).read_text(encoding="utf-8"))
        if args.seed is not None:
            spec.seed = args.seed
    season = synthgen.generate_season(spec)
    ingest.write_canonical(season.matches, args.out)
    if args.manifest:
        synthgen.write_manifest(season.manifest, args.manifest)
    log.info("%d matches, %d planted movements", len(season.matches), len(season.planted))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="moveprint", description="Movement profiles from soccer event logs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="validate an event log and write canonical JSON Lines")
    s.add_argument("--input", required=True)
    s.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    s.add_argument("--venues")
    s.add_argument("--out", required=True)
    s.add_argument("--rejects", help="write rejected rows to this CSV")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("extract", help="derive movement vectors")
    s.add_argument("--input", required=True)
    s.add_argument("--venues")
    s.add_argument("--out", required=True)
    s.add_argument("--max-gap-s", type=int, default=None)
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("cluster", help="train the movement vocabulary")
    s.add_argument("--movements", required=True)
    s.add_argument("--k", type=int, default=cluster.DEFAULT_K)
    s.add_argument("--seed", type=int, default=cluster.DEFAULT_SEED)
    s.add_argument("--batch", type=int, default=cluster.DEFAULT_BATCH)
    s.add_argument("--iters", type=int, default=cluster.DEFAULT_ITERATIONS)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_cluster)

    s = sub.add_parser("profile", help="build characteristic vectors")
    s.add_argument("--movements", required=True)
    s.add_argument("--model", required=True)
    s.add_argument("--scope", choices=(profile.SEASON, profile.GAME), default=profile.SEASON)
    s.add_argument("--filter", default="all", help="all | ball | speed[:km/h]")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_profile)

    for name, func, help_ in (
        ("similar", cmd_similar, "most similar players"),
        ("uniqueness", cmd_uniqueness, "uniqueness table"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--profiles", required=True)
        if name == "similar":
            s.add_argument("--player", required=True)
        s.add_argument("--m", type=int, default=metrics.DEFAULT_M)
        s.add_argument("--min-movements", type=int, default=metrics.DEFAULT_MIN_MOVEMENTS)
        s.add_argument("--out")
        s.set_defaults(func=func)

    s = sub.add_parser("consistency", help="per-game consistency series")
    s.add_argument("--profiles", required=True, help="game-scope profiles")
    s.add_argument("--player", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_consistency)

    s = sub.add_parser("preshot", help="movements before shots")
    s.add_argument("--movements", required=True)
    s.add_argument("--events", required=True)
    who = s.add_mutually_exclusive_group(required=True)
    who.add_argument("--player")
    who.add_argument("--team")
    s.add_argument("--window", type=int, default=chances.DEFAULT_WINDOW_S)
    s.add_argument("--out")
    s.set_defaults(func=cmd_preshot)

    s = sub.add_parser("render", help="SVG diagrams and plot data")
    s.add_argument("what", choices=("movements", "profile", "coverage", "metrics"))
    s.add_argument("--movements")
    s.add_argument("--profiles")
    s.add_argument("--game-profiles")
    s.add_argument("--model")
    s.add_argument("--player")
    s.add_argument("--match")
    s.add_argument("--color", choices=("speed", "player"), default="speed")
    s.add_argument("--n", type=int, default=profile.DEFAULT_TOP_N)
    s.add_argument("--clusters", default="0,1,2,3,4,5")
    s.add_argument("--m", type=int, default=metrics.DEFAULT_M)
    s.add_argument("--min-movements", type=int, default=metrics.DEFAULT_MIN_MOVEMENTS)
    s.add_argument("--out", required=True, help="SVG file, or directory for 'metrics'")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("synth", help="generate a synthetic season")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--spec")
    src.add_argument("--preset", choices=("paper", "clones"))
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True)
    s.add_argument("--manifest")
    s.set_defaults(func=cmd_synth)
    return p


_REQUIRED_FOR_RENDER = {
    "movements": ("movements",),
    "profile": ("profiles", "model", "player"),
    "coverage": ("model", "movements"),
    "metrics": ("profiles", "game_profiles"),
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "render":
        missing = [f"--{a.replace('_', '-')}" for a in _REQUIRED_FOR_RENDER[args.what] if not getattr(args, a)]
        if missing:
            parser.error(f"render {args.what} requires {', '.join(missing)}")
    try:
        return args.func(args)
    except (ingest.IngestError, ValueError, KeyError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
