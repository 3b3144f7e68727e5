"""Seeded synthetic seasons with planted ground truth.

Events are generated *from* movements. Every planted movement becomes a
start event and an end event, and the next movement starts in the same
second the previous one ended. Extraction therefore sees the planted pairs
(positive duration) separated by zero-duration joins, which it discards.
The planted vectors come back exactly.

Stream splitting rule: match ``i`` (0-based, in schedule order) draws from
``numpy.random.default_rng(SeedSequence([seed, i]))``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .extract import DEFAULT_POSSESSION, STANDARD_LENGTH_M, STANDARD_WIDTH_M, MovementVector, to_standard_frame
from .ingest import KINDS, Event, Match, Venue

HALF_START_S = (0, 2700)
ERRATIC_CONCENTRATION = 0.3
MIN_SPEED_KMH = 1.0
PHANTOM_TEAM = "t00"

_BOUNDS = np.array([STANDARD_LENGTH_M, STANDARD_WIDTH_M, STANDARD_LENGTH_M, STANDARD_WIDTH_M])
_POSS_STARTS = ("reception", "recovery", "interception", "dribble")
_POSS_ENDS = ("pass", "dribble", "clearance", "foul_won")
_FREE_STARTS = ("pass", "tackle", "foul_committed")
_FREE_ENDS = ("reception", "tackle", "interception", "recovery", "pass", "other")


class SpecError(ValueError):
    """The season spec cannot be realised."""


@dataclass(frozen=True)
class Component:
    """One Gaussian movement prototype, in standard-frame meters."""

    mean: tuple[float, float, float, float]
    sigma: float | tuple[float, float, float, float] = 2.0
    weight: float = 1.0
    speed_kmh: float = 10.0
    speed_sd: float = 3.0
    end_kind: str | None = None

    def __post_init__(self) -> None:
        if len(self.mean) != 4:
            raise SpecError("component mean must have 4 coordinates")
        if any(not 0 <= v <= b for v, b in zip(self.mean, _BOUNDS)):
            raise SpecError(f"component mean {self.mean} outside the pitch")
        if self.weight < 0:
            raise SpecError("component weight must be non-negative")
        if np.any(np.asarray(self.sigma, dtype=float) < 0):
            raise SpecError("component sigma must be non-negative")
        if self.end_kind is not None and self.end_kind not in KINDS:
            raise SpecError(f"unknown end kind {self.end_kind!r}")


@dataclass(frozen=True)
class ArchetypeSpec:
    name: str
    components: tuple[Component, ...]
    possession_prob: float = 0.3
    movements_per_game: tuple[int, int] = (20, 60)

    def __post_init__(self) -> None:
        if not self.components:
            raise SpecError(f"archetype {self.name!r} has no components")
        if abs(sum(c.weight for c in self.components) - 1.0) > 1e-9:
            raise SpecError(f"archetype {self.name!r}: component weights must sum to 1")
        lo, hi = self.movements_per_game
        if lo < 0 or hi < lo:
            raise SpecError(f"archetype {self.name!r}: bad movements_per_game {self.movements_per_game}")
        if not 0 <= self.possession_prob <= 1:
            raise SpecError("possession_prob must lie in [0, 1]")

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])


@dataclass
class SeasonSpec:
    n_teams: int
    n_players_per_team: int | tuple[int, ...]
    n_games: int
    archetypes: dict[str, ArchetypeSpec]
    assignment: dict[str, str]
    clone_pairs: tuple[tuple[str, str], ...] = ()
    erratic: tuple[str, ...] = ()
    games_played: dict[str, int] = field(default_factory=dict)
    seed: int = 42

    def roster(self) -> dict[str, list[str]]:
        sizes = self.n_players_per_team
        if isinstance(sizes, int):
            sizes = (sizes,) * self.n_teams
        if len(sizes) != self.n_teams:
            raise SpecError("one squad size per team required")
        return {team_id(t): [player_id(t, p) for p in range(sizes[t])] for t in range(self.n_teams)}

    def validate(self) -> None:
        if self.n_teams < 1:
            raise SpecError("need at least one team")
        if self.n_games < 1:
            raise SpecError("need at least one game")
        players = [p for squad in self.roster().values() for p in squad]
        if not players:
            raise SpecError("no players")
        missing = [p for p in players if p not in self.assignment]
        if missing:
            raise SpecError(f"players without archetype: {missing[:5]}")
        unknown = {a for a in self.assignment.values() if a not in self.archetypes}
        if unknown:
            raise SpecError(f"unknown archetypes: {sorted(unknown)}")
        known = set(players)
        for a, b in self.clone_pairs:
            if a == b or a not in known or b not in known:
                raise SpecError(f"bad clone pair ({a}, {b})")
            if self.assignment[a] != self.assignment[b]:
                raise SpecError(f"clone pair ({a}, {b}) does not share an archetype")
        for p in self.erratic:
            if p not in known:
                raise SpecError(f"erratic player {p!r} not in roster")
        for p, g in self.games_played.items():
            if p not in known or not 0 <= g <= self.n_games:
                raise SpecError(f"bad games_played for {p!r}")

    def to_json(self) -> str:
        doc = {
            "n_teams": self.n_teams,
            "n_players_per_team": self.n_players_per_team
            if isinstance(self.n_players_per_team, int)
            else list(self.n_players_per_team),
            "n_games": self.n_games,
            "seed": self.seed,
            "archetypes": {
                name: {
                    "components": [asdict(c) for c in a.components],
                    "possession_prob": a.possession_prob,
                    "movements_per_game": list(a.movements_per_game),
                }
                for name, a in self.archetypes.items()
            },
            "assignment": self.assignment,
            "clone_pairs": [list(p) for p in self.clone_pairs],
            "erratic": list(self.erratic),
            "games_played": self.games_played,
        }
        return json.dumps(doc, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> SeasonSpec:
        doc = json.loads(text)

        def component(c: dict) -> Component:
            sigma = c.get("sigma", 2.0)
            return Component(
                mean=tuple(c["mean"]),
                sigma=tuple(sigma) if isinstance(sigma, list) else sigma,
                weight=c.get("weight", 1.0),
                speed_kmh=c.get("speed_kmh", 10.0),
                speed_sd=c.get("speed_sd", 3.0),
                end_kind=c.get("end_kind"),
            )

        sizes = doc["n_players_per_team"]
        return cls(
            n_teams=doc["n_teams"],
            n_players_per_team=sizes if isinstance(sizes, int) else tuple(sizes),
            n_games=doc["n_games"],
            archetypes={
                name: ArchetypeSpec(
                    name,
                    tuple(component(c) for c in a["components"]),
                    a.get("possession_prob", 0.3),
                    tuple(a.get("movements_per_game", (20, 60))),
                )
                for name, a in doc["archetypes"].items()
            },
            assignment=dict(doc["assignment"]),
            clone_pairs=tuple(tuple(p) for p in doc.get("clone_pairs", ())),
            erratic=tuple(doc.get("erratic", ())),
            games_played=dict(doc.get("games_played", {})),
            seed=doc.get("seed", 42),
        )


@dataclass
class SyntheticSeason:
    matches: list[Match]
    manifest: dict
    planted: list[MovementVector]


def team_id(t: int) -> str:
    return f"t{t + 1:02d}"


def player_id(t: int, p: int) -> str:
    return f"t{t + 1:02d}p{p + 1:02d}"


def schedule(n_teams: int, n_games: int) -> list[tuple[str, str]]:
    """Round-robin fixtures (circle method), ``n_games`` matchdays long.

    With an odd number of teams a phantom side without players fills the
    gap so every real team plays on every matchday.
    """
    teams = [team_id(t) for t in range(n_teams)]
    if len(teams) % 2:
        teams.append(PHANTOM_TEAM)
    rounds = len(teams) - 1
    fixtures = []
    for day in range(n_games):
        r = day % rounds
        rot = [teams[0]] + (teams[1:][-r:] + teams[1:][:-r] if r else teams[1:])
        half = len(rot) // 2
        for i in range(half):
            home, away = rot[i], rot[-1 - i]
            if (day // rounds) % 2 == 1 or (i == 0 and r % 2 == 1):
                home, away = away, home
            if home == PHANTOM_TEAM:
                home, away = away, home
            fixtures.append((home, away))
    return fixtures


def _appearances(n_team_games: int, played: int) -> set[int]:
    return {i * n_team_games // played for i in range(played)} if played else set()


def generate_season(spec: SeasonSpec) -> SyntheticSeason:
    """Realise ``spec`` as matches plus the planted movement vectors."""
    spec.validate()
    roster = spec.roster()
    fixtures = schedule(spec.n_teams, spec.n_games)
    order = {p: i for i, p in enumerate(p for squad in roster.values() for p in squad)}
    erratic = set(spec.erratic)
    team_game_no = {t: 0 for t in roster}
    plays = {
        p: _appearances(spec.n_games, spec.games_played.get(p, spec.n_games))
        for squad in roster.values()
        for p in squad
    }
    venue = Venue("synthetic")

    matches: list[Match] = []
    planted: list[MovementVector] = []
    movement_count = {p: 0 for p in order}
    games_count = {p: 0 for p in order}
    for mi, (home, away) in enumerate(fixtures):
        rng = np.random.default_rng(np.random.SeedSequence([spec.seed, mi]))
        mid = f"m{mi + 1:04d}"
        tagged: list[tuple[int, int, int, int, Event]] = []
        for team in (home, away):
            if team == PHANTOM_TEAM:
                continue
            g = team_game_no[team]
            team_game_no[team] += 1
            for pid in roster[team]:
                if g not in plays[pid]:
                    continue
                arch = spec.archetypes[spec.assignment[pid]]
                events, vecs = _player_game(rng, arch, pid in erratic, mid, team, pid, venue)
                games_count[pid] += 1
                movement_count[pid] += len(vecs)
                planted.extend(vecs)
                tagged.extend((ev.period, ev.timestamp_s, order[pid], seq, ev) for seq, ev in enumerate(events))
        tagged.sort(key=lambda r: r[:4])
        venue_home = home
        matches.append(
            Match(mid, home, None if away == PHANTOM_TEAM else away, venue_home, tuple(r[4] for r in tagged))
        )

    planted.sort(key=lambda m: (m.match_id, m.player_id, m.T))
    clone_of = {}
    for a, b in spec.clone_pairs:
        clone_of[a], clone_of[b] = b, a
    manifest = {
        "seed": spec.seed,
        "n_matches": len(matches),
        "n_movements": len(planted),
        "clone_pairs": [list(p) for p in spec.clone_pairs],
        "erratic": sorted(erratic),
        "players": {
            p: {
                "team": p[:3],
                "archetype": spec.assignment[p],
                "erratic": p in erratic,
                "clone_of": clone_of.get(p),
                "games": games_count[p],
                "movements": movement_count[p],
            }
            for p in sorted(order)
        },
    }
    return SyntheticSeason(matches, manifest, planted)


def _player_game(rng, arch: ArchetypeSpec, erratic: bool, mid: str, team: str, pid: str, venue: Venue):
    comps = arch.components
    weights = rng.dirichlet(np.full(len(comps), ERRATIC_CONCENTRATION)) if erratic else arch.weights
    lo, hi = arch.movements_per_game
    n = int(rng.integers(lo, hi + 1))
    which = rng.choice(len(comps), size=n, p=weights / weights.sum())
    means = np.array([c.mean for c in comps], dtype=float)[which]
    sigmas = np.array([np.broadcast_to(np.asarray(c.sigma, dtype=float), 4) for c in comps])[which]
    pts = np.clip(means + sigmas * rng.standard_normal((n, 4)), 0.0, _BOUNDS)
    pct = np.clip(pts / _BOUNDS * 100.0, 0.0, 100.0)
    speed_mu = np.array([c.speed_kmh for c in comps])[which]
    speed_sd = np.array([c.speed_sd for c in comps])[which]
    speeds = np.maximum(MIN_SPEED_KMH, speed_mu + speed_sd * rng.standard_normal(n))
    with_ball = rng.random(n) < arch.possession_prob
    start_pick = rng.integers(0, 1 << 30, n)
    end_pick = rng.integers(0, 1 << 30, n)
    t0 = [int(v) for v in rng.integers(0, 120, 2)]

    events: list[Event] = []
    vecs: list[MovementVector] = []
    n_first = n // 2
    t = HALF_START_S[0] + t0[0]
    for i in range(n):
        if i == n_first:
            t = HALF_START_S[1] + t0[1]
        period = 1 if i < n_first else 2
        x1p, y1p, x2p, y2p = (float(v) for v in pct[i])
        (s1, v1) = to_standard_frame(x1p, y1p, venue)
        (s2, v2) = to_standard_frame(x2p, y2p, venue)
        dist = math.hypot(v2[0] - v1[0], v2[1] - v1[1])
        dt = max(1, round(3.6 * dist / float(speeds[i])))
        if with_ball[i]:
            start_kind = _POSS_STARTS[start_pick[i] % len(_POSS_STARTS)]
            end_kind = _POSS_ENDS[end_pick[i] % len(_POSS_ENDS)]
        else:
            start_kind = _FREE_STARTS[start_pick[i] % len(_FREE_STARTS)]
            end_kind = _FREE_ENDS[end_pick[i] % len(_FREE_ENDS)]
        forced = comps[which[i]].end_kind
        if forced is not None:
            end_kind = forced
        events.append(Event(mid, period, t, team, pid, start_kind, x1p, y1p, True))
        events.append(Event(mid, period, t + dt, team, pid, end_kind, x2p, y2p, True))
        vecs.append(
            MovementVector(
                match_id=mid,
                player_id=pid,
                T=t,
                dt=dt,
                x1=s1[0],
                y1=s1[1],
                x2=s2[0],
                y2=s2[1],
                speed=3.6 * dist / dt,
                ball=DEFAULT_POSSESSION(start_kind, end_kind),
                team_id=team,
                period=period,
                start_kind=start_kind,
                end_kind=end_kind,
            )
        )
        t += dt
    return events, vecs


def random_archetype(
    rng: np.random.Generator,
    name: str,
    n_components: tuple[int, int] = (3, 6),
    movements_per_game: tuple[int, int] = (20, 60),
    sigma: float = 2.0,
    mean_step_m: float = 17.0,
) -> ArchetypeSpec:
    """An archetype with a few random movement prototypes across the pitch."""
    c = int(rng.integers(n_components[0], n_components[1] + 1))
    weights = rng.dirichlet(np.full(c, 2.0))
    weights[-1] = 1.0 - weights[:-1].sum()
    comps = []
    for j in range(c):
        x1 = rng.uniform(5.0, 100.0)
        y1 = rng.uniform(4.0, 64.0)
        step = rng.gamma(2.0, mean_step_m / 2.0)
        angle = rng.uniform(-math.pi, math.pi)
        x2 = float(np.clip(x1 + step * math.cos(angle), 1.0, STANDARD_LENGTH_M - 1.0))
        y2 = float(np.clip(y1 + step * math.sin(angle), 1.0, STANDARD_WIDTH_M - 1.0))
        comps.append(
            Component(
                mean=(float(x1), float(y1), x2, y2),
                sigma=sigma,
                weight=float(weights[j]),
                speed_kmh=float(rng.uniform(6.0, 16.0)),
                speed_sd=3.0,
            )
        )
    return ArchetypeSpec(name, tuple(comps), float(rng.uniform(0.2, 0.5)), movements_per_game)


SEASON_PLAYERS = 542
SEASON_MOVEMENTS = 660_848
SEASON_MEAN_LENGTH_M = 19.4
SEASON_STEP_M = 22.5  # prototype step that lands the mean movement length near 19.4 m


def scale_preset(name: str, seed: int = 42) -> SeasonSpec:
    """Named season specs.

    ``paper``: 20 teams, 542 players, 38 matchdays, sized so the season holds
    about 660,848 movements (1,219 per player) with a mean length near
    19.4 m.
    ``clones``: 100 players on 10 teams with 5 cross-team clone pairs.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EA5]))
    if name == "paper":
        n_teams, n_games = 20, 38
        sizes = (28, 28) + (27,) * 18
        players = [player_id(t, p) for t in range(n_teams) for p in range(sizes[t])]
        # stratified appearance counts: deterministic quantiles, random order
        q = (np.arange(len(players)) + 0.5) / len(players)
        games = np.maximum(1, np.rint(n_games * q ** 0.7)).astype(int)
        rng.shuffle(games)
        per_game = SEASON_MOVEMENTS / games.sum()
        archetypes, assignment = {}, {}
        for p, g in zip(players, games):
            mid_val = per_game * rng.uniform(0.7, 1.3)
            lo = max(1, int(round(mid_val * 0.6)))
            hi = int(round(2 * mid_val - lo))
            archetypes[p] = random_archetype(rng, p, movements_per_game=(lo, hi), mean_step_m=SEASON_STEP_M)
            assignment[p] = p
        return SeasonSpec(
            n_teams, sizes, n_games, archetypes, assignment,
            games_played={p: int(g) for p, g in zip(players, games)}, seed=seed,
        )
    if name == "clones":
        n_teams, n_games, size = 10, 18, 10
        players = [player_id(t, p) for t in range(n_teams) for p in range(size)]
        archetypes, assignment = {}, {}
        for p in players:
            archetypes[p] = random_archetype(rng, p, movements_per_game=(40, 60))
            assignment[p] = p
        pairs = tuple((player_id(2 * i, 0), player_id(2 * i + 1, 0)) for i in range(5))
        for a, b in pairs:
            assignment[b] = assignment[a]
            del archetypes[b]
        return SeasonSpec(n_teams, size, n_games, archetypes, assignment, clone_pairs=pairs, seed=seed)
    raise KeyError(f"unknown preset {name!r}")


def write_manifest(manifest: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(manifest, indent=1, sort_keys=True) + "\n", encoding="utf-8")
