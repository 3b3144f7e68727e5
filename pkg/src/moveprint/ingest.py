"""Event-log parsing, validation and venue lookup.

Input rows carry percent-of-pitch coordinates already oriented so the
acting team attacks toward +x. Rows that violate the schema are collected
as rejects instead of being dropped silently.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Iterator

logger = logging.getLogger(__name__)

KINDS: tuple[str, ...] = (
    "pass",
    "reception",
    "shot",
    "dribble",
    "tackle",
    "interception",
    "recovery",
    "clearance",
    "foul_won",
    "foul_committed",
    "corner_taken",
    "other",
)
_KIND_SET = frozenset(KINDS)

FIELDS: tuple[str, ...] = ("match_id", "period", "t", "team", "player", "kind", "x", "y", "outcome")
OPTIONAL_FIELDS: tuple[str, ...] = ("venue", "home")

DEFAULT_LENGTH_M = 105.0
DEFAULT_WIDTH_M = 68.0
MAX_REJECT_FRACTION = 0.10


class IngestError(Exception):
    """Base class for fatal ingest failures."""


class StreamReadError(IngestError, OSError):
    """The input stream could not be read or decoded."""


class ValidationError(IngestError):
    """Too many rows were rejected for the log to be trusted."""

    def __init__(self, message: str, rejects: list[Reject]):
        super().__init__(message)
        self.rejects = rejects


@dataclass(frozen=True, slots=True)
class Event:
    match_id: str
    period: int
    timestamp_s: int | None  # None only for receptions awaiting imputation
    team_id: str
    player_id: str
    kind: str
    x_pct: float
    y_pct: float
    outcome: bool


@dataclass(frozen=True, slots=True)
class Venue:
    venue_id: str
    length_m: float = DEFAULT_LENGTH_M
    width_m: float = DEFAULT_WIDTH_M

    def __post_init__(self) -> None:
        if not 90 <= self.length_m <= 120:
            raise ValueError(f"venue {self.venue_id}: length {self.length_m} m outside [90, 120]")
        if not 45 <= self.width_m <= 90:
            raise ValueError(f"venue {self.venue_id}: width {self.width_m} m outside [45, 90]")
        if self.length_m <= self.width_m:
            raise ValueError(f"venue {self.venue_id}: length must exceed width")


@dataclass(frozen=True)
class Match:
    match_id: str
    home_team_id: str
    away_team_id: str | None
    venue_id: str
    events: tuple[Event, ...] = field(repr=False)

    def __post_init__(self) -> None:
        teams = {self.home_team_id, self.away_team_id}
        for ev in self.events:
            if ev.team_id not in teams:
                raise ValueError(f"match {self.match_id}: team {ev.team_id} is neither home nor away")

    @property
    def team_ids(self) -> tuple[str, ...]:
        return tuple(t for t in (self.home_team_id, self.away_team_id) if t is not None)


@dataclass(frozen=True, slots=True)
class Reject:
    line: int  # 1-based data row number (header excluded)
    reason: str
    raw: str


class _RowError(ValueError):
    pass


def _as_int(value, name: str) -> int:
    if isinstance(value, bool):
        raise _RowError(f"{name} must be an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise _RowError(f"{name} must be an integer")


def _as_float(value, name: str) -> float:
    if isinstance(value, bool) or value is None:
        raise _RowError(f"{name} must be a number")
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise _RowError(f"{name} must be a number") from None
    if out != out:
        raise _RowError(f"{name} is NaN")
    return out


def _as_bool(value, name: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, str):
        v = value.strip().lower()
        if v in ("true", "1"):
            return True
        if v in ("false", "0"):
            return False
    if isinstance(value, int) and value in (0, 1):
        return bool(value)
    raise _RowError(f"{name} must be a boolean")


def _as_id(value, name: str) -> str:
    if value is None or isinstance(value, (bool, dict, list)):
        raise _RowError(f"{name} must be a non-empty id")
    out = str(value).strip()
    if not out:
        raise _RowError(f"{name} must be a non-empty id")
    return out


def _row_to_event(row: dict) -> tuple[Event, str | None, str | None]:
    missing = [f for f in FIELDS if f not in row]
    if missing:
        raise _RowError(f"missing field(s): {', '.join(missing)}")
    period = _as_int(row["period"], "period")
    if period not in (1, 2):
        raise _RowError(f"period {period} not in {{1, 2}}")
    kind = str(row["kind"]).strip().lower() if row["kind"] is not None else ""
    if kind not in _KIND_SET:
        kind = "other"
    t_raw = row["t"]
    if t_raw is None or (isinstance(t_raw, str) and not t_raw.strip()):
        if kind != "reception":
            raise _RowError("missing timestamp")
        t = None
    else:
        t = _as_int(t_raw, "t")
        if t < 0:
            raise _RowError("negative timestamp")
    x = _as_float(row["x"], "x")
    y = _as_float(row["y"], "y")
    if not (0.0 <= x <= 100.0 and 0.0 <= y <= 100.0):
        raise _RowError("coordinate out of range")
    event = Event(
        match_id=_as_id(row["match_id"], "match_id"),
        period=period,
        timestamp_s=t,
        team_id=_as_id(row["team"], "team"),
        player_id=_as_id(row["player"], "player"),
        kind=kind,
        x_pct=x,
        y_pct=y,
        outcome=_as_bool(row["outcome"], "outcome"),
    )
    venue = row.get("venue")
    home = row.get("home")
    venue = _as_id(venue, "venue") if venue not in (None, "") else None
    home = _as_id(home, "home") if home not in (None, "") else None
    return event, venue, home


def _read_text(stream) -> str:
    if isinstance(stream, (bytes, bytearray)):
        data = bytes(stream)
    elif isinstance(stream, str):
        return stream
    else:
        try:
            data = stream.read()
        except (OSError, ValueError) as exc:
            raise StreamReadError(f"cannot read event stream: {exc}") from exc
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise StreamReadError(f"event stream is not valid UTF-8: {exc}") from exc


def _iter_rows(text: str, fmt: str) -> Iterator[tuple[int, str, dict | None, str | None]]:
    """Yield (row number, raw text, parsed row or None, parse error)."""
    if fmt == "jsonl":
        n = 0
        for raw in text.splitlines():
            if not raw.strip():
                continue
            n += 1
            try:
                row = json.loads(raw)
            except json.JSONDecodeError as exc:
                yield n, raw, None, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(row, dict):
                yield n, raw, None, "row is not a JSON object"
                continue
            yield n, raw, row, None
    elif fmt == "csv":
        if not text.strip():
            return
        reader = csv.reader(io.StringIO(text))
        header = [h.strip() for h in next(reader)]
        missing = [f for f in FIELDS if f not in header]
        if missing:
            raise StreamReadError(f"CSV header lacks column(s): {', '.join(missing)}")
        n = 0
        for values in reader:
            if not values or not any(v.strip() for v in values):
                continue
            n += 1
            raw = ",".join(values)
            if len(values) != len(header):
                yield n, raw, None, f"expected {len(header)} columns, got {len(values)}"
                continue
            yield n, raw, dict(zip(header, values)), None
    else:
        raise ValueError(f"unknown format {fmt!r}; expected 'jsonl' or 'csv'")


def parse_event_log(stream, fmt: str = "jsonl") -> tuple[list[Match], list[Reject]]:
    """Parse an event log into matches sorted by match id.

    Events inside a match are ordered by ``(period, timestamp_s, input order)``.
    A reception without timestamp sorts at the timestamp of the row before it
    in the same match and period, i.e. right behind the pass it answers.

    Returns the matches together with the list of rejected rows. Raises
    :class:`ValidationError` when more than 10% of rows are rejected.
    """
    text = _read_text(stream)
    rejects: list[Reject] = []
    accepted: list[tuple[int, Event, str | None, str | None]] = []
    total = 0
    for n, raw, row, err in _iter_rows(text, fmt):
        total += 1
        if err is None:
            try:
                event, venue, home = _row_to_event(row)
            except _RowError as exc:
                err = str(exc)
        if err is not None:
            rejects.append(Reject(n, err, raw))
            continue
        accepted.append((n, event, venue, home))

    by_match: dict[str, list[tuple[int, Event, str | None, str | None]]] = {}
    for item in accepted:
        by_match.setdefault(item[1].match_id, []).append(item)

    matches: list[Match] = []
    for match_id in sorted(by_match):
        rows = by_match[match_id]
        teams = sorted({ev.team_id for _, ev, _, _ in rows})
        homes = {h for _, _, _, h in rows if h is not None}
        venues = {v for _, _, v, _ in rows if v is not None}
        problem = None
        if len(teams) > 2:
            problem = "match has more than two teams"
        elif len(homes) > 1:
            problem = "conflicting home team within match"
        elif len(venues) > 1:
            problem = "conflicting venue within match"
        elif homes and next(iter(homes)) not in teams and len(teams) == 2:
            problem = "home team does not appear in match"
        if problem is not None:
            rejects.extend(Reject(n, problem, json.dumps(_event_row(ev))) for n, ev, _, _ in rows)
            continue
        home = next(iter(homes)) if homes else teams[0]
        others = [t for t in teams if t != home]
        away = others[0] if others else None
        venue = next(iter(venues)) if venues else home
        matches.append(Match(match_id, home, away, venue, _sort_events([ev for _, ev, _, _ in rows])))

    rejects.sort(key=lambda r: r.line)
    if total and len(rejects) > MAX_REJECT_FRACTION * total:
        raise ValidationError(
            f"{len(rejects)} of {total} rows rejected (limit {MAX_REJECT_FRACTION:.0%})", rejects
        )
    if rejects:
        logger.warning("rejected %d of %d rows", len(rejects), total)
    return matches, rejects


def _sort_events(events: list[Event]) -> tuple[Event, ...]:
    keys = []
    last_t: dict[int, int] = {}
    for i, ev in enumerate(events):
        t = ev.timestamp_s
        if t is None:
            t = last_t.get(ev.period, 0)
        else:
            last_t[ev.period] = t
        keys.append((ev.period, t, i))
    order = sorted(range(len(events)), key=keys.__getitem__)
    return tuple(events[i] for i in order)


def _event_row(ev: Event, match: Match | None = None) -> dict:
    row = {
        "match_id": ev.match_id,
        "period": ev.period,
        "t": ev.timestamp_s,
        "team": ev.team_id,
        "player": ev.player_id,
        "kind": ev.kind,
        "x": ev.x_pct,
        "y": ev.y_pct,
        "outcome": ev.outcome,
    }
    if match is not None:
        row["venue"] = match.venue_id
        row["home"] = match.home_team_id
    return row


def iter_canonical_rows(matches: Iterable[Match]) -> Iterator[dict]:
    for match in matches:
        for ev in match.events:
            yield _event_row(ev, match)


def serialize_matches(matches: Iterable[Match]) -> str:
    """Canonical JSON Lines rendering (fixed field order, compact separators)."""
    return "".join(
        json.dumps(row, separators=(",", ":")) + "\n" for row in iter_canonical_rows(matches)
    )


def write_canonical(matches: Iterable[Match], path: str | Path) -> None:
    Path(path).write_text(serialize_matches(matches), encoding="utf-8")


def read_event_log(path: str | Path, fmt: str | None = None) -> tuple[list[Match], list[Reject]]:
    path = Path(path)
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise StreamReadError(f"cannot read {path}: {exc}") from exc
    return parse_event_log(data, fmt)


def parse_venues(stream: IO[str] | str) -> dict[str, Venue]:
    text = stream if isinstance(stream, str) else stream.read()
    registry: dict[str, Venue] = {}
    for row in csv.DictReader(io.StringIO(text)):
        vid = row["venue_id"].strip()
        registry[vid] = Venue(vid, float(row["length_m"]), float(row["width_m"]))
    return registry


def load_venues(path: str | Path | None = None) -> dict[str, Venue]:
    """Load a venue registry CSV; without a path, the bundled sample registry."""
    if path is None:
        text = resources.files("moveprint").joinpath("data/venues.csv").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_venues(text)


def lookup_venue(venue_id: str, registry: dict[str, Venue]) -> Venue:
    venue = registry.get(venue_id)
    if venue is None:
        logger.warning("venue %r not registered; using %gx%g m", venue_id, DEFAULT_LENGTH_M, DEFAULT_WIDTH_M)
        return Venue(venue_id)
    return venue
