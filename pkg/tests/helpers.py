"""Builders for small hand-written event logs."""

import json

from moveprint.ingest import Event


def row(match="m1", period=1, t=0, team="A", player="a1", kind="pass", x=50.0, y=50.0, outcome=True, **extra):
    doc = {"match_id": match, "period": period, "t": t, "team": team, "player": player,
           "kind": kind, "x": x, "y": y, "outcome": outcome}
    doc.update(extra)
    return doc


def jsonl(*rows) -> bytes:
    return "".join(json.dumps(r) + "\n" for r in rows).encode()


def ev(t, x=50.0, y=50.0, kind="pass", player="a1", team="A", period=1, match="m1", outcome=True):
    return Event(match, period, t, team, player, kind, x, y, outcome)


def mv(x1, y1, x2, y2, player="p1", match="m1", T=0, dt=5, speed=10.0, ball=False):
    from moveprint.extract import MovementVector

    return MovementVector(match, player, T, dt, float(x1), float(y1), float(x2), float(y2), speed, ball)


def profile(player, freq, n=1000, scope="season", match=None):
    import numpy as np

    from moveprint.profile import CharacteristicVector

    freq = np.asarray(freq, dtype=float)
    total = freq.sum()
    return CharacteristicVector(player, freq / total if total else freq, n if total else 0, scope, match)
