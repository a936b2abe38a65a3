import random
from pathlib import Path

import pytest

from cogsig.events import EventKind, InputEvent, SessionLog

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def table2_text() -> str:
    return (DATA_DIR / "table2_rows.csv").read_text()


def random_session(seed: int, n_events: int = 40, meta=None) -> SessionLog:
    """A random but invariant-respecting SessionLog for round-trip tests."""
    rng = random.Random(seed)
    t = 0
    events = []
    for _ in range(n_events):
        t += rng.randint(0, 800)
        kind = rng.choice(list(EventKind))
        if kind is EventKind.KEY_PRESS:
            events.append(InputEvent(t_ms=t, kind=kind,
                                     key=rng.choice(["a", "r", "o", "n", "space", "tab"])))
        else:
            events.append(InputEvent(t_ms=t, kind=kind,
                                     x=rng.randint(0, 900), y=rng.randint(0, 700)))
    return SessionLog(user_id=f"user{rng.randint(1, 3)}", session_id=f"s{seed}",
                      events=tuple(events),
                      meta={} if meta is None else meta)
