"""Per-tick behavioral attribute extraction.

A session log is cut into fixed-length time windows (0.01 s by default).
Each window becomes one case row: click/keypress flags, a motion class for
the cursor trace, the graphical object under the cursor, derived behavior
flags and timing columns.  Anything not observed within a tick is NILL,
which downstream stages treat as an informative category of its own.

Flag columns are binary YES/NILL, so a window saturates at one YES per
event kind; event conservation holds whenever no two events of the same
kind share a tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .events import EventKind, InputEvent, SessionLog, validate_session

# Motion rule constants: cone half-angle around the axes and the
# path-length/chord-length ratio above which a trace counts as curved.
AXIS_CONE_DEG = 15.0
CURVE_RATIO = 1.2

NILL = "NILL"
YES = "YES"


@dataclass(frozen=True)
class TimedPoint:
    t_ms: float
    x: float
    y: float


class MotionClass:
    HORIZONTAL = "Horizontal"
    VERTICAL = "Vertical"
    ELLIPTICAL = "Elliptical"
    NONE = "None"

    ALL = (HORIZONTAL, VERTICAL, ELLIPTICAL, NONE)


@dataclass(frozen=True)
class Rect:
    """Pixel rectangle, left/top inclusive, right/bottom exclusive."""

    left: int
    top: int
    right: int
    bottom: int

    def contains(self, x: float, y: float) -> bool:
        return self.left <= x < self.right and self.top <= y < self.bottom

    @property
    def center(self) -> tuple[int, int]:
        return (self.left + self.right) // 2, (self.top + self.bottom) // 2


OBJECT_KINDS = ("number", "icon", "button", "text")


@dataclass(frozen=True)
class StimuliObject:
    label: str
    kind: str
    bounds: Rect


@dataclass(frozen=True)
class StimuliLayout:
    """The graphical objects a task screen presents as stimuli."""

    objects: tuple[StimuliObject, ...]

    def __post_init__(self):
        labels = [o.label for o in self.objects]
        if len(set(labels)) != len(labels):
            raise ValueError("layout labels must be unique")
        for o in self.objects:
            if o.bounds.right <= o.bounds.left or o.bounds.bottom <= o.bounds.top:
                raise ValueError(f"degenerate bounds for object {o.label!r}")
            if o.kind not in OBJECT_KINDS:
                raise ValueError(f"unknown object kind {o.kind!r}")

    def object_at(self, x: float, y: float) -> StimuliObject | None:
        for o in self.objects:
            if o.bounds.contains(x, y):
                return o
        return None

    def find(self, label: str) -> StimuliObject:
        for o in self.objects:
            if o.label == label:
                return o
        raise KeyError(label)


@dataclass(frozen=True)
class CaseRecord:
    """One row of the behavioral data set (one tick)."""

    tick_index: int
    left_click_down: bool
    left_click_release: bool
    keypress: bool
    real_time_s: float
    mouse_movement: str | None     # MotionClass value, or None for NILL
    cognitive_stimulus: str | None
    hco: bool
    mco: bool
    htt: bool
    mouse_x: int | None
    mouse_y: int | None
    dt_ms: int | None
    user_id: str

    def is_empty(self) -> bool:
        """True when no event fell inside this tick."""
        return self.dt_ms is None


CASE_COLUMNS = (
    "tick_index",
    "left_click_down",
    "left_click_release",
    "keypress",
    "real_time_s",
    "mouse_movement",
    "cognitive_stimulus",
    "hco",
    "mco",
    "htt",
    "mouse_x",
    "mouse_y",
    "dt_ms",
    "user_ID",
)

# CaseRecord attribute behind each column name.
_FIELD_OF_COLUMN = {c: c for c in CASE_COLUMNS} | {"user_ID": "user_id"}

_FLAG_COLUMNS = ("left_click_down", "left_click_release", "keypress", "hco", "mco", "htt")


@dataclass(frozen=True)
class CaseTable:
    """An ordered case-row collection sharing one column set."""

    columns: tuple[str, ...]
    rows: tuple[CaseRecord, ...]
    class_column: str = "user_ID"

    def column_values(self, column: str) -> list:
        name = _FIELD_OF_COLUMN[column]
        return [getattr(r, name) for r in self.rows]

    def class_labels(self) -> list[str]:
        return sorted({r.user_id for r in self.rows})

    def without_empty_rows(self) -> "CaseTable":
        return CaseTable(self.columns,
                         tuple(r for r in self.rows if not r.is_empty()),
                         self.class_column)


@dataclass(frozen=True)
class CaseWindow:
    """Half-open event window [start_ms, end_ms) produced by segmentation."""

    index: int
    start_ms: float
    end_ms: float
    events: tuple[InputEvent, ...]


@dataclass(frozen=True)
class CarryState:
    """Cursor state carried across windows during extraction."""

    pos: tuple[int, int] | None = None
    last_event_t: int | None = None


def segment_cases(log: SessionLog, tick_s: float) -> list[CaseWindow]:
    """Cut a session into contiguous fixed-tick windows.

    Windows are [k*tick, (k+1)*tick) from the session origin through the
    window holding the final event; ticks without events are retained.
    """
    if tick_s <= 0:
        raise ValueError(f"tick_s must be positive, got {tick_s}")
    tick_ms = tick_s * 1000.0
    last_index = int(log.events[-1].t_ms // tick_ms) if log.events else -1
    buckets: list[list[InputEvent]] = [[] for _ in range(last_index + 1)]
    for ev in log.events:
        buckets[int(ev.t_ms // tick_ms)].append(ev)
    return [CaseWindow(index=k, start_ms=k * tick_ms, end_ms=(k + 1) * tick_ms,
                       events=tuple(bucket))
            for k, bucket in enumerate(buckets)]


def classify_motion(points: list[TimedPoint]) -> str:
    """Classify a cursor trace as Horizontal/Vertical/Elliptical/None.

    Fewer than two distinct points is no motion.  Otherwise the trace is
    curved (Elliptical) when path length exceeds CURVE_RATIO times the net
    chord; straight traces take the axis whose cone (AXIS_CONE_DEG around
    the axis) contains the chord, and fall back to Elliptical for diagonal
    chords.
    """
    if len({(p.x, p.y) for p in points}) < 2:
        return MotionClass.NONE
    path = 0.0
    for a, b in zip(points, points[1:]):
        path += math.hypot(b.x - a.x, b.y - a.y)
    dx = points[-1].x - points[0].x
    dy = points[-1].y - points[0].y
    chord = math.hypot(dx, dy)
    if chord == 0.0 or path / chord > CURVE_RATIO:
        return MotionClass.ELLIPTICAL
    theta = math.degrees(math.atan2(abs(dy), abs(dx)))  # angle from horizontal axis
    if theta <= AXIS_CONE_DEG:
        return MotionClass.HORIZONTAL
    if 90.0 - theta <= AXIS_CONE_DEG:
        return MotionClass.VERTICAL
    return MotionClass.ELLIPTICAL


def _advance_carry(window: CaseWindow, carry: CarryState) -> CarryState:
    pos = carry.pos
    last_t = carry.last_event_t
    for ev in window.events:
        if ev.kind.is_mouse:
            pos = (ev.x, ev.y)
        last_t = ev.t_ms
    return CarryState(pos=pos, last_event_t=last_t)


def extract_case(window: CaseWindow, layout: StimuliLayout, carry: CarryState,
                 user_id: str = "") -> CaseRecord:
    """Build the case row for one window given the carried cursor state.

    Event flags reflect what happened inside the window; coordinates and
    the stimulus label carry forward through empty ticks.  HCO marks a
    click issued during horizontal motion, MCO curved motion, and HTT an
    idle gap longer than one second before the window's first event.
    """
    has_down = any(e.kind is EventKind.LEFT_CLICK_DOWN for e in window.events)
    has_release = any(e.kind is EventKind.LEFT_CLICK_RELEASE for e in window.events)
    has_key = any(e.kind is EventKind.KEY_PRESS for e in window.events)

    moves = [e for e in window.events if e.kind is EventKind.MOUSE_MOVE]
    if moves:
        points = [TimedPoint(window.start_ms, *carry.pos)] if carry.pos else []
        points += [TimedPoint(e.t_ms, e.x, e.y) for e in moves]
        motion = classify_motion(points)
    else:
        motion = None

    clicks = [e for e in window.events if e.kind.is_click]
    pos = carry.pos
    for ev in window.events:
        if ev.kind.is_mouse:
            pos = (ev.x, ev.y)

    # Clicks override hover when attributing the stimulus.
    stimulus = None
    if clicks:
        hit = layout.object_at(clicks[-1].x, clicks[-1].y)
        stimulus = hit.label if hit else None
    if stimulus is None and pos is not None:
        hit = layout.object_at(*pos)
        stimulus = hit.label if hit else None

    if window.events:
        first_t = window.events[0].t_ms
        dt = first_t - (carry.last_event_t if carry.last_event_t is not None else 0)
    else:
        dt = None

    return CaseRecord(
        tick_index=window.index,
        left_click_down=has_down,
        left_click_release=has_release,
        keypress=has_key,
        real_time_s=window.end_ms / 1000.0,
        mouse_movement=motion,
        cognitive_stimulus=stimulus,
        hco=bool(motion == MotionClass.HORIZONTAL and clicks),
        mco=bool(motion == MotionClass.ELLIPTICAL),
        htt=bool(dt is not None and dt > 1000),
        mouse_x=pos[0] if pos else None,
        mouse_y=pos[1] if pos else None,
        dt_ms=dt,
        user_id=user_id,
    )


def build_case_table(log: SessionLog, layout: StimuliLayout, tick_s: float) -> CaseTable:
    """Extract the full case table for one session.

    Every window yields a row (empty ticks included); the session's user id
    is propagated to each row.  Raises on a log that fails validation.
    """
    violations = validate_session(log)
    if violations:
        first = violations[0]
        raise ValueError(
            f"session failed validation ({len(violations)} violations; "
            f"first: {first.rule} at index {first.index})")
    rows = []
    carry = CarryState()
    for window in segment_cases(log, tick_s):
        rows.append(extract_case(window, layout, carry, user_id=log.user_id))
        carry = _advance_carry(window, carry)
    return CaseTable(columns=CASE_COLUMNS, rows=tuple(rows))


def concat_tables(tables: list[CaseTable]) -> CaseTable:
    """Stack per-session tables; sessions keep their own tick numbering."""
    if not tables:
        raise ValueError("no tables to concatenate")
    columns = tables[0].columns
    for t in tables[1:]:
        if t.columns != columns:
            raise ValueError("tables have differing column sets")
    rows = tuple(r for t in tables for r in t.rows)
    return CaseTable(columns=columns, rows=rows, class_column=tables[0].class_column)


def _format_real_time(value: float) -> str:
    text = f"{value:.6f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def _cell(record: CaseRecord, column: str) -> str:
    value = getattr(record, _FIELD_OF_COLUMN[column])
    if column in _FLAG_COLUMNS:
        return YES if value else NILL
    if value is None:
        return NILL
    if column == "real_time_s":
        return _format_real_time(value)
    return str(value)


def serialize_case_table(table: CaseTable, meta_comment: str | None = None) -> str:
    """Render a case table as delimited text with the NILL literal."""
    lines = []
    if meta_comment is not None:
        lines.append(f"# {meta_comment}")
    lines.append(",".join(table.columns))
    for r in table.rows:
        lines.append(",".join(_cell(r, c) for c in table.columns))
    return "\n".join(lines) + "\n"


def _parse_cell(column: str, text: str, lineno: int):
    if column in _FLAG_COLUMNS:
        return text == YES
    if text == NILL:
        return None
    try:
        if column == "tick_index":
            return int(text)
        if column == "real_time_s":
            return float(text)
        if column in ("mouse_x", "mouse_y", "dt_ms"):
            return int(text)
    except ValueError:
        raise ValueError(f"line {lineno}: bad value {text!r} for column {column}") from None
    return text


def parse_case_table(text: str) -> CaseTable:
    """Parse the delimited case-table format written by serialize_case_table."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty case table document")
    columns = tuple(lines[0].split(","))
    if set(columns) != set(CASE_COLUMNS):
        raise ValueError(f"unexpected case table columns: {lines[0]!r}")
    rows = []
    for lineno, raw in enumerate(lines[1:], start=2):
        cells = raw.split(",")
        if len(cells) != len(columns):
            raise ValueError(f"line {lineno}: expected {len(columns)} cells, got {len(cells)}")
        values = {c: _parse_cell(c, cell, lineno) for c, cell in zip(columns, cells)}
        values["user_id"] = values.pop("user_ID") or ""
        rows.append(CaseRecord(**{k: values[k] for k in values}))
    return CaseTable(columns=CASE_COLUMNS, rows=tuple(rows))
