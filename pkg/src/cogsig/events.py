"""Canonical event-log model: parsing, serialization and validation.

Raw interaction data is a time-ordered stream of mouse and keyboard
events.  Two wire formats are supported:

* JSONL -- one JSON object per line.  The first line is a header object
  carrying ``user_id``, ``session_id`` and an optional ``meta`` map; every
  following line is one event with ``t_ms``, ``kind`` and, depending on the
  kind, ``x``/``y`` or ``key``.
* MacroCSV -- the normalized macro-recorder table with header
  ``case,x,y,dt_ms,usage``.  ``dt_ms`` stores the gap to the previous row,
  so absolute times are reconstructed by cumulative summation with the
  session origin at t=0 ms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum


class EventKind(Enum):
    MOUSE_MOVE = "MouseMove"
    LEFT_CLICK_DOWN = "LeftClickDown"
    LEFT_CLICK_RELEASE = "LeftClickRelease"
    KEY_PRESS = "KeyPress"

    @property
    def is_mouse(self) -> bool:
        return self is not EventKind.KEY_PRESS

    @property
    def is_click(self) -> bool:
        return self in (EventKind.LEFT_CLICK_DOWN, EventKind.LEFT_CLICK_RELEASE)


# MacroCSV "usage" column spellings.
_USAGE_OF_KIND = {
    EventKind.MOUSE_MOVE: "Mouse move",
    EventKind.LEFT_CLICK_DOWN: "Left click down",
    EventKind.LEFT_CLICK_RELEASE: "Left click release",
}
_KIND_OF_USAGE = {v: k for k, v in _USAGE_OF_KIND.items()}


@dataclass(frozen=True)
class InputEvent:
    """One timestamped interaction event.

    ``x``/``y`` are present exactly for mouse kinds (clicks carry the cursor
    position too); ``key`` is present exactly for key presses.  Key tokens
    are case-sensitive literals; named keys use their plain spellings
    ("space", "tab").
    """

    t_ms: int
    kind: EventKind
    x: int | None = None
    y: int | None = None
    key: str | None = None


@dataclass(frozen=True)
class SessionLog:
    """An ordered event sequence recorded for one user session."""

    user_id: str
    session_id: str
    events: tuple[InputEvent, ...]
    meta: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate_session`."""

    rule: str
    index: int | None = None
    detail: str = ""


class LogParseError(ValueError):
    """Raised for malformed log documents; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


FORMAT_JSONL = "jsonl"
FORMAT_MACROCSV = "macrocsv"

_MACROCSV_HEADER = "case,x,y,dt_ms,usage"


def _int_field(raw: str, name: str, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise LogParseError(f"field '{name}' is not an integer: {raw!r}", line) from None


def _parse_macrocsv(text: str, user_id: str, session_id: str) -> SessionLog:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise LogParseError("empty document")
    header = [c.strip() for c in lines[0].split(",")]
    if header[:5] != _MACROCSV_HEADER.split(","):
        raise LogParseError(f"expected header '{_MACROCSV_HEADER}', got {lines[0]!r}", 1)

    events: list[InputEvent] = []
    case_numbers: list[int] = []
    t = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        cols = raw.split(",")
        if len(cols) < 5:
            raise LogParseError(f"expected 5 columns, got {len(cols)}", lineno)
        case_no = _int_field(cols[0], "case", lineno)
        dt = _int_field(cols[3], "dt_ms", lineno)
        if dt < 0:
            raise LogParseError(f"timestamps not monotone at line {lineno}", lineno)
        usage = cols[4].strip()
        t += dt
        if usage.startswith("Keypress "):
            token = usage[len("Keypress "):]
            if not token:
                raise LogParseError("field 'usage' has empty key token", lineno)
            events.append(InputEvent(t_ms=t, kind=EventKind.KEY_PRESS, key=token))
        elif usage in _KIND_OF_USAGE:
            x = _int_field(cols[1], "x", lineno)
            y = _int_field(cols[2], "y", lineno)
            events.append(InputEvent(t_ms=t, kind=_KIND_OF_USAGE[usage], x=x, y=y))
        else:
            raise LogParseError(f"field 'usage' has unknown value {usage!r}", lineno)
        case_numbers.append(case_no)
    if not events:
        raise LogParseError("empty document: no event rows")

    # Source fidelity: keep the macro recorder's case counter so that
    # serialization can reproduce the original rows byte for byte.
    meta: dict[str, str] = {}
    first = case_numbers[0]
    if case_numbers == list(range(first, first + len(case_numbers))):
        if first != 1:
            meta["case_start"] = str(first)
    else:
        meta["case_numbers"] = ",".join(str(n) for n in case_numbers)
    return SessionLog(user_id=user_id, session_id=session_id,
                      events=tuple(events), meta=meta)


def _event_from_json(obj: dict, lineno: int) -> InputEvent:
    try:
        kind = EventKind(obj["kind"])
    except KeyError:
        raise LogParseError("event object missing field 'kind'", lineno) from None
    except ValueError:
        raise LogParseError(f"field 'kind' has unknown value {obj['kind']!r}", lineno) from None
    if "t_ms" not in obj:
        raise LogParseError("event object missing field 't_ms'", lineno)
    t_ms = obj["t_ms"]
    if not isinstance(t_ms, int):
        raise LogParseError(f"field 't_ms' is not an integer: {t_ms!r}", lineno)
    if kind.is_mouse:
        if "x" not in obj or "y" not in obj:
            raise LogParseError(f"field 'x'/'y' required for kind {kind.value}", lineno)
        return InputEvent(t_ms=t_ms, kind=kind, x=int(obj["x"]), y=int(obj["y"]))
    if "key" not in obj:
        raise LogParseError("field 'key' required for kind KeyPress", lineno)
    return InputEvent(t_ms=t_ms, kind=kind, key=str(obj["key"]))


def _parse_jsonl(text: str) -> SessionLog:
    lines = text.splitlines()
    if not lines or not any(line.strip() for line in lines):
        raise LogParseError("empty document")
    header = None
    events: list[InputEvent] = []
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise LogParseError(f"invalid JSON ({exc.msg})", lineno) from None
        if not isinstance(obj, dict):
            raise LogParseError("line is not a JSON object", lineno)
        if header is None:
            if "user_id" not in obj:
                raise LogParseError("first line must be a header object with field 'user_id'", lineno)
            header = obj
            continue
        event = _event_from_json(obj, lineno)
        if event.t_ms < 0:
            raise LogParseError("negative timestamp", lineno)
        if events and event.t_ms < events[-1].t_ms:
            raise LogParseError(f"timestamps not monotone at line {lineno}", lineno)
        events.append(event)
    if header is None:
        raise LogParseError("missing header line")
    if not events:
        raise LogParseError("empty document: no event lines")
    meta = header.get("meta", {})
    if not isinstance(meta, dict):
        raise LogParseError("header field 'meta' must be an object", 1)
    return SessionLog(user_id=str(header["user_id"]),
                      session_id=str(header.get("session_id", "")),
                      events=tuple(events),
                      meta={str(k): str(v) for k, v in meta.items()})


def parse_event_log(text: str, format: str,
                    user_id: str = "unknown",
                    session_id: str = "imported") -> SessionLog:
    """Parse a log document into a :class:`SessionLog`.

    ``user_id``/``session_id`` apply to MacroCSV only, which carries no
    identity of its own; JSONL reads them from its header line.

    Raises :class:`LogParseError` naming the offending line for malformed
    input, non-monotone timestamps or an empty body.
    """
    if format == FORMAT_MACROCSV:
        return _parse_macrocsv(text, user_id, session_id)
    if format == FORMAT_JSONL:
        return _parse_jsonl(text)
    raise ValueError(f"unknown format {format!r}")


def _macrocsv_case_numbers(log: SessionLog) -> list[int]:
    raw = log.meta.get("case_numbers")
    if raw is not None:
        numbers = [int(n) for n in raw.split(",")]
        if len(numbers) == len(log.events):
            return numbers
    start = int(log.meta.get("case_start", "1"))
    return list(range(start, start + len(log.events)))


def _serialize_macrocsv(log: SessionLog) -> str:
    lines = [_MACROCSV_HEADER]
    cases = _macrocsv_case_numbers(log)
    prev_t = 0
    last_pos = (0, 0)
    for case_no, ev in zip(cases, log.events):
        dt = ev.t_ms - prev_t
        prev_t = ev.t_ms
        if ev.kind is EventKind.KEY_PRESS:
            x, y = last_pos  # macro rows carry the cursor position on key rows
            usage = f"Keypress {ev.key}"
        else:
            x, y = ev.x, ev.y
            last_pos = (x, y)
            usage = _USAGE_OF_KIND[ev.kind]
        lines.append(f"{case_no},{x},{y},{dt},{usage}")
    return "\n".join(lines) + "\n"


def _serialize_jsonl(log: SessionLog) -> str:
    header: dict = {"user_id": log.user_id, "session_id": log.session_id}
    if log.meta:
        header["meta"] = log.meta
    lines = [json.dumps(header, sort_keys=True)]
    for ev in log.events:
        obj: dict = {"t_ms": ev.t_ms, "kind": ev.kind.value}
        if ev.kind.is_mouse:
            obj["x"] = ev.x
            obj["y"] = ev.y
        else:
            obj["key"] = ev.key
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"


def serialize_event_log(log: SessionLog, format: str) -> str:
    """Render a SessionLog in the given format; inverse of parse_event_log."""
    if format == FORMAT_MACROCSV:
        return _serialize_macrocsv(log)
    if format == FORMAT_JSONL:
        return _serialize_jsonl(log)
    raise ValueError(f"unknown format {format!r}")


def validate_session(log: SessionLog) -> list[Violation]:
    """Check all SessionLog/InputEvent invariants.

    Returns an empty list for a well-formed log; violations are data, not
    errors, so nothing is raised.
    """
    violations: list[Violation] = []
    if not log.user_id:
        violations.append(Violation(rule="empty-user-id"))
    if not log.events:
        violations.append(Violation(rule="empty-session"))
    prev_t = None
    for i, ev in enumerate(log.events):
        if ev.t_ms < 0:
            violations.append(Violation(rule="negative-time", index=i,
                                        detail=f"t_ms={ev.t_ms}"))
        if prev_t is not None and ev.t_ms < prev_t:
            violations.append(Violation(rule="non-monotone-time", index=i,
                                        detail=f"{ev.t_ms} < {prev_t}"))
        prev_t = ev.t_ms
        if ev.kind.is_mouse:
            if ev.x is None or ev.y is None:
                violations.append(Violation(rule="mouse-event-missing-coordinates", index=i))
            if ev.key is not None:
                violations.append(Violation(rule="mouse-event-has-key", index=i))
        else:
            if ev.x is not None or ev.y is not None:
                violations.append(Violation(rule="key-event-has-coordinates", index=i))
            if ev.key is None or ev.key == "":
                violations.append(Violation(rule="key-event-missing-key", index=i))
    return violations
