"""Event logs: the two wire formats, parsing, validation and round trips.

Interaction data enters the toolkit as a stream of timestamped mouse and
keyboard events.  This walk-through parses a macro-recorder style table,
normalizes it to JSONL, and shows what the validator reports for a broken
document.
"""

from cogsig import parse_event_log, serialize_event_log, validate_session

MACRO_TEXT = """\
case,x,y,dt_ms,usage
9,372,659,111,Left click release
10,506,299,3562,Left click down
11,506,299,214,Left click release
21,452,530,78,Left click release
22,452,530,2360,Keypress r
23,452,530,937,Keypress space
24,452,530,156,Keypress a
"""

print("A macro-recorder export stores per-row time deltas:")
print(MACRO_TEXT)

log = parse_event_log(MACRO_TEXT, "macrocsv", user_id="user1", session_id="demo")
print(f"Parsed {len(log.events)} events; absolute times are cumulative sums:")
for ev in log.events:
    where = f"({ev.x},{ev.y})" if ev.x is not None else f"key={ev.key!r}"
    print(f"  t={ev.t_ms:>5} ms  {ev.kind.value:<18} {where}")

print("\nThe same session as canonical JSONL:")
jsonl = serialize_event_log(log, "jsonl")
print(jsonl)

print("Round trip is exact:")
again = parse_event_log(jsonl, "jsonl")
print("  parse(serialize(log)) == log ->", again == log)

macro_again = serialize_event_log(log, "macrocsv")
print("  macro serialization is byte-identical ->", macro_again == MACRO_TEXT)

print("\nValidation treats violations as data, not exceptions:")
from cogsig import EventKind, InputEvent, SessionLog

broken = SessionLog("user1", "demo", (
    InputEvent(t_ms=10, kind=EventKind.KEY_PRESS, x=5, y=5, key="a"),
    InputEvent(t_ms=4, kind=EventKind.MOUSE_MOVE, x=1, y=2),
))
for violation in validate_session(broken):
    print(f"  event {violation.index}: {violation.rule}")
