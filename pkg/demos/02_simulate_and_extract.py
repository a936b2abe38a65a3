"""Simulate two users on the same task and extract their case tables.

The simulator is the reproducible stand-in for human subjects: two
parameterized cognitive styles walk the same click-and-type script, and
the extractor converts each event stream into per-tick behavioral cases.
"""

from collections import Counter

from cogsig import (build_case_table, default_layout, default_profiles,
                    default_script, generate_session, validate_session)

brisk, deliberate = default_profiles()
layout = default_layout()
script = default_script()

print("Task layout:")
for obj in layout.objects:
    b = obj.bounds
    print(f"  {obj.label:<4} {obj.kind:<7} at ({b.left},{b.top})-({b.right},{b.bottom})")
print(f"\nScript: {len(script.steps)} steps, "
      f"{sum(len(s.text or '') for s in script.steps)} characters to type")

for name, profile in (("brisk", brisk), ("deliberate", deliberate)):
    log = generate_session(profile, script, seed=7, user_id=name)
    assert validate_session(log) == []
    table = build_case_table(log, layout, tick_s=0.01)
    cases = table.without_empty_rows()
    motions = Counter(r.mouse_movement for r in cases.rows
                      if r.mouse_movement is not None)
    print(f"\n{name}: {len(log.events)} events over "
          f"{log.events[-1].t_ms / 1000:.1f}s -> {len(table.rows)} ticks, "
          f"{len(cases.rows)} with observations")
    print(f"  motion classes: {dict(motions)}")
    print(f"  keypress ticks: {sum(r.keypress for r in cases.rows)}, "
          f"click ticks: {sum(r.left_click_down for r in cases.rows)}")

print("\nFirst rows of the deliberate user's case table "
      "(NILL = nothing observed that tick):")
log = generate_session(deliberate, script, seed=7, user_id="deliberate")
table = build_case_table(log, layout, tick_s=0.01)
rows = [r for r in table.rows if not r.is_empty()][:8]
print(f"{'tick':>6} {'real_s':>7} {'LCD':>4} {'LCR':>4} {'key':>4} "
      f"{'motion':<11} {'stim':<5} {'x':>4} {'y':>4} {'dt_ms':>6}")
for r in rows:
    print(f"{r.tick_index:>6} {r.real_time_s:>7.2f} "
          f"{'YES' if r.left_click_down else '-':>4} "
          f"{'YES' if r.left_click_release else '-':>4} "
          f"{'YES' if r.keypress else '-':>4} "
          f"{r.mouse_movement or 'NILL':<11} {r.cognitive_stimulus or 'NILL':<5} "
          f"{r.mouse_x if r.mouse_x is not None else '-':>4} "
          f"{r.mouse_y if r.mouse_y is not None else '-':>4} "
          f"{r.dt_ms if r.dt_ms is not None else '-':>6}")
