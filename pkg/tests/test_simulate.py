import dataclasses
import math
import random

import pytest

from cogsig.events import FORMAT_JSONL, EventKind, serialize_event_log, validate_session
from cogsig.features import MotionClass, TimedPoint, classify_motion
from cogsig.simulate import (TaskScript, TaskStep, UserProfile, _sweep_path,
                             _sweep_strokes, default_layout, default_profiles,
                             default_script, generate_session, key_token,
                             profile_from_dict, profile_to_dict,
                             script_from_dict, script_to_dict)

BRISK, DELIBERATE = default_profiles()


def click_only_script(n=40):
    layout = default_layout()
    labels = [o.label for o in layout.objects]
    steps = tuple(TaskStep(labels[i % len(labels)]) for i in range(n))
    return TaskScript(layout=layout, steps=steps)


class TestDeterminism:
    def test_identical_inputs_identical_logs(self):
        for profile in (BRISK, DELIBERATE):
            one = generate_session(profile, default_script(), seed=123, user_id="u")
            two = generate_session(profile, default_script(), seed=123, user_id="u")
            assert serialize_event_log(one, FORMAT_JSONL) \
                == serialize_event_log(two, FORMAT_JSONL)

    def test_different_seeds_differ(self):
        one = generate_session(BRISK, default_script(), seed=1, user_id="u")
        two = generate_session(BRISK, default_script(), seed=2, user_id="u")
        assert one.events != two.events


class TestGeneratedLogs:
    def test_logs_validate_cleanly(self):
        for profile in (BRISK, DELIBERATE):
            for seed in range(4):
                log = generate_session(profile, default_script(), seed=seed, user_id="u")
                assert validate_session(log) == []

    def test_event_kinds_present(self):
        log = generate_session(DELIBERATE, default_script(), seed=3, user_id="u")
        kinds = {e.kind for e in log.events}
        assert kinds == {EventKind.MOUSE_MOVE, EventKind.LEFT_CLICK_DOWN,
                         EventKind.LEFT_CLICK_RELEASE, EventKind.KEY_PRESS}

    def test_clicks_land_inside_their_targets(self):
        layout = default_layout()
        log = generate_session(BRISK, default_script(), seed=8, user_id="u")
        downs = [e for e in log.events if e.kind is EventKind.LEFT_CLICK_DOWN]
        for e in downs:
            assert layout.object_at(e.x, e.y) is not None


def split_into_legs(moves):
    """Group consecutive samples by dominant step axis."""
    legs = []
    current = [moves[0]]
    axis = None
    for prev, cur in zip(moves, moves[1:]):
        dx, dy = abs(cur.x - prev.x), abs(cur.y - prev.y)
        step_axis = "x" if dx >= dy else "y"
        if axis is None or step_axis == axis:
            axis = step_axis
            current.append(cur)
        else:
            legs.append(current)
            current = [prev, cur]
            axis = step_axis
    legs.append(current)
    return legs


class TestMotionStyles:
    def test_pure_leg_profile_never_produces_arcs(self):
        profile = dataclasses.replace(BRISK, motion_mix=(1.0, 0.0, 0.0))
        log = generate_session(profile, click_only_script(), seed=17, user_id="u")
        runs, current = [], []
        for e in log.events:
            if e.kind is EventKind.MOUSE_MOVE:
                current.append(e)
            elif current:
                runs.append(current)
                current = []
        assert len(runs) >= 30
        for run in runs:
            for leg in split_into_legs(run):
                if len(leg) < 3:
                    continue
                cls = classify_motion([TimedPoint(e.t_ms, e.x, e.y) for e in leg])
                assert cls in (MotionClass.HORIZONTAL, MotionClass.VERTICAL)

    def test_full_sweep_paths_classify_elliptical(self):
        rng = random.Random(23)
        for _ in range(100):
            p0 = (rng.randint(0, 800), rng.randint(0, 560))
            p1 = (rng.randint(0, 800), rng.randint(0, 560))
            if math.dist(p0, p1) < 40:
                continue
            strokes = _sweep_strokes(p0, p1)
            assert strokes is not None
            points = [p0] + _sweep_path(p0, p1, strokes[0], strokes[1], 50)
            timed = [TimedPoint(0, x, y) for x, y in points]
            path = sum(math.hypot(b.x - a.x, b.y - a.y)
                       for a, b in zip(timed, timed[1:]))
            assert path / math.dist(p0, p1) > 1.2
            assert classify_motion(timed) == MotionClass.ELLIPTICAL

    def test_move_samples_at_fixed_cadence(self):
        log = generate_session(BRISK, default_script(), seed=5, user_id="u")
        moves = [e for e in log.events if e.kind is EventKind.MOUSE_MOVE]
        gaps = {b.t_ms - a.t_ms for a, b in zip(moves, moves[1:])}
        assert all(g % 10 == 0 for g in gaps if g < 100)


class TestTyping:
    def test_zero_typo_rate_reproduces_script_text(self):
        profile = dataclasses.replace(BRISK, typo_rate=0.0)
        script = default_script()
        log = generate_session(profile, script, seed=10, user_id="u")
        typed = [e.key for e in log.events if e.kind is EventKind.KEY_PRESS]
        expected = [key_token(ch) for step in script.steps if step.text
                    for ch in step.text]
        assert typed == expected

    def test_typo_fraction_tracks_rate(self):
        layout = default_layout()
        text = "the quick brown fox jumps over"
        steps = tuple(TaskStep("TXT", text) for _ in range(40))
        script = TaskScript(layout=layout, steps=steps)
        for rate in (0.05, 0.15):
            profile = dataclasses.replace(BRISK, typo_rate=rate)
            log = generate_session(profile, script, seed=29, user_id="u")
            intended = sum(len(text) for _ in steps)
            assert intended >= 1000
            pressed = sum(1 for e in log.events if e.kind is EventKind.KEY_PRESS)
            observed = (pressed - intended) / intended
            assert abs(observed - rate) <= 0.02

    def test_named_key_tokens(self):
        assert key_token(" ") == "space"
        assert key_token("\t") == "tab"
        assert key_token("r") == "r"


class TestTempo:
    @pytest.mark.parametrize("profile", [BRISK, DELIBERATE],
                             ids=["brisk", "deliberate"])
    def test_action_rate_within_twenty_percent(self, profile):
        script = click_only_script(60)
        log = generate_session(profile, script, seed=31, user_id="u")
        duration_s = log.events[-1].t_ms / 1000.0
        rate = len(script.steps) / duration_s
        assert abs(rate - profile.action_rate_hz) <= 0.2 * profile.action_rate_hz

    def test_hesitation_produces_long_gaps(self):
        profile = dataclasses.replace(BRISK, hesitation_p=1.0)
        log = generate_session(profile, click_only_script(10), seed=3, user_id="u")
        gaps = [b.t_ms - a.t_ms for a, b in zip(log.events, log.events[1:])]
        assert sum(1 for g in gaps if g > 1000) >= 9


class TestDefaultProfiles:
    def test_profiles_validate(self):
        for profile in default_profiles():
            profile.validate()

    def test_profiles_differ_in_at_least_four_parameters(self):
        a, b = default_profiles()
        differing = [f.name for f in dataclasses.fields(UserProfile)
                     if getattr(a, f.name) != getattr(b, f.name)]
        assert len(differing) >= 4

    def test_invalid_profiles_rejected(self):
        with pytest.raises(ValueError):
            dataclasses.replace(BRISK, typo_rate=1.5).validate()
        with pytest.raises(ValueError):
            dataclasses.replace(BRISK, motion_mix=(0.5, 0.2, 0.1)).validate()
        with pytest.raises(ValueError):
            dataclasses.replace(BRISK, idle_min_ms=900, idle_max_ms=100).validate()


class TestConfigDocuments:
    def test_profile_round_trip(self):
        for profile in default_profiles():
            assert profile_from_dict(profile_to_dict(profile)) == profile

    def test_load_from_files(self, tmp_path):
        import json
        from cogsig.simulate import load_profile, load_script
        profile_path = tmp_path / "profile.json"
        profile_path.write_text(json.dumps(profile_to_dict(BRISK)))
        assert load_profile(str(profile_path)) == BRISK
        script_path = tmp_path / "task.json"
        script_path.write_text(json.dumps(script_to_dict(default_script())))
        assert load_script(str(script_path)) == default_script()

    def test_script_round_trip(self):
        script = default_script()
        again = script_from_dict(script_to_dict(script))
        assert again == script

    def test_script_rejects_unknown_target(self):
        layout = default_layout()
        with pytest.raises(ValueError, match="not in layout"):
            TaskScript(layout=layout, steps=(TaskStep("NOPE"),))
