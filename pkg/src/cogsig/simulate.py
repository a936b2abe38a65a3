"""Seeded generation of synthetic interaction sessions.

Each simulated user is a small set of cognitive-style parameters: action
tempo, idle bounds, typing error rate, click dwell, preferred cursor
motion styles, hesitation probability, cursor speed and the tendency to
revisit the previous target.  A session walks a task script (click this
object, type that text), drawing every pause and path from a seeded
generator, so identical inputs always reproduce the identical log.

This is an oracle for the pipeline, not a human-fidelity model: straight
styles travel two axis-aligned legs, curved style travels a rounded
diagonal sweep whose length exceeds 1.2x the chord, and cursor samples
arrive on a 10 ms cadence matching the default extraction tick.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

from .config import PROFILE_FORMAT_VERSION, TASK_FORMAT_VERSION
from .events import EventKind, InputEvent, SessionLog
from .features import Rect, StimuliLayout, StimuliObject

MOVE_CADENCE_MS = 10
# Hesitation pauses must clear the 1 s idle threshold the extractor flags.
HESITATION_RANGE_MS = (1050.0, 1350.0)
# Curved sweeps keep their strokes this many degrees away from the
# horizontal/vertical cones and their length at least this multiple of the
# straight-line chord.
SWEEP_MIN_CURVE = 1.24
SWEEP_CONE_MARGIN_DEG = 3.0
_SWEEP_OPENING_DEG = 100.0
_SWEEP_BLEND = 0.18
_SCREEN = (820, 580)

_STYLES = ("horizontal", "vertical", "elliptical")
_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class UserProfile:
    """Generative parameters of one simulated user's interaction style."""

    action_rate_hz: float
    idle_min_ms: float
    idle_max_ms: float
    typo_rate: float
    click_dwell_ms: float
    motion_mix: tuple[float, float, float]  # horizontal, vertical, elliptical
    hesitation_p: float
    speed_px_s: float
    repetition_bias: float

    def validate(self) -> None:
        if self.action_rate_hz <= 0 or self.click_dwell_ms <= 0 or self.speed_px_s <= 0:
            raise ValueError("rates, dwell and speed must be positive")
        if not (0 < self.idle_min_ms <= self.idle_max_ms):
            raise ValueError("need 0 < idle_min_ms <= idle_max_ms")
        for name in ("typo_rate", "hesitation_p", "repetition_bias"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if len(self.motion_mix) != 3 or any(p < 0 for p in self.motion_mix):
            raise ValueError("motion_mix needs 3 nonnegative weights")
        if abs(sum(self.motion_mix) - 1.0) > 1e-9:
            raise ValueError("motion_mix must sum to 1")


@dataclass(frozen=True)
class TaskStep:
    target: str
    text: str | None = None


@dataclass(frozen=True)
class TaskScript:
    """A stimuli layout plus the ordered click/type instructions."""

    layout: StimuliLayout
    steps: tuple[TaskStep, ...]

    def __post_init__(self):
        labels = {o.label for o in self.layout.objects}
        for step in self.steps:
            if step.target not in labels:
                raise ValueError(f"script target {step.target!r} not in layout")

    def repeated(self, times: int) -> "TaskScript":
        return TaskScript(self.layout, self.steps * times)


def key_token(ch: str) -> str:
    if ch == " ":
        return "space"
    if ch == "\t":
        return "tab"
    return ch


def _leg(p0: tuple[float, float], p1: tuple[float, float],
         samples: int) -> list[tuple[float, float]]:
    return [(p0[0] + (p1[0] - p0[0]) * i / samples,
             p0[1] + (p1[1] - p0[1]) * i / samples)
            for i in range(1, samples + 1)]


def _quad_bezier(p0, c, p1, samples: int) -> list[tuple[float, float]]:
    points = []
    for i in range(1, samples + 1):
        u = i / samples
        points.append(((1 - u) ** 2 * p0[0] + 2 * (1 - u) * u * c[0] + u ** 2 * p1[0],
                       (1 - u) ** 2 * p0[1] + 2 * (1 - u) * u * c[1] + u ** 2 * p1[1]))
    return points


def _cone_margin_deg(angle_rad: float) -> float:
    """Distance (degrees) of a stroke direction from the H/V cones."""
    fold = abs(math.degrees(angle_rad)) % 180.0
    fold = min(fold, 180.0 - fold)
    return min(fold - 15.0, 75.0 - fold)


def _sweep_strokes(p0, p1) -> tuple[tuple[float, float], tuple[float, float]] | None:
    """Decompose the chord into two diagonal strokes.

    Searches stroke orientations (fixed 100 degree opening) for the pair
    that stays farthest from the axis cones while the combined stroke
    length exceeds SWEEP_MIN_CURVE times the chord.  Returns the two
    stroke vectors, or None when the chord is too short to matter.
    """
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    chord = math.hypot(dx, dy)
    if chord < 4.0:
        return None
    phi = math.atan2(dy, dx)
    opening = math.radians(_SWEEP_OPENING_DEG)
    best = None
    for d1 in range(10, 82, 2):
        psi1 = phi - math.radians(d1)
        psi2 = psi1 + opening
        u1 = (math.cos(psi1), math.sin(psi1))
        u2 = (math.cos(psi2), math.sin(psi2))
        det = u1[0] * u2[1] - u1[1] * u2[0]
        a = (dx * u2[1] - dy * u2[0]) / det
        b = (u1[0] * dy - u1[1] * dx) / det
        if (abs(a) + abs(b)) / chord < SWEEP_MIN_CURVE:
            continue
        margin = min(_cone_margin_deg(psi1), _cone_margin_deg(psi2))
        if margin < SWEEP_CONE_MARGIN_DEG:
            continue
        key = (margin, -(abs(a) + abs(b)))
        if best is None or key > best[0]:
            best = (key, (a * u1[0], a * u1[1]), (b * u2[0], b * u2[1]))
    if best is None:
        return None
    return best[1], best[2]


def _sweep_path(p0, p1, first, second, samples: int) -> list[tuple[float, float]]:
    """Two diagonal strokes joined by a rounded corner; reads as curved motion."""
    corner = (p0[0] + first[0], p0[1] + first[1])
    len1 = math.hypot(*first)
    len2 = math.hypot(*second)
    blend = _SWEEP_BLEND * min(len1, len2)
    a_end = (corner[0] - first[0] / len1 * blend, corner[1] - first[1] / len1 * blend)
    b_start = (corner[0] + second[0] / len2 * blend, corner[1] + second[1] / len2 * blend)
    total = len1 + len2
    points: list[tuple[float, float]] = []
    s1 = max(1, round(samples * (len1 - blend) / total))
    sb = max(2, round(samples * 2 * blend / total))
    s2 = max(1, samples - s1 - sb)
    points += _leg(p0, a_end, s1)
    points += _quad_bezier(a_end, corner, b_start, sb)
    points += _leg(b_start, p1, s2)
    return points


class _SessionBuilder:
    def __init__(self, profile: UserProfile, seed: int):
        self.profile = profile
        self.rng = random.Random(seed)
        self.t = 0
        self.pos = (4, 4)
        self.events: list[InputEvent] = []

    def _emit_move(self, x: float, y: float) -> None:
        point = (round(x), round(y))
        self.t += MOVE_CADENCE_MS
        if point == self.pos:
            return  # recorders skip motionless samples
        self.pos = point
        self.events.append(InputEvent(t_ms=self.t, kind=EventKind.MOUSE_MOVE,
                                      x=point[0], y=point[1]))

    def _gauss_ms(self, mean: float, spread: float, lo: float, hi: float) -> int:
        return max(1, int(min(hi, max(lo, self.rng.gauss(mean, spread)))))

    def pause(self, ms: float) -> None:
        self.t += max(0, int(ms))

    def pick_style(self) -> str:
        r = self.rng.random()
        acc = 0.0
        for style, w in zip(_STYLES, self.profile.motion_mix):
            acc += w
            if r < acc:
                return style
        return _STYLES[-1]

    def travel(self, target: tuple[int, int]) -> None:
        """Move the cursor to the target along a profile-styled path."""
        p0 = self.pos
        if p0 == target:
            return
        style = self.pick_style()
        points = None
        if style == "elliptical":
            points = self._sweep_points(p0, target)
        if points is None:
            # Two axis-aligned legs via the corner; style picks which leg leads.
            lead_x = style == "horizontal" or (style == "elliptical"
                                               and self.rng.random() < 0.5)
            corner = (target[0], p0[1]) if lead_x else (p0[0], target[1])
            len1 = abs(corner[0] - p0[0]) + abs(corner[1] - p0[1])
            len2 = abs(target[0] - corner[0]) + abs(target[1] - corner[1])
            total = max(len1 + len2, 1.0)
            samples = self._samples_for(total)
            points = []
            if len1:
                points += _leg(p0, corner, max(1, round(samples * len1 / total)))
            if len2:
                points += _leg(corner, target, max(1, samples - len(points)))
        for x, y in points:
            self._emit_move(x, y)
        if self.pos != target:  # ensure the path lands exactly on the target
            self._emit_move(*target)

    def _sweep_points(self, p0, target) -> list[tuple[float, float]] | None:
        strokes = _sweep_strokes(p0, target)
        if strokes is None:
            return None  # too short for a sweep; fall back to legs
        first, second = strokes
        if self.rng.random() < 0.5:
            first, second = second, first
        corner = (p0[0] + first[0], p0[1] + first[1])
        if not (0 <= corner[0] <= _SCREEN[0] and 0 <= corner[1] <= _SCREEN[1]):
            first, second = second, first  # keep the bend on-screen
        length = math.hypot(*first) + math.hypot(*second)
        return _sweep_path(p0, target, first, second, self._samples_for(length))

    def _samples_for(self, length: float) -> int:
        duration_ms = length / self.profile.speed_px_s * 1000.0
        return max(2, round(duration_ms / MOVE_CADENCE_MS))

    def click(self) -> None:
        dwell = self._gauss_ms(self.profile.click_dwell_ms,
                               0.2 * self.profile.click_dwell_ms,
                               20, 2.5 * self.profile.click_dwell_ms)
        self.t += self.rng.randint(5, 25)
        x, y = self.pos
        self.events.append(InputEvent(t_ms=self.t, kind=EventKind.LEFT_CLICK_DOWN, x=x, y=y))
        self.t += dwell
        self.events.append(InputEvent(t_ms=self.t, kind=EventKind.LEFT_CLICK_RELEASE, x=x, y=y))

    def type_text(self, text: str) -> None:
        # Typing cadence follows the user's overall tempo.
        key_ms = 1000.0 / (5.0 * self.profile.action_rate_hz)
        for ch in text:
            token = key_token(ch)
            if self.rng.random() < self.profile.typo_rate:
                wrong = self.rng.choice([c for c in _ALPHABET if c != token])
                self._press(wrong, key_ms)
            self._press(token, key_ms)

    def _press(self, token: str, key_ms: float) -> None:
        self.t += self._gauss_ms(key_ms, 0.15 * key_ms, 0.6 * key_ms, 1.6 * key_ms)
        self.events.append(InputEvent(t_ms=self.t, kind=EventKind.KEY_PRESS, key=token))

    def click_point(self, bounds: Rect) -> tuple[int, int]:
        cx, cy = bounds.center
        jx = (bounds.right - bounds.left) // 6
        jy = (bounds.bottom - bounds.top) // 6
        return (cx + self.rng.randint(-jx, jx) if jx else cx,
                cy + self.rng.randint(-jy, jy) if jy else cy)


def generate_session(profile: UserProfile, script: TaskScript, seed: int,
                     user_id: str = "sim-user",
                     session_id: str | None = None) -> SessionLog:
    """Simulate one session of a user executing the script.

    Deterministic for fixed (profile, script, seed).  Each step opens with
    one pause: a hesitation beyond the 1 s threshold (probability
    hesitation_p), or otherwise the remainder of the previous step's tempo
    budget clamped to the profile's idle bounds.  The cursor then travels
    to the step's target along a path drawn from the motion mix (possibly
    revisiting the previous target first), clicks, and types any required
    text with typo insertions.
    """
    profile.validate()
    b = _SessionBuilder(profile, seed)
    period_ms = 1000.0 / profile.action_rate_hz
    previous: str | None = None
    step_start = 0
    for i, step in enumerate(script.steps):
        if b.rng.random() < profile.hesitation_p:
            b.pause(b.rng.uniform(*HESITATION_RANGE_MS))
        elif i > 0:
            leftover = period_ms - (b.t - step_start)
            b.pause(min(profile.idle_max_ms, max(profile.idle_min_ms, leftover)))
        step_start = b.t
        if (previous is not None and previous != step.target
                and b.rng.random() < profile.repetition_bias):
            bounds = script.layout.find(previous).bounds
            b.travel(b.click_point(bounds))
            b.click()
        bounds = script.layout.find(step.target).bounds
        b.travel(b.click_point(bounds))
        b.click()
        if step.text:
            b.type_text(step.text)
        previous = step.target
    return SessionLog(
        user_id=user_id,
        session_id=session_id if session_id is not None else f"sim-{seed}",
        events=tuple(b.events),
        meta={"source": "simulator", "seed": str(seed)},
    )


def default_layout() -> StimuliLayout:
    """A representative stimuli screen: buttons, icons, numbers, a text box.

    The text box sits centrally so that every object-to-text chord is
    diagonal, which keeps straight-path and curved-path users visually
    distinct in the extracted motion attributes.
    """
    return StimuliLayout(objects=(
        StimuliObject("GO", "button", Rect(80, 90, 180, 150)),
        StimuliObject("PL", "icon", Rect(560, 90, 660, 150)),
        StimuliObject("TXT", "text", Rect(240, 270, 500, 330)),
        StimuliObject("1", "number", Rect(95, 465, 145, 515)),
        StimuliObject("PI", "icon", Rect(590, 450, 670, 510)),
        StimuliObject("2", "number", Rect(535, 475, 585, 525)),
    ))


def default_script() -> TaskScript:
    """A click-and-type round trip: each object visit returns to the text box."""
    layout = default_layout()
    steps = (
        TaskStep("GO"),
        TaskStep("TXT", "set aron go now and type it"),
        TaskStep("PL"),
        TaskStep("TXT", "pl seven tabs then go back"),
        TaskStep("1"),
        TaskStep("TXT", "ring the bell twice for me"),
        TaskStep("PI"),
        TaskStep("TXT", "no rush here just type slow"),
        TaskStep("2"),
        TaskStep("TXT", "aron set the last word go"),
    )
    return TaskScript(layout=layout, steps=steps)


def default_profiles() -> tuple[UserProfile, UserProfile]:
    """Two contrasting reference users.

    The first is brisk: fast tempo, quick axis-aligned two-leg cursor
    paths, short dwell, rare hesitation, few typos.  The second is
    deliberate: slow tempo and typing cadence, sweeping curved paths, long
    dwell, frequent hesitation and revisits, error-prone typing.  They
    differ in all eight parameters.
    """
    brisk = UserProfile(
        action_rate_hz=0.9,
        idle_min_ms=150, idle_max_ms=900,
        typo_rate=0.02,
        click_dwell_ms=70,
        motion_mix=(0.5, 0.5, 0.0),
        hesitation_p=0.04,
        speed_px_s=1500,
        repetition_bias=0.08,
    )
    deliberate = UserProfile(
        action_rate_hz=0.5,
        idle_min_ms=450, idle_max_ms=1500,
        typo_rate=0.13,
        click_dwell_ms=170,
        motion_mix=(0.03, 0.03, 0.94),
        hesitation_p=0.5,
        speed_px_s=1100,
        repetition_bias=0.4,
    )
    return brisk, deliberate


def profile_to_dict(profile: UserProfile) -> dict:
    return {
        "format_version": PROFILE_FORMAT_VERSION,
        "action_rate_hz": profile.action_rate_hz,
        "idle_min_ms": profile.idle_min_ms,
        "idle_max_ms": profile.idle_max_ms,
        "typo_rate": profile.typo_rate,
        "click_dwell_ms": profile.click_dwell_ms,
        "motion_mix": list(profile.motion_mix),
        "hesitation_p": profile.hesitation_p,
        "speed_px_s": profile.speed_px_s,
        "repetition_bias": profile.repetition_bias,
    }


def profile_from_dict(obj: dict) -> UserProfile:
    profile = UserProfile(
        action_rate_hz=float(obj["action_rate_hz"]),
        idle_min_ms=float(obj["idle_min_ms"]),
        idle_max_ms=float(obj["idle_max_ms"]),
        typo_rate=float(obj["typo_rate"]),
        click_dwell_ms=float(obj["click_dwell_ms"]),
        motion_mix=tuple(float(p) for p in obj["motion_mix"]),
        hesitation_p=float(obj["hesitation_p"]),
        speed_px_s=float(obj["speed_px_s"]),
        repetition_bias=float(obj["repetition_bias"]),
    )
    profile.validate()
    return profile


def layout_to_dict(layout: StimuliLayout) -> dict:
    return {"objects": [
        {"label": o.label, "kind": o.kind,
         "bounds": [o.bounds.left, o.bounds.top, o.bounds.right, o.bounds.bottom]}
        for o in layout.objects]}


def layout_from_dict(obj: dict) -> StimuliLayout:
    return StimuliLayout(objects=tuple(
        StimuliObject(label=str(o["label"]), kind=str(o["kind"]),
                      bounds=Rect(*[int(v) for v in o["bounds"]]))
        for o in obj["objects"]))


def script_to_dict(script: TaskScript) -> dict:
    return {
        "format_version": TASK_FORMAT_VERSION,
        "layout": layout_to_dict(script.layout),
        "steps": [{"target": s.target, "text": s.text} for s in script.steps],
    }


def script_from_dict(obj: dict) -> TaskScript:
    return TaskScript(
        layout=layout_from_dict(obj["layout"]),
        steps=tuple(TaskStep(target=str(s["target"]),
                             text=None if s.get("text") is None else str(s["text"]))
                    for s in obj["steps"]),
    )


def load_profile(path: str) -> UserProfile:
    with open(path, encoding="utf-8") as fh:
        return profile_from_dict(json.load(fh))


def load_script(path: str) -> TaskScript:
    with open(path, encoding="utf-8") as fh:
        return script_from_dict(json.load(fh))
