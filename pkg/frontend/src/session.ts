/**
 * Capture session core: a growing event buffer with the invariants of the
 * canonical log format enforced at append time, plus the JSONL exporter.
 *
 * Pure of any DOM concern so it can be driven by synthesized events in
 * tests; the browser layer feeds it pointer/keyboard callbacks.
 */

import { EventKind, InputEvent, StimuliLayout, TaskScript } from './types.js';

export interface CaptureSession {
  subject: string;
  sessionId: string;
  layout: StimuliLayout;
  script: TaskScript;
  events: InputEvent[];
  meta: Record<string, string>;
  /** millisecond clock of the last appended event, for monotone ordering */
  lastT: number;
  /** timestamp of the last appended pointer move, for 1 ms coalescing */
  lastMoveT: number;
}

export function createSession(subject: string, script: TaskScript,
                              sessionId?: string): CaptureSession {
  if (!subject) {
    throw new Error('subject label must be non-empty');
  }
  return {
    subject,
    sessionId: sessionId ?? `capture-${Date.now()}`,
    layout: script.layout,
    script,
    events: [],
    meta: { source: 'capture-ui' },
    lastT: 0,
    lastMoveT: -1,
  };
}

function clampTime(session: CaptureSession, tMs: number): number {
  // Timestamps are relative to session start and never run backwards.
  const t = Math.max(0, Math.round(tMs));
  return Math.max(t, session.lastT);
}

function push(session: CaptureSession, event: InputEvent): void {
  session.events.push(event);
  session.lastT = event.t_ms;
}

/** Record a pointer move; samples within the same millisecond coalesce. */
export function recordMove(session: CaptureSession, tMs: number,
                           x: number, y: number): void {
  const t = clampTime(session, tMs);
  if (t === session.lastMoveT) {
    return;
  }
  session.lastMoveT = t;
  push(session, { t_ms: t, kind: 'MouseMove', x: Math.round(x), y: Math.round(y) });
}

export function recordButton(session: CaptureSession, tMs: number,
                             x: number, y: number, pressed: boolean): void {
  const kind: EventKind = pressed ? 'LeftClickDown' : 'LeftClickRelease';
  push(session, {
    t_ms: clampTime(session, tMs),
    kind,
    x: Math.round(x),
    y: Math.round(y),
  });
}

/** Record a key press; returns false for keys the log does not carry. */
export function recordKey(session: CaptureSession, tMs: number,
                          token: string | null): boolean {
  if (!token) {
    return false;
  }
  push(session, { t_ms: clampTime(session, tMs), kind: 'KeyPress', key: token });
  return true;
}

/** Mark a capture gap (e.g. focus loss); recording then resumes normally. */
export function markGap(session: CaptureSession, tMs: number): void {
  const at = clampTime(session, tMs);
  const existing = session.meta['capture_gaps_ms'];
  session.meta['capture_gaps_ms'] = existing ? `${existing},${at}` : String(at);
}

export function canExport(session: CaptureSession): boolean {
  return session.events.length > 0;
}

/** Render the buffer as the canonical JSONL log document. */
export function exportJsonl(session: CaptureSession): string {
  if (!canExport(session)) {
    throw new Error('nothing to export: the event buffer is empty');
  }
  const header: Record<string, unknown> = {
    user_id: session.subject,
    session_id: session.sessionId,
  };
  if (Object.keys(session.meta).length > 0) {
    header.meta = session.meta;
  }
  const lines = [JSON.stringify(header)];
  for (const ev of session.events) {
    if (ev.kind === 'KeyPress') {
      lines.push(JSON.stringify({ t_ms: ev.t_ms, kind: ev.kind, key: ev.key }));
    } else {
      lines.push(JSON.stringify({ t_ms: ev.t_ms, kind: ev.kind, x: ev.x, y: ev.y }));
    }
  }
  return lines.join('\n') + '\n';
}
