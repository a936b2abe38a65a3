import { describe, expect, it } from 'vitest';

import { canExport, createSession, exportJsonl, markGap, recordButton,
         recordKey, recordMove } from '../src/session.js';
import { keyToken, parseTaskConfig } from '../src/types.js';
import { DEFAULT_TASK } from '../src/app.js';

const script = parseTaskConfig(DEFAULT_TASK);

describe('task config parsing', () => {
  it('accepts the default task', () => {
    expect(script.layout.objects.length).toBe(6);
    expect(script.steps[0].target).toBe('GO');
  });

  it('rejects duplicate labels', () => {
    const doc = {
      layout: { objects: [
        { label: 'A', kind: 'button', bounds: [0, 0, 10, 10] },
        { label: 'A', kind: 'icon', bounds: [20, 0, 30, 10] },
      ] },
      steps: [],
    };
    expect(() => parseTaskConfig(doc)).toThrow(/unique/);
  });

  it('rejects degenerate bounds and unknown targets', () => {
    expect(() => parseTaskConfig({
      layout: { objects: [{ label: 'A', kind: 'button', bounds: [10, 0, 10, 10] }] },
      steps: [],
    })).toThrow(/degenerate/);
    expect(() => parseTaskConfig({
      layout: { objects: [{ label: 'A', kind: 'button', bounds: [0, 0, 10, 10] }] },
      steps: [{ target: 'B', text: null }],
    })).toThrow(/not a layout label/);
  });
});

describe('event buffer invariants', () => {
  it('keeps timestamps monotone even if the clock jitters backwards', () => {
    const s = createSession('subject1', script);
    recordMove(s, 10.4, 1, 1);
    recordMove(s, 9.2, 2, 2); // clock went backwards; clamp, do not reorder
    recordButton(s, 8.0, 2, 2, true);
    recordButton(s, 30.0, 2, 2, false);
    const times = s.events.map((e) => e.t_ms);
    const sorted = [...times].sort((a, b) => a - b);
    expect(times).toEqual(sorted);
  });

  it('coalesces pointer samples to at most one per millisecond', () => {
    const s = createSession('subject1', script);
    recordMove(s, 5.1, 1, 1);
    recordMove(s, 5.4, 2, 2);
    recordMove(s, 5.9, 3, 3);
    recordMove(s, 6.2, 4, 4);
    expect(s.events.length).toBe(2);
    expect(s.events.map((e) => e.t_ms)).toEqual([5, 6]);
  });

  it('click down precedes its release', () => {
    const s = createSession('subject1', script);
    recordButton(s, 100, 50, 60, true);
    recordButton(s, 180, 50, 60, false);
    expect(s.events[0].kind).toBe('LeftClickDown');
    expect(s.events[1].kind).toBe('LeftClickRelease');
    expect(s.events[0].t_ms).toBeLessThanOrEqual(s.events[1].t_ms);
    expect(s.events[0].x).toBe(50);
  });

  it('rounds coordinates to integer pixels', () => {
    const s = createSession('subject1', script);
    recordMove(s, 1, 10.6, 20.4);
    expect(s.events[0].x).toBe(11);
    expect(s.events[0].y).toBe(20);
  });

  it('records only mappable keys', () => {
    const s = createSession('subject1', script);
    expect(recordKey(s, 1, keyToken('a'))).toBe(true);
    expect(recordKey(s, 2, keyToken(' '))).toBe(true);
    expect(recordKey(s, 3, keyToken('Shift'))).toBe(false);
    expect(s.events.map((e) => e.key)).toEqual(['a', 'space']);
  });

  it('typing a 10-character string yields exactly 10 key events in order', () => {
    const s = createSession('subject1', script);
    const text = 'aron typed';
    let t = 100;
    for (const ch of text) {
      recordKey(s, (t += 150), keyToken(ch));
    }
    const keys = s.events.filter((e) => e.kind === 'KeyPress');
    expect(keys.length).toBe(10);
    expect(keys.map((e) => e.key)).toEqual(
      ['a', 'r', 'o', 'n', 'space', 't', 'y', 'p', 'e', 'd']);
  });
});

describe('export', () => {
  it('is disabled for an empty buffer', () => {
    const s = createSession('subject1', script);
    expect(canExport(s)).toBe(false);
    expect(() => exportJsonl(s)).toThrow(/empty/);
  });

  it('writes a header with the subject label and one line per event', () => {
    const s = createSession('user7', script, 'sess-1');
    recordMove(s, 1, 5, 5);
    recordKey(s, 30, 'r');
    const lines = exportJsonl(s).trimEnd().split('\n');
    expect(lines.length).toBe(3);
    const header = JSON.parse(lines[0]);
    expect(header.user_id).toBe('user7');
    expect(header.session_id).toBe('sess-1');
    const move = JSON.parse(lines[1]);
    expect(move).toEqual({ t_ms: 1, kind: 'MouseMove', x: 5, y: 5 });
    const key = JSON.parse(lines[2]);
    expect(key).toEqual({ t_ms: 30, kind: 'KeyPress', key: 'r' });
  });

  it('re-import preserves the event count', () => {
    const s = createSession('user7', script);
    for (let i = 0; i < 25; i += 1) {
      recordMove(s, i * 8, i, i);
    }
    const lines = exportJsonl(s).trimEnd().split('\n');
    expect(lines.length - 1).toBe(s.events.length);
  });

  it('marks focus-loss gaps in the meta map', () => {
    const s = createSession('user7', script);
    recordMove(s, 5, 1, 1);
    markGap(s, 1200);
    markGap(s, 3400);
    expect(s.meta.capture_gaps_ms).toBe('1200,3400');
    const header = JSON.parse(exportJsonl(s).split('\n')[0]);
    expect(header.meta.capture_gaps_ms).toBe('1200,3400');
  });
});
