/**
 * Shared data shapes: the stimuli layout / task script config consumed by
 * both the simulator and this capture task, and the event records of the
 * canonical JSONL log.
 */

export type EventKind = 'MouseMove' | 'LeftClickDown' | 'LeftClickRelease' | 'KeyPress';

export interface InputEvent {
  t_ms: number;
  kind: EventKind;
  x?: number;
  y?: number;
  key?: string;
}

export interface Bounds {
  left: number;
  top: number;
  right: number;
  bottom: number;
}

export type ObjectKind = 'number' | 'icon' | 'button' | 'text';

export interface LayoutObject {
  label: string;
  kind: ObjectKind;
  bounds: Bounds;
}

export interface StimuliLayout {
  objects: LayoutObject[];
}

export interface TaskStep {
  target: string;
  text: string | null;
}

export interface TaskScript {
  layout: StimuliLayout;
  steps: TaskStep[];
}

const OBJECT_KINDS: ReadonlySet<string> = new Set(['number', 'icon', 'button', 'text']);

/** Parse and validate the task config document (cogsig-task/1). */
export function parseTaskConfig(doc: unknown): TaskScript {
  if (typeof doc !== 'object' || doc === null) {
    throw new Error('task config must be an object');
  }
  const raw = doc as Record<string, unknown>;
  const layoutRaw = raw.layout as { objects?: unknown[] } | undefined;
  if (!layoutRaw || !Array.isArray(layoutRaw.objects) || layoutRaw.objects.length === 0) {
    throw new Error('task config needs layout.objects');
  }
  const objects: LayoutObject[] = layoutRaw.objects.map((o, i) => {
    const obj = o as Record<string, unknown>;
    const bounds = obj.bounds as number[] | undefined;
    if (typeof obj.label !== 'string' || obj.label === '') {
      throw new Error(`object ${i}: missing label`);
    }
    if (!OBJECT_KINDS.has(String(obj.kind))) {
      throw new Error(`object ${obj.label}: unknown kind ${String(obj.kind)}`);
    }
    if (!Array.isArray(bounds) || bounds.length !== 4) {
      throw new Error(`object ${obj.label}: bounds must be [left, top, right, bottom]`);
    }
    const [left, top, right, bottom] = bounds.map(Number);
    if (!(right > left) || !(bottom > top)) {
      throw new Error(`object ${obj.label}: degenerate bounds`);
    }
    return { label: obj.label, kind: obj.kind as ObjectKind, bounds: { left, top, right, bottom } };
  });
  const labels = new Set(objects.map((o) => o.label));
  if (labels.size !== objects.length) {
    throw new Error('layout labels must be unique');
  }
  const stepsRaw = Array.isArray(raw.steps) ? raw.steps : [];
  const steps: TaskStep[] = stepsRaw.map((s, i) => {
    const step = s as Record<string, unknown>;
    if (typeof step.target !== 'string' || !labels.has(step.target)) {
      throw new Error(`step ${i}: target is not a layout label`);
    }
    return { target: step.target, text: step.text == null ? null : String(step.text) };
  });
  return { layout: { objects }, steps };
}

/** Map a DOM key name to the log's key token ("space", "tab", literals). */
export function keyToken(domKey: string): string | null {
  if (domKey === ' ') return 'space';
  if (domKey === 'Tab') return 'tab';
  if (domKey === 'Enter') return 'enter';
  if (domKey === 'Backspace') return 'backspace';
  if (domKey.length === 1) return domKey;
  return null; // modifiers and other named keys are not recorded
}
