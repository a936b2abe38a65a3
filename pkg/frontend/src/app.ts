/**
 * Browser layer: renders the stimuli task, wires native input events into
 * a capture session and offers the exported log as a file download.  No
 * backend: the downloaded JSONL feeds `cogsig validate` / `cogsig extract`.
 */

import { canExport, CaptureSession, createSession, exportJsonl, markGap,
         recordButton, recordKey, recordMove } from './session.js';
import { keyToken, LayoutObject, parseTaskConfig, TaskScript } from './types.js';

/** Default task, mirroring the toolkit's built-in layout and script. */
export const DEFAULT_TASK = {
  format_version: 'cogsig-task/1',
  layout: {
    objects: [
      { label: 'GO', kind: 'button', bounds: [80, 90, 180, 150] },
      { label: 'PL', kind: 'icon', bounds: [560, 90, 660, 150] },
      { label: 'TXT', kind: 'text', bounds: [240, 270, 500, 330] },
      { label: '1', kind: 'number', bounds: [95, 465, 145, 515] },
      { label: 'PI', kind: 'icon', bounds: [590, 450, 670, 510] },
      { label: '2', kind: 'number', bounds: [535, 475, 585, 525] },
    ],
  },
  steps: [
    { target: 'GO', text: null },
    { target: 'TXT', text: 'set aron go' },
    { target: 'PL', text: null },
    { target: 'TXT', text: 'no rush here' },
    { target: '1', text: null },
    { target: 'PI', text: null },
    { target: '2', text: null },
    { target: 'TXT', text: 'aron set go' },
  ],
};

interface TaskState {
  session: CaptureSession;
  stepIndex: number;
  typedInStep: number;
  startMs: number;
}

function instructionFor(script: TaskScript, state: TaskState): string {
  if (state.stepIndex >= script.steps.length) {
    return 'Task complete. You can export the log now.';
  }
  const step = script.steps[state.stepIndex];
  if (step.text) {
    const left = step.text.length - state.typedInStep;
    return `Click ${step.target} and type "${step.text}" (${left} keys left)`;
  }
  return `Click ${step.target}`;
}

function objectAt(objects: LayoutObject[], x: number, y: number): LayoutObject | null {
  for (const o of objects) {
    const b = o.bounds;
    if (x >= b.left && x < b.right && y >= b.top && y < b.bottom) {
      return o;
    }
  }
  return null;
}

export function mountCaptureTask(root: HTMLElement, configDoc?: unknown): void {
  let script: TaskScript;
  try {
    script = parseTaskConfig(configDoc ?? DEFAULT_TASK);
  } catch (err) {
    const box = document.createElement('div');
    box.className = 'error';
    box.textContent = `Cannot start capture: ${(err as Error).message}`;
    root.replaceChildren(box);
    return; // malformed config: visible error state, no capture
  }
  const notices: HTMLElement[] = [];
  if (script.steps.length === 0) {
    const note = document.createElement('div');
    note.className = 'notice';
    note.textContent = 'No task: the script has no steps. Free interaction is recorded.';
    notices.push(note);
  }

  const subjectInput = document.createElement('input');
  subjectInput.value = 'subject1';
  subjectInput.title = 'subject label (becomes user_id in the exported log)';
  const instruction = document.createElement('div');
  instruction.className = 'instruction';
  const surface = document.createElement('div');
  surface.className = 'surface';
  surface.tabIndex = 0; // keyboard focus target
  const exportButton = document.createElement('button');
  exportButton.textContent = 'Export log';
  exportButton.disabled = true;

  const width = Math.max(...script.layout.objects.map((o) => o.bounds.right)) + 60;
  const height = Math.max(...script.layout.objects.map((o) => o.bounds.bottom)) + 60;
  surface.style.cssText =
    `position:relative;width:${width}px;height:${height}px;` +
    'border:1px solid #888;background:#fafafa;user-select:none;';
  for (const o of script.layout.objects) {
    const el = document.createElement('div');
    el.className = `object object-${o.kind}`;
    el.textContent = o.label;
    const b = o.bounds;
    el.style.cssText =
      `position:absolute;left:${b.left}px;top:${b.top}px;` +
      `width:${b.right - b.left}px;height:${b.bottom - b.top}px;` +
      'display:flex;align-items:center;justify-content:center;' +
      'border:2px solid #446;border-radius:6px;background:#dde4ff;';
    surface.appendChild(el);
  }

  const state: TaskState = {
    session: createSession(subjectInput.value || 'subject1', script),
    stepIndex: 0,
    typedInStep: 0,
    startMs: performance.now(),
  };
  instruction.textContent = instructionFor(script, state);

  const now = () => performance.now() - state.startMs;
  const surfaceXY = (ev: PointerEvent | MouseEvent): [number, number] => {
    const rect = surface.getBoundingClientRect();
    return [ev.clientX - rect.left, ev.clientY - rect.top];
  };
  const refresh = () => {
    exportButton.disabled = !canExport(state.session);
    instruction.textContent = instructionFor(script, state);
  };
  const advanceOnClick = (x: number, y: number) => {
    if (state.stepIndex >= script.steps.length) return;
    const step = script.steps[state.stepIndex];
    const hit = objectAt(script.layout.objects, x, y);
    if (hit && hit.label === step.target && !step.text) {
      state.stepIndex += 1;
      state.typedInStep = 0;
    } else if (hit && hit.label === step.target && step.text) {
      state.typedInStep = 0; // clicked the box; typing now counts
    }
  };
  const advanceOnKey = () => {
    if (state.stepIndex >= script.steps.length) return;
    const step = script.steps[state.stepIndex];
    if (!step.text) return;
    state.typedInStep += 1;
    if (state.typedInStep >= step.text.length) {
      state.stepIndex += 1;
      state.typedInStep = 0;
    }
  };

  surface.addEventListener('pointermove', (ev) => {
    const [x, y] = surfaceXY(ev);
    recordMove(state.session, now(), x, y);
    refresh();
  });
  surface.addEventListener('pointerdown', (ev) => {
    if (ev.button !== 0) return; // only the left button is modeled
    const [x, y] = surfaceXY(ev);
    recordButton(state.session, now(), x, y, true);
    surface.focus();
    refresh();
  });
  surface.addEventListener('pointerup', (ev) => {
    if (ev.button !== 0) return;
    const [x, y] = surfaceXY(ev);
    recordButton(state.session, now(), x, y, false);
    advanceOnClick(x, y);
    refresh();
  });
  surface.addEventListener('keydown', (ev) => {
    if (recordKey(state.session, now(), keyToken(ev.key))) {
      advanceOnKey();
    }
    if (ev.key === 'Tab') ev.preventDefault(); // keep focus on the surface
    refresh();
  });
  window.addEventListener('blur', () => markGap(state.session, now()));

  subjectInput.addEventListener('change', () => {
    state.session.subject = subjectInput.value || 'subject1';
  });
  exportButton.addEventListener('click', () => {
    const blob = new Blob([exportJsonl(state.session)],
                          { type: 'application/jsonl' });
    const link = document.createElement('a');
    link.href = URL.createObjectURL(blob);
    link.download = `${state.session.subject}.jsonl`;
    link.click();
    URL.revokeObjectURL(link.href);
  });

  const bar = document.createElement('div');
  bar.className = 'bar';
  bar.append('Subject: ', subjectInput, ' ', exportButton);
  root.replaceChildren(bar, ...notices, instruction, surface);
}
