// Shared test scaffolding: synthetic drag-and-drop events (jsdom has no
// native DataTransfer), a local Simulate backed by the real engine, and a
// microtask flush.

import { Editor, DRAG_MIME, type EditorOptions } from "../src/editor.js";
import { handleSimRequest } from "../src/worker.js";
import type { SimJob, SimOutcome, Simulate } from "../src/scheduler.js";
import type { AttemptResponse, CircuitDoc, ExerciseDoc } from "../src/types.js";

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

export function simOutcome(job: SimJob): SimOutcome {
  const reply = handleSimRequest({ seq: 0, circuit: job.circuit, input: job.input });
  if (!reply.ok) throw new Error(reply.error);
  return { nQubits: reply.nQubits, input: reply.input, distribution: reply.distribution };
}

export function countingLocal(): Simulate & { calls: number } {
  const fn = (async (job: SimJob) => {
    fn.calls += 1;
    return simOutcome(job);
  }) as Simulate & { calls: number };
  fn.calls = 0;
  return fn;
}

export function failingSimulate(message = "unreachable"): Simulate {
  return () => Promise.reject(new Error(message));
}

type DataTransferStub = {
  data: Record<string, string>;
  setData(type: string, value: string): void;
  getData(type: string): string;
};

export function dataTransferStub(): DataTransferStub {
  return {
    data: {},
    setData(type, value) {
      this.data[type] = value;
    },
    getData(type) {
      return this.data[type] ?? "";
    },
  };
}

function withTransfer(type: string, dt: DataTransferStub): Event {
  const event = new Event(type, { bubbles: true, cancelable: true });
  (event as unknown as { dataTransfer: DataTransferStub }).dataTransfer = dt;
  return event;
}

// Full gesture: dragstart on the source element, drop on the target cell.
export function dragAndDrop(source: Element, target: Element): void {
  const dt = dataTransferStub();
  source.dispatchEvent(withTransfer("dragstart", dt));
  target.dispatchEvent(withTransfer("dragover", dt));
  target.dispatchEvent(withTransfer("drop", dt));
}

// Drop a raw payload without a source element (malformed-input tests).
export function dropPayload(target: Element, payload: unknown): void {
  const dt = dataTransferStub();
  dt.setData(DRAG_MIME, typeof payload === "string" ? payload : JSON.stringify(payload));
  target.dispatchEvent(withTransfer("drop", dt));
}

export function paletteItem(root: HTMLElement, gate: string): Element {
  const item = root.querySelector(`.qg-palette-item[data-gate="${gate}"]`);
  if (!item) throw new Error(`no palette item for ${gate}`);
  return item;
}

export function cellAt(root: HTMLElement, q: number, t: number): Element {
  const cell = root.querySelector(`.qg-cell[data-q="${q}"][data-t="${t}"]`);
  if (!cell) throw new Error(`no cell (${q}, ${t})`);
  return cell;
}

export type Harness = {
  root: HTMLElement;
  editor: Editor;
  local: Simulate & { calls: number };
  submitted: CircuitDoc[];
};

export const BASE_EXERCISE: ExerciseDoc = {
  nQubits: 2,
  nMoments: 2,
  header: "Test task",
  stem: "Build something.",
  gates: ["X", "H", "SWAP", "control", "antiControl"],
};

export function makeHarness(
  exercise: Partial<ExerciseDoc> = {},
  opts: Partial<EditorOptions> & { result?: AttemptResponse["result"] } = {}
): Harness {
  const root = document.createElement("div");
  document.body.appendChild(root);
  const local = countingLocal();
  const submitted: CircuitDoc[] = [];
  const result = opts.result ?? { correct: true, points: 1, feedback: "Correct." };
  const editor = new Editor({
    mount: root,
    taskId: "test-task",
    exercise: { ...BASE_EXERCISE, ...exercise },
    local,
    remote: opts.remote ?? failingSimulate("remote route must stay cold in this test"),
    threshold: opts.threshold,
    rng: opts.rng,
    submit:
      opts.submit ??
      (async (taskId, circuit) => {
        submitted.push(circuit);
        return { id: 1, taskId, userId: "student", submittedAt: "now", result };
      }),
  });
  return { root, editor, local, submitted };
}
