// The interactive editor: a circuit grid students edit by drag and drop,
// with live results. All editing goes through the circuit model's
// validation, so the working circuit is valid at every instant and
// illegal drops bounce off visually without touching state. Every edit
// clears the results and queues a fresh simulation through the scheduler,
// which drops stale completions.

import {
  circuitToDoc,
  defaultQubit,
  inputBits,
  makePlacement,
  newCircuit,
  placementAt,
  qubitFromDoc,
  placementFromDoc,
  removeGate,
  replacePlacement,
  span,
  tryPlaceGate,
  validate,
  type Circuit,
  type Placement,
  type QubitSpec,
} from "./circuit.js";
import {
  ANTI_CONTROL,
  CONTROL,
  Registry,
  SWAP,
  defaultRegistry,
  gateFromDoc,
} from "./gates.js";
import {
  bitsToIndex,
  drawIndex,
  empiricalProbs,
  formatProbability,
  indexToBits,
  type Rng,
} from "./sim.js";
import { SimulationScheduler, type SimOutcome, type Simulate } from "./scheduler.js";
import type { AttemptResponse, CircuitDoc, ExerciseDoc, ShotRecord } from "./types.js";

const DISPLAY_EPS = 1e-12; // below this a probability renders as "0"

export type NormalizedExercise = {
  nQubits: number;
  nMoments: number;
  header: string;
  stem: string;
  notation: "bit" | "braket";
  showChart: boolean;
  showOutputBits: boolean;
  showShotTable: boolean;
  hideZeroRows: boolean;
  leftAxisLabel: string;
  middleAxisLabel: string;
  rightAxisLabel: string;
  palette: string[];
  samplingMode: "matrix" | "sample" | "manual";
  sampleSize: number;
  qubits: QubitSpec[];
  initial: Placement[];
  feedback: { correct: string; conditionWrong: string; wrong: string };
  registry: Registry;
};

export function normalizeExercise(doc: ExerciseDoc): NormalizedExercise {
  const registry = defaultRegistry().withGates((doc.customGates ?? []).map(gateFromDoc));
  const qubits = (doc.qubits ?? []).map((q, i) => qubitFromDoc(q, `qubits[${i}]`));
  while (qubits.length < doc.nQubits) qubits.push(defaultQubit());
  return {
    nQubits: doc.nQubits,
    nMoments: doc.nMoments,
    header: doc.header ?? "",
    stem: doc.stem ?? "",
    notation: doc.qubitNotation ?? "bit",
    showChart: doc.showChart ?? true,
    showOutputBits: doc.showOutputBits ?? true,
    showShotTable: doc.showShotTable ?? false,
    hideZeroRows: doc.hideZeroRows ?? false,
    leftAxisLabel: doc.leftAxisLabel ?? "In",
    middleAxisLabel: doc.middleAxisLabel ?? "Step",
    rightAxisLabel: doc.rightAxisLabel ?? "Out",
    palette: doc.gates ?? [...registry.names(), CONTROL, ANTI_CONTROL],
    samplingMode: doc.samplingMode ?? "matrix",
    sampleSize: doc.sampleSize ?? 100,
    qubits,
    initial: (doc.initialCircuit ?? []).map((p, i) => placementFromDoc(p, `initialCircuit[${i}]`)),
    feedback: {
      correct: doc.feedbackText?.correct ?? "Correct.",
      conditionWrong:
        doc.feedbackText?.conditionWrong ?? "Incorrect: a required gate condition is not met.",
      wrong: doc.feedbackText?.wrong ?? "Incorrect: the circuit's behaviour does not match the task.",
    },
    registry,
  };
}

export const DRAG_MIME = "application/x-qugrid";

type DragPayload =
  | { kind: "palette"; gate: string }
  | { kind: "move"; q: number; t: number };

export type EditorOptions = {
  mount: HTMLElement;
  taskId: string;
  exercise: ExerciseDoc;
  local: Simulate;
  remote: Simulate;
  threshold?: number;
  submit: (taskId: string, circuit: CircuitDoc) => Promise<AttemptResponse>;
  rng?: Rng;
};

export class Editor {
  readonly taskId: string;
  readonly exercise: NormalizedExercise;
  circuit: Circuit;
  displayMode: "chart" | "table" = "chart";
  shots: ShotRecord[] = [];
  busy = false;

  private mount: HTMLElement;
  private scheduler: SimulationScheduler;
  private submitFn: (taskId: string, circuit: CircuitDoc) => Promise<AttemptResponse>;
  private rng: Rng;
  private exactProbs: Float64Array | null = null;
  private displayProbs: Float64Array | null = null;
  private shotCounter = 0;
  private error: { message: string; retry: (() => void) | null } | null = null;
  private feedback: { text: string; points: number | null; correct: boolean } | null = null;
  private rejected: string | null = null; // "q,t" of the last rejected drop

  constructor(opts: EditorOptions) {
    this.mount = opts.mount;
    this.taskId = opts.taskId;
    this.exercise = normalizeExercise(opts.exercise);
    this.submitFn = opts.submit;
    this.rng = opts.rng ?? Math.random;
    const base = newCircuit(this.exercise.nQubits, this.exercise.nMoments, [
      ...this.exercise.qubits,
    ]);
    this.circuit = { ...base, placements: [...this.exercise.initial] };
    this.scheduler = new SimulationScheduler({
      local: opts.local,
      remote: opts.remote,
      threshold: opts.threshold,
      onResult: (outcome) => this.acceptResult(outcome),
      onError: (message, retry) => {
        this.error = { message, retry };
        this.render();
      },
      onBusy: (busy) => {
        this.busy = busy;
        this.mount.querySelector(".qg-editor")?.classList.toggle("qg-busy", busy);
      },
    });
    this.bindEvents();
    this.render();
    this.resimulate(); // activation: the first simulation runs now, not before
  }

  get registry(): Registry {
    return this.exercise.registry;
  }

  currentInput(): string {
    return inputBits(this.circuit);
  }

  serialized(): CircuitDoc {
    return circuitToDoc(this.circuit);
  }

  // --- editing operations; each either commits + resimulates or rejects ---

  dropFromPalette(gate: string, q: number, t: number): boolean {
    if (!this.exercise.palette.includes(gate)) return this.reject(q, t);
    if (gate === CONTROL || gate === ANTI_CONTROL) {
      return this.attachDot(gate, q, t);
    }
    let placement: Placement;
    if (gate === SWAP) {
      const partner = this.freeSwapPartner(q, t);
      if (partner === null) return this.reject(q, t);
      placement = makePlacement({ name: SWAP, target: q, time: t, swapPartner: partner });
    } else {
      placement = makePlacement({ name: gate, target: q, time: t });
    }
    const result = tryPlaceGate(this.circuit, placement, this.registry);
    if (!result.ok) return this.reject(q, t);
    this.commit(result.circuit);
    return true;
  }

  attachDot(kind: string, q: number, t: number): boolean {
    // the dot must land on a free cell and connect to the nearest gate
    // already sitting in the same column
    if (placementAt(this.circuit, q, t, this.registry) !== null) return this.reject(q, t);
    const column = this.circuit.placements.filter((p) => p.time === t && p.editable);
    if (column.length === 0) return this.reject(q, t);
    const nearest = column.reduce((best, p) => {
      const dist = (candidate: Placement) =>
        Math.min(...span(candidate, this.registry).map((row) => Math.abs(row - q)));
      return dist(p) < dist(best) ? p : best;
    });
    const after = makePlacement({
      ...nearest,
      controls: kind === CONTROL ? [...nearest.controls, q] : nearest.controls,
      antiControls: kind === ANTI_CONTROL ? [...nearest.antiControls, q] : nearest.antiControls,
    });
    const result = replacePlacement(this.circuit, nearest, after, this.registry);
    if (!result.ok) return this.reject(q, t);
    this.commit(result.circuit);
    return true;
  }

  movePlacement(from: { q: number; t: number }, to: { q: number; t: number }): boolean {
    const placement = placementAt(this.circuit, from.q, from.t, this.registry);
    if (placement === null || !placement.editable) return this.reject(to.q, to.t);
    const dq = to.q - from.q;
    const dt = to.t - from.t;
    if (dq === 0 && dt === 0) return true;
    const after = makePlacement({
      name: placement.name,
      target: placement.target + dq,
      time: placement.time + dt,
      controls: placement.controls.map((c) => c + dq),
      antiControls: placement.antiControls.map((c) => c + dq),
      swapPartner: placement.swapPartner === null ? null : placement.swapPartner + dq,
      editable: placement.editable,
    });
    const result = replacePlacement(this.circuit, placement, after, this.registry);
    if (!result.ok) return this.reject(to.q, to.t);
    this.commit(result.circuit);
    return true;
  }

  removeAt(q: number, t: number): boolean {
    const placement = placementAt(this.circuit, q, t, this.registry);
    if (placement === null || !placement.editable) return this.reject(q, t);
    this.commit(removeGate(this.circuit, q, t, this.registry));
    return true;
  }

  toggleInput(q: number): boolean {
    const spec = this.circuit.qubits[q];
    if (!spec || !spec.editable) return false; // locked inputs are display-only
    const qubits = this.circuit.qubits.map((s, i) =>
      i === q ? { ...s, value: s.value === 0 ? 1 : 0 } : s
    );
    this.commit({ ...this.circuit, qubits });
    return true;
  }

  measure(): ShotRecord | null {
    if (this.exactProbs === null) return null;
    const outcome = drawIndex(this.exactProbs, this.rng());
    this.shotCounter += 1;
    const record: ShotRecord = {
      index: this.shotCounter,
      input: this.currentInput(),
      output: indexToBits(outcome, this.circuit.nQubits),
    };
    this.shots.push(record);
    if (this.exercise.samplingMode === "manual") this.refreshDisplayProbs();
    this.render();
    return record;
  }

  async save(): Promise<void> {
    // the editor never submits an invalid circuit; edits that would break
    // validation are rejected before they reach the state
    if (validate(this.circuit, this.registry).length > 0) return;
    try {
      const response = await this.submitFn(this.taskId, this.serialized());
      this.feedback = {
        text: response.result.feedback,
        points: response.result.points,
        correct: response.result.correct,
      };
      this.error = null;
    } catch (err) {
      this.error = {
        message: `submission failed: ${err instanceof Error ? err.message : String(err)}`,
        retry: null,
      };
    }
    this.render();
  }

  retry(): void {
    const retry = this.error?.retry;
    this.error = null;
    this.render();
    retry?.();
  }

  setDisplayMode(mode: "chart" | "table"): void {
    this.displayMode = mode;
    this.render();
  }

  // --- internals ---

  private freeSwapPartner(q: number, t: number): number | null {
    const taken = (row: number) =>
      row < 0 || row >= this.circuit.nQubits || placementAt(this.circuit, row, t, this.registry) !== null;
    if (!taken(q + 1)) return q + 1;
    if (!taken(q - 1)) return q - 1;
    return null;
  }

  private reject(q: number, t: number): boolean {
    this.rejected = `${q},${t}`;
    this.render();
    return false;
  }

  private commit(circuit: Circuit): void {
    this.circuit = circuit;
    this.rejected = null;
    this.feedback = null;
    this.resimulate();
  }

  private resimulate(): void {
    // stale results are cleared on edit, not just superseded later
    this.exactProbs = null;
    this.displayProbs = null;
    this.error = null;
    this.render();
    this.scheduler.submit({ circuit: this.serialized(), input: this.currentInput() });
  }

  private acceptResult(outcome: SimOutcome): void {
    const probs = new Float64Array(1 << outcome.nQubits);
    for (const [bits, p] of Object.entries(outcome.distribution)) {
      probs[bitsToIndex(bits)] = p;
    }
    this.exactProbs = probs;
    this.refreshDisplayProbs();
    this.render();
  }

  private refreshDisplayProbs(): void {
    if (this.exactProbs === null) {
      this.displayProbs = null;
      return;
    }
    const mode = this.exercise.samplingMode;
    if (mode === "matrix") {
      this.displayProbs = this.exactProbs;
    } else if (mode === "sample") {
      this.displayProbs = empiricalProbs(this.exactProbs, this.exercise.sampleSize, this.rng);
    } else {
      // manual: accumulate the user's own shots for the current input
      const probs = new Float64Array(this.exactProbs.length);
      const relevant = this.shots.filter((s) => s.input === this.currentInput());
      for (const shot of relevant) probs[bitsToIndex(shot.output)] += 1;
      if (relevant.length > 0) {
        for (let i = 0; i < probs.length; i++) probs[i] /= relevant.length;
      }
      this.displayProbs = probs;
    }
  }

  private bindEvents(): void {
    const root = this.mount;
    root.addEventListener("dragstart", (event) => {
      const target = event.target as HTMLElement;
      const paletteItem = target.closest?.(".qg-palette-item") as HTMLElement | null;
      const chip = target.closest?.(".qg-chip[draggable='true']") as HTMLElement | null;
      const payload: DragPayload | null = paletteItem
        ? { kind: "palette", gate: paletteItem.dataset.gate! }
        : chip
          ? { kind: "move", q: Number(chip.dataset.q), t: Number(chip.dataset.t) }
          : null;
      if (payload) {
        (event as DragEvent).dataTransfer?.setData(DRAG_MIME, JSON.stringify(payload));
      }
    });
    root.addEventListener("dragover", (event) => {
      if ((event.target as HTMLElement).closest?.(".qg-cell")) event.preventDefault();
    });
    root.addEventListener("drop", (event) => {
      const cell = (event.target as HTMLElement).closest?.(".qg-cell") as HTMLElement | null;
      if (!cell) return;
      event.preventDefault();
      const raw = (event as DragEvent).dataTransfer?.getData(DRAG_MIME);
      if (!raw) return;
      let payload: DragPayload;
      try {
        payload = JSON.parse(raw);
      } catch {
        return;
      }
      const q = Number(cell.dataset.q);
      const t = Number(cell.dataset.t);
      if (payload.kind === "palette") {
        this.dropFromPalette(payload.gate, q, t);
      } else {
        this.movePlacement({ q: payload.q, t: payload.t }, { q, t });
      }
    });
    root.addEventListener("dblclick", (event) => {
      const cell = (event.target as HTMLElement).closest?.(".qg-cell") as HTMLElement | null;
      if (cell) this.removeAt(Number(cell.dataset.q), Number(cell.dataset.t));
    });
    root.addEventListener("click", (event) => {
      const target = event.target as HTMLElement;
      if (target.closest?.(".qg-input")) {
        const cell = target.closest(".qg-input") as HTMLElement;
        this.toggleInput(Number(cell.dataset.q));
      } else if (target.closest?.(".qg-measure")) {
        this.measure();
      } else if (target.closest?.(".qg-save")) {
        void this.save();
      } else if (target.closest?.(".qg-retry")) {
        this.retry();
      } else if (target.closest?.(".qg-mode-toggle")) {
        this.setDisplayMode(this.displayMode === "chart" ? "table" : "chart");
      }
    });
  }

  // --- rendering ---

  private inputLabel(q: number): string {
    const spec = this.circuit.qubits[q];
    const notation = spec.notation ?? this.exercise.notation;
    return notation === "braket" ? `|${spec.value}⟩` : String(spec.value);
  }

  private cellContent(q: number, t: number): string {
    const p = placementAt(this.circuit, q, t, this.registry);
    if (p === null) return "";
    const draggable = p.editable ? "true" : "false";
    const locked = p.editable ? "" : " qg-locked";
    const chip = (text: string, extra: string) =>
      `<span class="qg-chip${extra}${locked}" draggable="${draggable}" data-q="${q}" data-t="${t}">${text}</span>`;
    if (p.controls.includes(q)) return chip("●", " qg-dot-control");
    if (p.antiControls.includes(q)) return chip("○", " qg-dot-anti");
    if (p.name === SWAP) return chip("×", " qg-swap");
    const body = span(p, this.registry);
    const label = body.length > 1 && q !== p.target ? "│" : escapeHtml(p.name);
    return chip(label, " qg-body");
  }

  private outputLabel(q: number): string {
    if (this.exactProbs === null) return "·";
    let mass = 0;
    const bit = 1 << (this.circuit.nQubits - 1 - q);
    for (let i = 0; i < this.exactProbs.length; i++) {
      if (i & bit) mass += this.exactProbs[i];
    }
    if (mass < 1e-9) return "0";
    if (mass > 1 - 1e-9) return "1";
    return "?";
  }

  private resultsRows(): { bits: string; p: number }[] {
    if (this.displayProbs === null) return [];
    const rows = [];
    for (let i = 0; i < this.displayProbs.length; i++) {
      const p = this.displayProbs[i];
      if (this.exercise.hideZeroRows && p < DISPLAY_EPS) continue; // rows that would print "0"
      rows.push({ bits: indexToBits(i, this.circuit.nQubits), p });
    }
    return rows;
  }

  private render(): void {
    const ex = this.exercise;
    const grid: string[] = [];
    for (let q = 0; q < this.circuit.nQubits; q++) {
      const cells: string[] = [];
      const spec = this.circuit.qubits[q];
      const locked = spec.editable ? "" : " qg-locked";
      cells.push(
        `<td class="qg-input${locked}" data-q="${q}" title="${spec.editable ? "toggle" : "locked"}">` +
          `${escapeHtml(spec.name)} ${this.inputLabel(q)}</td>`
      );
      for (let t = 0; t < this.circuit.nMoments; t++) {
        const rejected = this.rejected === `${q},${t}` ? " qg-reject" : "";
        cells.push(
          `<td class="qg-cell${rejected}" data-q="${q}" data-t="${t}">${this.cellContent(q, t)}</td>`
        );
      }
      if (ex.showOutputBits) {
        cells.push(`<td class="qg-out" data-q="${q}">${this.outputLabel(q)}</td>`);
      }
      grid.push(`<tr>${cells.join("")}</tr>`);
    }

    const palette = ex.palette
      .map(
        (gate) =>
          `<button class="qg-palette-item" draggable="true" data-gate="${escapeHtml(gate)}">` +
          `${escapeHtml(paletteLabel(gate))}</button>`
      )
      .join("");

    const rows = this.resultsRows();
    const chart = !ex.showChart
      ? ""
      : `<div class="qg-chart qg-chart--${this.displayMode}">` +
        (this.displayProbs === null
          ? `<div class="qg-pending">…</div>`
          : rows
              .map(({ bits, p }) =>
                this.displayMode === "chart"
                  ? `<div class="qg-chart-row" data-bits="${bits}" data-p="${p}">` +
                    `<span class="qg-bits">${bits}</span>` +
                    `<span class="qg-bar"><span class="qg-bar-fill" style="width:${(p * 100).toFixed(2)}%"></span></span>` +
                    `<span class="qg-prob">${formatProbability(p)}</span></div>`
                  : `<div class="qg-chart-row" data-bits="${bits}" data-p="${p}">` +
                    `<span class="qg-bits">${bits}</span>` +
                    `<span class="qg-prob">${formatProbability(p)}</span></div>`
              )
              .join("")) +
        `</div>`;

    const shotTable = !ex.showShotTable
      ? ""
      : `<table class="qg-shot-table"><thead><tr><th>#</th>` +
        `<th>${escapeHtml(ex.leftAxisLabel)}</th><th>${escapeHtml(ex.rightAxisLabel)}</th></tr></thead><tbody>` +
        this.shots
          .map(
            (s) =>
              `<tr class="qg-shot-row"><td>${s.index}</td><td>${s.input}</td><td>${s.output}</td></tr>`
          )
          .join("") +
        `</tbody></table>`;

    const feedback = !this.feedback
      ? ""
      : `<div class="qg-feedback ${this.feedback.correct ? "qg-correct" : "qg-wrong"}">` +
        `<span class="qg-feedback-text">${escapeHtml(this.feedback.text)}</span>` +
        (this.feedback.points === null
          ? ""
          : ` <span class="qg-points">${this.feedback.points}</span>`) +
        `</div>`;

    const error = !this.error
      ? ""
      : `<div class="qg-error">${escapeHtml(this.error.message)}` +
        (this.error.retry ? ` <button class="qg-retry">Retry</button>` : "") +
        `</div>`;

    this.mount.innerHTML =
      `<div class="qg-editor${this.busy ? " qg-busy" : ""}">` +
      `<h2 class="qg-header">${escapeHtml(ex.header)}</h2>` +
      `<p class="qg-stem">${escapeHtml(ex.stem)}</p>` +
      `<div class="qg-palette">${palette}</div>` +
      `<div class="qg-axis-labels">` +
      `<span class="qg-left-label">${escapeHtml(ex.leftAxisLabel)}</span>` +
      `<span class="qg-middle-label">${escapeHtml(ex.middleAxisLabel)}</span>` +
      `<span class="qg-right-label">${escapeHtml(ex.rightAxisLabel)}</span>` +
      `</div>` +
      `<table class="qg-grid"><tbody>${grid.join("")}</tbody></table>` +
      `<div class="qg-buttons">` +
      `<button class="qg-measure">Measure</button>` +
      `<button class="qg-save">Save</button>` +
      `<button class="qg-mode-toggle">${this.displayMode === "chart" ? "table" : "chart"}</button>` +
      `</div>` +
      chart +
      shotTable +
      feedback +
      error +
      `</div>`;
  }
}

function paletteLabel(gate: string): string {
  if (gate === CONTROL) return "●";
  if (gate === ANTI_CONTROL) return "○";
  return gate;
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
