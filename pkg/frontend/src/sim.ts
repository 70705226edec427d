// Client-side statevector engine. Semantics mirror the service engine:
// qubit 0 is the top wire and the most significant bit of the basis index,
// gates apply moment by moment (ties broken by target row), controls gate
// the unitary onto the subspace where every control reads 1 and every
// anti-control reads 0. A shared fixture suite generated from the service
// engine keeps the two in lock-step; see tests/conformance.test.ts.

import { Registry, SWAP, type Matrix } from "./gates.js";
import { validate, type Circuit, type Placement } from "./circuit.js";

export type State = { n: number; re: Float64Array; im: Float64Array };

export function bitsToIndex(bits: string): number {
  if (!bits || !/^[01]+$/.test(bits)) {
    throw new Error(`input must be a non-empty 0/1 string, got '${bits}'`);
  }
  return parseInt(bits, 2);
}

export function indexToBits(index: number, nQubits: number): string {
  return index.toString(2).padStart(nQubits, "0");
}

export function initialState(bits: string): State {
  const index = bitsToIndex(bits);
  const n = bits.length;
  const re = new Float64Array(1 << n);
  const im = new Float64Array(1 << n);
  re[index] = 1;
  return { n, re, im };
}

function operands(p: Placement, registry: Registry): { axes: number[]; matrix: Matrix } {
  if (p.name === SWAP) {
    if (p.swapPartner === null) throw new Error("SWAP placement without swapPartner");
    return { axes: [p.target, p.swapPartner], matrix: registry.get(SWAP).matrix };
  }
  const def = registry.get(p.name);
  const axes = Array.from({ length: def.arity }, (_, i) => p.target + i);
  return { axes, matrix: def.matrix };
}

export function applyPlacement(state: State, p: Placement, registry: Registry): void {
  const { n, re, im } = state;
  const { axes, matrix } = operands(p, registry);
  for (const row of [...axes, ...p.controls, ...p.antiControls]) {
    if (row < 0 || row >= n) {
      throw new Error(`placement row ${row} outside the ${n}-qubit state`);
    }
  }
  const k = axes.length;
  const dim = 1 << k;
  // qubit q owns integer bit (n-1-q); axis 0 is the most significant
  // local bit, matching the matrix row convention
  const axisMask = axes.map((q) => 1 << (n - 1 - q));
  let ctrlMask = 0;
  for (const q of p.controls) ctrlMask |= 1 << (n - 1 - q);
  let antiMask = 0;
  for (const q of p.antiControls) antiMask |= 1 << (n - 1 - q);
  let allAxes = 0;
  for (const m of axisMask) allAxes |= m;

  const offsets = new Array<number>(dim);
  for (let j = 0; j < dim; j++) {
    let off = 0;
    for (let b = 0; b < k; b++) {
      if ((j >> (k - 1 - b)) & 1) off |= axisMask[b];
    }
    offsets[j] = off;
  }

  const size = 1 << n;
  const gatherRe = new Float64Array(dim);
  const gatherIm = new Float64Array(dim);
  for (let base = 0; base < size; base++) {
    if ((base & allAxes) !== 0) continue; // enumerate each block once
    if ((base & ctrlMask) !== ctrlMask) continue;
    if ((base & antiMask) !== 0) continue;
    for (let j = 0; j < dim; j++) {
      gatherRe[j] = re[base | offsets[j]];
      gatherIm[j] = im[base | offsets[j]];
    }
    for (let j = 0; j < dim; j++) {
      let accRe = 0;
      let accIm = 0;
      const row = matrix[j];
      for (let m = 0; m < dim; m++) {
        const [mr, mi] = row[m];
        accRe += mr * gatherRe[m] - mi * gatherIm[m];
        accIm += mr * gatherIm[m] + mi * gatherRe[m];
      }
      re[base | offsets[j]] = accRe;
      im[base | offsets[j]] = accIm;
    }
  }
}

export function simulate(circuit: Circuit, inputBits: string, registry: Registry): State {
  const violations = validate(circuit, registry);
  if (violations.length > 0) {
    const details = violations.map((v) => `${v.code}: ${v.message}`).join("; ");
    throw new Error(`circuit is not well-formed: ${details}`);
  }
  if (inputBits.length !== circuit.nQubits) {
    throw new Error(
      `input '${inputBits}' has ${inputBits.length} bits, circuit has ${circuit.nQubits} qubits`
    );
  }
  const state = initialState(inputBits);
  const ordered = [...circuit.placements].sort((a, b) => a.time - b.time || a.target - b.target);
  for (const placement of ordered) {
    applyPlacement(state, placement, registry);
  }
  return state;
}

export function probabilities(state: State): Float64Array {
  const probs = new Float64Array(state.re.length);
  for (let i = 0; i < probs.length; i++) {
    probs[i] = state.re[i] * state.re[i] + state.im[i] * state.im[i];
  }
  return probs;
}

export function distributionToDict(
  probs: ArrayLike<number>,
  nQubits: number,
  includeZeros = false
): Record<string, number> {
  const dict: Record<string, number> = {};
  for (let i = 0; i < probs.length; i++) {
    if (includeZeros || probs[i] > 0) dict[indexToBits(i, nQubits)] = probs[i];
  }
  return dict;
}

export type Rng = () => number; // uniform [0, 1)

// Inverse-CDF lookup: first index whose cumulative weight exceeds u, the
// final edge pinned to 1 so float dust never lets a draw fall off the end.
export function drawIndex(probs: ArrayLike<number>, u: number): number {
  const last = probs.length - 1;
  let acc = 0;
  for (let i = 0; i < last; i++) {
    acc += probs[i];
    if (u < acc) return i;
  }
  return last;
}

export function sampleCounts(
  probs: ArrayLike<number>,
  nQubits: number,
  shots: number,
  rng: Rng
): Record<string, number> {
  if (shots < 1) throw new Error(`shot count must be >= 1, got ${shots}`);
  const counts = new Array<number>(probs.length).fill(0);
  for (let s = 0; s < shots; s++) counts[drawIndex(probs, rng())]++;
  const dict: Record<string, number> = {};
  for (let i = 0; i < counts.length; i++) {
    if (counts[i] > 0) dict[indexToBits(i, nQubits)] = counts[i];
  }
  return dict;
}

export function empiricalProbs(probs: ArrayLike<number>, shots: number, rng: Rng): Float64Array {
  const out = new Float64Array(probs.length);
  for (let s = 0; s < shots; s++) out[drawIndex(probs, rng())]++;
  for (let i = 0; i < out.length; i++) out[i] /= shots;
  return out;
}

export function formatProbability(p: number): string {
  if (p < 1e-12) return "0";
  return String(Number(p.toPrecision(10)));
}
