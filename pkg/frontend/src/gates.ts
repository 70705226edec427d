// Gate matrices and the toolbar registry. Complex numbers are [re, im]
// pairs, matrices row-major, so a gate definition is JSON-shaped and can
// travel through worker messages unchanged.

import type { CustomGateDoc } from "./types.js";

export type Complex = [number, number];
export type Matrix = Complex[][];

export type GateDef = { name: string; matrix: Matrix; arity: number };

export const SWAP = "SWAP";
export const CONTROL = "control";
export const ANTI_CONTROL = "antiControl";
export const DOT_NAMES = [CONTROL, ANTI_CONTROL];

export const UNITARITY_TOL = 1e-10;

const R2 = Math.SQRT1_2;
const C = (re: number, im = 0): Complex => [re, im];

const DEFAULT_MATRICES: [string, Matrix][] = [
  ["X", [[C(0), C(1)], [C(1), C(0)]]],
  ["Y", [[C(0), C(0, -1)], [C(0, 1), C(0)]]],
  ["Z", [[C(1), C(0)], [C(0), C(-1)]]],
  ["H", [[C(R2), C(R2)], [C(R2), C(-R2)]]],
  ["S", [[C(1), C(0)], [C(0), C(0, 1)]]],
  ["T", [[C(1), C(0)], [C(0), C(Math.cos(Math.PI / 4), Math.sin(Math.PI / 4))]]],
  ["SX", [[C(0.5, 0.5), C(0.5, -0.5)], [C(0.5, -0.5), C(0.5, 0.5)]]],
];

const SWAP_MATRIX: Matrix = [
  [C(1), C(0), C(0), C(0)],
  [C(0), C(0), C(1), C(0)],
  [C(0), C(1), C(0), C(0)],
  [C(0), C(0), C(0), C(1)],
];

export function unitarityDefect(matrix: Matrix): number {
  // largest entrywise deviation of U†U from the identity
  const dim = matrix.length;
  let worst = 0;
  for (let i = 0; i < dim; i++) {
    for (let j = 0; j < dim; j++) {
      let re = 0;
      let im = 0;
      for (let k = 0; k < dim; k++) {
        const [ar, ai] = matrix[k][i]; // conj(U[k][i]) * U[k][j]
        const [br, bi] = matrix[k][j];
        re += ar * br + ai * bi;
        im += ar * bi - ai * br;
      }
      if (i === j) re -= 1;
      worst = Math.max(worst, Math.hypot(re, im));
    }
  }
  return worst;
}

export class Registry {
  readonly defs: GateDef[];
  private byName = new Map<string, GateDef>();

  constructor(defs: GateDef[]) {
    this.defs = defs;
    for (const def of defs) {
      if (this.byName.has(def.name)) {
        throw new Error(`duplicate gate name '${def.name}'`);
      }
      this.byName.set(def.name, def);
    }
  }

  has(name: string): boolean {
    return this.byName.has(name);
  }

  get(name: string): GateDef {
    const def = this.byName.get(name);
    if (!def) throw new Error(`unknown gate '${name}'`);
    return def;
  }

  names(): string[] {
    return this.defs.map((d) => d.name);
  }

  withGates(extra: GateDef[]): Registry {
    return new Registry([...this.defs, ...extra]);
  }
}

export function defaultRegistry(): Registry {
  const defs = DEFAULT_MATRICES.map(([name, matrix]) => ({ name, matrix, arity: 1 }));
  defs.push({ name: SWAP, matrix: SWAP_MATRIX, arity: 2 });
  return new Registry(defs);
}

export function gateFromDoc(doc: CustomGateDoc): GateDef {
  const name = doc?.name;
  if (typeof name !== "string" || !name) {
    throw new Error("custom gate needs a non-empty string name");
  }
  const rows = doc.matrix;
  if (!Array.isArray(rows) || rows.length === 0) {
    throw new Error(`gate '${name}': matrix must be a non-empty list of rows`);
  }
  const dim = rows.length;
  const matrix: Matrix = rows.map((row) => {
    if (!Array.isArray(row) || row.length !== dim) {
      throw new Error(`gate '${name}': matrix must be square`);
    }
    return row.map((entry) => {
      if (
        !Array.isArray(entry) ||
        entry.length !== 2 ||
        typeof entry[0] !== "number" ||
        typeof entry[1] !== "number"
      ) {
        throw new Error(`gate '${name}': matrix entries must be [re, im] number pairs`);
      }
      return [entry[0], entry[1]];
    });
  });
  const arity = Math.log2(dim);
  if (!Number.isInteger(arity) || arity < 1) {
    throw new Error(`gate '${name}': matrix dimension ${dim} is not a power of two >= 2`);
  }
  const defect = unitarityDefect(matrix);
  if (defect > UNITARITY_TOL) {
    throw new Error(`gate '${name}': matrix is not unitary (defect ${defect.toExponential(3)})`);
  }
  return { name, matrix, arity };
}
