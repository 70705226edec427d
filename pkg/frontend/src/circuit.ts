// Circuit grid model: placements, structural validation, wire encoding.
// Mirrors the service's semantics so a circuit the editor accepts is a
// circuit the service accepts: every placement owns its cells (gate body,
// dots, swap partner), no two placements share a cell, row 0 is the top
// wire and moment 0 the leftmost column.

import { Registry, SWAP, gateFromDoc, type GateDef } from "./gates.js";
import type { CircuitDoc, PlacementDoc, QubitSpecDoc } from "./types.js";

export type Placement = {
  name: string;
  target: number;
  time: number;
  controls: number[];
  antiControls: number[];
  swapPartner: number | null;
  editable: boolean;
};

export type QubitSpec = {
  name: string;
  value: number;
  editable: boolean;
  notation: "bit" | "braket" | null;
};

export type Circuit = {
  nQubits: number;
  nMoments: number;
  placements: Placement[];
  qubits: QubitSpec[];
};

export type Violation = { code: string; message: string };

export function makePlacement(p: Partial<Placement> & { name: string; target: number; time: number }): Placement {
  return {
    name: p.name,
    target: p.target,
    time: p.time,
    controls: [...(p.controls ?? [])].sort((a, b) => a - b),
    antiControls: [...(p.antiControls ?? [])].sort((a, b) => a - b),
    swapPartner: p.swapPartner ?? null,
    editable: p.editable ?? true,
  };
}

export function defaultQubit(): QubitSpec {
  return { name: "", value: 0, editable: true, notation: null };
}

export function newCircuit(nQubits: number, nMoments: number, qubits?: QubitSpec[]): Circuit {
  if (nQubits < 1 || nMoments < 1) {
    throw new Error(`grid dimensions must be positive, got ${nQubits}x${nMoments}`);
  }
  const specs = qubits ?? Array.from({ length: nQubits }, defaultQubit);
  if (specs.length !== nQubits) {
    throw new Error(`expected ${nQubits} qubit specs, got ${specs.length}`);
  }
  return { nQubits, nMoments, placements: [], qubits: specs };
}

export function span(p: Placement, registry: Registry): number[] {
  // rows covered by the gate body, controls excluded
  if (p.name === SWAP) {
    return [p.target, p.swapPartner ?? p.target];
  }
  const arity = registry.has(p.name) ? registry.get(p.name).arity : 1;
  return Array.from({ length: arity }, (_, i) => p.target + i);
}

export function cells(p: Placement, registry: Registry): [number, number][] {
  // duplicates kept so self-overlap is detectable
  const rows = [...span(p, registry), ...p.controls, ...p.antiControls];
  return rows.map((row) => [row, p.time]);
}

const key = (q: number, t: number) => `${q},${t}`;

export function occupancy(circuit: Circuit, registry: Registry): Map<string, Placement> {
  const taken = new Map<string, Placement>();
  for (const p of circuit.placements) {
    for (const [q, t] of cells(p, registry)) taken.set(key(q, t), p);
  }
  return taken;
}

export function placementAt(circuit: Circuit, q: number, t: number, registry: Registry): Placement | null {
  return occupancy(circuit, registry).get(key(q, t)) ?? null;
}

export function validate(circuit: Circuit, registry: Registry): Violation[] {
  const violations: Violation[] = [];
  if (circuit.qubits.length !== 0 && circuit.qubits.length !== circuit.nQubits) {
    violations.push({
      code: "QubitCountMismatch",
      message: `${circuit.qubits.length} qubit specs for ${circuit.nQubits} qubits`,
    });
  }
  const seen = new Map<string, Placement>();
  for (const p of circuit.placements) {
    const known = p.name === SWAP || registry.has(p.name);
    if (!known) {
      violations.push({ code: "UnknownGate", message: `gate '${p.name}' is not in the registry` });
    }
    if (p.name === SWAP && p.swapPartner === null) {
      violations.push({ code: "MissingSwapPartner", message: "SWAP placement needs a swapPartner" });
    }
    if (p.name !== SWAP && p.swapPartner !== null) {
      violations.push({
        code: "UnexpectedSwapPartner",
        message: `gate '${p.name}' cannot have a swapPartner`,
      });
    }
    const rows = [...span(p, registry), ...p.controls, ...p.antiControls];
    const outOfBounds =
      p.time < 0 ||
      p.time >= circuit.nMoments ||
      rows.some((row) => row < 0 || row >= circuit.nQubits);
    if (outOfBounds) {
      violations.push({
        code: "OutOfBounds",
        message: `placement of '${p.name}' at (q${p.target}, t${p.time}) does not fit the grid`,
      });
    }
    const own = cells(p, registry).map(([q, t]) => key(q, t));
    if (new Set(own).size !== own.length) {
      violations.push({
        code: "ControlOverlapsTarget",
        message: `placement of '${p.name}' overlaps itself at time ${p.time}`,
      });
    }
    for (const cell of own) {
      const other = seen.get(cell);
      if (other !== undefined && other !== p) {
        violations.push({
          code: "CellOccupied",
          message: `cell (${cell}) used by both '${other.name}' and '${p.name}'`,
        });
      } else {
        seen.set(cell, p);
      }
    }
  }
  return violations;
}

export type PlaceResult = { ok: true; circuit: Circuit } | { ok: false; reason: string };

export function tryPlaceGate(circuit: Circuit, placement: Placement, registry: Registry): PlaceResult {
  const candidate: Circuit = { ...circuit, placements: [...circuit.placements, placement] };
  const violations = validate(candidate, registry);
  if (violations.length > 0) {
    return { ok: false, reason: `${violations[0].code}: ${violations[0].message}` };
  }
  return { ok: true, circuit: candidate };
}

export function placeGate(circuit: Circuit, placement: Placement, registry: Registry): Circuit {
  const result = tryPlaceGate(circuit, placement, registry);
  if (!result.ok) throw new Error(result.reason);
  return result.circuit;
}

export function removeGate(circuit: Circuit, q: number, t: number, registry: Registry): Circuit {
  // dots count as part of their placement: removing at a dot removes the gate
  const target = placementAt(circuit, q, t, registry);
  if (target === null) throw new Error(`no placement at (qubit ${q}, time ${t})`);
  return { ...circuit, placements: circuit.placements.filter((p) => p !== target) };
}

export function replacePlacement(
  circuit: Circuit,
  before: Placement,
  after: Placement,
  registry: Registry
): PlaceResult {
  const without: Circuit = { ...circuit, placements: circuit.placements.filter((p) => p !== before) };
  return tryPlaceGate(without, after, registry);
}

// --- wire encoding, matching the service's optional-key conventions ---

export function placementToDoc(p: Placement): PlacementDoc {
  const doc: PlacementDoc = { name: p.name, target: p.target, time: p.time };
  if (p.controls.length > 0) doc.controls = [...p.controls].sort((a, b) => a - b);
  if (p.antiControls.length > 0) doc.antiControls = [...p.antiControls].sort((a, b) => a - b);
  if (p.swapPartner !== null) doc.swapPartner = p.swapPartner;
  if (!p.editable) doc.editable = false;
  return doc;
}

export function qubitToDoc(spec: QubitSpec): QubitSpecDoc {
  const doc: QubitSpecDoc = { value: spec.value };
  if (spec.name) doc.name = spec.name;
  if (!spec.editable) doc.editable = false;
  if (spec.notation !== null) doc.notation = spec.notation;
  return doc;
}

export function circuitToDoc(circuit: Circuit): CircuitDoc {
  return {
    nQubits: circuit.nQubits,
    nMoments: circuit.nMoments,
    qubits: circuit.qubits.map(qubitToDoc),
    placements: circuit.placements.map(placementToDoc),
  };
}

function intField(obj: Record<string, unknown>, field: string, where: string): number {
  const value = obj[field];
  if (typeof value !== "number" || !Number.isInteger(value)) {
    throw new Error(`${where}.${field} must be an integer`);
  }
  return value;
}

export function placementFromDoc(doc: PlacementDoc, where = "placement"): Placement {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error(`${where} must be an object`);
  }
  const obj = doc as Record<string, unknown>;
  if (typeof obj.name !== "string" || !obj.name) {
    throw new Error(`${where}.name must be a non-empty string`);
  }
  const dots = (field: "controls" | "antiControls"): number[] => {
    const raw = obj[field];
    if (raw === undefined) return [];
    if (!Array.isArray(raw) || raw.some((v) => typeof v !== "number" || !Number.isInteger(v))) {
      throw new Error(`${where}.${field} must be a list of integers`);
    }
    return raw as number[];
  };
  return makePlacement({
    name: obj.name,
    target: intField(obj, "target", where),
    time: intField(obj, "time", where),
    controls: dots("controls"),
    antiControls: dots("antiControls"),
    swapPartner: obj.swapPartner === undefined ? null : intField(obj, "swapPartner", where),
    editable: obj.editable === undefined ? true : obj.editable === true,
  });
}

export function qubitFromDoc(doc: QubitSpecDoc, where = "qubit"): QubitSpec {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error(`${where} must be an object`);
  }
  const value = doc.value ?? 0;
  if (value !== 0 && value !== 1) {
    throw new Error(`${where}.value must be 0 or 1`);
  }
  const notation = doc.notation ?? null;
  if (notation !== null && notation !== "bit" && notation !== "braket") {
    throw new Error(`${where}.notation must be 'bit' or 'braket'`);
  }
  return {
    name: typeof doc.name === "string" ? doc.name : "",
    value,
    editable: doc.editable !== false,
    notation,
  };
}

export function circuitFromDoc(doc: CircuitDoc): { circuit: Circuit; customGates: GateDef[] } {
  if (typeof doc !== "object" || doc === null || Array.isArray(doc)) {
    throw new Error("circuit must be an object");
  }
  const nQubits = intField(doc as Record<string, unknown>, "nQubits", "circuit");
  const nMoments = intField(doc as Record<string, unknown>, "nMoments", "circuit");
  const rawQubits = doc.qubits ?? [];
  if (!Array.isArray(rawQubits)) throw new Error("circuit.qubits must be a list");
  if (rawQubits.length > nQubits) {
    throw new Error(`circuit.qubits has ${rawQubits.length} entries for ${nQubits} qubits`);
  }
  const qubits = rawQubits.map((q, i) => qubitFromDoc(q, `circuit.qubits[${i}]`));
  while (qubits.length < nQubits) qubits.push(defaultQubit());
  const rawPlacements = doc.placements ?? [];
  if (!Array.isArray(rawPlacements)) throw new Error("circuit.placements must be a list");
  const placements = rawPlacements.map((p, i) => placementFromDoc(p, `circuit.placements[${i}]`));
  const rawCustom = doc.customGates ?? [];
  if (!Array.isArray(rawCustom)) throw new Error("circuit.customGates must be a list");
  const customGates = rawCustom.map(gateFromDoc);
  return { circuit: { nQubits, nMoments, placements, qubits }, customGates };
}

export function inputBits(circuit: Circuit): string {
  return circuit.qubits.map((q) => String(q.value)).join("") || "0".repeat(circuit.nQubits);
}
