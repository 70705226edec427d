// Simulation worker: one message in, one message out, no shared state.
// The handler is a pure function so tests can drive it without spawning a
// real worker; the onmessage wiring only attaches inside a worker scope.

import { defaultRegistry } from "./gates.js";
import { circuitFromDoc, inputBits as circuitInput } from "./circuit.js";
import { distributionToDict, probabilities, simulate } from "./sim.js";
import type { CircuitDoc } from "./types.js";

export type SimRequest = { seq: number; circuit: CircuitDoc; input?: string };

export type SimReply =
  | { seq: number; ok: true; nQubits: number; input: string; distribution: Record<string, number> }
  | { seq: number; ok: false; error: string };

export function handleSimRequest(request: SimRequest): SimReply {
  const seq = request?.seq ?? -1;
  try {
    const { circuit, customGates } = circuitFromDoc(request.circuit);
    const registry = defaultRegistry().withGates(customGates);
    const input = request.input ?? circuitInput(circuit);
    const state = simulate(circuit, input, registry);
    return {
      seq,
      ok: true,
      nQubits: circuit.nQubits,
      input,
      distribution: distributionToDict(probabilities(state), circuit.nQubits),
    };
  } catch (err) {
    return { seq, ok: false, error: err instanceof Error ? err.message : String(err) };
  }
}

const scope = globalThis as any;
if (typeof scope.postMessage === "function" && typeof scope.document === "undefined") {
  scope.onmessage = (event: MessageEvent<SimRequest>) => {
    scope.postMessage(handleSimRequest(event.data));
  };
}
