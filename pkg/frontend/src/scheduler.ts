// Routes simulation jobs and rejects stale results. Every submission gets
// a monotonically increasing sequence number; a result only reaches the
// editor if no newer submission happened while it was in flight, so rapid
// edits can never paint an old distribution over a new circuit.
//
// Small circuits run in the local engine (a worker in production); above
// the threshold the job goes to POST /api/simulate, which runs the same
// engine server-side, so both routes return identical numbers.

import type { CircuitDoc } from "./types.js";

export type SimJob = { circuit: CircuitDoc; input: string };

export type SimOutcome = {
  nQubits: number;
  input: string;
  distribution: Record<string, number>;
};

export type Simulate = (job: SimJob) => Promise<SimOutcome>;

export const DEFAULT_CLIENT_THRESHOLD = 14;

export type SchedulerOptions = {
  local: Simulate;
  remote: Simulate;
  threshold?: number;
  onResult: (outcome: SimOutcome) => void;
  onError?: (message: string, retry: () => void) => void;
  onBusy?: (busy: boolean) => void;
};

export class SimulationScheduler {
  private seq = 0;
  private readonly threshold: number;

  constructor(private opts: SchedulerOptions) {
    this.threshold = opts.threshold ?? DEFAULT_CLIENT_THRESHOLD;
  }

  get lastSeq(): number {
    return this.seq;
  }

  submit(job: SimJob): number {
    const seq = ++this.seq;
    this.opts.onBusy?.(true);
    const route = job.circuit.nQubits > this.threshold ? this.opts.remote : this.opts.local;
    route(job).then(
      (outcome) => {
        if (seq !== this.seq) return; // stale: a newer edit superseded this run
        this.opts.onBusy?.(false);
        this.opts.onResult(outcome);
      },
      (err) => {
        if (seq !== this.seq) return;
        this.opts.onBusy?.(false);
        const message = err instanceof Error ? err.message : String(err);
        this.opts.onError?.(message, () => this.submit(job));
      }
    );
    return seq;
  }
}

// Adapts a Worker (anything with postMessage/onmessage) into a Simulate.
// Replies are matched to requests by sequence number, so one worker can
// serve interleaved requests.

type WorkerLike = {
  postMessage(message: unknown): void;
  onmessage: ((event: MessageEvent) => void) | null;
};

export function workerSimulate(worker: WorkerLike): Simulate {
  let nextId = 0;
  const pending = new Map<
    number,
    { resolve: (outcome: SimOutcome) => void; reject: (err: Error) => void }
  >();
  worker.onmessage = (event: MessageEvent) => {
    const reply = event.data as {
      seq: number;
      ok: boolean;
      nQubits?: number;
      input?: string;
      distribution?: Record<string, number>;
      error?: string;
    };
    const entry = pending.get(reply.seq);
    if (!entry) return;
    pending.delete(reply.seq);
    if (reply.ok) {
      entry.resolve({
        nQubits: reply.nQubits!,
        input: reply.input!,
        distribution: reply.distribution!,
      });
    } else {
      entry.reject(new Error(reply.error ?? "simulation failed"));
    }
  };
  return (job) =>
    new Promise((resolve, reject) => {
      const seq = ++nextId;
      pending.set(seq, { resolve, reject });
      worker.postMessage({ seq, circuit: job.circuit, input: job.input });
    });
}
