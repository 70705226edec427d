// Thin client for the service's JSON endpoints. The fetch function is
// injectable so tests can stub the network without a server.

import type {
  AttemptResponse,
  CircuitDoc,
  ExerciseDoc,
  SimResponse,
  TaskStatsResponse,
  TaskSummary,
} from "./types.js";

export class ApiError extends Error {
  status: number;
  detail: unknown;

  constructor(status: number, detail: unknown) {
    super(`HTTP ${status}: ${typeof detail === "string" ? detail : JSON.stringify(detail)}`);
    this.status = status;
    this.detail = detail;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base = "",
    private fetchFn: FetchLike = (...args) => fetch(...args),
    public token: string | null = null
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await this.fetchFn(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    let payload: unknown = null;
    try {
      payload = await response.json();
    } catch {
      payload = null;
    }
    if (!response.ok) {
      const detail =
        payload && typeof payload === "object" && "detail" in payload
          ? (payload as { detail: unknown }).detail
          : payload;
      throw new ApiError(response.status, detail);
    }
    return payload as T;
  }

  async listTasks(): Promise<TaskSummary[]> {
    const data = await this.request<{ tasks: TaskSummary[] }>("GET", "/api/tasks");
    return data.tasks;
  }

  async getTask(taskId: string): Promise<ExerciseDoc> {
    const data = await this.request<{ taskId: string; exercise: ExerciseDoc }>(
      "GET",
      `/api/tasks/${encodeURIComponent(taskId)}`
    );
    return data.exercise;
  }

  simulate(circuit: CircuitDoc, input?: string): Promise<SimResponse> {
    const body: Record<string, unknown> = { circuit, options: { return: "distribution" } };
    if (input !== undefined) body.input = input;
    return this.request<SimResponse>("POST", "/api/simulate", body);
  }

  submitAttempt(taskId: string, circuit: CircuitDoc): Promise<AttemptResponse> {
    return this.request<AttemptResponse>(
      "POST",
      `/api/tasks/${encodeURIComponent(taskId)}/attempts`,
      { circuit }
    );
  }

  stats(taskId: string): Promise<TaskStatsResponse> {
    return this.request<TaskStatsResponse>(
      "GET",
      `/api/tasks/${encodeURIComponent(taskId)}/stats`
    );
  }
}
