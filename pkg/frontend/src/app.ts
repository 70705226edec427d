// Task list page. Each task renders as a cheap placeholder; the editor,
// its worker, and the first simulation are only created when the student
// clicks the task, so a page of N tasks costs zero simulations up front.

import { ApiClient } from "./api.js";
import { Editor } from "./editor.js";
import { workerSimulate, type Simulate } from "./scheduler.js";
import type { ExerciseDoc } from "./types.js";

export type MakeEditor = (taskId: string, exercise: ExerciseDoc, container: HTMLElement) => unknown;

export type AppDeps = {
  api: Pick<ApiClient, "listTasks" | "getTask">;
  makeEditor: MakeEditor;
};

export async function renderTaskList(root: HTMLElement, deps: AppDeps): Promise<void> {
  let tasks;
  try {
    tasks = await deps.api.listTasks();
  } catch (err) {
    root.innerHTML = `<div class="qg-error">could not load tasks: ${String(
      err instanceof Error ? err.message : err
    )}</div>`;
    return;
  }
  root.innerHTML = tasks
    .map(
      (task) =>
        `<section class="qg-task" data-task-id="${task.taskId}">` +
        `<button class="qg-task-open">${escapeHtml(task.header)}</button>` +
        `<div class="qg-task-slot"><span class="qg-placeholder">open to simulate</span></div>` +
        `</section>`
    )
    .join("");
  const opened = new Set<string>();
  root.addEventListener("click", (event) => {
    const button = (event.target as HTMLElement).closest?.(".qg-task-open");
    if (!button) return;
    const section = button.closest(".qg-task") as HTMLElement;
    const taskId = section.dataset.taskId!;
    if (opened.has(taskId)) return;
    opened.add(taskId);
    const slot = section.querySelector(".qg-task-slot") as HTMLElement;
    void deps.api
      .getTask(taskId)
      .then((exercise) => {
        deps.makeEditor(taskId, exercise, slot);
      })
      .catch((err) => {
        opened.delete(taskId);
        slot.innerHTML = `<div class="qg-error">could not load task: ${escapeHtml(
          err instanceof Error ? err.message : String(err)
        )}</div>`;
      });
  });
}

// Production wiring: one worker per editor, remote route through the API.
export function initApp(root: HTMLElement, base = "", token: string | null = null): Promise<void> {
  const api = new ApiClient(base, undefined, token);
  const makeEditor: MakeEditor = (taskId, exercise, container) => {
    const worker = new Worker(new URL("./worker.js", import.meta.url), { type: "module" });
    const local: Simulate = workerSimulate(worker);
    const remote: Simulate = async (job) => {
      const response = await api.simulate(job.circuit, job.input);
      return { nQubits: response.nQubits, input: response.input, distribution: response.distribution ?? {} };
    };
    return new Editor({
      mount: container,
      taskId,
      exercise,
      local,
      remote,
      submit: (id, circuit) => api.submitAttempt(id, circuit),
    });
  };
  return renderTaskList(root, { api, makeEditor });
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

// auto-boot when the host page provides the mount point
const mount = typeof document !== "undefined" ? document.getElementById("qugrid-app") : null;
if (mount) {
  const token = new URLSearchParams(location.search).get("token");
  void initApp(mount, "", token);
}
