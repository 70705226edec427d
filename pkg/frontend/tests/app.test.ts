// The task list must be lazy: rendering N tasks costs zero simulations,
// opening one costs exactly one.

import { describe, expect, it } from "vitest";
import { renderTaskList } from "../src/app.js";
import { Editor } from "../src/editor.js";
import type { ExerciseDoc, TaskSummary } from "../src/types.js";
import { BASE_EXERCISE, countingLocal, failingSimulate, flush } from "./helpers.js";

function setup(overrides: { getTask?: (id: string) => Promise<ExerciseDoc> } = {}) {
  const tasks: TaskSummary[] = Array.from({ length: 10 }, (_, i) => ({
    taskId: `task-${i}`,
    header: `Task ${i}`,
  }));
  const local = countingLocal();
  let editorsMade = 0;
  const api = {
    listTasks: async () => tasks,
    getTask: overrides.getTask ?? (async () => ({ ...BASE_EXERCISE })),
  };
  const makeEditor = (taskId: string, exercise: ExerciseDoc, container: HTMLElement) => {
    editorsMade += 1;
    return new Editor({
      mount: container,
      taskId,
      exercise,
      local,
      remote: failingSimulate(),
      submit: async () => {
        throw new Error("unused");
      },
    });
  };
  const root = document.createElement("div");
  document.body.appendChild(root);
  return { root, api, makeEditor, local, editors: () => editorsMade };
}

describe("task list", () => {
  it("renders every task as a placeholder with zero simulations", async () => {
    const s = setup();
    await renderTaskList(s.root, { api: s.api, makeEditor: s.makeEditor });
    await flush();
    expect(s.root.querySelectorAll(".qg-task")).toHaveLength(10);
    expect(s.root.querySelectorAll(".qg-placeholder")).toHaveLength(10);
    expect(s.root.querySelector(".qg-editor")).toBeNull();
    expect(s.local.calls).toBe(0);
    expect(s.editors()).toBe(0);
  });

  it("opens one editor on click and simulates once", async () => {
    const s = setup();
    await renderTaskList(s.root, { api: s.api, makeEditor: s.makeEditor });
    (s.root.querySelectorAll(".qg-task-open")[3] as HTMLElement).click();
    await flush();
    expect(s.editors()).toBe(1);
    expect(s.local.calls).toBe(1);
    const section = s.root.querySelectorAll(".qg-task")[3];
    expect(section.querySelector(".qg-editor")).not.toBeNull();
    expect(s.root.querySelectorAll(".qg-placeholder")).toHaveLength(9);
  });

  it("ignores a second click on the same task", async () => {
    const s = setup();
    await renderTaskList(s.root, { api: s.api, makeEditor: s.makeEditor });
    const open = s.root.querySelector(".qg-task-open") as HTMLElement;
    open.click();
    await flush();
    open.click();
    await flush();
    expect(s.editors()).toBe(1);
    expect(s.local.calls).toBe(1);
  });

  it("shows an inline error when a task won't load, then allows a retry", async () => {
    let fail = true;
    const s = setup({
      getTask: async () => {
        if (fail) throw new Error("HTTP 404: no such task");
        return { ...BASE_EXERCISE };
      },
    });
    await renderTaskList(s.root, { api: s.api, makeEditor: s.makeEditor });
    const open = s.root.querySelector(".qg-task-open") as HTMLElement;
    open.click();
    await flush();
    expect(s.root.querySelector(".qg-task-slot .qg-error")!.textContent).toContain("no such task");
    expect(s.editors()).toBe(0);
    fail = false;
    open.click();
    await flush();
    expect(s.editors()).toBe(1);
    expect(s.root.querySelector(".qg-editor")).not.toBeNull();
  });

  it("reports a list failure on the root", async () => {
    const s = setup();
    const api = {
      ...s.api,
      listTasks: async (): Promise<TaskSummary[]> => {
        throw new Error("service down");
      },
    };
    await renderTaskList(s.root, { api, makeEditor: s.makeEditor });
    expect(s.root.querySelector(".qg-error")!.textContent).toContain("service down");
  });
});
