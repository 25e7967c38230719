/** Task bar: six toggles, colored by their frame color while active.

Optimization is always on, mirroring the engine's auto-inclusion. Each
button's tooltip is the task description, word for word.
*/

import type { Controller } from "./controller.js";
import { TASK_DESCRIPTIONS, TASK_ORDER, type TaskId } from "./state.js";

const TASK_LABELS: Record<TaskId, string> = {
  optimization: "Optimization",
  fitting: "Fitting",
  uncertainty: "Uncertainty",
  outliers: "Outliers",
  sensitivity: "Sensitivity",
  partitioning: "Partitioning",
};

export function renderTaskbar(c: Controller): void {
  const root = c.els.taskbar;
  root.textContent = "";
  for (const task of TASK_ORDER) {
    const button = document.createElement("button");
    button.className = "task-button";
    button.dataset.task = task;
    button.textContent = TASK_LABELS[task];
    button.title = TASK_DESCRIPTIONS[task];
    if (task === "optimization") button.classList.add("always-on");
    if (c.state.activeTasks.includes(task)) {
      button.classList.add("active");
      const color = c.state.frameColors[task];
      if (color) button.style.background = color;
    }
    button.addEventListener("click", () => void c.toggleTask(task));
    button.addEventListener("mouseenter", () => {
      c.state.hoveredTask = task;
      button.classList.add("hovered");
    });
    button.addEventListener("mouseleave", () => {
      c.state.hoveredTask = null;
      button.classList.remove("hovered");
    });
    root.appendChild(button);
  }
}
