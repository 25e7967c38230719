/** Guidance panel: per task, the recommended options, the explanation,
and the interaction hints, stacked top to bottom. */

import type { Controller } from "./controller.js";

export function renderGuidance(c: Controller): void {
  const root = c.els.guidance;
  root.textContent = "";
  const rec = c.state.recommendation;
  if (!rec || rec.guidance.length === 0) {
    const prompt = document.createElement("p");
    prompt.className = "placeholder";
    prompt.textContent = "Pick tasks to get guidance.";
    root.appendChild(prompt);
    return;
  }

  for (const block of rec.guidance) {
    const section = document.createElement("section");
    section.className = "guidance-block";
    section.dataset.task = block.task;

    const head = document.createElement("h4");
    const dot = document.createElement("span");
    dot.className = "task-dot";
    dot.style.background = c.state.frameColors[block.task] ?? "#999";
    head.appendChild(dot);
    head.appendChild(document.createTextNode(` ${block.strategy} (${block.group})`));
    section.appendChild(head);

    const meta = document.createElement("p");
    meta.className = "guidance-meta";
    meta.textContent = `${block.mdmv}; complex objects: ${block.complex}`;
    section.appendChild(meta);

    const options = document.createElement("ul");
    options.className = "guidance-options";
    for (const option of block.options) {
      const li = document.createElement("li");
      li.textContent = option;
      options.appendChild(li);
    }
    section.appendChild(options);

    const explanation = document.createElement("p");
    explanation.className = "guidance-explanation";
    explanation.textContent = block.explanation;
    section.appendChild(explanation);

    const hints = document.createElement("ul");
    hints.className = "guidance-hints";
    for (const hint of block.hints) {
      const li = document.createElement("li");
      li.textContent = hint;
      hints.appendChild(li);
    }
    section.appendChild(hints);

    root.appendChild(section);
  }
}
