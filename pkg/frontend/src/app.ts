/**
 * Workbench page wiring: dataset picker, run console, run list, live/replayed
 * lattice view, attribute-set properties panel, and the method comparison.
 */

import { ApiClient, ApiError, EventPoller, RunHandle } from "./api.js";
import { buildComparison, renderComparisonHtml } from "./compare.js";
import { ParsedLine, parseTraceLines, RunConfig } from "./events.js";
import { applyEvent, emptyModel, LatticeModel, renderLatticeSvg } from "./lattice.js";
import { renderPropertiesHtml } from "./properties.js";
import { ReplayController } from "./replay.js";

const api = new ApiClient("");

const el = <T extends HTMLElement>(id: string): T => {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
};

interface ConsoleState {
  dataset: string | null;
  attributes: string[];
  model: LatticeModel;
  poller: EventPoller | null;
  replay: ReplayController | null;
}

const state: ConsoleState = {
  dataset: null,
  attributes: [],
  model: emptyModel(),
  poller: null,
  replay: null,
};

function readConfig(): Partial<RunConfig> | null {
  const threshold = Number(el<HTMLInputElement>("threshold").value);
  const budget = Number(el<HTMLInputElement>("budget").value);
  const paths = Number(el<HTMLInputElement>("paths").value);
  const problems: string[] = [];
  if (!(threshold > 0 && threshold <= 1)) problems.push("threshold must be in (0, 1]");
  if (!(Number.isInteger(budget) && budget >= 1)) problems.push("budget must be an integer >= 1");
  if (!(Number.isInteger(paths) && paths >= 1)) problems.push("paths must be an integer >= 1");
  const error = el("form-error");
  error.textContent = problems.join("; ");
  if (problems.length > 0) return null;
  return {
    method: el<HTMLSelectElement>("method").value,
    threshold,
    budget,
    paths,
    weights: {
      size: Number(el<HTMLInputElement>("w-size").value),
      instability: Number(el<HTMLInputElement>("w-instability").value),
      time: Number(el<HTMLInputElement>("w-time").value),
      epsilon: Number(el<HTMLInputElement>("w-epsilon").value),
    },
  };
}

function redraw(): void {
  el("lattice").innerHTML = renderLatticeSvg(state.model);
  const status = state.model.finished
    ? state.model.unreachable
      ? "finished: threshold unreachable"
      : "finished"
    : "exploring...";
  el("lattice-status").textContent =
    `${state.model.method || ""} ${status} | evaluated ${state.model.exploredCount}` +
    ` | pruned ${state.model.prunedCount}`;
  for (const nodeEl of el("lattice").querySelectorAll<SVGGElement>("g.lattice-node")) {
    nodeEl.addEventListener("click", () => {
      const key = nodeEl.dataset.set ?? "";
      const indices = key === "" ? [] : key.split(",").map(Number);
      void showProperties(indices.map((i) => state.model.attributes[i] ?? String(i)));
    });
  }
}

function applyLines(lines: ParsedLine[]): void {
  for (const line of lines) {
    applyEvent(state.model, line);
    if (line.event.type === "start") {
      state.attributes = line.event.attributes;
    }
  }
  redraw();
}

function resetView(): void {
  state.poller?.stop();
  state.replay?.pause();
  state.poller = null;
  state.replay = null;
  state.model = emptyModel();
  el("connection-banner").hidden = true;
  redraw();
}

function watchRun(runId: string): void {
  resetView();
  const banner = el("connection-banner");
  state.poller = new EventPoller(
    api,
    runId,
    (lines, runState) => {
      banner.hidden = true;
      applyLines(parseTraceLines(lines));
      if (runState !== "running") void refreshRuns();
    },
    () => {
      banner.hidden = false; // cursor is kept; polling resumes automatically
    }
  );
  state.poller.start();
}

async function refreshRuns(): Promise<void> {
  const { runs } = await api.runs();
  const list = el("run-list");
  list.innerHTML = "";
  for (const run of runs) {
    const item = document.createElement("li");
    const button = document.createElement("button");
    button.textContent = `${run.run_id} [${run.state}] ${run.config?.method ?? ""}`;
    button.addEventListener("click", () => watchRun(run.run_id));
    item.appendChild(button);
    list.appendChild(item);
  }
}

async function refreshDatasets(): Promise<void> {
  const { datasets } = await api.datasets();
  const select = el<HTMLSelectElement>("dataset");
  select.innerHTML = "";
  for (const entry of datasets) {
    const option = document.createElement("option");
    option.value = entry.id;
    option.textContent = entry.id;
    select.appendChild(option);
  }
  state.dataset = datasets.length > 0 ? datasets[0].id : null;
  el<HTMLButtonElement>("start-run").disabled = state.dataset === null;
  el<HTMLButtonElement>("run-compare").disabled = state.dataset === null;
  select.addEventListener("change", () => {
    state.dataset = select.value || null;
  });
}

async function showProperties(names: string[]): Promise<void> {
  if (!state.dataset) return;
  const config = readConfig();
  if (!config) return;
  const panel = el("properties");
  try {
    const props = await api.evaluate(state.dataset, names, config);
    panel.innerHTML = renderPropertiesHtml(props);
  } catch (error) {
    panel.innerHTML = `<p class="error">${(error as ApiError).message}</p>`;
  }
}

function wireRunConsole(): void {
  el<HTMLButtonElement>("start-run").addEventListener("click", async () => {
    const config = readConfig();
    if (!config || !state.dataset) return;
    try {
      const handle: RunHandle = await api.startRun(state.dataset, config);
      await refreshRuns();
      watchRun(handle.run_id);
    } catch (error) {
      el("form-error").textContent = (error as ApiError).message;
    }
  });

  el<HTMLButtonElement>("evaluate-manual").addEventListener("click", () => {
    const names = el<HTMLInputElement>("manual-attributes")
      .value.split(",")
      .map((n) => n.trim())
      .filter((n) => n.length > 0);
    void showProperties(names);
  });

  el<HTMLButtonElement>("run-compare").addEventListener("click", async () => {
    const config = readConfig();
    if (!config || !state.dataset) return;
    const target = el("comparison");
    target.innerHTML = "<p>comparing...</p>";
    try {
      const { rows } = await api.compare(state.dataset, config);
      target.innerHTML = renderComparisonHtml(buildComparison(rows));
    } catch (error) {
      target.innerHTML = `<p class="error">${(error as ApiError).message}</p>`;
    }
  });
}

function wireReplay(): void {
  const fileInput = el<HTMLInputElement>("trace-file");
  el<HTMLButtonElement>("load-replay").addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    const text = await file.text();
    resetView();
    const parsed = parseTraceLines(text.split("\n"));
    state.replay = new ReplayController(parsed, (batch) => applyLines(batch));
    el("replay-controls").hidden = false;
    state.replay.finish(); // full speed by default; controls allow re-walking
  });
  el<HTMLButtonElement>("replay-restart").addEventListener("click", () => {
    if (!state.replay) return;
    const replay = state.replay;
    state.model = emptyModel();
    replay.reset();
    redraw();
    replay.play(Number(el<HTMLInputElement>("replay-speed").value) || 4);
  });
  el<HTMLButtonElement>("replay-pause").addEventListener("click", () => state.replay?.pause());
  el<HTMLButtonElement>("replay-step").addEventListener("click", () => state.replay?.step());
  el<HTMLInputElement>("replay-speed").addEventListener("change", (event) => {
    state.replay?.setSpeed(Number((event.target as HTMLInputElement).value) || 4);
  });
  el<HTMLButtonElement>("upload-replay").addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      const handle = await api.uploadReplay(
        file,
        Number(el<HTMLInputElement>("upload-pacing").value) || 0,
        el<HTMLInputElement>("upload-detached").checked
      );
      await refreshRuns();
      watchRun(handle.run_id);
    } catch (error) {
      el("form-error").textContent = (error as ApiError).message;
    }
  });
}

async function init(): Promise<void> {
  try {
    await api.health();
    el("health").textContent = "service: ok";
  } catch {
    el("health").textContent = "service: unreachable";
  }
  await refreshDatasets();
  await refreshRuns();
  wireRunConsole();
  wireReplay();
  redraw();
}

document.addEventListener("DOMContentLoaded", () => {
  void init();
});
