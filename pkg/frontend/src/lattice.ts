/**
 * Lattice view model and SVG renderer.
 *
 * The model is a pure fold over the event prefix received so far: replaying
 * the same prefix always yields the same rendered output. Only evaluated and
 * pruned nodes are materialized (the full lattice is exponential). Nodes are
 * layered by attribute-set size; the red dashed line is the satisfiability
 * frontier, blue nodes satisfy the threshold, white ones do not, and the
 * green diamond is the best (cheapest satisfying) node found so far.
 */

import { MeasureLabels, ParsedLine, setKey } from "./events.js";

export type NodeState = "explored" | "satisfying" | "pruned";

export interface LatticeNode {
  key: string;
  set: number[];
  state: NodeState;
  labels?: MeasureLabels;
  pruneReason?: string;
  inBeam: boolean;
}

export interface LatticeModel {
  attributes: string[];
  method: string;
  threshold: number | null;
  nodes: Map<string, LatticeNode>;
  bestKey: string | null;
  currentBeam: string[];
  finished: boolean;
  unreachable: boolean;
  exploredCount: number;
  prunedCount: number;
}

export function emptyModel(): LatticeModel {
  return {
    attributes: [],
    method: "",
    threshold: null,
    nodes: new Map(),
    bestKey: null,
    currentBeam: [],
    finished: false,
    unreachable: false,
    exploredCount: 0,
    prunedCount: 0,
  };
}

export function applyEvent(model: LatticeModel, parsed: ParsedLine): LatticeModel {
  const event = parsed.event;
  switch (event.type) {
    case "start":
      model.attributes = event.attributes;
      model.method = event.method;
      model.threshold = event.config.threshold;
      break;
    case "evaluate": {
      const key = setKey(event.set);
      model.nodes.set(key, {
        key,
        set: event.set,
        state: event.satisfying ? "satisfying" : "explored",
        labels: parsed.labels,
        inBeam: false,
      });
      model.exploredCount += 1;
      break;
    }
    case "prune": {
      const key = setKey(event.set);
      if (!model.nodes.has(key)) {
        model.nodes.set(key, {
          key,
          set: event.set,
          state: "pruned",
          pruneReason: event.reason,
          inBeam: false,
        });
      }
      model.prunedCount += 1;
      break;
    }
    case "beam":
      for (const key of model.currentBeam) {
        const node = model.nodes.get(key);
        if (node) node.inBeam = false;
      }
      model.currentBeam = event.sets.map(setKey);
      for (const key of model.currentBeam) {
        const node = model.nodes.get(key);
        if (node) node.inBeam = true;
      }
      break;
    case "best":
      model.bestKey = setKey(event.set);
      break;
    case "end":
      model.finished = true;
      if (event.result === null) {
        model.unreachable = true;
        model.bestKey = null;
      } else {
        model.bestKey = setKey(event.result);
      }
      break;
  }
  return model;
}

export function buildLattice(lines: ParsedLine[]): LatticeModel {
  const model = emptyModel();
  for (const parsed of lines) {
    applyEvent(model, parsed);
  }
  return model;
}

// --- rendering ----------------------------------------------------------------

const COLORS = {
  explored: "#ffffff",
  satisfying: "#7bafd4",
  best: "#71bc78",
  pruned: "#d9d9d9",
  frontier: "#d62728",
};

const LAYER_WIDTH = 190;
const ROW_HEIGHT = 62;
const MARGIN_X = 70;
const MARGIN_Y = 56;

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function setLabel(node: LatticeNode, attributes: string[]): string {
  if (node.set.length === 0) return "{}";
  return "{" + node.set.map((i) => attributes[i] ?? String(i)).join(",") + "}";
}

interface Placed {
  node: LatticeNode;
  x: number;
  y: number;
}

/** Deterministic layout: columns by set size; unsatisfying rows above the
 * frontier, satisfying below, each sorted by the canonical set key. */
export function layoutNodes(model: LatticeModel): { placed: Placed[]; frontier: [number, number][]; width: number; height: number } {
  const layers = new Map<number, LatticeNode[]>();
  for (const node of model.nodes.values()) {
    const size = node.set.length;
    if (!layers.has(size)) layers.set(size, []);
    layers.get(size)!.push(node);
  }
  const sizes = [...layers.keys()].sort((a, b) => a - b);
  const placed: Placed[] = [];
  const frontier: [number, number][] = [];
  let maxRows = 1;
  sizes.forEach((size, column) => {
    const nodes = layers.get(size)!;
    nodes.sort((a, b) => {
      const aSat = a.state === "satisfying" ? 1 : 0;
      const bSat = b.state === "satisfying" ? 1 : 0;
      if (aSat !== bSat) return aSat - bSat;
      return a.key < b.key ? -1 : a.key > b.key ? 1 : 0;
    });
    const unsat = nodes.filter((n) => n.state !== "satisfying").length;
    const x = MARGIN_X + column * LAYER_WIDTH;
    nodes.forEach((node, row) => {
      placed.push({ node, x, y: MARGIN_Y + row * ROW_HEIGHT });
    });
    frontier.push([x, MARGIN_Y + unsat * ROW_HEIGHT - ROW_HEIGHT / 2]);
    maxRows = Math.max(maxRows, nodes.length);
  });
  return {
    placed,
    frontier,
    width: MARGIN_X * 2 + Math.max(sizes.length - 1, 0) * LAYER_WIDTH + 120,
    height: MARGIN_Y * 2 + maxRows * ROW_HEIGHT,
  };
}

function nodeShape(node: LatticeNode, isBest: boolean, x: number, y: number): string {
  if (node.state === "pruned") {
    const arm = 7;
    return (
      `<path d="M${x - arm} ${y - arm} L${x + arm} ${y + arm} M${x - arm} ${y + arm} ` +
      `L${x + arm} ${y - arm}" stroke="${COLORS.pruned}" stroke-width="3" class="node pruned"/>`
    );
  }
  if (isBest) {
    const r = 12;
    const points = `${x},${y - r} ${x + r},${y} ${x},${y + r} ${x - r},${y}`;
    return `<polygon points="${points}" fill="${COLORS.best}" stroke="#222" class="node best"/>`;
  }
  const fill = node.state === "satisfying" ? COLORS.satisfying : COLORS.explored;
  return `<circle cx="${x}" cy="${y}" r="11" fill="${fill}" stroke="#222" class="node ${node.state}"/>`;
}

export function renderLatticeSvg(model: LatticeModel): string {
  const { placed, frontier, width, height } = layoutNodes(model);
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
      `width="${width}" height="${height}" data-explored="${model.exploredCount}" ` +
      `data-pruned="${model.prunedCount}" data-finished="${model.finished}">`
  );

  const anySatisfying = [...model.nodes.values()].some((n) => n.state === "satisfying");
  if (anySatisfying && frontier.length > 0) {
    const d = frontier.map(([x, y], i) => `${i === 0 ? "M" : "L"}${x} ${y}`).join(" ");
    parts.push(
      `<path d="${d}" fill="none" stroke="${COLORS.frontier}" stroke-width="2.5" ` +
        `stroke-dasharray="8 5" class="frontier"/>`
    );
  }

  for (const { node, x, y } of placed) {
    const isBest = model.bestKey === node.key;
    parts.push(`<g class="lattice-node" data-set="${node.key}" data-state="${node.state}" data-best="${isBest}">`);
    if (node.inBeam && !model.finished) {
      parts.push(`<circle cx="${x}" cy="${y}" r="16" fill="none" stroke="#e8a33d" stroke-width="2" class="beam-ring"/>`);
    }
    parts.push(nodeShape(node, isBest, x, y));
    parts.push(
      `<text x="${x}" y="${y - 18}" text-anchor="middle" font-size="11" class="set-label">` +
        `${escapeXml(setLabel(node, model.attributes))}</text>`
    );
    if (node.labels) {
      parts.push(
        `<text x="${x}" y="${y + 26}" text-anchor="middle" font-size="10" class="measure-label">` +
          `c=${escapeXml(node.labels.cost)} s=${escapeXml(node.labels.sensitivity)} ` +
          `e=${escapeXml(node.labels.efficiency)}</text>`
      );
    } else if (node.pruneReason) {
      parts.push(
        `<text x="${x}" y="${y + 26}" text-anchor="middle" font-size="10" class="prune-label">` +
          `pruned: ${escapeXml(node.pruneReason)}</text>`
      );
    }
    parts.push("</g>");
  }

  parts.push(renderLegend(height));
  parts.push("</svg>");
  return parts.join("");
}

function renderLegend(height: number): string {
  const y = height - 14;
  return (
    `<g class="legend" font-size="10">` +
    `<circle cx="14" cy="${y}" r="6" fill="${COLORS.satisfying}" stroke="#222"/>` +
    `<text x="24" y="${y + 3}">satisfies threshold</text>` +
    `<circle cx="130" cy="${y}" r="6" fill="${COLORS.explored}" stroke="#222"/>` +
    `<text x="140" y="${y + 3}">does not satisfy</text>` +
    `<polygon points="240,${y - 7} 247,${y} 240,${y + 7} 233,${y}" fill="${COLORS.best}" stroke="#222"/>` +
    `<text x="252" y="${y + 3}">best: satisfies at minimum cost</text>` +
    `<path d="M420 ${y} L434 ${y}" stroke="${COLORS.pruned}" stroke-width="3"/>` +
    `<text x="438" y="${y + 3}">pruned</text>` +
    `<path d="M490 ${y} L510 ${y}" stroke="${COLORS.frontier}" stroke-width="2.5" stroke-dasharray="8 5"/>` +
    `<text x="514" y="${y + 3}">satisfiability frontier</text>` +
    `</g>`
  );
}
