/**
 * Trace event parsing. Events arrive as raw JSON lines from the service; we
 * keep both the parsed object and, for evaluate events, the exact payload
 * text of the cost / sensitivity / efficiency fields. Rendered labels must
 * echo the payload bytes, never a re-formatted number.
 */

export interface RunConfig {
  method: string;
  threshold: number;
  budget: number;
  paths: number;
  weights: { size: number; instability: number; time: number; epsilon: number };
}

export interface StartEvent {
  type: "start";
  step: number;
  version: string;
  method: string;
  config: RunConfig;
  attributes: string[];
  dataset_digest: string;
}

export interface EvaluateEvent {
  type: "evaluate";
  step: number;
  set: number[];
  cost: number;
  sensitivity: number;
  efficiency: number | "inf";
  satisfying: boolean;
}

export interface PruneEvent {
  type: "prune";
  step: number;
  set: number[];
  reason: string;
}

export interface BeamEvent {
  type: "beam";
  step: number;
  sets: number[][];
}

export interface BestEvent {
  type: "best";
  step: number;
  set: number[];
  cost: number;
}

export interface EndEvent {
  type: "end";
  step: number;
  result: number[] | null;
  explored_count: number;
  pruned_count: number;
  duration_ms: number;
}

export type TraceEvent =
  | StartEvent
  | EvaluateEvent
  | PruneEvent
  | BeamEvent
  | BestEvent
  | EndEvent;

/** Exact payload text of the three measure fields, straight from the line. */
export interface MeasureLabels {
  cost: string;
  sensitivity: string;
  efficiency: string;
}

export interface ParsedLine {
  event: TraceEvent;
  raw: string;
  labels?: MeasureLabels;
}

function rawField(line: string, key: string, nextKey: string): string {
  const start = line.indexOf(`"${key}":`);
  const end = line.indexOf(`,"${nextKey}"`, start);
  if (start < 0 || end < 0) {
    throw new Error(`field ${key} not found in event line`);
  }
  let text = line.slice(start + key.length + 3, end);
  if (text.startsWith('"') && text.endsWith('"')) {
    text = text.slice(1, -1); // "inf" efficiency: the value is the bare token
  }
  return text;
}

export function parseTraceLine(line: string): ParsedLine {
  const event = JSON.parse(line) as TraceEvent;
  if (event.type === "evaluate") {
    return {
      event,
      raw: line,
      labels: {
        cost: rawField(line, "cost", "sensitivity"),
        sensitivity: rawField(line, "sensitivity", "efficiency"),
        efficiency: rawField(line, "efficiency", "satisfying"),
      },
    };
  }
  return { event, raw: line };
}

export function parseTraceLines(lines: string[]): ParsedLine[] {
  return lines.filter((l) => l.trim().length > 0).map(parseTraceLine);
}

export const setKey = (members: number[]): string => members.join(",");
