/**
 * Typed client for the workbench HTTP API plus the cursor polling loop.
 * The fetch implementation is injectable so tests can drive the poller
 * deterministically.
 */

import { RunConfig } from "./events.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface RunHandle {
  run_id: string;
  state: "running" | "finished" | "failed";
  config: RunConfig;
  event_count: number;
  error: string | null;
}

export interface EventsPage {
  events: string[];
  cursor: number;
  state: string;
}

export interface DatasetEntry {
  id: string;
}

export interface DatasetStats {
  n_attributes: number;
  n_browsers: number;
  n_records: number;
  distinct_full_fingerprints: number;
  unicity_rate: number;
  attributes: string[];
  digest: string;
}

export interface EvaluationView {
  set: string[];
  indices: number[];
  cost: number;
  sensitivity: number;
  efficiency: number | "inf";
  satisfying: boolean;
}

export interface PropertiesView {
  evaluation: EvaluationView;
  entropy_bits: number;
  unicity: number;
  stability: number;
  sample: { values: string[]; count: number }[];
}

export interface CompareRow {
  method: string;
  status: "ok" | "unreachable" | "error";
  set?: string[];
  indices?: number[];
  cost?: number;
  sensitivity?: number;
  entropy_bits?: number;
  unicity?: number;
  stability?: number;
  explored_count?: number;
  full_set_sensitivity?: number;
  error?: string;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function unwrap<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let detail = `HTTP ${response.status}`;
    try {
      const body = await response.json();
      if (body && typeof body.detail === "string") detail = body.detail;
      else detail = JSON.stringify(body);
    } catch {
      // keep the bare status
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (...args) => fetch(...args)
  ) {}

  private get(path: string): Promise<Response> {
    return this.fetchFn(this.baseUrl + path);
  }

  private post(path: string, body: unknown): Promise<Response> {
    return this.fetchFn(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  health(): Promise<{ status: string }> {
    return this.get("/api/health").then((r) => unwrap(r));
  }

  datasets(): Promise<{ datasets: DatasetEntry[] }> {
    return this.get("/api/datasets").then((r) => unwrap(r));
  }

  datasetStats(id: string): Promise<DatasetStats> {
    return this.get(`/api/datasets/${encodeURIComponent(id)}/stats`).then((r) => unwrap(r));
  }

  startRun(dataset: string, config: Partial<RunConfig>): Promise<RunHandle> {
    return this.post("/api/runs", { dataset, config }).then((r) => unwrap(r));
  }

  runs(): Promise<{ runs: RunHandle[] }> {
    return this.get("/api/runs").then((r) => unwrap(r));
  }

  runHandle(runId: string): Promise<RunHandle> {
    return this.get(`/api/runs/${encodeURIComponent(runId)}`).then((r) => unwrap(r));
  }

  events(runId: string, cursor: number): Promise<EventsPage> {
    return this.get(
      `/api/runs/${encodeURIComponent(runId)}/events?cursor=${cursor}`
    ).then((r) => unwrap(r));
  }

  evaluate(dataset: string, attributes: string[], config: Partial<RunConfig>): Promise<PropertiesView> {
    return this.post("/api/evaluate", { dataset, attributes, config }).then((r) => unwrap(r));
  }

  compare(dataset: string, config: Partial<RunConfig>): Promise<{ rows: CompareRow[] }> {
    return this.post("/api/compare", { dataset, config }).then((r) => unwrap(r));
  }

  uploadReplay(content: Blob | string, pacing = 0, detached = false): Promise<RunHandle> {
    const form = new FormData();
    const blob = typeof content === "string" ? new Blob([content]) : content;
    form.append("trace", blob, "upload.trace");
    form.append("pacing", String(pacing));
    form.append("detached", String(detached));
    return this.fetchFn(this.baseUrl + "/api/replays", { method: "POST", body: form }).then(
      (r) => unwrap<RunHandle>(r)
    );
  }
}

/**
 * Cursor polling loop. Repeated polls lose nothing and duplicate nothing;
 * on a connection error the cursor is kept, so the stream resumes exactly
 * where it stopped once polling succeeds again.
 */
export class EventPoller {
  cursor = 0;
  state = "running";
  stopped = false;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private client: ApiClient,
    private runId: string,
    private onBatch: (lines: string[], state: string) => void,
    private onError: (error: Error) => void = () => undefined,
    private intervalMs = 400
  ) {}

  /** One poll round; returns true while the run is still producing. */
  async poll(): Promise<boolean> {
    let page: EventsPage;
    try {
      page = await this.client.events(this.runId, this.cursor);
    } catch (error) {
      this.onError(error as Error);
      return !this.stopped;
    }
    this.cursor = page.cursor;
    this.state = page.state;
    if (page.events.length > 0 || page.state !== "running") {
      this.onBatch(page.events, page.state);
    }
    return page.state === "running" && !this.stopped;
  }

  start(): void {
    this.stopped = false;
    const loop = async () => {
      const more = await this.poll();
      if (more && !this.stopped) {
        this.timer = setTimeout(loop, this.intervalMs);
      }
    };
    void loop();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }
}
