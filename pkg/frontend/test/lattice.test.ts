import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseTraceLines } from "../src/events.js";
import { applyEvent, buildLattice, emptyModel, renderLatticeSvg } from "../src/lattice.js";

const fixture = readFileSync(new URL("./fixtures/table1_fpselect.trace", import.meta.url), "utf-8");
const lines = fixture.split("\n").filter((l) => l.length > 0);

/** Independent payload extraction: plain string splitting on the raw line. */
function expectedLabels(line: string): { cost: string; sensitivity: string; efficiency: string } {
  const cost = line.split('"cost":')[1].split(',"sensitivity"')[0];
  const sensitivity = line.split('"sensitivity":')[1].split(',"efficiency"')[0];
  let efficiency = line.split('"efficiency":')[1].split(',"satisfying"')[0];
  if (efficiency.startsWith('"')) efficiency = efficiency.slice(1, -1);
  return { cost, sensitivity, efficiency };
}

describe("lattice view of the bundled toy-run trace", () => {
  it("marks {Language, Screen} as best after a full-speed replay", () => {
    const model = buildLattice(parseTraceLines(lines));
    expect(model.finished).toBe(true);
    expect(model.bestKey).toBe("1,3");
    const best = model.nodes.get("1,3")!;
    expect(best.set.map((i) => model.attributes[i])).toEqual(["Language", "Screen"]);
    expect(best.state).toBe("satisfying");

    const svg = renderLatticeSvg(model);
    expect(svg).toContain('data-set="1,3" data-state="satisfying" data-best="true"');
    expect(svg).toContain("{Language,Screen}");
    expect(svg).toContain("<polygon"); // the best node renders as a diamond
  });

  it("renders the frontier legend", () => {
    const svg = renderLatticeSvg(buildLattice(parseTraceLines(lines)));
    expect(svg).toContain("satisfiability frontier");
    expect(svg).toContain("satisfies threshold");
    expect(svg).toContain("does not satisfy");
    expect(svg).toContain("best: satisfies at minimum cost");
    expect(svg).toContain("pruned");
    expect(svg).toContain('class="frontier"');
  });

  it("echoes every evaluate payload byte-for-byte in the node labels", () => {
    const svg = renderLatticeSvg(buildLattice(parseTraceLines(lines)));
    const evaluateLines = lines.filter((l) => l.includes('"type":"evaluate"'));
    expect(evaluateLines.length).toBe(8);
    for (const line of evaluateLines) {
      const { cost, sensitivity, efficiency } = expectedLabels(line);
      expect(svg).toContain(`c=${cost} s=${sensitivity} e=${efficiency}`);
    }
  });

  it("is a pure function of the event prefix", () => {
    const parsed = parseTraceLines(lines);
    for (const cut of [1, 3, parsed.length - 1, parsed.length]) {
      const once = renderLatticeSvg(buildLattice(parsed.slice(0, cut)));
      const twice = renderLatticeSvg(buildLattice(parsed.slice(0, cut)));
      expect(twice).toBe(once);
    }
  });

  it("incremental updates equal the batch build", () => {
    const parsed = parseTraceLines(lines);
    const incremental = emptyModel();
    for (const event of parsed) applyEvent(incremental, event);
    expect(renderLatticeSvg(incremental)).toBe(renderLatticeSvg(buildLattice(parsed)));
  });

  it("shows pruned nodes with their reason and counts everything", () => {
    const model = buildLattice(parseTraceLines(lines));
    expect(model.exploredCount).toBe(8);
    expect(model.prunedCount).toBe(2);
    const svg = renderLatticeSvg(model);
    expect(svg).toContain("pruned: cost_bound");
    expect(svg).toContain("pruned: superset_of_satisfying");
  });

  it("handles an unreachable-threshold trace without a best marker", () => {
    const parsed = parseTraceLines(lines).map((p) => p);
    const model = emptyModel();
    for (const event of parsed) {
      if (event.event.type === "end") {
        applyEvent(model, {
          ...event,
          event: { ...event.event, result: null },
        });
      } else if (event.event.type !== "best") {
        applyEvent(model, event);
      }
    }
    expect(model.unreachable).toBe(true);
    expect(model.bestKey).toBeNull();
    expect(renderLatticeSvg(model)).not.toContain('data-best="true"');
  });
});
