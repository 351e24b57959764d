import { readFileSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { foldSession, parseNdjson } from "../src/render";
import type { EventRecord } from "../src/types";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function demoRecords(): EventRecord[] {
  return parseNdjson(readFileSync(join(FIXTURES, "demo_events.ndjson"), "utf-8"));
}

function record(seq: number, kind: string, payload: Record<string, unknown> = {}): EventRecord {
  return { seq, session_id: "t", kind, at: seq * 100, payload };
}

describe("foldSession", () => {
  it("folding the demo stream twice yields identical view models", () => {
    const records = demoRecords();
    const first = foldSession(records);
    const second = foldSession(records);
    expect(second).toEqual(first);
    expect(JSON.stringify(second)).toBe(JSON.stringify(first));
  });

  it("demo stream matches the golden view model snapshot", () => {
    const vm = foldSession(demoRecords());
    const goldenPath = join(FIXTURES, "golden_viewmodel.json");
    if (process.env.UPDATE_GOLDEN) {
      writeFileSync(goldenPath, JSON.stringify(vm, null, 2) + "\n");
    }
    const golden = JSON.parse(readFileSync(goldenPath, "utf-8"));
    expect(vm).toEqual(golden);
  });

  it("empty stream renders the placeholder view", () => {
    const vm = foldSession([]);
    expect(vm.activeGroup).toBeNull();
    expect(vm.distribution).toHaveLength(10);
    expect(vm.switchBanner).toBeNull();
    expect(vm.connection).toBe("connecting");
  });

  it("duplicate events are ignored", () => {
    const records = demoRecords();
    const duplicated = [...records];
    duplicated.splice(10, 0, records[9], records[5]); // re-deliver earlier records
    expect(foldSession(duplicated)).toEqual(foldSession(records));
  });

  it("banner is visible iff an unresolved SwitchSuggested exists", () => {
    const base = [
      record(0, "SessionCreated", { language: "en" }),
      record(1, "SwitchSuggested", { group: "cardiovascular", probability: 0.8, active_probability: 0.1 }),
    ];
    expect(foldSession(base).switchBanner?.group).toBe("cardiovascular");

    const resolvedByAccept = [
      ...base,
      record(2, "PathOverridden", { group: "cardiovascular", start: "start_acs", cause: "switch" }),
    ];
    expect(foldSession(resolvedByAccept).switchBanner).toBeNull();

    const resolvedByOverride = [
      ...base,
      record(2, "PathOverridden", { group: "respiratory", start: "start_airway", cause: "override" }),
    ];
    expect(foldSession(resolvedByOverride).switchBanner).toBeNull();

    const reSuggested = [
      ...resolvedByAccept,
      record(3, "SwitchSuggested", { group: "infection", probability: 0.7, active_probability: 0.2 }),
    ];
    expect(foldSession(reSuggested).switchBanner?.group).toBe("infection");
  });

  it("demo stream resolves its suggestion by acceptance", () => {
    const vm = foldSession(demoRecords());
    expect(vm.switchBanner).toBeNull(); // accepted in the demo script
    expect(vm.activeGroup).toBe("cardiovascular");
    expect(vm.closed).toBe(true);
    expect(vm.confirmedActions).toContain("f_assess");
  });

  it("question texts from QuestionAsked land in pending entries", () => {
    const records = [
      record(0, "SessionCreated", { language: "en" }),
      record(1, "RecommendationChanged", {
        recommendation: {
          active_group: "respiratory",
          graph_id: "airway",
          active_path: [],
          actionable: [],
          alternates: [],
          pending: [{ kind: "question", id: "q_airway_clear" }],
          severity_proxies: { max_probability: 0.5, entropy: 1.0 },
          completed: false,
          labels: {},
        },
      }),
      record(2, "QuestionAsked", { question_id: "q_airway_clear", text: "Is the airway clear?" }),
    ];
    const vm = foldSession(records);
    expect(vm.pendingQuestions).toEqual([{ id: "q_airway_clear", text: "Is the airway clear?" }]);
  });

  it("distribution bars track the latest update and sum to ~100%", () => {
    const vm = foldSession(demoRecords());
    const total = vm.distribution.reduce((sum, bar) => sum + bar.percent, 0);
    expect(Math.abs(total - 100)).toBeLessThanOrEqual(5); // integer rounding
    const cardio = vm.distribution.find((b) => b.group === "cardiovascular");
    expect(cardio && cardio.probability).toBeGreaterThan(0.5);
  });
});
