// Pure fold of the session event stream into a ViewModel.
//
// Determinism contract: the same records in the same order produce a
// structurally identical ViewModel, so replaying a stream (including after
// a reconnect) reconstructs the exact same screen. Records are
// de-duplicated by sequence number; the sequence contract makes
// out-of-order delivery impossible, so a record with seq <= lastSeq is a
// duplicate and is ignored.

import type { EventRecord, Recommendation, SwitchBanner, ViewModel } from "./types";
import { GROUPS } from "./types";

export function emptyViewModel(): ViewModel {
  return {
    language: "en",
    connection: "connecting",
    lastSeq: -1,
    distribution: GROUPS.map((group) => ({ group, probability: 0, percent: 0 })),
    activeGroup: null,
    graphId: null,
    activePath: [],
    actionable: [],
    confirmedActions: [],
    currentPosition: null,
    alternates: [],
    pendingQuestions: [],
    pendingVitals: [],
    switchBanner: null,
    severity: null,
    labels: {},
    completed: false,
    closed: false,
  };
}

function applyRecommendation(vm: ViewModel, rec: Recommendation, questionTexts: Map<string, string>): void {
  vm.activeGroup = rec.active_group;
  vm.graphId = rec.graph_id;
  vm.activePath = [...rec.active_path];
  vm.actionable = [...rec.actionable];
  vm.alternates = rec.alternates.map((a) => ({ ...a, preview: [...a.preview] }));
  vm.pendingQuestions = rec.pending
    .filter((p) => p.kind === "question")
    .map((p) => ({ id: p.id, text: questionTexts.get(p.id) ?? p.id }));
  vm.pendingVitals = rec.pending.filter((p) => p.kind === "vital").map((p) => p.id);
  vm.severity = {
    maxProbability: rec.severity_proxies.max_probability,
    entropy: rec.severity_proxies.entropy,
  };
  vm.completed = rec.completed;
  vm.labels = { ...vm.labels, ...rec.labels };
}

export function applyEvent(vm: ViewModel, record: EventRecord, questionTexts: Map<string, string>): void {
  if (record.seq <= vm.lastSeq) {
    return; // duplicate delivery
  }
  vm.lastSeq = record.seq;
  const payload = record.payload;

  switch (record.kind) {
    case "SessionCreated":
      vm.language = payload.language === "de" ? "de" : "en";
      break;
    case "DistributionUpdated": {
      const probabilities: number[] = payload.probabilities ?? [];
      vm.distribution = GROUPS.map((group, i) => ({
        group,
        probability: probabilities[i] ?? 0,
        percent: Math.round((probabilities[i] ?? 0) * 100),
      }));
      break;
    }
    case "RecommendationChanged":
      applyRecommendation(vm, payload.recommendation as Recommendation, questionTexts);
      break;
    case "QuestionAsked":
      questionTexts.set(payload.question_id, payload.text ?? payload.question_id);
      vm.pendingQuestions = vm.pendingQuestions.map((q) =>
        q.id === payload.question_id ? { id: q.id, text: questionTexts.get(q.id) ?? q.id } : q
      );
      break;
    case "QuestionAnswered":
      break; // the following RecommendationChanged carries the new pending set
    case "ActionConfirmed":
      vm.confirmedActions = [...vm.confirmedActions, payload.node_id];
      vm.currentPosition = payload.node_id;
      break;
    case "SwitchSuggested": {
      const banner: SwitchBanner = {
        group: payload.group,
        probability: payload.probability,
        activeProbability: payload.active_probability,
        suggestedAtSeq: record.seq,
      };
      vm.switchBanner = banner;
      break;
    }
    case "PathOverridden":
      // resolves any open suggestion, whether accepted or manually overridden
      vm.switchBanner = null;
      vm.activeGroup = payload.group;
      vm.currentPosition = payload.start ?? null;
      break;
    case "SessionClosed":
      vm.closed = true;
      vm.connection = "closed";
      break;
    default:
      break; // unknown kinds are ignored, forward compatible
  }
}

/** Fold a whole stream; same events in, identical ViewModel out. */
export function foldSession(records: EventRecord[]): ViewModel {
  const vm = emptyViewModel();
  const questionTexts = new Map<string, string>();
  for (const record of records) {
    applyEvent(vm, record, questionTexts);
  }
  if (!vm.closed && records.length > 0) {
    vm.connection = "live";
  }
  return vm;
}

export function parseNdjson(text: string): EventRecord[] {
  return text
    .split("\n")
    .map((line) => line.trim())
    .filter((line) => line.length > 0)
    .map((line) => JSON.parse(line) as EventRecord);
}
