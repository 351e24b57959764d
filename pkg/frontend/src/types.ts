// Wire types mirrored from the service (docs/formats.md in the repo root).

export interface EventRecord {
  seq: number;
  session_id: string;
  kind: string;
  at: number;
  payload: Record<string, any>;
}

export interface PendingItem {
  kind: "question" | "vital";
  id: string;
}

export interface Alternate {
  group: string;
  probability: number;
  start: string | null;
  graph_id: string | null;
  preview: string[];
}

export interface Recommendation {
  active_group: string;
  graph_id: string | null;
  active_path: string[];
  actionable: string[];
  alternates: Alternate[];
  pending: PendingItem[];
  severity_proxies: { max_probability: number; entropy: number };
  completed: boolean;
  labels: Record<string, string>;
}

export const GROUPS = [
  "pulmonary",
  "cns",
  "cardiovascular",
  "respiratory",
  "abdominal",
  "psychiatric",
  "metabolic",
  "gynecologic-obstetrical",
  "infection",
  "other-special",
] as const;

export type ConnectionState = "connecting" | "live" | "reconnecting" | "closed";

export interface DistributionBar {
  group: string;
  probability: number;
  percent: number; // rounded for display; bars sum to ~100
}

export interface SwitchBanner {
  group: string;
  probability: number;
  activeProbability: number;
  suggestedAtSeq: number;
}

/**
 * Everything the console renders. A pure fold of the event stream produces
 * it (plus the connection state maintained by the transport); no hidden
 * state survives a reconnect.
 */
export interface ViewModel {
  language: "en" | "de";
  connection: ConnectionState;
  lastSeq: number;
  distribution: DistributionBar[];
  activeGroup: string | null;
  graphId: string | null;
  activePath: string[];
  actionable: string[];
  confirmedActions: string[];
  currentPosition: string | null;
  alternates: Alternate[];
  pendingQuestions: { id: string; text: string }[];
  pendingVitals: string[];
  switchBanner: SwitchBanner | null; // non-null iff an unresolved SwitchSuggested exists
  severity: { maxProbability: number; entropy: number } | null;
  labels: Record<string, string>;
  completed: boolean;
  closed: boolean;
}
