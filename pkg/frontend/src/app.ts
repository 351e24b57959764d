// Browser entry: wires the service client to the pure fold and the DOM.
//
// State = (event history, in-flight optimistic recommendation, dismissed
// banner seq, language override). Everything on screen derives from that;
// a reload or reconnect rebuilds the identical view from the stream.

import { CommandError, ServiceClient } from "./api";
import { emptyViewModel, foldSession } from "./render";
import { strings, type Language } from "./strings";
import type { ConnectionState, EventRecord, Recommendation, ViewModel } from "./types";

interface AppState {
  client: ServiceClient | null;
  sessionId: string | null;
  records: EventRecord[];
  connection: ConnectionState;
  optimistic: { recommendation: Recommendation; atSeq: number } | null;
  dismissedBannerSeq: number;
  languageOverride: Language | null;
  error: string | null;
  stopStream: (() => void) | null;
}

const state: AppState = {
  client: null,
  sessionId: null,
  records: [],
  connection: "connecting",
  optimistic: null,
  dismissedBannerSeq: -1,
  languageOverride: null,
  error: null,
  stopStream: null,
};

function currentViewModel(): ViewModel {
  const vm = state.records.length ? foldSession(state.records) : emptyViewModel();
  vm.connection = state.connection;
  if (state.languageOverride) {
    vm.language = state.languageOverride;
  }
  if (state.optimistic && state.optimistic.atSeq >= vm.lastSeq) {
    // server already validated this command; show its result until the
    // stream catches up
    const rec = state.optimistic.recommendation;
    vm.activeGroup = rec.active_group;
    vm.graphId = rec.graph_id;
    vm.activePath = rec.active_path;
    vm.actionable = rec.actionable;
    vm.alternates = rec.alternates;
    vm.pendingQuestions = rec.pending.filter((p) => p.kind === "question").map((p) => ({ id: p.id, text: p.id }));
    vm.pendingVitals = rec.pending.filter((p) => p.kind === "vital").map((p) => p.id);
    vm.completed = rec.completed;
    vm.labels = { ...vm.labels, ...rec.labels };
  } else {
    state.optimistic = null;
  }
  return vm;
}

function onRecord(record: EventRecord): void {
  state.records.push(record);
  if (state.optimistic && record.kind === "RecommendationChanged" && record.seq > state.optimistic.atSeq) {
    state.optimistic = null;
  }
  render();
}

async function command(run: () => Promise<Recommendation>): Promise<void> {
  const vm = currentViewModel();
  try {
    const recommendation = await run();
    state.optimistic = { recommendation, atSeq: vm.lastSeq };
    state.error = null;
  } catch (error) {
    // rollback: drop the optimistic overlay, the fold stays authoritative
    state.optimistic = null;
    state.error = error instanceof CommandError ? `${error.code}: ${error.message}` : String(error);
  }
  render();
}

async function connect(baseUrl: string, language: Language): Promise<void> {
  state.client = new ServiceClient(baseUrl);
  const created = await state.client.createSession(language);
  state.sessionId = created.session_id;
  state.records = [];
  state.dismissedBannerSeq = -1;
  state.stopStream = state.client.subscribeEvents(
    created.session_id,
    0,
    onRecord,
    (connection) => {
      state.connection = connection;
      render();
    }
  );
  render();
}

function label(vm: ViewModel, nodeId: string): string {
  return vm.labels[nodeId] || nodeId;
}

function bars(vm: ViewModel): string {
  const max = Math.max(...vm.distribution.map((b) => b.probability), 1e-9);
  return vm.distribution
    .map((bar) => {
      const active = bar.group === vm.activeGroup ? " bar-active" : "";
      return `
        <div class="bar-row${active}">
          <div class="bar-name">${bar.group}</div>
          <div class="bar-track"><div class="bar-fill" style="width:${(bar.probability / max) * 100}%"></div></div>
          <div class="bar-value">${bar.percent}%</div>
        </div>`;
    })
    .join("");
}

function stepList(vm: ViewModel, t = strings(vm.language)): string {
  const steps = vm.activePath.length ? vm.activePath : vm.actionable;
  return steps
    .map((nodeId) => {
      const confirmed = vm.confirmedActions.includes(nodeId);
      const actionable = vm.actionable.includes(nodeId);
      const position = vm.currentPosition === nodeId ? " step-current" : "";
      const badge = confirmed
        ? `<span class="badge badge-done">${t.confirmed}</span>`
        : actionable
          ? `<button class="confirm" data-node="${nodeId}">${t.confirm}</button>`
          : "";
      return `<li class="step${position}">${label(vm, nodeId)} ${badge}</li>`;
    })
    .join("");
}

function render(): void {
  const root = document.querySelector<HTMLDivElement>("#app");
  if (!root) return;
  const vm = currentViewModel();
  const t = strings(vm.language);

  if (!state.sessionId) {
    root.innerHTML = `
      <header><h1>${t.title}</h1></header>
      <form id="connect" class="panel">
        <label>Service <input name="base" value="http://127.0.0.1:8008" /></label>
        <label>Language
          <select name="language"><option value="en">en</option><option value="de">de</option></select>
        </label>
        <button type="submit">Start</button>
      </form>
      <p class="dim">${t.noSession}</p>`;
    document.querySelector<HTMLFormElement>("#connect")?.addEventListener("submit", (event) => {
      event.preventDefault();
      const form = event.target as HTMLFormElement;
      const base = (form.elements.namedItem("base") as HTMLInputElement).value;
      const language = (form.elements.namedItem("language") as HTMLSelectElement).value as Language;
      void connect(base, language);
    });
    return;
  }

  const bannerVisible =
    vm.switchBanner !== null && vm.switchBanner.suggestedAtSeq > state.dismissedBannerSeq && !vm.closed;

  root.innerHTML = `
    <header>
      <h1>${t.title}</h1>
      <div class="header-right">
        <span class="conn conn-${vm.connection}">${t.connection[vm.connection]}</span>
        <button id="lang-toggle">${vm.language === "en" ? "de" : "en"}</button>
      </div>
    </header>
    ${state.error ? `<div class="error">${state.error}</div>` : ""}
    ${
      bannerVisible && vm.switchBanner
        ? `<div class="banner">
            ${t.switchSuggested} <strong>${vm.switchBanner.group}</strong>
            (${Math.round(vm.switchBanner.probability * 100)}%)
            <button id="accept-switch" data-group="${vm.switchBanner.group}">${t.switchTo}</button>
            <button id="dismiss-switch">${t.dismiss}</button>
          </div>`
        : ""
    }
    <div class="columns">
      <section class="panel">
        <h2>${t.situation}: <strong>${vm.activeGroup ?? "—"}</strong></h2>
        ${bars(vm)}
        <h3>${t.severity}</h3>
        <p>${t.maxProbability}: ${vm.severity ? vm.severity.maxProbability.toFixed(3) : "—"} ·
           ${t.entropy}: ${vm.severity ? vm.severity.entropy.toFixed(3) : "—"}</p>
      </section>
      <section class="panel">
        <h2>${t.treatmentPlan} <span class="dim">(${vm.graphId ?? "—"})</span></h2>
        <ol class="steps">${stepList(vm, t)}</ol>
        ${vm.completed ? `<p class="done-note">${t.sessionCompleted}</p>` : ""}
        <h3>${t.pendingQuestions}</h3>
        ${
          vm.pendingQuestions.length
            ? vm.pendingQuestions
                .map(
                  (q) => `
                    <div class="question" data-question="${q.id}">
                      <span>${q.text}</span>
                      <button class="answer" data-question="${q.id}" data-value="yes">${t.answerYes}</button>
                      <button class="answer" data-question="${q.id}" data-value="no">${t.answerNo}</button>
                    </div>`
                )
                .join("")
            : `<p class="dim">—</p>`
        }
      </section>
      <section class="panel">
        <h2>${t.alternates}</h2>
        ${vm.alternates
          .map(
            (alt) => `
              <div class="alternate">
                <div><strong>${alt.group}</strong> ${(alt.probability * 100).toFixed(1)}%</div>
                <div class="dim">${alt.preview.map((n) => label(vm, n)).join(" → ") || "—"}</div>
                ${
                  alt.start
                    ? `<button class="override" data-group="${alt.group}" data-start="${alt.start}">${t.override}</button>`
                    : ""
                }
              </div>`
          )
          .join("")}
      </section>
    </div>`;

  document.querySelector("#lang-toggle")?.addEventListener("click", () => {
    state.languageOverride = vm.language === "en" ? "de" : "en";
    render();
  });
  document.querySelectorAll<HTMLButtonElement>("button.confirm").forEach((button) =>
    button.addEventListener("click", () => {
      void command(() => state.client!.confirmAction(state.sessionId!, button.dataset.node!));
    })
  );
  document.querySelectorAll<HTMLButtonElement>("button.answer").forEach((button) =>
    button.addEventListener("click", () => {
      void command(() =>
        state.client!.answerQuestion(state.sessionId!, button.dataset.question!, button.dataset.value!)
      );
    })
  );
  document.querySelector<HTMLButtonElement>("#accept-switch")?.addEventListener("click", (event) => {
    const group = (event.target as HTMLButtonElement).dataset.group!;
    void command(() => state.client!.acceptSwitch(state.sessionId!, group));
  });
  document.querySelector("#dismiss-switch")?.addEventListener("click", () => {
    state.dismissedBannerSeq = vm.switchBanner?.suggestedAtSeq ?? state.dismissedBannerSeq;
    render();
  });
  document.querySelectorAll<HTMLButtonElement>("button.override").forEach((button) =>
    button.addEventListener("click", () => {
      void command(() =>
        state.client!.overridePath(state.sessionId!, button.dataset.group!, button.dataset.start!)
      );
    })
  );
}

render();
