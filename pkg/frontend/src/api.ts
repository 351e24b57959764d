// Service client: commands plus the resumable SSE subscription.
//
// Every operator affordance maps 1:1 onto a service endpoint; the client
// holds no state beyond the last seen sequence number, which drives
// reconnects (`?from=lastSeq + 1`), so a reconnect misses nothing and the
// fold's seq de-dup drops anything delivered twice.

import type { ConnectionState, EventRecord, Recommendation } from "./types";

export class CommandError extends Error {
  code: string;
  status: number;

  constructor(status: number, code: string, message: string) {
    super(message);
    this.status = status;
    this.code = code;
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    const error = (body as any).error ?? {};
    throw new CommandError(response.status, error.code ?? "http-error", error.message ?? response.statusText);
  }
  return body as T;
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  async createSession(language?: string): Promise<{ session_id: string; recommendation: Recommendation }> {
    return request(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(language ? { language } : {}),
    });
  }

  async recommendation(sessionId: string): Promise<Recommendation> {
    const body = await request<{ recommendation: Recommendation }>(
      `${this.baseUrl}/sessions/${sessionId}/recommendation`
    );
    return body.recommendation;
  }

  private async command(sessionId: string, path: string, payload: unknown): Promise<Recommendation> {
    const body = await request<{ recommendation: Recommendation }>(
      `${this.baseUrl}/sessions/${sessionId}/${path}`,
      { method: "POST", headers: { "Content-Type": "application/json" }, body: JSON.stringify(payload) }
    );
    return body.recommendation;
  }

  confirmAction(sessionId: string, nodeId: string): Promise<Recommendation> {
    return this.command(sessionId, "confirm", { node_id: nodeId });
  }

  answerQuestion(sessionId: string, questionId: string, value: string): Promise<Recommendation> {
    return this.command(sessionId, "answer", { question_id: questionId, value });
  }

  acceptSwitch(sessionId: string, group: string): Promise<Recommendation> {
    return this.command(sessionId, "accept-switch", { group });
  }

  overridePath(sessionId: string, group: string, start: string): Promise<Recommendation> {
    return this.command(sessionId, "override", { group, start });
  }

  async closeSession(sessionId: string): Promise<void> {
    await request(`${this.baseUrl}/sessions/${sessionId}`, { method: "DELETE" });
  }

  /**
   * Subscribe to the session event stream with automatic resume.
   * Returns a stop function. `fromSeq` is the first sequence wanted;
   * after a drop the client reconnects at its own last-seen + 1.
   */
  subscribeEvents(
    sessionId: string,
    fromSeq: number,
    onRecord: (record: EventRecord) => void,
    onState?: (state: ConnectionState) => void
  ): () => void {
    let stopped = false;
    let lastSeq = fromSeq - 1;
    const controller = { current: new AbortController() };

    const pump = async () => {
      while (!stopped) {
        try {
          onState?.(lastSeq < fromSeq ? "connecting" : "reconnecting");
          controller.current = new AbortController();
          const response = await fetch(
            `${this.baseUrl}/sessions/${sessionId}/events?from=${lastSeq + 1}`,
            { signal: controller.current.signal }
          );
          if (!response.ok || response.body === null) {
            throw new Error(`stream failed: ${response.status}`);
          }
          onState?.("live");
          const reader = response.body.getReader();
          const decoder = new TextDecoder();
          let buffer = "";
          for (;;) {
            const { done, value } = await reader.read();
            if (done) break;
            buffer += decoder.decode(value, { stream: true });
            let cut;
            while ((cut = buffer.indexOf("\n\n")) >= 0) {
              const chunk = buffer.slice(0, cut);
              buffer = buffer.slice(cut + 2);
              const dataLine = chunk.split("\n").find((line) => line.startsWith("data: "));
              if (!dataLine) continue; // keepalive comment
              const record = JSON.parse(dataLine.slice("data: ".length)) as EventRecord;
              if (record.seq > lastSeq) {
                lastSeq = record.seq;
                onRecord(record);
              }
              if (record.kind === "SessionClosed") {
                onState?.("closed");
                return;
              }
            }
          }
          // server ended the stream without SessionClosed: reconnect
        } catch (error) {
          if (stopped) return;
        }
        await new Promise((resolve) => setTimeout(resolve, 300));
      }
    };

    void pump();
    return () => {
      stopped = true;
      controller.current.abort();
    };
  }
}
