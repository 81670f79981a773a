/** Debounced client for the pseudo-label preview service.
 *
 * At most one request is in flight; responses carry a sequence number and
 * stale ones are dropped, so the overlay always reflects the newest geometry.
 */

import { WeakLabelDoc } from "./schema.js";

export interface PreviewConfigOverrides {
  epsilon?: number;
  smooth_kernel?: number;
  close_kernel?: number;
  bezier_offset?: number;
  connectivity?: number;
}

export interface PreviewResponse {
  mask: string; // base64 PNG
  empty: boolean;
  timings_ms: Record<string, number>;
  dice_per_region?: Record<string, number>;
}

export type PreviewOutcome =
  | { kind: "ok"; body: PreviewResponse }
  | { kind: "validation"; message: string }
  | { kind: "network"; message: string };

export type FetchLike = (url: string, init: RequestInit) => Promise<Response>;

export class PreviewClient {
  readonly baseUrl: string;
  readonly debounceMs: number;

  private fetchImpl: FetchLike;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private sequence = 0;
  private delivered = 0;

  constructor(baseUrl: string, debounceMs = 300, fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.debounceMs = debounceMs;
    this.fetchImpl = fetchImpl;
  }

  async health(): Promise<Response> {
    return this.fetchImpl(`${this.baseUrl}/v1/health`, { method: "GET" });
  }

  /** Schedule a preview; earlier pending requests are superseded. */
  requestPreview(
    imageBase64: string,
    labels: WeakLabelDoc,
    onResult: (outcome: PreviewOutcome) => void,
    config?: PreviewConfigOverrides,
  ): void {
    if (this.timer) clearTimeout(this.timer);
    const seq = ++this.sequence;
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.send(seq, imageBase64, labels, config, onResult);
    }, this.debounceMs);
  }

  private async send(
    seq: number,
    imageBase64: string,
    labels: WeakLabelDoc,
    config: PreviewConfigOverrides | undefined,
    onResult: (outcome: PreviewOutcome) => void,
  ): Promise<void> {
    let outcome: PreviewOutcome;
    try {
      const resp = await this.fetchImpl(`${this.baseUrl}/v1/preview`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ image: imageBase64, labels, config }),
      });
      if (resp.ok) {
        outcome = { kind: "ok", body: (await resp.json()) as PreviewResponse };
      } else {
        const detail = ((await resp.json()) as { detail?: string }).detail;
        outcome = { kind: "validation", message: detail ?? `HTTP ${resp.status}` };
      }
    } catch (err) {
      outcome = { kind: "network", message: String(err) };
    }
    // a newer request finished (or was scheduled) while this one ran
    if (seq <= this.delivered || seq < this.sequence) return;
    this.delivered = seq;
    onResult(outcome);
  }
}
