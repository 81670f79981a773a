/** Draft persistence in browser local storage, keyed by image content hash. */

import { AnnotationSession } from "./session.js";
import { Region } from "./schema.js";

const PREFIX = "weakgrow-draft:";

export async function imageKey(bytes: ArrayBuffer): Promise<string> {
  const digest = await crypto.subtle.digest("SHA-256", bytes);
  const hex = Array.from(new Uint8Array(digest), (b) =>
    b.toString(16).padStart(2, "0"),
  ).join("");
  return PREFIX + hex.slice(0, 16);
}

export function saveDraft(key: string, session: AnnotationSession): void {
  localStorage.setItem(key, JSON.stringify(session.toDocument().regions));
}

export function loadDraft(key: string): Region[] | null {
  const raw = localStorage.getItem(key);
  return raw ? (JSON.parse(raw) as Region[]) : null;
}

export function clearDraft(key: string): void {
  localStorage.removeItem(key);
}
