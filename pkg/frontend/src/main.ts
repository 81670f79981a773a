/** Canvas wiring: file picker, tool buttons, live preview, export. */

import { PreviewClient, PreviewOutcome } from "./client.js";
import { clampViewport, displayToImage, Viewport } from "./coords.js";
import { decodeMaskToUrl, drawOverlay } from "./overlay.js";
import { RegionKind } from "./schema.js";
import { AnnotationSession, Tool } from "./session.js";
import { clearDraft, imageKey, loadDraft, saveDraft } from "./storage.js";

const SERVICE_URL = "http://127.0.0.1:8731";

interface AppState {
  session: AnnotationSession | null;
  image: HTMLImageElement | null;
  imageBase64: string | null;
  draftKey: string | null;
  view: Viewport;
  maskImage: HTMLImageElement | null;
  opacity: number;
}

const state: AppState = {
  session: null,
  image: null,
  imageBase64: null,
  draftKey: null,
  view: { zoom: 3, panR: 0, panC: 0 },
  maskImage: null,
  opacity: 0.45,
};

const client = new PreviewClient(SERVICE_URL);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const status = el<HTMLDivElement>("status");
  status.textContent = message;
  status.className = isError ? "status error" : "status";
}

function redraw(): void {
  const canvas = el<HTMLCanvasElement>("view");
  const ctx = canvas.getContext("2d")!;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!state.image || !state.session) return;
  ctx.imageSmoothingEnabled = false;
  const { zoom, panR, panC } = state.view;
  ctx.drawImage(
    state.image,
    -panC,
    -panR,
    state.session.width * zoom,
    state.session.height * zoom,
  );
  if (state.maskImage) {
    drawOverlay(ctx, state.maskImage, state.session.height, state.session.width,
                state.view, state.opacity);
  }
  drawGeometry(ctx);
}

function drawGeometry(ctx: CanvasRenderingContext2D): void {
  if (!state.session) return;
  const { zoom, panR, panC } = state.view;
  ctx.save();
  for (const region of state.session.presentRegions()) {
    ctx.strokeStyle = region.kind === "body" ? "#ffcc00" : "#00ccff";
    ctx.fillStyle = ctx.strokeStyle;
    for (const [r, c] of region.points) {
      ctx.fillRect(c * zoom - panC - 2, r * zoom - panR - 2, zoom + 4, zoom + 4);
    }
    for (const line of region.lines) {
      ctx.beginPath();
      line.forEach(([r, c], i) => {
        const x = c * zoom - panC + zoom / 2;
        const y = r * zoom - panR + zoom / 2;
        if (i === 0) ctx.moveTo(x, y);
        else ctx.lineTo(x, y);
      });
      ctx.stroke();
    }
  }
  ctx.restore();
}

function refreshCompleteness(): void {
  if (!state.session) return;
  const gaps = state.session.exportGaps();
  el<HTMLDivElement>("completeness").textContent =
    gaps.length === 0 ? "all regions complete" : gaps.join("; ");
  el<HTMLButtonElement>("export").disabled = !state.session.canExport();
}

function schedulePreview(): void {
  const session = state.session;
  if (!session || !state.imageBase64 || !session.canPreview()) {
    el<HTMLDivElement>("timings").textContent = session ? "incomplete" : "";
    return;
  }
  client.requestPreview(state.imageBase64, session.toDocument(), onPreview);
}

function onPreview(outcome: PreviewOutcome): void {
  if (outcome.kind === "network") {
    setStatus(`service unreachable, geometry kept: ${outcome.message}`, true);
    return;
  }
  if (outcome.kind === "validation") {
    setStatus(outcome.message, true);
    return;
  }
  setStatus("");
  const mask = new Image();
  mask.onload = () => {
    state.maskImage = mask;
    redraw();
  };
  mask.src = decodeMaskToUrl(outcome.body.mask);
  const timings = Object.entries(outcome.body.timings_ms)
    .map(([stage, ms]) => `${stage} ${ms.toFixed(1)}ms`)
    .join("  ");
  el<HTMLDivElement>("timings").textContent = timings;
}

function afterEdit(): void {
  if (state.session && state.draftKey) saveDraft(state.draftKey, state.session);
  refreshCompleteness();
  redraw();
  schedulePreview();
}

async function onFilePicked(file: File): Promise<void> {
  const bytes = await file.arrayBuffer();
  const base64 = btoa(String.fromCharCode(...new Uint8Array(bytes)));
  const image = new Image();
  await new Promise<void>((resolve, reject) => {
    image.onload = () => resolve();
    image.onerror = () => reject(new Error("cannot decode image"));
    image.src = `data:image/png;base64,${base64}`;
  });
  state.image = image;
  state.imageBase64 = base64;
  state.session = new AnnotationSession(file.name, image.height, image.width);
  state.draftKey = await imageKey(bytes);
  state.maskImage = null;
  const draft = loadDraft(state.draftKey);
  if (draft) {
    setStatus(`restored draft with ${draft.length} region(s)`);
    for (const region of draft) {
      state.session.activeKind = region.kind;
      for (const p of region.points) state.session.placePoint(p);
      for (const line of region.lines) {
        for (const v of line) state.session.addVertex(v);
        state.session.finishLine();
      }
    }
  }
  state.view = clampViewport(state.view, image.height, image.width, 672, 672);
  afterEdit();
}

function bindUi(): void {
  el<HTMLInputElement>("file").addEventListener("change", (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (file) void onFilePicked(file);
  });
  el<HTMLSelectElement>("kind").addEventListener("change", (ev) => {
    if (state.session) {
      state.session.activeKind = (ev.target as HTMLSelectElement).value as RegionKind;
    }
  });
  el<HTMLSelectElement>("tool").addEventListener("change", (ev) => {
    if (state.session) {
      state.session.activeTool = (ev.target as HTMLSelectElement).value as Tool;
      state.session.cancelLine();
    }
  });
  el<HTMLCanvasElement>("view").addEventListener("click", (ev) => {
    const session = state.session;
    if (!session) return;
    const rect = (ev.target as HTMLCanvasElement).getBoundingClientRect();
    const [r, c] = displayToImage(ev.clientY - rect.top, ev.clientX - rect.left, state.view);
    const result =
      session.activeTool === "point" ? session.placePoint([r, c]) : session.addVertex([r, c]);
    if (!result.ok) setStatus(result.hint ?? "rejected", true);
    else setStatus("");
    afterEdit();
  });
  el<HTMLCanvasElement>("view").addEventListener("dblclick", () => {
    const result = state.session?.finishLine();
    if (result && !result.ok) setStatus(result.hint ?? "rejected", true);
    afterEdit();
  });
  el<HTMLButtonElement>("export").addEventListener("click", () => {
    const session = state.session;
    if (!session || !session.canExport()) return;
    const blob = new Blob([session.exportLabels()], { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = session.imageName.replace(/\.[^.]+$/, "") + ".labels.json";
    link.click();
  });
  el<HTMLButtonElement>("clear").addEventListener("click", () => {
    if (state.draftKey) clearDraft(state.draftKey);
    if (state.session) {
      state.session = new AnnotationSession(
        state.session.imageName, state.session.height, state.session.width);
    }
    state.maskImage = null;
    afterEdit();
  });
  el<HTMLInputElement>("opacity").addEventListener("input", (ev) => {
    state.opacity = Number((ev.target as HTMLInputElement).value);
    redraw();
  });
}

if (typeof document !== "undefined") {
  bindUi();
}
