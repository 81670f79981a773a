/** Mask overlay rendering onto a 2D canvas (nearest-neighbor, tinted). */

import { imageToDisplay, Viewport } from "./coords.js";

export interface OverlayState {
  maskUrl: string | null; // object URL of the decoded mask PNG
  opacity: number; // 0..1
}

export function decodeMaskToUrl(maskBase64: string): string {
  const bytes = Uint8Array.from(atob(maskBase64), (ch) => ch.charCodeAt(0));
  return URL.createObjectURL(new Blob([bytes], { type: "image/png" }));
}

export function drawOverlay(
  ctx: CanvasRenderingContext2D,
  maskImage: CanvasImageSource,
  imageH: number,
  imageW: number,
  view: Viewport,
  opacity: number,
): void {
  const [top, left] = imageToDisplay(0, 0, view);
  ctx.save();
  ctx.imageSmoothingEnabled = false; // annotators must see true pixels
  ctx.globalAlpha = opacity;
  ctx.globalCompositeOperation = "screen";
  ctx.drawImage(maskImage, left, top, imageW * view.zoom, imageH * view.zoom);
  ctx.restore();
}
