/** Annotation session state machine.
 *
 * Geometry is kept per region kind; placement is rejected with a hint once
 * the kind's quota is reached. Export is gated on every present region being
 * complete and emits the canonical document accepted by the backend parser.
 */

import {
  completenessGaps,
  isComplete,
  normalizeRegion,
  Point,
  Region,
  REGION_KINDS,
  RegionKind,
  REQUIRED_COUNTS,
  serializeDoc,
  WeakLabelDoc,
} from "./schema.js";

export type Tool = "point" | "polyline";

export interface PlaceResult {
  ok: boolean;
  hint?: string;
}

export class AnnotationSession {
  readonly imageName: string;
  readonly height: number;
  readonly width: number;
  activeKind: RegionKind = "anterior_horn";
  activeTool: Tool = "point";
  dirty = false;

  private drafts = new Map<RegionKind, Region>();
  private pendingLine: Point[] | null = null;

  constructor(imageName: string, height: number, width: number) {
    if (height < 1 || width < 1) {
      throw new Error(`image dims must be positive, got ${height}x${width}`);
    }
    this.imageName = imageName;
    this.height = height;
    this.width = width;
  }

  private draft(kind: RegionKind): Region {
    let region = this.drafts.get(kind);
    if (!region) {
      region = { kind, points: [], lines: [] };
      this.drafts.set(kind, region);
    }
    return region;
  }

  private snap(p: Point): Point | null {
    const r = Math.round(p[0]);
    const c = Math.round(p[1]);
    if (r < 0 || r >= this.height || c < 0 || c >= this.width) return null;
    return [r, c];
  }

  placePoint(p: Point): PlaceResult {
    const snapped = this.snap(p);
    if (!snapped) return { ok: false, hint: "outside the image" };
    const region = this.draft(this.activeKind);
    const quota = REQUIRED_COUNTS[this.activeKind].points;
    if (region.points.length >= quota) {
      return {
        ok: false,
        hint: `${this.activeKind} already has ${quota} point(s); remove one first`,
      };
    }
    region.points.push(snapped);
    this.dirty = true;
    return { ok: true };
  }

  addVertex(p: Point): PlaceResult {
    const snapped = this.snap(p);
    if (!snapped) return { ok: false, hint: "outside the image" };
    const region = this.draft(this.activeKind);
    const quota = REQUIRED_COUNTS[this.activeKind].lines;
    if (!this.pendingLine && region.lines.length >= quota) {
      return {
        ok: false,
        hint: `${this.activeKind} already has ${quota} line(s); remove one first`,
      };
    }
    if (!this.pendingLine) this.pendingLine = [];
    const last = this.pendingLine[this.pendingLine.length - 1];
    if (last && last[0] === snapped[0] && last[1] === snapped[1]) {
      return { ok: false, hint: "duplicate consecutive vertex" };
    }
    this.pendingLine.push(snapped);
    this.dirty = true;
    return { ok: true };
  }

  finishLine(): PlaceResult {
    if (!this.pendingLine) return { ok: false, hint: "no line in progress" };
    if (this.pendingLine.length < 2) {
      return { ok: false, hint: "a line needs at least 2 vertices" };
    }
    this.draft(this.activeKind).lines.push(this.pendingLine);
    this.pendingLine = null;
    return { ok: true };
  }

  cancelLine(): void {
    this.pendingLine = null;
  }

  removeRegion(kind: RegionKind): void {
    if (this.drafts.delete(kind)) this.dirty = true;
  }

  /** Regions with any geometry, in the fixed kind order. */
  presentRegions(): Region[] {
    return REGION_KINDS.filter((k) => {
      const region = this.drafts.get(k);
      return region !== undefined && (region.points.length > 0 || region.lines.length > 0);
    }).map((k) => normalizeRegion(this.draft(k)));
  }

  isRegionComplete(kind: RegionKind): boolean {
    const region = this.drafts.get(kind);
    return region !== undefined && isComplete(region);
  }

  /** True when at least one region is complete and none is half-done. */
  canPreview(): boolean {
    const present = this.presentRegions();
    return present.length > 0 && present.every(isComplete) && !this.pendingLine;
  }

  canExport(): boolean {
    return this.canPreview();
  }

  exportGaps(): string[] {
    const present = this.presentRegions();
    if (present.length === 0) return ["no regions annotated"];
    const gaps = present.flatMap(completenessGaps);
    if (this.pendingLine) gaps.push("a line is still in progress");
    return gaps;
  }

  toDocument(): WeakLabelDoc {
    return {
      image: this.imageName,
      height: this.height,
      width: this.width,
      regions: this.presentRegions(),
    };
  }

  exportLabels(): string {
    const gaps = this.exportGaps();
    if (gaps.length > 0) {
      throw new Error(`export blocked: ${gaps.join("; ")}`);
    }
    this.dirty = false;
    return serializeDoc(this.toDocument());
  }
}
