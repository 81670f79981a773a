/** Weak-label document schema shared with the generation backend.
 *
 * Coordinates are integer [row, col] pairs. Horns carry one point and one
 * line; the body carries two points (upper then lower) and two lines, each
 * starting at its upper endpoint.
 */

export type RegionKind = "anterior_horn" | "posterior_horn" | "body";

export type Point = [number, number];

export interface Region {
  kind: RegionKind;
  points: Point[];
  lines: Point[][];
}

export interface WeakLabelDoc {
  image: string;
  height: number;
  width: number;
  regions: Region[];
}

export const REGION_KINDS: RegionKind[] = ["anterior_horn", "posterior_horn", "body"];

export const REQUIRED_COUNTS: Record<RegionKind, { points: number; lines: number }> = {
  anterior_horn: { points: 1, lines: 1 },
  posterior_horn: { points: 1, lines: 1 },
  body: { points: 2, lines: 2 },
};

export function isComplete(region: Region): boolean {
  const need = REQUIRED_COUNTS[region.kind];
  return (
    region.points.length === need.points &&
    region.lines.length === need.lines &&
    region.lines.every((line) => line.length >= 2)
  );
}

/** Human-readable list of what a region still needs; empty when complete. */
export function completenessGaps(region: Region): string[] {
  const need = REQUIRED_COUNTS[region.kind];
  const gaps: string[] = [];
  if (region.points.length < need.points) {
    gaps.push(`${region.kind}: ${need.points - region.points.length} more point(s)`);
  }
  if (region.lines.length < need.lines) {
    gaps.push(`${region.kind}: ${need.lines - region.lines.length} more line(s)`);
  }
  for (const line of region.lines) {
    if (line.length < 2) gaps.push(`${region.kind}: line needs at least 2 vertices`);
  }
  return gaps;
}

/** Normalize a region so it satisfies the backend's ordering invariants:
 * body points upper-then-lower, body lines starting at the upper endpoint. */
export function normalizeRegion(region: Region): Region {
  if (region.kind !== "body") return region;
  const points = [...region.points].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
  const lines = region.lines.map((line) => {
    const first = line[0];
    const last = line[line.length - 1];
    return first[0] > last[0] ? [...line].reverse() : line;
  });
  return { kind: region.kind, points, lines };
}

/** Canonical serialization, byte-equal to the backend's own serializer. */
export function serializeDoc(doc: WeakLabelDoc): string {
  const canonical: WeakLabelDoc = {
    image: doc.image,
    height: doc.height,
    width: doc.width,
    regions: doc.regions.map((r) => ({
      kind: r.kind,
      points: r.points.map((p) => [p[0], p[1]] as Point),
      lines: r.lines.map((line) => line.map((p) => [p[0], p[1]] as Point)),
    })),
  };
  return JSON.stringify(canonical, null, 2) + "\n";
}
