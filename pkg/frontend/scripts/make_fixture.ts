/** Writes fixtures/exported.labels.json by driving the session exactly as
 * the UI would: select a kind, place points, draw polylines, export. The
 * backend test suite parses this file to hold the round-trip contract. */

import { mkdirSync, writeFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { AnnotationSession } from "../src/session.js";

const here = dirname(fileURLToPath(import.meta.url));

const session = new AnnotationSession("slice_042.png", 224, 224);

session.activeKind = "anterior_horn";
session.placePoint([150, 60]);
for (const v of [[120, 30], [135, 38], [150, 42], [165, 70]]) {
  session.addVertex(v as [number, number]);
}
session.finishLine();

session.activeKind = "posterior_horn";
session.placePoint([150, 170]);
for (const v of [[120, 200], [150, 190], [165, 160]]) {
  session.addVertex(v as [number, number]);
}
session.finishLine();

session.activeKind = "body";
// deliberately lower-then-upper and bottom-first vertices; export reorders
session.placePoint([160, 112]);
session.placePoint([118, 110]);
for (const v of [[170, 82], [140, 80], [105, 84]]) {
  session.addVertex(v as [number, number]);
}
session.finishLine();
for (const v of [[102, 138], [138, 140], [168, 142]]) {
  session.addVertex(v as [number, number]);
}
session.finishLine();

const outDir = join(here, "..", "..", "fixtures");
mkdirSync(outDir, { recursive: true });
writeFileSync(join(outDir, "exported.labels.json"), session.exportLabels());
console.log("wrote fixtures/exported.labels.json");
