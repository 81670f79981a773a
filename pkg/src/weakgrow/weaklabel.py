"""Point/line weak-label schema: parsing, validation, serialization.

One file per slice. Horn regions carry one point (the corner) and one line
(the outer edge); the body carries two points (upper/lower center boundary)
and two lines (the side edges, posterior side first). Coordinates are
integer (row, col) pixels, origin top-left.
"""

import json
import math
from dataclasses import dataclass, field

from .errors import (
    DuplicateKindError,
    LabelBoundsError,
    LabelSchemaError,
    LabelSyntaxError,
)
from .imaging import rasterize_segment

ANTERIOR_HORN = "anterior_horn"
POSTERIOR_HORN = "posterior_horn"
BODY = "body"
REGION_KINDS = (ANTERIOR_HORN, POSTERIOR_HORN, BODY)


@dataclass(frozen=True)
class Polyline:
    """Ordered pixel vertices, length >= 2, consecutive vertices distinct."""

    points: tuple

    def __post_init__(self):
        if len(self.points) < 2:
            raise LabelSchemaError(f"polyline needs at least 2 points, got {len(self.points)}")
        for a, b in zip(self.points, self.points[1:]):
            if a == b:
                raise LabelSchemaError(f"polyline has repeated consecutive point {a}")

    @property
    def first(self):
        return self.points[0]

    @property
    def last(self):
        return self.points[-1]

    def midpoint(self, mode="index"):
        """Line midpoint: middle vertex by index, or the half-arc-length point."""
        if mode == "index":
            return self.points[(len(self.points) - 1) // 2]
        if mode != "arclength":
            raise LabelSchemaError(f"unknown midpoint mode {mode!r}")
        seg = [math.dist(a, b) for a, b in zip(self.points, self.points[1:])]
        half = sum(seg) / 2.0
        acc = 0.0
        for (a, b), length in zip(zip(self.points, self.points[1:]), seg):
            if acc + length >= half and length > 0:
                t = (half - acc) / length
                return (
                    int(math.floor(a[0] + t * (b[0] - a[0]) + 0.5)),
                    int(math.floor(a[1] + t * (b[1] - a[1]) + 0.5)),
                )
            acc += length
        return self.points[-1]


@dataclass(frozen=True)
class RegionAnnotation:
    """One annotated meniscus region: kind + points + lines."""

    kind: str
    points: tuple
    lines: tuple

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise LabelSchemaError(f"unknown region kind {self.kind!r}")
        want = 2 if self.kind == BODY else 1
        if len(self.points) != want:
            raise LabelSchemaError(
                f"{self.kind} requires {want} point{'s' if want > 1 else ''}, got {len(self.points)}"
            )
        if len(self.lines) != want:
            raise LabelSchemaError(
                f"{self.kind} requires {want} line{'s' if want > 1 else ''}, got {len(self.lines)}"
            )
        if self.kind == BODY:
            if self.points[0][0] > self.points[1][0]:
                raise LabelSchemaError("body points must be ordered upper then lower")
            for i, line in enumerate(self.lines):
                if line.first[0] > line.last[0]:
                    raise LabelSchemaError(
                        f"body line {i} must start at its upper endpoint"
                    )


@dataclass(frozen=True)
class WeakLabelSet:
    """Per-slice annotation collection, bound to the image dimensions."""

    image: str
    height: int
    width: int
    regions: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise LabelSchemaError(f"invalid dims {self.height}x{self.width}")
        seen = set()
        for i, region in enumerate(self.regions):
            if region.kind in seen:
                raise DuplicateKindError(f"region {i}: duplicate kind {region.kind!r}")
            seen.add(region.kind)
            for r, c in region.points + tuple(p for ln in region.lines for p in ln.points):
                if not (0 <= r < self.height and 0 <= c < self.width):
                    raise LabelBoundsError(
                        f"region {i}: coordinate ({r}, {c}) outside "
                        f"{self.height}x{self.width} image"
                    )


def _as_point(value, where):
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise LabelSchemaError(f"{where}: expected an integer [row, col] pair, got {value!r}")
    return (value[0], value[1])


def parse_weak_labels(document):
    """Parse and fully validate a weak-label JSON document."""
    try:
        obj = json.loads(document)
    except json.JSONDecodeError as exc:
        raise LabelSyntaxError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise LabelSchemaError("top-level value must be an object")
    for key, types in (("image", str), ("height", int), ("width", int), ("regions", list)):
        if key not in obj:
            raise LabelSchemaError(f"missing key {key!r}")
        if not isinstance(obj[key], types) or isinstance(obj[key], bool):
            raise LabelSchemaError(f"key {key!r} has wrong type")
    regions = []
    for i, raw in enumerate(obj["regions"]):
        where = f"region {i}"
        if not isinstance(raw, dict):
            raise LabelSchemaError(f"{where}: must be an object")
        kind = raw.get("kind")
        if kind not in REGION_KINDS:
            raise LabelSchemaError(f"{where}: unknown kind {kind!r}")
        pts_raw = raw.get("points")
        lines_raw = raw.get("lines")
        if not isinstance(pts_raw, list) or not isinstance(lines_raw, list):
            raise LabelSchemaError(f"{where}: 'points' and 'lines' must be arrays")
        points = tuple(_as_point(p, where) for p in pts_raw)
        lines = []
        for j, line_raw in enumerate(lines_raw):
            if not isinstance(line_raw, list):
                raise LabelSchemaError(f"{where}: line {j} must be an array of points")
            lines.append(Polyline(tuple(_as_point(p, f"{where} line {j}") for p in line_raw)))
        try:
            regions.append(RegionAnnotation(kind=kind, points=points, lines=tuple(lines)))
        except LabelSchemaError as exc:
            raise LabelSchemaError(f"{where}: {exc}") from exc
    return WeakLabelSet(
        image=obj["image"],
        height=obj["height"],
        width=obj["width"],
        regions=tuple(regions),
    )


def serialize_weak_labels(labels):
    """Serialize to the canonical JSON form; parse(serialize(x)) == x."""
    doc = {
        "image": labels.image,
        "height": labels.height,
        "width": labels.width,
        "regions": [
            {
                "kind": region.kind,
                "points": [list(p) for p in region.points],
                "lines": [[list(p) for p in line.points] for line in region.lines],
            }
            for region in labels.regions
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def bounding_box(region, margin=0, dims=None):
    """Tight (rmin, rmax, cmin, cmax) over all annotated geometry.

    Expanded by `margin` on every side and clamped to `dims` when given.
    The box contains every rasterized pixel of every line because the
    raster of a segment never leaves its endpoints' bounding box.
    """
    pts = list(region.points) + [p for line in region.lines for p in line.points]
    rmin = min(p[0] for p in pts) - margin
    rmax = max(p[0] for p in pts) + margin
    cmin = min(p[1] for p in pts) - margin
    cmax = max(p[1] for p in pts) + margin
    if dims is not None:
        h, w = dims
        rmin, cmin = max(0, rmin), max(0, cmin)
        rmax, cmax = min(h - 1, rmax), min(w - 1, cmax)
    return (rmin, rmax, cmin, cmax)


def region_line_pixels(region):
    """All rasterized pixels of the region's annotation lines."""
    pixels = []
    for line in region.lines:
        for a, b in zip(line.points, line.points[1:]):
            pixels.extend(rasterize_segment(a, b))
    return pixels
