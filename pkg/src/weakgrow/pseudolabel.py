"""Pseudo-label synthesis: center points -> backbone -> difficult-area fill
-> constraint region -> region growing -> closing.

Stage toggles (`use_backbone`, `use_fill`, `use_edge_limit`) reproduce the
ablation ladder; with everything on this is the full pipeline.
"""

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import _accel
from .errors import ConstraintGeometryError, ContractError, ParameterError
from .imaging import (
    bezier_point,
    check_gray,
    close,
    dilate,
    fill_polygon,
    mean_smooth,
    rasterize_bezier,
    rasterize_segment,
)
from .weaklabel import BODY, region_line_pixels


@dataclass(frozen=True)
class GrowConfig:
    """All tunables of the pipeline. Defaults follow the method: intensity
    tolerance 30, 3x3 smoothing and closing, Bezier control distance 3."""

    epsilon: float = 30.0
    smooth_kernel: int = 3
    close_kernel: int = 3
    bezier_offset: float = 3.0
    connectivity: int = 8
    use_backbone: bool = True
    use_fill: bool = True
    use_edge_limit: bool = True
    include_line_in_backbone: bool = False
    midpoint: str = "index"
    close_iterations: int = 1

    def __post_init__(self):
        if self.epsilon < 0:
            raise ParameterError(f"epsilon must be >= 0, got {self.epsilon}")
        for name in ("smooth_kernel", "close_kernel"):
            k = getattr(self, name)
            if not isinstance(k, int) or k < 1 or k % 2 == 0:
                raise ParameterError(f"{name} must be an odd positive integer, got {k!r}")
        if self.connectivity not in (4, 8):
            raise ParameterError(f"connectivity must be 4 or 8, got {self.connectivity!r}")
        if self.midpoint not in ("index", "arclength"):
            raise ParameterError(f"midpoint must be 'index' or 'arclength', got {self.midpoint!r}")

    def with_stages(self, use_backbone, use_fill, use_edge_limit):
        return replace(
            self,
            use_backbone=use_backbone,
            use_fill=use_fill,
            use_edge_limit=use_edge_limit,
        )


@dataclass(frozen=True)
class Backbone:
    """Seed skeleton pixels plus their mean smoothed intensity."""

    pixels: tuple
    mean_intensity: float

    def as_mask(self, shape):
        mask = np.zeros(shape, dtype=np.bool_)
        rows = [p[0] for p in self.pixels]
        cols = [p[1] for p in self.pixels]
        mask[rows, cols] = True
        return mask


@dataclass(frozen=True)
class PseudoLabelResult:
    mask: np.ndarray
    empty: bool
    timings_ms: dict = field(default_factory=dict)


def center_points(region, midpoint="index"):
    """Center point per annotation line (1 for horns, 2 for the body).

    Horn: midpoint of line-midpoint and corner point. Body: midpoint of each
    line-midpoint and the mean of the two boundary points. Components are
    rounded half-up.
    """
    if region.kind == BODY:
        (ru, cu), (rd, cd) = region.points
        centers = []
        for line in region.lines:
            mr, mc = line.midpoint(midpoint)
            centers.append(((2 * mr + ru + rd + 2) // 4, (2 * mc + cu + cd + 2) // 4))
        return centers
    pr, pc = region.points[0]
    mr, mc = region.lines[0].midpoint(midpoint)
    return [((mr + pr + 1) // 2, (mc + pc + 1) // 2)]


def build_backbone(region, centers, img_smoothed, include_line=False):
    """Connect each line's endpoints to its center (and, for the body, the
    two centers to each other); the mean intensity over those pixels is the
    reference gray level for growing. The annotated line's own raster is
    excluded unless `include_line` (boundary pixels have mixed intensity)."""
    img_smoothed = check_gray(img_smoothed)
    pixels = set()
    for line, center in zip(region.lines, centers):
        pixels.update(rasterize_segment(line.first, center))
        pixels.update(rasterize_segment(line.last, center))
    if region.kind == BODY and len(centers) == 2:
        pixels.update(rasterize_segment(centers[0], centers[1]))
    if include_line:
        pixels.update(region_line_pixels(region))
    if not pixels:
        raise ContractError("backbone is empty")
    ordered = sorted(pixels)
    h, w = img_smoothed.shape
    for r, c in ordered:
        if not (0 <= r < h and 0 <= c < w):
            raise ContractError(f"backbone pixel ({r}, {c}) outside image")
    mean = float(
        np.mean([int(img_smoothed[r, c]) for r, c in ordered])
    )
    return Backbone(pixels=tuple(ordered), mean_intensity=mean)


def seed_backbone(points, img_smoothed):
    """Degenerate backbone used by the center-point-only ablation row."""
    img_smoothed = check_gray(img_smoothed)
    mean = float(np.mean([int(img_smoothed[r, c]) for r, c in points]))
    return Backbone(pixels=tuple(points), mean_intensity=mean)


def fill_difficult_area(region, centers, shape):
    """Fill, per line, the area enclosed by the line and its center point."""
    out = np.zeros(shape, dtype=np.bool_)
    for line, center in zip(region.lines, centers):
        out |= fill_polygon(list(line.points) + [center], shape)
    return out


def _segments_properly_intersect(p, q, a, b):
    def orient(o, u, v):
        return (u[0] - o[0]) * (v[1] - o[1]) - (u[1] - o[1]) * (v[0] - o[0])

    d1 = orient(a, b, p)
    d2 = orient(a, b, q)
    d3 = orient(p, q, a)
    d4 = orient(p, q, b)
    return ((d1 > 0) != (d2 > 0) and d1 != 0 and d2 != 0) and (
        (d3 > 0) != (d4 > 0) and d3 != 0 and d4 != 0
    )


def _check_outline(outline, kind):
    n = len(outline)
    edges = [(outline[i], outline[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_properly_intersect(*edges[i], *edges[j]):
                raise ConstraintGeometryError(
                    f"constraint outline self-intersects for {kind} region"
                )


def _bezier_control(a, b, offset, away_from):
    mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    dr, dc = b[0] - a[0], b[1] - a[1]
    norm = math.hypot(dr, dc)
    if norm == 0 or offset == 0:
        return mid
    # unit normal to the chord, oriented away from the region center
    nr, nc = -dc / norm, dr / norm
    if nr * (away_from[0] - mid[0]) + nc * (away_from[1] - mid[1]) > 0:
        nr, nc = -nr, -nc
    return (mid[0] + offset * nr, mid[1] + offset * nc)


def _bezier_samples(p0, p1, p2, n=64):
    return [bezier_point(p0, p1, p2, i / n) for i in range(n + 1)]


def build_constraint(region, centers, shape, cfg):
    """Maximal allowed growth area.

    Horn: the annotated line closed off by two Bezier arcs over the
    endpoint-to-corner chords, bulging away from the center point. Body: the
    two side lines closed through the upper and lower boundary points. The
    fill is dilated by one pixel so boundary rasters are always allowed.
    """
    if region.kind == BODY:
        pu, pd = region.points
        lp, la = region.lines
        outline = list(lp.points) + [pd] + list(reversed(la.points)) + [pu]
        _check_outline(outline, region.kind)
        filled = fill_polygon(outline, shape)
    else:
        line = region.lines[0]
        point = region.points[0]
        center = centers[0]
        _check_outline(list(line.points) + [point], region.kind)
        arcs = []
        for a, b in ((line.last, point), (point, line.first)):
            control = _bezier_control(a, b, cfg.bezier_offset, center)
            mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
            if control == mid:
                arcs.append((a, b, None))
            else:
                arcs.append((a, b, control))
        verts = [(float(r), float(c)) for r, c in line.points]
        for a, b, control in arcs:
            if control is None:
                verts.append((float(b[0]), float(b[1])))
            else:
                verts += _bezier_samples(a, control, b)[1:]
        filled = fill_polygon(verts, shape)
        # exact boundary raster (fill_polygon only rasterizes between the
        # rounded sample vertices, which is thinner than the true curve)
        h, w = shape
        boundary = []
        for a, b in zip(line.points, line.points[1:]):
            boundary.extend(rasterize_segment(a, b))
        for a, b, control in arcs:
            if control is None:
                boundary.extend(rasterize_segment(a, b))
            else:
                boundary.extend(rasterize_bezier(a, control, b))
        for r, c in boundary:
            if 0 <= r < h and 0 <= c < w:
                filled[r, c] = True
    return dilate(filled, 3)


def region_grow(img_smoothed, backbone, pregrown, allowed, cfg):
    """Breadth-first growth from backbone + pregrown pixels.

    A candidate is accepted iff it lies inside `allowed` and its smoothed
    intensity is within epsilon of the backbone mean (inclusive). Seeds are
    part of the output unconditionally. The accepted set is a pure
    reachability fixpoint, independent of queue order.
    """
    img_smoothed = check_gray(img_smoothed)
    shape = img_smoothed.shape
    if allowed.shape != shape or pregrown.shape != shape:
        raise ContractError("mask dimensions do not match the image")
    init = backbone.as_mask(shape) | pregrown
    if (init & ~allowed).any():
        raise ContractError("seed pixels outside the constraint region")
    passmask = allowed & (
        np.abs(img_smoothed.astype(np.float64) - backbone.mean_intensity) <= cfg.epsilon
    )
    return _accel.grow_core(passmask, init, cfg.connectivity == 8)


def generate_pseudo_label(img, labels, cfg=None):
    """Full pipeline for one slice; stage flags select the ablation rows."""
    cfg = cfg or GrowConfig()
    img = check_gray(img)
    if img.shape != (labels.height, labels.width):
        raise ContractError(
            f"image shape {img.shape} does not match label dims "
            f"({labels.height}, {labels.width})"
        )
    timings = {}
    t0 = time.perf_counter()
    smoothed = mean_smooth(img, cfg.smooth_kernel)
    timings["smooth"] = (time.perf_counter() - t0) * 1000.0
    shape = img.shape
    union = np.zeros(shape, dtype=np.bool_)
    t_backbone = t_fill = t_constraint = t_grow = 0.0
    full = np.ones(shape, dtype=np.bool_)
    for region in labels.regions:
        centers = center_points(region, cfg.midpoint)
        t0 = time.perf_counter()
        if cfg.use_backbone:
            backbone = build_backbone(
                region, centers, smoothed, include_line=cfg.include_line_in_backbone
            )
        else:
            backbone = seed_backbone(centers, smoothed)
        t_backbone += time.perf_counter() - t0
        t0 = time.perf_counter()
        pregrown = (
            fill_difficult_area(region, centers, shape)
            if cfg.use_fill
            else np.zeros(shape, dtype=np.bool_)
        )
        t_fill += time.perf_counter() - t0
        t0 = time.perf_counter()
        allowed = build_constraint(region, centers, shape, cfg) if cfg.use_edge_limit else full
        t_constraint += time.perf_counter() - t0
        t0 = time.perf_counter()
        union |= region_grow(smoothed, backbone, pregrown, allowed, cfg)
        t_grow += time.perf_counter() - t0
    timings["backbone"] = t_backbone * 1000.0
    timings["fill"] = t_fill * 1000.0
    timings["constraint"] = t_constraint * 1000.0
    timings["grow"] = t_grow * 1000.0
    t0 = time.perf_counter()
    mask = close(union, cfg.close_kernel, cfg.close_iterations)
    timings["close"] = (time.perf_counter() - t0) * 1000.0
    return PseudoLabelResult(mask=mask, empty=not bool(mask.any()), timings_ms=timings)
