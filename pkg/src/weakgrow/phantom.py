"""Synthetic phantoms: image + ground truth + auto-derived weak labels.

Horn phantoms are filled triangles with one convex curved outer edge; body
phantoms are symmetric double triangles (bow-tie). Each phantom carries an
intensity structure that exercises every pipeline stage: a dark boundary
band along the annotation line (recovered only by difficult-area filling),
a dark crack splitting the interior (bridged by backbone seeds), and a
bright leak patch outside the region (cut off only by edge limiting).
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError
from .imaging import bezier_point, dilate, fill_polygon, mean_smooth, rasterize_segment
from .weaklabel import ANTERIOR_HORN, BODY, Polyline, RegionAnnotation, WeakLabelSet


@dataclass(frozen=True)
class PhantomParams:
    kind: str  # "horn" | "body"
    seed: int
    size: int = 224
    foreground: int = 160
    background: int = 40
    band_intensity: int = 100
    leak_intensity: int = 150
    band_width: int = 4
    crack_width: int = 2
    noise_sigma: float = 0.0
    blur_radius: int = 0

    def __post_init__(self):
        if self.kind not in ("horn", "body"):
            raise ParameterError(f"phantom kind must be 'horn' or 'body', got {self.kind!r}")
        if self.size < 64:
            raise ParameterError(f"phantom size must be >= 64, got {self.size}")
        if not (0 <= self.background < self.foreground <= 255):
            raise ParameterError("need 0 <= background < foreground <= 255")
        if self.noise_sigma < 0:
            raise ParameterError("noise sigma must be >= 0")
        if self.blur_radius < 0:
            raise ParameterError("blur radius must be >= 0")


@dataclass(frozen=True)
class Phantom:
    image: np.ndarray
    truth: np.ndarray
    labels: WeakLabelSet
    params: PhantomParams


def _scale(size, frac):
    return int(round(size * frac))


def _horn_geometry(s, rng):
    r_top = _scale(s, 0.27) + int(rng.integers(-5, 6))
    r_bot = _scale(s, 0.71) + int(rng.integers(-5, 6))
    c_line = _scale(s, 0.18) + int(rng.integers(-5, 6))
    apex = (
        (r_top + r_bot) // 2 + int(rng.integers(-4, 5)),
        c_line + _scale(s, 0.49) + int(rng.integers(-5, 6)),
    )
    bulge = 6
    a = (r_top, c_line)
    b = (r_bot, c_line)
    ctrl = ((r_top + r_bot) / 2.0, c_line - bulge)
    edge = [bezier_point(a, ctrl, b, t) for t in np.linspace(0.0, 1.0, 33)]
    line_verts = [
        (int(math.floor(r + 0.5)), int(math.floor(c + 0.5)))
        for r, c in (bezier_point(a, ctrl, b, t) for t in (0.0, 0.25, 0.5, 0.75, 1.0))
    ]
    return a, b, apex, edge, line_verts


def make_phantom(params):
    """Deterministic phantom for the given parameters."""
    rng = np.random.default_rng(params.seed)
    s = params.size
    shape = (s, s)

    if params.kind == "horn":
        a, b, apex, edge, line_verts = _horn_geometry(s, rng)
        truth = fill_polygon(edge + [apex], shape)
        region = RegionAnnotation(
            kind=ANTERIOR_HORN,
            points=(apex,),
            lines=(Polyline(tuple(line_verts)),),
        )
        line_path = edge
        crack_col = a[1] + _scale(s, 0.09)
        # leak patch hugs the outside of the upper chord a -> apex
        leak_lo = a[1] + _scale(s, 0.13)
        leak_hi = a[1] + _scale(s, 0.40)

        def chord_row(c):
            return a[0] + (apex[0] - a[0]) * (c - a[1]) / (apex[1] - a[1])

    else:
        r_top = _scale(s, 0.31) + int(rng.integers(-5, 6))
        r_bot = _scale(s, 0.67) + int(rng.integers(-5, 6))
        c_left = _scale(s, 0.22) + int(rng.integers(-5, 6))
        c_right = _scale(s, 0.76) + int(rng.integers(-5, 6))
        c_mid = (c_left + c_right) // 2
        pinch = (r_bot - r_top) // 6
        p_u = ((r_top + r_bot) // 2 - pinch, c_mid)
        p_d = ((r_top + r_bot) // 2 + pinch, c_mid)
        r_mid = (r_top + r_bot) // 2
        lp = [(r_top, c_left), (r_mid, c_left), (r_bot, c_left)]
        la = [(r_top, c_right), (r_mid, c_right), (r_bot, c_right)]
        outline = [lp[0], p_u, la[0], la[-1], p_d, lp[-1]]
        truth = fill_polygon(outline, shape)
        region = RegionAnnotation(
            kind=BODY,
            points=(p_u, p_d),
            lines=(Polyline(tuple(lp)), Polyline(tuple(la))),
        )
        line_path = lp + la
        crack_cols = (
            c_left + _scale(s, 0.06),
            c_right - _scale(s, 0.06),
        )
        leak_lo = c_left + _scale(s, 0.05)
        leak_hi = c_mid - _scale(s, 0.05)

        def chord_row(c):
            return lp[0][0] + (p_u[0] - lp[0][0]) * (c - c_left) / (c_mid - c_left)

    img = np.full(shape, params.background, dtype=np.int64)
    img[truth] = params.foreground

    # dark band along the annotation lines (the "difficult area")
    band_src = np.zeros(shape, dtype=np.bool_)
    if params.kind == "horn":
        pts = [(int(math.floor(r + 0.5)), int(math.floor(c + 0.5))) for r, c in line_path]
        for p, q in zip(pts, pts[1:]):
            for r, c in rasterize_segment(p, q):
                band_src[r, c] = True
    else:
        for line in region.lines:
            for p, q in zip(line.points, line.points[1:]):
                for r, c in rasterize_segment(p, q):
                    band_src[r, c] = True
    band = dilate(band_src, 2 * params.band_width + 1) & truth
    img[band] = params.band_intensity

    # dark crack(s) splitting the interior
    cracks = np.zeros(shape, dtype=np.bool_)
    if params.kind == "horn":
        cracks[:, crack_col : crack_col + params.crack_width] = True
    else:
        for cc in crack_cols:
            cracks[:, cc : cc + params.crack_width] = True
    cracks &= truth & ~band
    img[cracks] = params.band_intensity

    # bright leak patch just outside the upper boundary
    leak = np.zeros(shape, dtype=np.bool_)
    for c in range(leak_lo, leak_hi):
        cr = int(math.floor(chord_row(c)))
        leak[max(0, cr - 8) : cr, c] = True
    leak &= ~truth
    img[leak] = params.leak_intensity

    if params.blur_radius > 0:
        img = mean_smooth(
            np.clip(img, 0, 255).astype(np.uint8), 2 * params.blur_radius + 1
        ).astype(np.int64)
    if params.noise_sigma > 0:
        img = img + rng.normal(0.0, params.noise_sigma, size=shape)
    image = np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8)

    labels = WeakLabelSet(
        image=f"phantom-{params.kind}-{params.seed}",
        height=s,
        width=s,
        regions=(region,),
    )
    if not truth.any():
        raise ParameterError("degenerate phantom geometry produced an empty truth")
    return Phantom(image=image, truth=truth, labels=labels, params=params)


def phantom_suite(count, seed, size=224, noise_sigma=0.0, blur_radius=0):
    """Alternating horn/body phantoms with per-item derived seeds."""
    phantoms = []
    for i in range(count):
        kind = "horn" if i % 2 == 0 else "body"
        phantoms.append(
            make_phantom(
                PhantomParams(
                    kind=kind,
                    seed=seed * 100003 + i,
                    size=size,
                    noise_sigma=noise_sigma,
                    blur_radius=blur_radius,
                )
            )
        )
    return phantoms
