"""Pixel-level primitives.

Images are 2-D uint8 arrays (row-major, origin top-left), masks are 2-D
bool arrays, points are (row, col) integer tuples. All functions are pure.
"""

import math
from fractions import Fraction

import numpy as np

from . import _accel
from .errors import ParameterError

_HALF = Fraction(1, 2)


def check_gray(img):
    """Validate and return a grayscale image array."""
    arr = np.asarray(img)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ParameterError(f"grayscale image must be 2-D and non-empty, got shape {arr.shape}")
    if arr.dtype != np.uint8:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ParameterError(f"grayscale image must be integer-typed, got {arr.dtype}")
        if arr.min() < 0 or arr.max() > 255:
            raise ParameterError("grayscale intensities must lie in [0, 255]")
        arr = arr.astype(np.uint8)
    return arr


def check_mask(mask):
    """Validate and return a binary mask array."""
    arr = np.asarray(mask)
    if arr.ndim != 2:
        raise ParameterError(f"mask must be 2-D, got shape {arr.shape}")
    if arr.dtype != np.bool_:
        if np.issubdtype(arr.dtype, np.integer) and np.isin(arr, (0, 1, 255)).all():
            arr = arr != 0
        else:
            raise ParameterError("mask values must be strictly binary")
    return arr


def _check_kernel(kernel, name="kernel"):
    if not isinstance(kernel, (int, np.integer)) or kernel < 1 or kernel % 2 == 0:
        raise ParameterError(f"{name} must be an odd positive integer, got {kernel!r}")


def mean_smooth(img, kernel):
    """Box-average with edge replication; means rounded half-up."""
    img = check_gray(img)
    _check_kernel(kernel, "smoothing kernel")
    if kernel > min(img.shape):
        raise ParameterError(
            f"smoothing kernel {kernel} exceeds image extent {min(img.shape)}"
        )
    if kernel == 1:
        return img.copy()
    r = kernel // 2
    padded = np.pad(img.astype(np.int64), r, mode="edge")
    return _accel.mean_smooth_core(padded, int(kernel)).astype(np.uint8)


def dilate(mask, kernel):
    """Square-window dilation; out-of-bounds counts as unset."""
    mask = check_mask(mask)
    _check_kernel(kernel, "dilation kernel")
    if kernel == 1:
        return mask.copy()
    r = kernel // 2
    padded = np.pad(mask, r, constant_values=False)
    return _accel.dilate_core(padded, int(kernel))


def erode(mask, kernel):
    """Square-window erosion; out-of-bounds counts as unset."""
    mask = check_mask(mask)
    _check_kernel(kernel, "erosion kernel")
    if kernel == 1:
        return mask.copy()
    r = kernel // 2
    padded = np.pad(mask, r, constant_values=False)
    return _accel.erode_core(padded, int(kernel))


def close(mask, kernel, iterations=1):
    """Dilate then erode with matching kernels to remove interior voids.

    Computed on a canvas padded by the dilation reach so that closing is
    extensive (mask is always a subset of its closing) even at the border.
    """
    if iterations < 1:
        raise ParameterError(f"iterations must be >= 1, got {iterations}")
    out = check_mask(mask)
    _check_kernel(kernel, "closing kernel")
    pad = (kernel // 2) * iterations
    if pad == 0:
        return out.copy()
    out = np.pad(out, pad, constant_values=False)
    for _ in range(iterations):
        out = dilate(out, kernel)
    for _ in range(iterations):
        out = erode(out, kernel)
    return out[pad:-pad, pad:-pad]


def _round_half_up(x):
    return int(math.floor(x + 0.5))


def rasterize_segment(a, b):
    """8-connected discrete segment from a to b, endpoints included.

    Pixels are exactly those hit by rounding the continuous segment
    (positive-measure pixels of the rounded parametrization), so the pixel
    set is independent of direction; the returned order runs a -> b.
    """
    a = (int(a[0]), int(a[1]))
    b = (int(b[0]), int(b[1]))
    if a == b:
        return [a]
    if b < a:
        return list(reversed(rasterize_segment(b, a)))
    r0, c0 = a
    dr = b[0] - r0
    dc = b[1] - c0
    events = {Fraction(0), Fraction(1)}
    if dr:
        lo, hi = sorted((r0, b[0]))
        for m in range(lo, hi):
            events.add(Fraction(2 * m + 1 - 2 * r0, 2 * dr))
    if dc:
        lo, hi = sorted((c0, b[1]))
        for m in range(lo, hi):
            events.add(Fraction(2 * m + 1 - 2 * c0, 2 * dc))
    ts = sorted(t for t in events if 0 <= t <= 1)
    pixels = []
    for t0, t1 in zip(ts, ts[1:]):
        tm = (t0 + t1) / 2
        px = (
            math.floor(r0 + dr * tm + _HALF),
            math.floor(c0 + dc * tm + _HALF),
        )
        if not pixels or pixels[-1] != px:
            pixels.append(px)
    return pixels


def bezier_point(p0, p1, p2, t):
    """Quadratic Bezier point (Bernstein form) at parameter t."""
    u = 1.0 - t
    return (
        u * u * p0[0] + 2.0 * t * u * p1[0] + t * t * p2[0],
        u * u * p0[1] + 2.0 * t * u * p1[1] + t * t * p2[1],
    )


def rasterize_bezier(p0, p1, p2):
    """Pixels of the quadratic Bezier from p0 to p2 with control p1.

    Sampling density is doubled until consecutive pixels are 8-connected;
    the first pixel is p0 and the last is p2. The control point may be
    fractional.
    """
    p0 = (int(p0[0]), int(p0[1]))
    p2 = (int(p2[0]), int(p2[1]))
    ctrl = (float(p1[0]), float(p1[1]))
    chord = math.hypot(p2[0] - p0[0], p2[1] - p0[1])
    reach = max(
        chord,
        math.hypot(ctrl[0] - p0[0], ctrl[1] - p0[1]),
        math.hypot(p2[0] - ctrl[0], p2[1] - ctrl[1]),
    )
    n = max(2, int(math.ceil(4 * reach)))
    while True:
        pixels = []
        ok = True
        for i in range(n + 1):
            t = i / n
            r, c = bezier_point(p0, ctrl, p2, t)
            px = (_round_half_up(r), _round_half_up(c))
            if pixels and pixels[-1] == px:
                continue
            if pixels and max(abs(px[0] - pixels[-1][0]), abs(px[1] - pixels[-1][1])) > 1:
                ok = False
                break
            pixels.append(px)
        if ok:
            break
        n *= 2
        if n > 1 << 22:  # pragma: no cover - unreachable for in-bounds points
            raise ParameterError("bezier rasterization failed to converge")
    pixels[0] = p0
    if pixels[-1] != p2:
        pixels.append(p2)
    return pixels


def fill_polygon(vertices, shape):
    """Even-odd scanline fill of an implicitly closed polygon.

    Boundary pixels (rasterized edges) are always included. Degenerate
    (collinear) vertex lists fill to their rasterized outline.
    """
    if len(vertices) < 3:
        raise ParameterError(f"polygon needs at least 3 vertices, got {len(vertices)}")
    h, w = int(shape[0]), int(shape[1])
    mask = np.zeros((h, w), dtype=np.bool_)
    verts = [(float(r), float(c)) for r, c in vertices]
    n = len(verts)
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    rlo = max(0, int(math.floor(min(v[0] for v in verts))))
    rhi = min(h - 1, int(math.ceil(max(v[0] for v in verts))))
    for y in range(rlo, rhi + 1):
        xs = []
        for (r1, c1), (r2, c2) in edges:
            if r1 == r2:
                continue
            lo, hi = (r1, r2) if r1 < r2 else (r2, r1)
            if lo <= y < hi:
                xs.append(c1 + (y - r1) * (c2 - c1) / (r2 - r1))
        xs.sort()
        for xa, xb in zip(xs[0::2], xs[1::2]):
            ca = max(0, int(math.ceil(xa - 1e-9)))
            cb = min(w - 1, int(math.floor(xb + 1e-9)))
            if ca <= cb:
                mask[y, ca : cb + 1] = True
    # boundary raster, rounded to pixel vertices
    ivs = [(_round_half_up(r), _round_half_up(c)) for r, c in verts]
    for i in range(n):
        for r, c in rasterize_segment(ivs[i], ivs[(i + 1) % n]):
            if 0 <= r < h and 0 <= c < w:
                mask[r, c] = True
    return mask
