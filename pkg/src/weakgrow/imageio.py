"""Reading and writing 8-bit single-channel PNG / PGM (P5) files."""

import io

import numpy as np
from PIL import Image

from .errors import ParameterError
from .imaging import check_gray, check_mask


def read_gray(path):
    """Load a grayscale image (PNG or PGM)."""
    with Image.open(path) as im:
        if im.mode != "L":
            im = im.convert("L")
        return np.asarray(im, dtype=np.uint8)


def write_gray(path, img):
    check_gray(img)
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="L").save(path)


def read_mask(path):
    """Load a binary mask; any nonzero intensity counts as set."""
    return read_gray(path) > 0


def write_mask(path, mask):
    mask = check_mask(mask)
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(path)


def decode_gray(data):
    """Decode PNG/PGM bytes into a grayscale array."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            if im.mode != "L":
                im = im.convert("L")
            return np.asarray(im, dtype=np.uint8)
    except Exception as exc:
        raise ParameterError(f"undecodable image payload: {exc}") from exc


def encode_gray_png(img):
    """Encode a grayscale image as PNG bytes."""
    check_gray(img)
    buf = io.BytesIO()
    Image.fromarray(np.asarray(img, dtype=np.uint8), mode="L").save(buf, format="PNG")
    return buf.getvalue()


def encode_mask_png(mask):
    """Encode a binary mask as PNG bytes with values {0, 255}."""
    mask = check_mask(mask)
    buf = io.BytesIO()
    Image.fromarray(np.where(mask, 255, 0).astype(np.uint8), mode="L").save(buf, format="PNG")
    return buf.getvalue()
