"""8-bit grayscale image files: binary PGM (always) and PNG (when Pillow is installed)."""
import enum
import os
import re

import numpy as np

from .errors import ImageFormatError, PixelRangeError

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageFormat(enum.Enum):
    PGM_BINARY = "pgm"
    PNG_GRAY8 = "png"


def _format_for_path(path):
    return ImageFormat.PNG_GRAY8 if os.fspath(path).lower().endswith(".png") else ImageFormat.PGM_BINARY


def parse_pgm(data):
    """Decode P5 bytes. Comment lines in the header are skipped."""
    if data[:2] != b"P5":
        raise ImageFormatError("not a binary PGM (magic P5 missing)")
    pos = 2
    fields = []
    token = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\d+)")
    for _ in range(3):
        m = token.match(data, pos)
        if m is None:
            raise ImageFormatError("truncated or malformed PGM header")
        fields.append(int(m.group(1)))
        pos = m.end()
    width, height, maxval = fields
    if maxval != 255:
        raise ImageFormatError(f"PGM maxval must be 255, got {maxval}")
    if width < 1 or height < 1:
        raise ImageFormatError(f"PGM dimensions {width}x{height} are empty")
    if pos >= len(data) or data[pos : pos + 1] not in (b" ", b"\t", b"\n", b"\r"):
        raise ImageFormatError("PGM header must end with a single whitespace byte")
    pos += 1
    n = width * height
    if len(data) - pos < n:
        raise ImageFormatError(f"PGM pixel data truncated: {len(data) - pos} of {n} bytes")
    return np.frombuffer(data, dtype=np.uint8, count=n, offset=pos).reshape(height, width).astype(np.int64)


def encode_pgm(img):
    img = _as_8bit(img)
    h, w = img.shape
    return f"P5\n{w} {h}\n255\n".encode("ascii") + img.astype(np.uint8).tobytes()


def _as_8bit(img):
    a = np.asarray(img)
    if a.ndim != 2:
        raise ImageFormatError(f"image must be single-channel 2-D, got shape {a.shape}")
    if a.dtype.kind == "f" and np.any(a != np.round(a)):
        raise PixelRangeError("pixels must be integers")
    if a.size and (a.min() < 0 or a.max() > 255):
        raise PixelRangeError(f"pixels must lie in [0, 255], got [{a.min()}, {a.max()}]")
    return a.astype(np.int64)


def _pillow():
    try:
        from PIL import Image
    except ImportError:
        raise ImageFormatError("PNG support needs Pillow (pip install 'artifact[png]')") from None
    return Image


def read_image(path):
    """Read an 8-bit grayscale image as an int64 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data.startswith(b"P5"):
        return parse_pgm(data)
    if data.startswith(PNG_MAGIC):
        Image = _pillow()
        with Image.open(path) as im:
            if im.mode != "L":
                raise ImageFormatError(f"PNG must be 8-bit single-channel grayscale, got mode {im.mode}")
            return np.asarray(im, dtype=np.int64)
    if data[:1] == b"P" and data[1:2].isdigit():
        raise ImageFormatError(f"unsupported netpbm variant P{data[1:2].decode()}; only P5 is read")
    raise ImageFormatError(f"{os.fspath(path)}: unrecognised image format")


def write_image(img, path, format=None):
    """Write ``img`` losslessly. The format defaults from the file suffix."""
    fmt = ImageFormat(format) if format is not None else _format_for_path(path)
    if fmt is ImageFormat.PGM_BINARY:
        payload = encode_pgm(img)
        with open(path, "wb") as fh:
            fh.write(payload)
        return
    a = _as_8bit(img).astype(np.uint8)
    Image = _pillow()
    Image.fromarray(a).save(path, format="PNG")


def tamper_map_image(report):
    tamper = np.asarray(getattr(report, "tamper_map", report), dtype=bool)
    return np.where(tamper, 255, 0).astype(np.int64)


def render_tamper_map(report, path, format=None):
    """White (255) at suspicious pixels, black elsewhere."""
    write_image(tamper_map_image(report), path, format)
