"""Image file I/O: PGM (P2 ASCII and P5 binary) and 8-bit PNG.

Samples are normalized to [0, 1] on load by dividing by the file's
maximum value; writes quantize back to 8 bits, so a save/load round
trip is exact in dimensions and within 1/255 per pixel in intensity.
Multi-channel PNG input is reduced to grayscale with ITU-R BT.601
luminance weights (0.299 R + 0.587 G + 0.114 B).
"""

from __future__ import annotations

import io as _stdio
import os

import numpy as np
from PIL import Image as _PILImage

from .validation import check_image

PGM = "pgm"
PNG = "png"
FORMATS = (PGM, PNG)

LUMA_WEIGHTS = (0.299, 0.587, 0.114)


class ImageFormatError(ValueError):
    """Base class for image decoding failures."""


class HeaderParseError(ImageFormatError):
    """A header field is missing or malformed; the message names it."""


class InvalidDimensionError(ImageFormatError):
    """Declared width or height is zero or negative."""


class TruncatedDataError(ImageFormatError):
    """Pixel payload ends before width*height samples."""


def load_image(data: bytes, fmt: str) -> np.ndarray:
    """Decode bytes of the given format into a [0, 1] float image."""
    if fmt == PGM:
        return decode_pgm(data)
    if fmt == PNG:
        return decode_png(data)
    raise ValueError(f"unknown image format {fmt!r}; expected one of {FORMATS}")


def save_image(image: np.ndarray, fmt: str) -> bytes:
    """Encode a [0, 1] float image as PGM (binary P5) or 8-bit gray PNG."""
    if fmt == PGM:
        return encode_pgm(image)
    if fmt == PNG:
        return encode_png(image)
    raise ValueError(f"unknown image format {fmt!r}; expected one of {FORMATS}")


# --- PGM ------------------------------------------------------------------

def _tokenize_pgm(data: bytes, count: int):
    """Yield up to `count` whitespace-separated tokens, skipping # comments.

    Returns (tokens, offset-just-past-last-token).
    """
    tokens = []
    i = 0
    n = len(data)
    while len(tokens) < count and i < n:
        c = data[i:i + 1]
        if c.isspace():
            i += 1
        elif c == b"#":
            j = data.find(b"\n", i)
            i = n if j < 0 else j + 1
        else:
            j = i
            while j < n and not data[j:j + 1].isspace() and data[j:j + 1] != b"#":
                j += 1
            tokens.append(data[i:j])
            i = j
    return tokens, i


def decode_pgm(data: bytes) -> np.ndarray:
    header, offset = _tokenize_pgm(data, 4)
    if len(header) < 1 or header[0] not in (b"P2", b"P5"):
        raise HeaderParseError("magic: expected 'P2' or 'P5'")
    if len(header) < 4:
        raise HeaderParseError("header: missing width, height, or maxval")
    magic = header[0]
    try:
        width, height, maxval = (int(t) for t in header[1:4])
    except ValueError:
        raise HeaderParseError(
            "width/height/maxval: expected integers, got "
            + b" ".join(header[1:4]).decode("ascii", "replace")) from None
    if width <= 0 or height <= 0:
        raise InvalidDimensionError(f"dimensions must be positive, got {width}x{height}")
    if maxval <= 0:
        raise HeaderParseError(f"maxval: must be positive, got {maxval}")
    if maxval > 255:
        raise HeaderParseError(f"maxval: 16-bit PGM unsupported, got {maxval}")

    count = width * height
    if magic == b"P5":
        # Exactly one whitespace byte separates maxval from the raster.
        payload = data[offset + 1:offset + 1 + count]
        if len(payload) < count:
            raise TruncatedDataError(
                f"raster: expected {count} bytes, got {len(payload)}")
        values = np.frombuffer(payload, dtype=np.uint8).astype(np.float64)
    else:
        tokens, _ = _tokenize_pgm(data[offset:], count)
        if len(tokens) < count:
            raise TruncatedDataError(
                f"raster: expected {count} samples, got {len(tokens)}")
        try:
            values = np.array([int(t) for t in tokens], dtype=np.float64)
        except ValueError:
            raise HeaderParseError("raster: non-integer sample token") from None
    if values.max(initial=0.0) > maxval:
        raise HeaderParseError(f"raster: sample exceeds maxval {maxval}")
    return (values / float(maxval)).reshape(height, width)


def encode_pgm(image: np.ndarray, ascii_format: bool = False) -> bytes:
    image = check_image(image)
    h, w = image.shape
    quantized = np.rint(image * 255.0).astype(np.uint8)
    if ascii_format:
        body = "\n".join(" ".join(str(v) for v in row) for row in quantized)
        return f"P2\n{w} {h}\n255\n{body}\n".encode("ascii")
    return f"P5\n{w} {h}\n255\n".encode("ascii") + quantized.tobytes()


# --- PNG ------------------------------------------------------------------

def decode_png(data: bytes) -> np.ndarray:
    try:
        img = _PILImage.open(_stdio.BytesIO(data))
        img.load()
    except Exception as exc:
        raise HeaderParseError(f"png: {exc}") from None
    if img.width == 0 or img.height == 0:
        raise InvalidDimensionError(f"dimensions must be positive, got {img.size}")
    if img.mode == "L":
        arr = np.asarray(img, dtype=np.float64)
        return arr / 255.0
    if img.mode == "RGB":
        arr = np.asarray(img, dtype=np.float64) / 255.0
        r, g, b = LUMA_WEIGHTS
        return r * arr[:, :, 0] + g * arr[:, :, 1] + b * arr[:, :, 2]
    raise HeaderParseError(f"png mode: only 8-bit L and RGB supported, got {img.mode}")


def encode_png(image: np.ndarray) -> bytes:
    image = check_image(image)
    quantized = np.rint(image * 255.0).astype(np.uint8)
    buf = _stdio.BytesIO()
    _PILImage.fromarray(quantized, mode="L").save(buf, format="PNG")
    return buf.getvalue()


# --- path helpers ---------------------------------------------------------

def format_for_path(path: str | os.PathLike) -> str:
    ext = os.path.splitext(os.fspath(path))[1].lower().lstrip(".")
    if ext in ("pgm", "pnm"):
        return PGM
    if ext == "png":
        return PNG
    raise ValueError(f"cannot infer image format from {path!r} "
                     "(expected .pgm or .png)")


def read_image_file(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return load_image(fh.read(), format_for_path(path))


def write_image_file(path: str | os.PathLike, image: np.ndarray) -> None:
    data = save_image(image, format_for_path(path))
    with open(path, "wb") as fh:
        fh.write(data)
