"""
Binary PGM (P5) codec
"""
import re

import numpy as np

from domain.errors import ImageFormatError
from domain.models import GrayImage

_WHITESPACE = b" \t\r\n\v\f"
_TOKEN = re.compile(rb"[^ \t\r\n\v\f#]+")


def _next_token(data: bytes, pos: int):
    """Return (token, position after token), skipping whitespace and # comments"""
    while pos < len(data):
        ch = data[pos:pos + 1]
        if ch == b"#":
            end = data.find(b"\n", pos)
            pos = len(data) if end < 0 else end + 1
        elif ch in _WHITESPACE:
            pos += 1
        else:
            break
    match = _TOKEN.match(data, pos)
    if not match:
        raise ImageFormatError("Truncated PGM header")
    return match.group(0), match.end()


def read_pgm(data: bytes) -> GrayImage:
    if data[:2] != b"P5":
        raise ImageFormatError(f"Unsupported magic {data[:2]!r}, expected b'P5'")
    separator = data[2:3]
    if not separator or separator not in _WHITESPACE + b"#":
        raise ImageFormatError(f"PGM magic must be followed by whitespace, got {separator!r}")
    pos = 2
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_token(data, pos)
        if not token.isdigit():
            raise ImageFormatError(f"Invalid PGM {name}: {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if maxval != 255:
        raise ImageFormatError(f"unsupported maxval {maxval}")
    if width < 2 or height < 2:
        raise ImageFormatError(f"Image must be at least 2x2, got {height}x{width}")
    # exactly one whitespace byte separates maxval from the raster
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise ImageFormatError("Missing whitespace before PGM raster")
    raster = data[pos + 1:]
    expected = width * height
    if len(raster) < expected:
        raise ImageFormatError(f"PGM raster has {len(raster)} bytes, expected {expected}")
    pixels = np.frombuffer(raster, dtype=np.uint8, count=expected).reshape(height, width)
    return GrayImage(pixels)


def write_pgm(img: GrayImage) -> bytes:
    header = f"P5\n{img.cols} {img.rows}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()
