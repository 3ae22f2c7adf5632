"""Grayscale image I/O.

Binary PGM (P5, maxval 255) is the canonical format: bit-exact and
dependency-light.  PNG is read (and written) through Pillow as a
convenience.  Arrays are float64 in the nominal [0, 255] range; writing
clips and rounds to 8 bits.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["read_image", "write_image", "to_uint8"]


def to_uint8(x: np.ndarray) -> np.ndarray:
    """Export quantization: round(clamp(v, 0, 255))."""
    return np.rint(np.clip(np.asarray(x, dtype=np.float64), 0.0, 255.0)).astype(np.uint8)


def _read_pgm(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM file")
    # header: magic, width, height, maxval; '#' comments allowed between tokens
    tokens = []
    pos = 2
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        tokens.append(int(data[start:pos]))
    pos += 1  # single whitespace after maxval
    width, height, maxval = tokens
    if maxval != 255:
        raise ValueError(f"{path}: only 8-bit PGM supported (maxval {maxval})")
    raw = np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos)
    return raw.reshape(height, width).astype(np.float64)


def read_image(path) -> np.ndarray:
    """Load a grayscale image as float64; PGM natively, PNG via Pillow."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"input image not found: {path}")
    with open(path, "rb") as fh:
        magic = fh.read(2)
    if magic == b"P5":
        return _read_pgm(path)
    from PIL import Image

    with Image.open(path) as img:
        return np.asarray(img.convert("L"), dtype=np.float64)


def write_image(path, x: np.ndarray) -> None:
    """Write an 8-bit grayscale image; format picked by extension."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pixels = to_uint8(x)
    if path.suffix.lower() == ".png":
        from PIL import Image

        Image.fromarray(pixels, mode="L").save(path)
        return
    header = f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode()
    path.write_bytes(header + pixels.tobytes())
