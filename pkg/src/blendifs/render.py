"""Rasterization of discrete sets and binary 8-bit grayscale PGM (P5) files.

One pixel per grid node by default; row 0 of the image is the top of the box
(maximum y) unless ``flip_y`` is disabled.  PGM was chosen so golden-file
tests can compare bytes without any codec dependency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import DiscreteSet


@dataclass(frozen=True)
class RenderSpec:
    width: int | None = None
    height: int | None = None
    foreground: int = 0
    background: int = 255
    flip_y: bool = True


def rasterize(s: DiscreteSet, spec: RenderSpec = RenderSpec()) -> np.ndarray:
    side = s.grid.side
    w = side if spec.width is None else int(spec.width)
    h = side if spec.height is None else int(spec.height)
    if w < 1 or h < 1:
        raise ValueError("image dimensions must be >= 1")
    img = np.full((side, side), np.uint8(spec.background), dtype=np.uint8)
    i = s.lin % side
    j = s.lin // side
    rows = (side - 1 - j) if spec.flip_y else j
    img[rows, i] = np.uint8(spec.foreground)
    if (w, h) != (side, side):
        # nearest-neighbor block sampling, deterministic for any target size
        rsel = (np.arange(h, dtype=np.int64) * side) // h
        csel = (np.arange(w, dtype=np.int64) * side) // w
        img = img[rsel][:, csel]
    return img


def write_pgm(path, img: np.ndarray) -> None:
    img = np.asarray(img, dtype=np.uint8)
    if img.ndim != 2:
        raise ValueError("PGM writer expects a 2-D grayscale array")
    h, w = img.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(img.tobytes())


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.readline().strip()
        if magic != b"P5":
            raise ValueError(f"{path}: not a binary PGM (P5) file")
        dims = fh.readline().split()
        w, h = int(dims[0]), int(dims[1])
        maxval = int(fh.readline())
        if maxval != 255:
            raise ValueError(f"{path}: unsupported maxval {maxval}")
        data = fh.read(w * h)
    return np.frombuffer(data, dtype=np.uint8).reshape(h, w)
