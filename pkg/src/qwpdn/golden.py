"""Published benchmark values shipped as static data.

The CSV holds PSNR/SSIM per (image, sigma, method) for the ten standard
test images plus the ten-image average row.  Competitor methods appear as
reference columns only; nothing here is computed.
"""

from __future__ import annotations

import csv
from functools import lru_cache
from importlib import resources

__all__ = ["golden_table", "golden_lookup", "GOLDEN_SIGMAS", "GOLDEN_IMAGES"]

GOLDEN_SIGMAS = (5, 10, 25, 40, 50, 80, 100)
GOLDEN_IMAGES = ("lena", "boat", "hill", "barbara", "mandrill",
                 "bridge", "man", "fabric", "fingerprint", "seismic")


@lru_cache(maxsize=1)
def golden_table() -> dict:
    """(image, sigma, method) -> (psnr, ssim), keys lowercase."""
    table = {}
    path = resources.files("qwpdn.data").joinpath("golden_tables.csv")
    with path.open("r", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = (row["image"].lower(), int(row["sigma"]), row["method"].lower())
            table[key] = (float(row["psnr"]), float(row["ssim"]))
    return table


def golden_lookup(image: str, sigma: float, method: str):
    """Reference (psnr, ssim) for one cell, or None when not tabulated."""
    return golden_table().get((image.lower(), int(round(sigma)), method.lower()))
