"""Small helpers shared by the demo scripts."""

from pathlib import Path

import numpy as np

from sphfir.cli import world_mask_path, write_image
from sphfir.fileio import field_from_raster, read_pgm

OUT = Path(__file__).resolve().parent / "output"
OUT.mkdir(exist_ok=True)


def world_map():
    """The shipped 128 x 256 land/sea mask as a field (1 = land)."""
    return field_from_raster((read_pgm(world_mask_path()) > 0.5).astype(float))


def save(name, values, vmin=None, vmax=None):
    path = OUT / name
    write_image(path, np.real(values), vmin, vmax)
    print(f"  wrote {path.relative_to(OUT.parent)}")
