#!/usr/bin/env python3
"""Writes the bundled 600 m x 600 m cluttered test map (2 m pixels, binary PGM).

Obstacles are star-shaped blobs with a smooth random outline plus a one-pixel
wall around the workspace. The output is deterministic for a given seed.
"""
import argparse
import math

import numpy as np

SIZE_M = 600.0
RES = 2.0

# centre x, centre y, mean radius (m)
BLOBS = [
    (150.0, 230.0, 30.0),
    (150.0, 450.0, 28.0),
    (450.0, 180.0, 30.0),
    (450.0, 390.0, 26.0),
]


def blob_mask(xx, yy, cx, cy, r, rng):
    # radius as a low-order Fourier series in the polar angle
    k = np.arange(1, 5)
    amp = rng.uniform(0.05, 0.22, size=k.size) / k
    phase = rng.uniform(0.0, 2.0 * math.pi, size=k.size)
    ang = np.arctan2(yy - cy, xx - cx)
    rad = r * (1.0 + (amp[:, None, None] * np.cos(k[:, None, None] * ang + phase[:, None, None])).sum(0))
    return np.hypot(xx - cx, yy - cy) <= rad


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", help="output .pgm path")
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    n = int(SIZE_M / RES)
    rng = np.random.default_rng(args.seed)
    c = (np.arange(n) + 0.5) * RES
    xx, yy = np.meshgrid(c, c)  # rows are y
    occ = np.zeros((n, n), dtype=bool)
    for cx, cy, r in BLOBS:
        occ |= blob_mask(xx, yy, cx, cy, r, rng)
    occ[0, :] = occ[-1, :] = occ[:, 0] = occ[:, -1] = True

    with open(args.out, "wb") as f:
        f.write(b"P5\n# cluttered 600 m map, 2 m per pixel\n%d %d\n255\n" % (n, n))
        f.write((occ * 255).astype(np.uint8).tobytes())


if __name__ == "__main__":
    main()
