"""Sweep the third generator's height toward zero and watch the geometry.

The 3x5 family starts with all ten generator triples independent; at eps = 0
the first three columns collapse into a plane, one tile flattens away, and
six parallelogram facets merge into a pair of hexagons.

Usage: python scripts/flattening_sweep.py [eps ...]
"""

import sys

import numpy as np

from zonokit import Zonotope, tile_zonotope, validate_tiling


def family(eps):
    return np.array(
        [
            [1.0, 0.0, 1.0, 0.0, -1.0],
            [0.0, 1.0, 1.0, 0.0, 1.0],
            [0.0, 0.0, eps, 1.0, 1.0],
        ]
    )


def main(argv):
    values = [float(x) for x in argv] or [0.5, 0.1, 0.02, 0.0]
    header = f"{'eps':>8} {'volume':>10} {'facets':>7} {'tiles':>6} {'squeezed tile vol':>18}"
    print(header)
    print("-" * len(header))
    for eps in values:
        z = Zonotope(family(eps))
        til = tile_zonotope(z)
        assert validate_tiling(z, til).ok
        squeezed = next(
            (abs(np.linalg.det(z.matrix[:, t.columns])) for t in til.tiles if t.columns == (0, 1, 2)),
            float("nan"),
        )
        print(
            f"{eps:>8.3g} {z.volume():>10.6g} {len(z.geometric_facets()):>7d} "
            f"{len(til.tiles):>6d} {squeezed:>18.6g}"
        )


if __name__ == "__main__":
    main(sys.argv[1:])
