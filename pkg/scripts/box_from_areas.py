"""Rebuild a box (or skewed parallelotope) from its facet areas and normals.

The classic classroom version: a box whose opposite face pairs have areas
1, 2, 3 has edge lengths sqrt(3/2), sqrt(2/3)... well, run it and see.

Usage: python scripts/box_from_areas.py [a1 a2 a3]
"""

import sys

import numpy as np

from zonokit import FacetDatum, Zonotope, parallelotope_from_facets


def main(argv):
    areas = [float(x) for x in argv] or [1.0, 2.0, 3.0]
    if len(areas) != 3:
        raise SystemExit("need exactly three areas")
    data = [FacetDatum(np.eye(3)[:, i], areas[i]) for i in range(3)]
    a = parallelotope_from_facets(data)
    z = Zonotope(a)
    print("defining matrix:")
    print(np.array_str(a, precision=6))
    print("edge lengths:", np.array_str(np.linalg.norm(a, axis=0), precision=6))
    print("facet areas:", sorted(round(f.volume, 6) for f in z.geometric_facets()))
    print(f"volume: {z.volume():.6f}  (sqrt of area product: {np.sqrt(np.prod(areas)):.6f})")


if __name__ == "__main__":
    main(sys.argv[1:])
