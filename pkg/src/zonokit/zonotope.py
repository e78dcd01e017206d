"""Zonotope model: faces, facets, normals, volumes, zones, and vertices.

A zonotope is the column image of a unit cube, Z(A) = {A t : t in [0,1]^k}.
Everything here is derived from the defining matrix; the Zonotope object is
immutable and caches its derived structure on first use.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import numkit
from .errors import CapacityError, DegeneracyError, DimensionError
from .numkit import DEFAULT_TOL, as_matrix

VERTEX_ENUM_LIMIT = 16


class RankDeficiencyWarning(UserWarning):
    """The requested full-dimensional quantity degraded to the intrinsic rank."""


@dataclass(frozen=True)
class GeneratingFace:
    """Maximal column subset of a given rank (0-based column indices)."""

    columns: tuple
    dim: int


@dataclass(eq=False)
class BoundingFacet:
    """One side of a generating facet translated to the boundary.

    ``negative_set``/``positive_set`` partition the non-facet generators by the
    sign of their projection onto the plus side's reference normal; the minus
    side carries the opposite unit normal and translates by the negative set.
    """

    generating: GeneratingFace
    unit_normal: np.ndarray
    negative_set: tuple
    positive_set: tuple
    side: str
    translation: np.ndarray
    volume: float
    support: float


@dataclass(eq=False)
class GeometricFacet:
    """Coplanar bounding facets merged into one actual facet."""

    constituents: list
    unit_normal: np.ndarray
    support: float
    volume: float


def _vec_close(p, q, cut):
    return np.max(np.abs(p - q)) <= cut


class Zonotope:
    """Zonotope given by its n x k defining matrix plus a tolerance.

    Zero generators are stripped at construction (recorded in
    ``stripped_columns`` with a warning); all queries are pure and cached.
    """

    def __init__(self, matrix, tol=DEFAULT_TOL):
        a = as_matrix(matrix)
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise DimensionError("a zonotope needs ambient dimension and generators")
        cut = tol.threshold(np.abs(a).max() if a.size else 0.0)
        keep = [j for j in range(a.shape[1]) if np.abs(a[:, j]).max() > cut]
        self.stripped_columns = tuple(j for j in range(a.shape[1]) if j not in keep)
        if self.stripped_columns:
            warnings.warn(
                f"stripped zero generators at columns {self.stripped_columns}",
                RankDeficiencyWarning,
                stacklevel=2,
            )
        if not keep:
            raise DegeneracyError("all generators are zero")
        a = a[:, keep]
        a.setflags(write=False)
        self.matrix = a
        self.tol = tol

    @property
    def n(self):
        return self.matrix.shape[0]

    @property
    def k(self):
        return self.matrix.shape[1]

    @cached_property
    def rank(self):
        return numkit.rank(self.matrix, self.tol)

    @cached_property
    def parallel_classes(self):
        """Groups of mutually parallel generators (each a tuple of indices)."""
        classes = []
        assigned = [False] * self.k
        for i in range(self.k):
            if assigned[i]:
                continue
            group = [i]
            assigned[i] = True
            for j in range(i + 1, self.k):
                if not assigned[j] and numkit.rank(self.matrix[:, [i, j]], self.tol) == 1:
                    group.append(j)
                    assigned[j] = True
            classes.append(tuple(group))
        return classes

    def column(self, i):
        return self.matrix[:, i]

    def center(self):
        """Center of symmetry, half the generator sum."""
        return self.matrix.sum(axis=1) / 2.0

    # -- faces ----------------------------------------------------------

    @cached_property
    def _face_cache(self):
        return {}

    def generating_faces(self, s):
        """All maximal column subsets of rank s, as GeneratingFace records.

        s = 0 returns the generators themselves, one face per column.
        """
        if not 0 <= s <= self.rank:
            raise DegeneracyError(f"face dimension {s} outside 0..{self.rank}")
        if s in self._face_cache:
            return self._face_cache[s]
        if s == 0:
            faces = [GeneratingFace((i,), 0) for i in range(self.k)]
        else:
            seen = {}
            for combo in itertools.combinations(range(self.k), s):
                if numkit.rank(self.matrix[:, combo], self.tol) != s:
                    continue
                closure = tuple(
                    j
                    for j in range(self.k)
                    if numkit.rank(self.matrix[:, combo + (j,)], self.tol) == s
                )
                seen[closure] = GeneratingFace(closure, s)
            faces = [seen[c] for c in sorted(seen)]
        self._face_cache[s] = faces
        return faces

    def zone(self, i):
        """Generating facets whose column set contains generator i."""
        if not 0 <= i < self.k:
            raise IndexError(f"generator index {i} outside 0..{self.k - 1}")
        return [f for f in self.generating_faces(self.rank - 1) if i in f.columns]

    # -- volumes ---------------------------------------------------------

    def volume(self):
        """Sum of |det| over all full-size column subsets.

        For rank-deficient matrices this degrades to the intrinsic
        rank-volume and warns; see :meth:`m_volume`.
        """
        if self.rank < self.n:
            warnings.warn(
                f"rank {self.rank} < ambient dimension {self.n}; returning the {self.rank}-volume",
                RankDeficiencyWarning,
                stacklevel=2,
            )
            return self.m_volume(self.rank)
        total = 0.0
        for _, d in numkit.subset_determinants(self.matrix, self.n):
            total += abs(d)
        return total

    def m_volume(self, m):
        """Intrinsic m-volume: sum over m-subsets of sqrt(det Gram)."""
        if m != self.rank:
            raise DimensionError(f"m_volume needs m = rank = {self.rank}, got {m}")
        return _subset_volume(self.matrix, m)

    def facet_volume(self, face):
        """(rank-1)-volume of the sub-zonotope on a generating facet."""
        if face.dim != self.rank - 1:
            raise DimensionError(f"facet_volume needs a face of dim {self.rank - 1}")
        return _subset_volume(self.matrix[:, face.columns], face.dim)

    # -- facets ----------------------------------------------------------

    @cached_property
    def _column_space_basis(self):
        """Orthonormal basis of the column space (identity-free when full rank)."""
        if self.rank == self.n:
            return None
        picked = numkit.independent_columns(self.matrix, self.tol)
        q, _ = numkit.qr_decompose(self.matrix[:, picked], self.tol)
        return q

    @cached_property
    def _bounding_facets(self):
        if self.rank < 2:
            raise DegeneracyError("bounding facets need rank >= 2")
        r = self.rank
        basis = self._column_space_basis
        coords = self.matrix if basis is None else basis.T @ self.matrix
        facets = []
        for face in self.generating_faces(r - 1):
            picked = numkit.independent_columns(coords[:, face.columns], self.tol)
            local = [coords[:, face.columns[j]] for j in picked]
            normal = numkit.cross_product(local)
            if basis is not None:
                normal = basis @ normal
            normal = normal / np.linalg.norm(normal)
            reference = numkit.sign_normalize(normal, self.tol)
            proj = self.matrix.T @ reference
            rest = [j for j in range(self.k) if j not in face.columns]
            negative = tuple(j for j in rest if proj[j] < 0.0)
            positive = tuple(j for j in rest if proj[j] >= 0.0)
            vol = self.facet_volume(face)
            for side, unit, tset in (
                ("minus", -reference, negative),
                ("plus", reference, positive),
            ):
                translation = (
                    self.matrix[:, tset].sum(axis=1) if tset else np.zeros(self.n)
                )
                facets.append(
                    BoundingFacet(
                        generating=face,
                        unit_normal=unit,
                        negative_set=negative,
                        positive_set=positive,
                        side=side,
                        translation=translation,
                        volume=vol,
                        support=float(unit @ translation),
                    )
                )
        return facets

    def bounding_facets(self):
        return list(self._bounding_facets)

    @cached_property
    def _geometric_facets(self):
        facets = self._bounding_facets
        m = len(facets)
        keys = []
        for bf in facets:
            g = numkit.sign_normalize(bf.unit_normal, self.tol)
            sigma = 1.0 if float(g @ bf.unit_normal) > 0 else -1.0
            keys.append((g, sigma * bf.support))
        cut_n = self.tol.threshold(1.0)
        supports = [abs(h) for _, h in keys] or [0.0]
        cut_h = self.tol.threshold(max(supports))
        parent = list(range(m))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(m):
            for j in range(i + 1, m):
                gi, hi = keys[i]
                gj, hj = keys[j]
                if _vec_close(gi, gj, cut_n) and abs(hi - hj) <= cut_h:
                    parent[find(j)] = find(i)
        clusters = {}
        for i in range(m):
            clusters.setdefault(find(i), []).append(facets[i])
        out = []
        for members in clusters.values():
            lead = members[0]
            out.append(
                GeometricFacet(
                    constituents=members,
                    unit_normal=lead.unit_normal.copy(),
                    support=lead.support,
                    volume=float(sum(bf.volume for bf in members)),
                )
            )
        out.sort(key=lambda f: (tuple(np.round(f.unit_normal, 9)), round(f.support, 9)))
        return out

    def geometric_facets(self):
        return list(self._geometric_facets)

    def facet_signature(self):
        """Canonical multiset of (sign-normalized unit normal, facet volume).

        One entry per opposite facet pair, ordered lexicographically.
        """
        geo = self._geometric_facets
        cut_n = self.tol.threshold(1.0)
        entries = []
        used = [False] * len(geo)
        for i, f in enumerate(geo):
            if used[i]:
                continue
            g = numkit.sign_normalize(f.unit_normal, self.tol)
            for j in range(i + 1, len(geo)):
                if used[j]:
                    continue
                gj = numkit.sign_normalize(geo[j].unit_normal, self.tol)
                if _vec_close(g, gj, cut_n):
                    used[j] = True
                    break
            used[i] = True
            entries.append((tuple(g), f.volume))
        entries.sort(key=lambda e: (tuple(round(x, 9) for x in e[0]), round(e[1], 9)))
        return tuple(entries)

    # -- vertices ---------------------------------------------------------

    @cached_property
    def _vertices(self):
        if self.k > VERTEX_ENUM_LIMIT:
            raise CapacityError(f"vertex enumeration capped at k = {VERTEX_ENUM_LIMIT}")
        from scipy.optimize import linprog

        masks = np.arange(2 ** self.k, dtype=np.int64)
        selectors = (masks[:, None] >> np.arange(self.k)) & 1
        points = selectors.astype(float) @ self.matrix.T
        scale = float(np.abs(points).max()) if points.size else 1.0
        grid = max(self.tol.abs, self.tol.rel * scale, 1e-12)
        buckets = {}
        for idx in range(points.shape[0]):
            key = tuple(np.round(points[idx] / grid).astype(np.int64))
            buckets.setdefault(key, []).append(idx)

        norms = np.linalg.norm(self.matrix, axis=0)
        unit_gens = (self.matrix / norms).T  # k x n, unit rows
        cut = self.tol.threshold(1.0)
        verts = []
        for indices in buckets.values():
            if len(indices) > 1:
                continue  # multiple cube preimages: never an extreme point
            idx = indices[0]
            inside = selectors[idx].astype(bool)
            rows = np.where(inside, -unit_gens.T, unit_gens.T).T
            a_ub = np.hstack([rows, np.ones((self.k, 1))])
            res = linprog(
                c=np.append(np.zeros(self.n), -1.0),
                A_ub=a_ub,
                b_ub=np.zeros(self.k),
                bounds=[(-1.0, 1.0)] * self.n + [(0.0, 2.0)],
                method="highs",
            )
            if res.status == 0 and -res.fun > cut:
                verts.append(points[idx])
        verts.sort(key=lambda p: tuple(p))
        return [v.copy() for v in verts]

    def vertices(self):
        """Extreme points, found by a strict-separating-functional test."""
        return [v.copy() for v in self._vertices]


def _subset_volume(matrix, m):
    total = 0.0
    for _, d in numkit.subset_determinants(matrix, m):
        total += abs(d)
    return total


def signatures_match(sig1, sig2, tol=DEFAULT_TOL):
    """Whether two facet signatures agree entrywise within tolerance."""
    if len(sig1) != len(sig2):
        return False
    cut = tol.threshold(1.0)
    used = [False] * len(sig2)
    for normal, vol in sig1:
        hit = False
        for j, (normal2, vol2) in enumerate(sig2):
            if used[j]:
                continue
            if _vec_close(np.asarray(normal), np.asarray(normal2), cut) and tol.close(vol, vol2):
                used[j] = True
                hit = True
                break
        if not hit:
            return False
    return True
