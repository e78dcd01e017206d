"""Congruence of zonotopes through their Gram ("shape") matrices.

Two defining matrices describe congruent zonotopes exactly when their Grams
agree after permuting columns and flipping column signs; the witness
(sigma, signs, Q) makes the isometry explicit as B = Q A Sigma J.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CapacityError, DegeneracyError, DimensionError, NoWitnessError
from .numkit import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    gram,
    independent_columns,
    orthonormal_complement,
    qr_decompose,
    rank,
)

SEARCH_LIMIT = 10


@dataclass(eq=False)
class CongruenceWitness:
    """Signed permutation plus orthonormal-column map realizing B = Q A Sigma J.

    ``sigma[i]`` is the source column of A placed at position i; ``signs[i]``
    scales it by +-1; ``q`` maps the rearranged A onto B.
    """

    sigma: tuple
    signs: tuple
    q: np.ndarray

    def apply(self, a):
        a = as_matrix(a)
        return self.q @ (a[:, list(self.sigma)] * np.asarray(self.signs, dtype=float))

    def residual(self, a, b):
        b = as_matrix(b)
        mapped = self.apply(a)
        if mapped.shape[0] > b.shape[0]:
            b = np.vstack([b, np.zeros((mapped.shape[0] - b.shape[0], b.shape[1]))])
        return float(np.linalg.norm(mapped - b))

    def permutation_matrix(self):
        k = len(self.sigma)
        p = np.zeros((k, k))
        for i, src in enumerate(self.sigma):
            p[src, i] = 1.0
        return p


@dataclass(eq=False)
class ConditionReport:
    """Truth values of the three comparison conditions plus derived witnesses."""

    c1: bool
    c2: bool
    c3: bool
    q1: Optional[np.ndarray]
    q2: Optional[np.ndarray]
    derivation_note: str


@dataclass(eq=False)
class SquareComparison:
    a2_eq_b2: bool
    gram_eq: bool
    rowgram_eq: bool
    shared_q: Optional[np.ndarray]


def same_shape(a, b, tol=DEFAULT_TOL):
    """Whether A^T A = B^T B entrywise within tolerance."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionError("same_shape needs equal column counts")
    return tol.allclose(gram(a), gram(b))


def find_orthogonal(a, b, tol=DEFAULT_TOL):
    """Construct Q with orthonormal columns such that b = Q a.

    Requires same_shape(a, b) and a.rows <= b.rows. A maximal independent
    column set of ``a`` is mapped onto the matching columns of ``b``;
    QR-derived orthonormal complements extend the map deterministically, and
    dependent columns are carried automatically.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    m, n = a.shape[0], b.shape[0]
    if m > n:
        raise DimensionError("find_orthogonal requires a.rows <= b.rows")
    if not same_shape(a, b, tol):
        raise NoWitnessError("Gram matrices differ; no orthogonal map exists")
    picked = independent_columns(a, tol)
    if not picked:
        return np.eye(n, m)
    qa, _ = qr_decompose(a[:, picked], tol)
    qb, _ = qr_decompose(b[:, picked], tol)
    core = qb @ qa.T
    u = orthonormal_complement(qa)
    if u.shape[1] == 0:
        return core
    v = orthonormal_complement(qb)[:, : u.shape[1]]
    return core + v @ u.T


def triangular_signs(r, s, tol=DEFAULT_TOL):
    """Recover the diagonal sign matrix J with r = J s, row by row.

    Both inputs must be nonsingular upper triangular with equal Grams; the
    sign of each diagonal ratio fixes the whole row, which is then verified.
    """
    r = as_matrix(r)
    s = as_matrix(s)
    if r.shape != s.shape or r.shape[0] != r.shape[1]:
        raise DimensionError("triangular_signs needs equal square shapes")
    k = r.shape[0]
    scale = max(np.abs(r).max(), np.abs(s).max())
    cut = tol.threshold(scale)
    for m, name in ((r, "r"), (s, "s")):
        if np.abs(np.tril(m, -1)).max(initial=0.0) > cut:
            raise DimensionError(f"{name} is not upper triangular")
        if np.abs(np.diag(m)).min() <= cut:
            raise DegeneracyError(f"{name} is singular")
    gr, gs = gram(r), gram(s)
    gcut = tol.threshold(max(np.abs(gr).max(), np.abs(gs).max()))
    bad = np.argwhere(np.abs(gr - gs) > gcut)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise NoWitnessError(f"r^T r != s^T s, first violated at entry ({i}, {j})")
    signs = np.empty(k)
    for i in range(k):
        signs[i] = 1.0 if r[i, i] * s[i, i] > 0 else -1.0
        row_diff = np.abs(r[i, i:] - signs[i] * s[i, i:])
        if row_diff.max() > cut:
            j = i + int(np.argmax(row_diff))
            raise NoWitnessError(f"row {i} is not a signed copy, first violated at entry ({i}, {j})")
    return signs


def congruent_zonotopes(a, b, tol=DEFAULT_TOL):
    """Search for a congruence witness (Sigma, J, Q) with B = Q A Sigma J.

    Backtracks over column assignments ordered by descending norm, pruning on
    generator norms and pairwise inner products; returns None when the search
    exhausts. Capacity-bounded at k = 10 columns.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise DimensionError("congruent_zonotopes needs equal column counts")
    k = a.shape[1]
    if k > SEARCH_LIMIT:
        raise CapacityError(f"signed-permutation search capped at k = {SEARCH_LIMIT}")
    if a.shape[0] > b.shape[0]:
        b = np.vstack([b, np.zeros((a.shape[0] - b.shape[0], k))])
    ga, gb = gram(a), gram(b)
    cut = tol.threshold(max(np.abs(ga).max(), np.abs(gb).max()))

    def profile(g, i):
        return tuple(sorted(round(abs(g[i, j]), 9) for j in range(k) if j != i))

    order = sorted(range(k), key=lambda i: (-gb[i, i], profile(gb, i)))
    perm = [0] * k
    sgn = [0.0] * k
    used = [False] * k
    found = {}

    def extend(pos):
        if pos == k:
            return _verify_assignment(a, b, perm, sgn, tol, cut, found)
        i = order[pos]
        for c in range(k):
            if used[c] or abs(ga[c, c] - gb[i, i]) > cut:
                continue
            for s in ((1.0,) if pos == 0 else (1.0, -1.0)):
                ok = True
                for prev in range(pos):
                    j = order[prev]
                    if abs(s * sgn[j] * ga[c, perm[j]] - gb[i, j]) > cut:
                        ok = False
                        break
                if not ok:
                    continue
                used[c] = True
                perm[i], sgn[i] = c, s
                if extend(pos + 1):
                    return True
                used[c] = False
        return False

    if extend(0):
        return found["witness"]
    return None


def _verify_assignment(a, b, perm, sgn, tol, cut, found):
    mapped = a[:, perm] * np.asarray(sgn)
    search_tol = Tolerance(abs=max(cut, tol.abs), rel=tol.rel)
    try:
        q = find_orthogonal(mapped, b, search_tol)
    except (NoWitnessError, DegeneracyError):
        return False
    res = np.linalg.norm(b - q @ mapped)
    if res > max(1e-8 * np.linalg.norm(b), 1e-12):
        return False
    found["witness"] = CongruenceWitness(tuple(perm), tuple(int(s) for s in sgn), q)
    return True


def _comparison_factor(m, tol):
    """Upper-triangular factor used by the comparison condition.

    An already upper-triangular matrix factors trivially as I times itself;
    anything else goes through sign-normalized QR.
    """
    m = as_matrix(m)
    cut = tol.threshold(np.abs(m).max())
    if m.shape[0] == m.shape[1] and np.abs(np.tril(m, -1)).max(initial=0.0) <= cut:
        return m
    return qr_decompose(m, tol)[1]


def verify_condition3(a, b, q1, q2, tol=DEFAULT_TOL):
    """Test the comparison condition A Q1 R = B Q2 S for supplied Q1, Q2.

    R and S are the triangular factors of a and b; existence of (Q1, Q2) is
    not searched for, only the supplied witnesses are checked.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    k = a.shape[1]
    if b.shape[1] != k:
        raise DimensionError("verify_condition3 needs equal column counts")
    for q in (q1, q2):
        q = as_matrix(q)
        if q.shape != (k, k) or not tol.allclose(q.T @ q, np.eye(k)):
            raise DimensionError("q1 and q2 must be k x k orthogonal")
    if rank(a, tol) != k or rank(b, tol) != k:
        raise DegeneracyError("verify_condition3 needs full column rank")
    r = _comparison_factor(a, tol)
    s = _comparison_factor(b, tol)
    return tol.allclose(a @ as_matrix(q1) @ r, b @ as_matrix(q2) @ s)


def check_conditions(a, b, tol=DEFAULT_TOL):
    """Evaluate the three comparison conditions between equal-shape matrices.

    (1) equal Grams, (2) equal row Grams; when both hold, witnesses Q1 (from
    the triangular factors) and Q2 (from the row Grams) are constructed and
    condition (3) A Q1 R = B Q2 S is verified explicitly.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError("check_conditions needs equal shapes")
    k = a.shape[1]
    if rank(a, tol) != k or rank(b, tol) != k:
        raise DegeneracyError("check_conditions needs independent columns")
    c1 = tol.allclose(gram(a), gram(b))
    c2 = tol.allclose(a @ a.T, b @ b.T)
    if not (c1 and c2):
        return ConditionReport(
            c1,
            c2,
            False,
            None,
            None,
            "condition (3) is only derived when (1) and (2) both hold; "
            "supply explicit witnesses to verify_condition3 otherwise",
        )
    r = _comparison_factor(a, tol)
    s = _comparison_factor(b, tol)
    q1 = find_orthogonal(r, s, tol)  # s = q1 r
    q2 = find_orthogonal(a.T, b.T, tol)  # b^T = q2 a^T
    ok = tol.allclose(a @ q1 @ r, b @ q2 @ s)
    return ConditionReport(
        c1,
        c2,
        bool(ok),
        q1,
        q2,
        "Q1 maps the triangular factor of A onto that of B; Q2 comes from the row Grams",
    )


def square_comparison(a, b, tol=DEFAULT_TOL):
    """Compare square nonsingular matrices: A^2 = B^2, both Grams, shared Q.

    When all three equalities hold, the single orthogonal Q = B A^-1 realizes
    both B = Q A and B^T = Q A^T and is returned.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise DimensionError("square_comparison needs equal square shapes")
    n = a.shape[0]
    if rank(a, tol) != n or rank(b, tol) != n:
        raise DegeneracyError("square_comparison needs nonsingular inputs")
    a2_eq_b2 = tol.allclose(a @ a, b @ b)
    gram_eq = tol.allclose(gram(a), gram(b))
    rowgram_eq = tol.allclose(a @ a.T, b @ b.T)
    shared = None
    if a2_eq_b2 and gram_eq and rowgram_eq:
        q = b @ np.linalg.inv(a)
        if (
            tol.allclose(q.T @ q, np.eye(n))
            and tol.allclose(q @ a, b)
            and tol.allclose(q @ a.T, b.T)
        ):
            shared = q
    return SquareComparison(a2_eq_b2, gram_eq, rowgram_eq, shared)
