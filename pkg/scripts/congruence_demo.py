"""Exercise the comparison-condition calculus on the four classic pairs,
then run the signed-permutation witness search on random instances.

Usage: python scripts/congruence_demo.py [n_random]
"""

import sys
from pathlib import Path

import numpy as np

from zonokit import check_conditions, congruent_zonotopes, square_comparison

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from fixture_matrices import gram_equal_pairs  # noqa: E402


def main(argv):
    n_random = int(argv[0]) if argv else 20
    for idx, (a, b) in enumerate(gram_equal_pairs(), start=1):
        rep = check_conditions(a, b)
        line = f"pair {idx}: (1)={rep.c1} (2)={rep.c2} (3)={rep.c3}"
        if a.shape[0] == a.shape[1]:
            sq = square_comparison(a, b)
            line += f"  A^2=B^2: {sq.a2_eq_b2}  shared Q: {sq.shared_q is not None}"
        print(line)

    rng = np.random.default_rng(0)
    hits = 0
    for _ in range(n_random):
        n = int(rng.integers(2, 5))
        k = int(rng.integers(n, 9))
        a = rng.normal(size=(n, k))
        sigma = rng.permutation(k)
        signs = rng.choice([-1.0, 1.0], size=k)
        q, _ = np.linalg.qr(rng.normal(size=(n, n)))
        b = q @ (a[:, sigma] * signs)
        w = congruent_zonotopes(a, b)
        assert w is not None, "expected a witness for a constructed congruence"
        hits += 1
        print(
            f"random n={n} k={k}: witness sigma={list(w.sigma)} signs={list(w.signs)} "
            f"residual={w.residual(a, b):.2e}"
        )
    print(f"{hits}/{n_random} random instances certified")


if __name__ == "__main__":
    main(sys.argv[1:])
