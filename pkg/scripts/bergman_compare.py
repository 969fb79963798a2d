"""Compare K_WP on the E x E chart with the Bergman potential of the Siegel space.

Samples seeded points of H_2, reports the spread of K_WP - K_Ber (expected: log 2
everywhere) and the Bergman transform law under random Sp(4, Z) words.

    python scripts/bergman_compare.py [--count 1000] [--seed 0]
"""
import argparse
import math
import sys
import warnings

import numpy as np

from wpstab.scenario import load_scenario
from wpstab.siegel import bergman_potential, bergman_transform_law, random_siegel_point, random_symplectic


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--words", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--im-range", type=float, nargs=2, default=[0.05, 20.0])
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    cfg = load_scenario("product_abelian")
    diffs, dets = [], []
    for _ in range(args.count):
        P = random_siegel_point(rng, 2, 2.0, *args.im_range)
        z = [P.M[0, 0], P.M[1, 1], P.M[0, 1]]
        diffs.append(cfg.potential(z) - bergman_potential(P))
        dets.append(np.linalg.det(P.Y))
    diffs = np.array(diffs) - math.log(2)
    print(f"{args.count} points, det Im M in [{min(dets):.2e}, {max(dets):.2e}]")
    print(f"K_WP - K_Ber - log 2: max |.| = {np.abs(diffs).max():.3e}, mean = {diffs.mean():.3e}")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        law = [bergman_transform_law(random_symplectic(rng, 2, max_len=10),
                                     random_siegel_point(rng, 2)) for _ in range(args.words)]
    print(f"transform law over {args.words} words: max residual = {max(law):.3e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
