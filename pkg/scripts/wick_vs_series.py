"""Gram of exp(X_s / sqrt 2) and of Wick exponentials against the exponential-vector Gram.

Diagonals agree for both maps; only the Wick map also matches off the diagonal.
"""
import argparse
import math

import numpy as np

from cndfock.cnd import L2Type
from cndfock.gaussian import GaussianField
from cndfock.testfn import random_hermite
from cndfock.transforms import series_cross_gap, wick_fock_gram


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--size", type=int, default=4)
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    model = L2Type()
    gens = []
    for _ in range(args.size):
        s = random_hermite(rng, 16, active=5)
        gens.append(s * (0.7 / (args.lam * math.sqrt(model.evaluate(s)))))
    field = GaussianField(model, args.lam)
    gap = series_cross_gap(gens, field)
    wick = wick_fock_gram(gens, field)
    print(f"series map: diagonal gap {gap['diagonal_gap']:.3g}, "
          f"off-diagonal gap {gap['offdiagonal_gap']:.3g}")
    print(f"wick map:   max gap {wick.max_abs_error:.3g} (tail bound {wick.details['max_tail_bound']:.3g})")


if __name__ == "__main__":
    main()
