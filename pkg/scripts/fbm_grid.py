"""Quadrature covariance of fBm indicators against the closed form, over a grid of Hurst indices."""
import argparse
import csv
import sys

import numpy as np

from cndfock.measures import PowerLaw, indicator_spectral_pairing


def closed_form(h, a, b):
    return 0.5 * (a ** (2 * h) + b ** (2 * h) - abs(a - b) ** (2 * h))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--hurst", type=float, nargs="+", default=[0.1, 0.25, 0.5, 0.75, 0.9])
    p.add_argument("--times", type=float, nargs="+", default=[0.01, 0.1, 0.5, 1.0, 2.5, 10.0])
    args = p.parse_args(argv)
    w = csv.writer(sys.stdout)
    w.writerow(["H", "max_rel_error_normalized"])
    ts = args.times
    for h in args.hurst:
        mu = PowerLaw(h)
        grid = np.array([[indicator_spectral_pairing(mu, a, b) for b in ts] for a in ts])
        # normalize at t = 1 when present, else at the first time
        k = ts.index(1.0) if 1.0 in ts else 0
        norm = grid / grid[k, k] * closed_form(h, ts[k], ts[k])
        exact = np.array([[closed_form(h, a, b) for b in ts] for a in ts])
        w.writerow([h, f"{np.max(np.abs(norm - exact) / np.abs(exact)):.3g}"])


if __name__ == "__main__":
    main()
