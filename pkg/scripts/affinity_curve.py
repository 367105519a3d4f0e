"""Hellinger affinity of P_lambda1 and P_lambda2 as the number of marginals grows."""
import argparse
import csv
import sys

from cndfock.dichotomy import affinity_curve, lambda_affinity_closed_form


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--lambda1", type=float, default=1.0)
    p.add_argument("--lambda2", type=float, default=2.0)
    p.add_argument("--max-n", type=int, default=60)
    p.add_argument("--step", type=int, default=5)
    args = p.parse_args(argv)
    ns = list(range(args.step, args.max_n + 1, args.step))
    w = csv.writer(sys.stdout)
    w.writerow(["n", "affinity", "closed_form", "abs_error"])
    for row in affinity_curve(args.lambda1, args.lambda2, ns):
        exact = lambda_affinity_closed_form(args.lambda1, args.lambda2, row["n"])
        w.writerow([row["n"], f"{row['affinity']:.15g}", f"{exact:.15g}",
                    f"{abs(row['affinity'] - exact):.3g}"])


if __name__ == "__main__":
    main()
