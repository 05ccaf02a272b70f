"""Optimal linear tax under logarithmic utility for a few inequality weights."""

import argparse

from taxfrontier.logmodel import log_balance_closed_form, log_optimize


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--A", type=float, default=1.0)
    ap.add_argument("--s", type=float, default=1e12)
    ap.add_argument("--c", type=float, nargs="+", default=[0.0, 0.5, 1.0, 2.0])
    ap.add_argument("--beta-step", type=float, default=1e-4)
    args = ap.parse_args(argv)

    print("c,beta,alpha,alpha_closed_form,U,sigma_u,V")
    for c in args.c:
        beta, w = log_optimize(args.A, args.s, c, args.beta_step)
        cf = log_balance_closed_form(args.A, beta, args.s)
        print(f"{c:g},{beta:.6f},{w.alpha:.6e},{cf:.6e},{w.U:.6f},{w.sigma_u:.6f},{w.V:.6f}")


if __name__ == "__main__":
    main()
