"""Frontier plot data: the linear-tax arc and two-bracket optima over a dense c sweep."""

import argparse

import numpy as np

from taxfrontier import SkillDistribution
from taxfrontier.frontier import GridSpec, frontier_linear, frontier_two_bracket


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--c-max", type=float, default=2.0)
    ap.add_argument("--c-step", type=float, default=0.05)
    ap.add_argument("--beta-steps", type=int, default=201)
    ap.add_argument("--linear-out", default="frontier_linear.csv")
    ap.add_argument("--two-bracket-out", default="frontier_two_bracket.csv")
    args = ap.parse_args(argv)

    d = SkillDistribution.uniform(0.0, 10.0)
    lin = frontier_linear(d, args.beta_steps)
    cs = np.round(np.arange(0.0, args.c_max + args.c_step / 2, args.c_step), 12)
    two = frontier_two_bracket(cs.tolist(), d, GridSpec())

    with open(args.linear_out, "w") as fh:
        fh.write("beta,sigma_u,U\n")
        for s in lin.samples:
            fh.write(f"{s.sweep_param:.6g},{s.sigma_u:.6g},{s.U:.6g}\n")
    with open(args.two_bracket_out, "w") as fh:
        fh.write("c,beta1,beta2,y1,sigma_u,U,V\n")
        for s in two.samples:
            fh.write(f"{s.c:.6g},{s.beta1:.6g},{s.beta2:.6g},{s.y1:.6g},{s.sigma_u:.6g},"
                     f"{s.U:.6g},{s.V:.6g}\n")
    print(f"wrote {len(lin.samples)} linear and {len(two.samples)} two-bracket points")


if __name__ == "__main__":
    main()
