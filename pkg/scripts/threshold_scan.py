"""Truncated bounds 1/r_N for threshold concepts b_p over a grid of p.

The inverse-series coefficients of the normalized threshold correlation grow
geometrically for p != 1/2, so these numbers are not certified bounds; the
growth rate column says how far from summable the coefficients look.
"""
import argparse

import numpy as np

from gtbounds import ConceptSpec, compute_upper_bound
from gtbounds.bound_pipeline import WorkflowConditionError


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=60)
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()
    print(f"{'p':>6} {'1/r_N':>12} {'growth':>8}  status")
    for p in np.linspace(0.1, 0.5, args.points):
        try:
            rep = compute_upper_bound(ConceptSpec("threshold", p=float(p)), args.order)
        except WorkflowConditionError as e:
            # the truncated derivative can dip below 0 near rho = -1 before the series settles
            print(f"{p:6.3f} {'-':>12} {'-':>8}  {e} (min slope {e.check.diagnostics['min_slope_on_grid']:.2e})")
            continue
        b = f"{rep.bound:.6f}" if rep.bound else "-"
        print(f"{p:6.3f} {b:>12} {rep.diagnostics['beta_growth_rate']:8.3f}  {rep.status}")


if __name__ == "__main__":
    main()
