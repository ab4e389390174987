"""Run the bound workflow for the sign concept and print the r_N trace.

    python scripts/run_krivine.py --order 41 --csv roots.csv
"""
import argparse

from gtbounds import ConceptSpec, compute_upper_bound, krivine_reference


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--concept", default="sign")
    ap.add_argument("--order", type=int, default=None)
    ap.add_argument("--csv")
    args = ap.parse_args()

    rep = compute_upper_bound(ConceptSpec.parse(args.concept), args.order)
    ref = krivine_reference()
    print(f"{'N':>4} {'r_N':>20} {'1/r_N':>20} {'1/r_N - Krivine':>16}")
    for n, r, b in rep.root_trace():
        if n % 4 == 1 or n == rep.order:
            print(f"{n:>4} {r:>20.16f} {b:>20.16f} {b - ref:>16.3e}")
    print(f"status {rep.status}; growth rate of |beta_n| {rep.diagnostics.get('beta_growth_rate', float('nan')):.3f}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(rep.roots_csv())


if __name__ == "__main__":
    main()
