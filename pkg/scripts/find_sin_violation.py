"""Search for a correlation matrix that sin(pi x / 2) maps to a non-PSD matrix.

The Taylor coefficients of sin alternate in sign, so by Schoenberg's
characterization some correlation matrix must break.  The worst instance of a
seeded random probe is written to tests/fixtures/sin_violation.json.
"""
import argparse
import json
import math
from pathlib import Path

import numpy as np

from gtbounds.corr_matrix import ccp_probe, matrix_to_json

FIXTURE = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "sin_violation.json"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--out", default=str(FIXTURE))
    args = ap.parse_args()

    sin = lambda x: math.sin(math.pi / 2 * x)  # noqa: E731
    rep = ccp_probe(sin, range(3, 9), args.trials, args.seed)
    print(f"violations: {rep.violations} / {6 * args.trials}, worst min eig {rep.worst_min_eigenvalue:.6g}")
    if rep.violating_instance is None:
        raise SystemExit("no violation found; raise --trials")
    S = rep.violating_instance
    img = np.sin(np.pi / 2 * S)
    lam = float(np.linalg.eigvalsh(img)[0])
    Path(args.out).write_text(json.dumps({
        "description": "correlation matrix whose entrywise sin(pi x/2) image is not PSD",
        "seed": args.seed,
        "matrix": matrix_to_json(S),
        "min_eigenvalue_of_image": lam,
    }, indent=2) + "\n")
    print(f"wrote {args.out} (size {S.shape[0]}, image min eig {lam:.6g})")


if __name__ == "__main__":
    main()
