"""Monte Carlo check of every closed-form Gaussian identity over a parameter grid.

Writes one JSON line per cell (identity, parameters, estimate, closed form, z).
"""
import argparse
import cmath
import json
import sys

from gtbounds import gaussian_oracle as go
from gtbounds import special_fn as sf
from gtbounds.concepts import h_p_eval


def cells(n, seed):
    s = seed
    for rho in (-0.9, -0.4, 0.0, 0.5, 0.95):
        s += 1
        yield "grothendieck", {"rho": rho}, go.mc_sign_identity(rho, n, s), sf.grothendieck_h(rho)
    for z in (0.5, 0.3 + 0.2j, -0.7j, 0.9 * cmath.exp(1j)):
        s += 1
        yield "haagerup", {"z": [z.real, z.imag] if isinstance(z, complex) else z}, go.mc_haagerup(z, n, s), sf.haagerup_h_complex(z)
    for p in (0.3, 0.5, 0.7):
        for rho in (-0.8, -0.3, 0.0, 0.4, 0.9):
            s += 1
            yield "threshold", {"p": p, "rho": rho}, go.mc_threshold(p, rho, n, s), h_p_eval(p, rho, 10_000)
    for d in (1, 2, 3, 5):
        for m in (1, 2, 3):
            for rho in (-0.6, 0.3, 0.8):
                s += 1
                yield "moment", {"d": d, "m": m, "rho": rho}, go.mc_moment(d, m, rho, n, s), sf.moment_closed_form(d, m, rho)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=float, default=1e6)
    ap.add_argument("--seed", type=int, default=1000)
    args = ap.parse_args()
    passed = total = 0
    for name, params, est, cf in cells(int(args.n), args.seed):
        rec = {"identity": name, **params, **est.to_dict(cf)}
        total += 1
        passed += est.agrees(cf)
        print(json.dumps(rec))
    print(f"{passed}/{total} cells within 4 standard errors", file=sys.stderr)


if __name__ == "__main__":
    main()
