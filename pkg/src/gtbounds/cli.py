"""Command-line entry point: ``gtbounds <subcommand> ...``.

Exit codes: 0 success, 1 domain error, 2 computation or diagnostic failure
(no convergence, workflow condition fails, no bound), 64 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

EXIT_OK, EXIT_DOMAIN, EXIT_DIAGNOSTIC, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


@dataclass
class RunConfig:
    subcommand: str
    flags: dict = field(default_factory=dict)
    seed: int | None = None
    output: str = "-"
    format: str = "text"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit(text: str, path: str = "-"):
    if path in ("-", None):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _parse_sizes(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(t) for t in text.split(",")]


def _parse_complex(text: str) -> complex:
    return complex(text.replace(" ", "").replace("i", "j"))


def _count(text: str) -> int:
    v = float(text)
    if not v.is_integer() or v < 2:
        raise argparse.ArgumentTypeError(f"sample count must be an integer >= 2, got {text}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gtbounds", description="Grothendieck-constant bounds from concept functions.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    b = sub.add_parser("bell", help="partitions and ordinary partial Bell polynomials")
    b.add_argument("n", type=int)
    b.add_argument("k", type=int)
    g = b.add_mutually_exclusive_group()
    g.add_argument("--symbolic", action="store_true")
    g.add_argument("--at", help="comma-separated rationals x1,x2,...")
    b.add_argument("--partitions", action="store_true", help="list P(n,k) instead")

    s = sub.add_parser("series", help="truncated power series tools")
    ssub = s.add_subparsers(dest="series_cmd", required=True, parser_class=_Parser)
    inv = ssub.add_parser("invert")
    inv.add_argument("--coeffs", required=True, help="JSON file {order, kind, coeffs}")
    inv.add_argument("--order", type=int)
    inv.add_argument("--exact", action="store_true")
    inv.add_argument("--method", choices=["powers", "enumerate"], default="powers")
    inv.add_argument("--output", default="-")

    sp = sub.add_parser("special", help="special functions")
    spsub = sp.add_subparsers(dest="special_cmd", required=True, parser_class=_Parser)
    f21 = spsub.add_parser("2f1")
    for name in ("a", "b", "c", "z"):
        f21.add_argument(name, type=float)
    f32 = spsub.add_parser("3f2")
    for name in ("a1", "a2", "a3", "b1", "b2", "z"):
        f32.add_argument(name, type=float)
    mom = spsub.add_parser("moment")
    mom.add_argument("d", type=int)
    mom.add_argument("m", type=int)
    mom.add_argument("rho", type=float)
    her = spsub.add_parser("hermite")
    her.add_argument("n", type=int)
    her.add_argument("x", type=float)
    q = spsub.add_parser("ndtri")
    q.add_argument("p", type=float)

    c = sub.add_parser("concept", help="Hermite data of concept functions")
    csub = c.add_subparsers(dest="concept_cmd", required=True, parser_class=_Parser)
    al = csub.add_parser("alphas")
    al.add_argument("--kind", required=True, help="sign | threshold:p")
    al.add_argument("--order", type=int, default=20)
    al.add_argument("--json", action="store_true")
    al.add_argument("--quadrature", action="store_true")

    m = sub.add_parser("matrix", help="correlation-matrix tools")
    msub = m.add_subparsers(dest="matrix_cmd", required=True, parser_class=_Parser)
    pr = msub.add_parser("ccp-probe")
    pr.add_argument("--fn", required=True, help="arcsin | sin | identity | series:FILE")
    pr.add_argument("--sizes", default="2..8")
    pr.add_argument("--trials", type=int, default=200)
    pr.add_argument("--seed", type=int, default=0)
    chk = msub.add_parser("check")
    chk.add_argument("file", help="matrix as JSON (row-major, complex as [re,im]) or CSV")
    nrm = msub.add_parser("norm")
    nrm.add_argument("file")
    nrm.add_argument("--mode", choices=["exact", "heuristic"], default="exact")
    nrm.add_argument("--seed", type=int, default=0)

    o = sub.add_parser("oracle", help="Monte Carlo estimates vs closed forms")
    osub = o.add_subparsers(dest="oracle_cmd", required=True, parser_class=_Parser)
    for name in ("sign-identity", "threshold", "moment", "haagerup"):
        op = osub.add_parser(name)
        op.add_argument("--n", type=_count, default=1_000_000)
        op.add_argument("--seed", type=int, default=0)
        if name in ("sign-identity", "threshold", "moment"):
            op.add_argument("--rho", type=float, required=True)
        if name == "threshold":
            op.add_argument("--p", type=float, required=True)
        if name == "moment":
            op.add_argument("--d", type=int, required=True)
            op.add_argument("--m", type=int, required=True)
        if name == "haagerup":
            op.add_argument("--z", type=_parse_complex, required=True)

    bd = sub.add_parser("bound", help="run the upper-bound workflow")
    bd.add_argument("--concept", default="sign")
    bd.add_argument("--order", type=int)
    bd.add_argument("--tol", type=float, default=1e-10)
    bd.add_argument("--json", dest="json_out", help="write report JSON to a path, or - for stdout")
    bd.add_argument("--csv", dest="csv_out", help="write the (N, r_N, 1/r_N) trace")
    return p


def _cmd_bell(a) -> int:
    from .bell_poly import bell_ordinary, bell_symbolic, partitions

    if a.partitions:
        for nu in partitions(a.n, a.k):
            print(" ".join(map(str, nu)))
    elif a.at:
        x = [Fraction(t) for t in a.at.split(",")]
        print(bell_ordinary(a.n, a.k, x))
    else:
        print(bell_symbolic(a.n, a.k).to_text())
    return EXIT_OK


def _cmd_series(a) -> int:
    from .power_series import TruncatedSeries, invert_series

    with open(a.coeffs) as fh:
        data = json.load(fh)
    if a.exact:
        data = dict(data, kind="rational")
    s = TruncatedSeries.from_dict(data)
    out = invert_series(s, a.order, method=a.method)
    _emit(out.to_json(), a.output)
    return EXIT_OK


def _cmd_special(a) -> int:
    from . import special_fn as sf

    if a.special_cmd == "2f1":
        v = sf.hyp2f1(a.a, a.b, a.c, a.z)
    elif a.special_cmd == "3f2":
        v = sf.hyp3f2(a.a1, a.a2, a.a3, a.b1, a.b2, a.z)
    elif a.special_cmd == "moment":
        v = sf.moment_closed_form(a.d, a.m, a.rho)
    elif a.special_cmd == "hermite":
        v = sf.hermite_orthonormal(a.n, a.x)
    else:
        v = sf.norm_cdf_inv(a.p)
    print(_fmt(v))
    return EXIT_OK


def _cmd_concept(a) -> int:
    from .concepts import ConceptSpec, alpha_coeffs

    concept = ConceptSpec.parse(a.kind)
    if a.quadrature:
        concept = ConceptSpec(concept.kind, p=concept.p, coefficient_source="quadrature")
    seq = alpha_coeffs(concept, a.order)
    if a.json:
        print(json.dumps(seq.to_dict()))
    else:
        print(f"alpha_0 = {_fmt(seq.alpha0)}")
        for n, v in enumerate(seq.alpha, start=1):
            print(f"alpha_{n} = {_fmt(v)}")
    return EXIT_OK


def _load_matrix(path):
    from .corr_matrix import matrix_from_csv, matrix_from_json

    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return matrix_from_json(text)
    return matrix_from_csv(text)


def _probe_function(spec: str):
    from .power_series import TruncatedSeries

    if spec == "arcsin":
        return lambda x: 2 / math.pi * math.asin(max(-1.0, min(1.0, x)))
    if spec == "sin":
        return lambda x: math.sin(math.pi / 2 * x)
    if spec == "identity":
        return lambda x: x
    if spec.startswith("series:"):
        with open(spec.split(":", 1)[1]) as fh:
            return TruncatedSeries.from_json(fh.read())
    raise ValueError(f"unknown probe function {spec!r}")


def _cmd_matrix(a) -> int:
    from . import corr_matrix as cm

    if a.matrix_cmd == "ccp-probe":
        rep = cm.ccp_probe(_probe_function(a.fn), _parse_sizes(a.sizes), a.trials, a.seed)
        d = rep.to_dict()
        d["fn"] = a.fn
        print(json.dumps(d))
        return EXIT_OK
    M = _load_matrix(a.file)
    if a.matrix_cmd == "check":
        problems = cm.correlation_problems(M)
        chk = cm.is_psd(M)
        print(json.dumps({"correlation": not problems, "problems": problems,
                          "min_eigenvalue": chk.min_eigenvalue}))
        return EXIT_OK
    res = cm.norm_inf1(M, mode=a.mode, seed=a.seed)
    print(json.dumps({"value": res.value, "exact": res.exact, "seed": a.seed,
                      "p": cm.matrix_to_json([res.p])[0], "q": cm.matrix_to_json([res.q])[0]}))
    return EXIT_OK


def _cmd_oracle(a) -> int:
    from . import gaussian_oracle as go
    from . import special_fn as sf
    from .concepts import h_p_eval

    if a.oracle_cmd == "sign-identity":
        est, cf = go.mc_sign_identity(a.rho, a.n, a.seed), sf.grothendieck_h(a.rho)
    elif a.oracle_cmd == "threshold":
        est, cf = go.mc_threshold(a.p, a.rho, a.n, a.seed), h_p_eval(a.p, a.rho, 10_000)
    elif a.oracle_cmd == "moment":
        est, cf = go.mc_moment(a.d, a.m, a.rho, a.n, a.seed), sf.moment_closed_form(a.d, a.m, a.rho)
    else:
        est, cf = go.mc_haagerup(a.z, a.n, a.seed), sf.haagerup_h_complex(a.z)
    print(json.dumps(est.to_dict(cf)))
    return EXIT_OK


def _cmd_bound(a) -> int:
    from .bound_pipeline import compute_upper_bound
    from .concepts import ConceptSpec

    rep = compute_upper_bound(ConceptSpec.parse(a.concept), a.order, a.tol)
    if a.json_out:
        _emit(rep.to_json(), a.json_out)
    if a.csv_out:
        _emit(rep.roots_csv(), a.csv_out)
    if a.json_out != "-":
        if rep.bound is None:
            print(f"status: {rep.status}; f(1) = {_fmt(rep.diagnostics['f_at_1'])} < 1, no bound")
        else:
            print(f"status: {rep.status}")
            print(f"order N = {rep.order}, r_N = {_fmt(rep.r_star)}")
            print(f"K_G <= {_fmt(rep.bound)}")
    return EXIT_OK if rep.status != "no_bound" else EXIT_DIAGNOSTIC


COMMANDS = {
    "bell": _cmd_bell, "series": _cmd_series, "special": _cmd_special, "concept": _cmd_concept,
    "matrix": _cmd_matrix, "oracle": _cmd_oracle, "bound": _cmd_bound,
}


def main(argv=None) -> int:
    from .bound_pipeline import WorkflowConditionError

    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        sys.stderr.write(str(e))
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return int(e.code or 0)
    try:
        return COMMANDS[args.cmd](args)
    except WorkflowConditionError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DIAGNOSTIC
    except (ValueError, TypeError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DOMAIN
    except ArithmeticError as e:
        sys.stderr.write(f"computation failed: {e}\n")
        return EXIT_DIAGNOSTIC


if __name__ == "__main__":
    sys.exit(main())
