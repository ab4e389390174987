"""Freeze independent reference values into tests/fixtures/oracle_values.json.

Nothing here imports gtbounds.  Series reversion is done by sympy's
``series``/``solve`` route and by fixed-point iteration in mpmath, special
functions come from mpmath at 40 digits, and the threshold correlation h_p is
integrated directly from the bivariate normal CDF.  Requires sympy and mpmath
(the ``oracle`` extra).
"""
import json
from pathlib import Path

import mpmath as mp
import sympy as sp

mp.mp.dps = 40
OUT = Path(__file__).resolve().parents[1] / "tests" / "fixtures" / "oracle_values.json"


def f(x):
    return float(x)


def reversion_polynomials(order=7):
    """beta_n * a1^(2n-1) as {exponent tuple: "p/q"} for n = 2..order via sympy."""
    a = sp.symbols(f"a1:{order + 1}")
    y = sp.Symbol("y")
    bs = sp.symbols(f"b1:{order + 1}")
    h = lambda x: sum(a[i] * x ** (i + 1) for i in range(order))  # noqa: E731
    g = sum(bs[i] * y ** (i + 1) for i in range(order))
    comp = sp.expand(sp.series(h(g), y, 0, order + 1).removeO())
    sol = {}
    for n in range(1, order + 1):
        eq = comp.coeff(y, n) - (1 if n == 1 else 0)
        val = sp.solve(eq.subs(sol), bs[n - 1])[0]
        sol[bs[n - 1]] = sp.simplify(val)
    out = {}
    for n in range(2, order + 1):
        P = sp.Poly(sp.expand(sol[bs[n - 1]] * a[0] ** (2 * n - 1)), *a)
        out[n] = {",".join(map(str, m)): str(c) for m, c in zip(P.monoms(), P.coeffs())}
    return out


def mp_revert(coeffs, order):
    """Reversion of sum_{n>=1} c_n x^n by fixed-point iteration on coefficient lists."""
    c = [mp.mpf(0)] + [mp.mpf(v) for v in coeffs[1:order + 1]]

    def mul(p, q):
        r = [mp.mpf(0)] * (order + 1)
        for i, pi in enumerate(p):
            if pi == 0:
                continue
            for j in range(order + 1 - i):
                r[i + j] += pi * q[j]
        return r

    def compose(g):
        res = [mp.mpf(0)] * (order + 1)
        power = [mp.mpf(1)] + [mp.mpf(0)] * order
        for n in range(1, order + 1):
            power = mul(power, g)
            for k in range(order + 1):
                res[k] += c[n] * power[k]
        return res

    g = [mp.mpf(0), 1 / c[1]] + [mp.mpf(0)] * (order - 1)
    for _ in range(order + 2):  # each sweep fixes at least one more coefficient
        hg = compose(g)
        g = [g[k] - (hg[k] - (1 if k == 1 else 0)) / c[1] for k in range(order + 1)]
    return g


def threshold_alphas(p, N):
    t = mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)
    phi = mp.npdf(t)
    He = [mp.mpf(1), t]
    for k in range(1, N):
        He.append(t * He[k] - k * He[k - 1])
    alpha = [(2 * p - 1) ** 2]
    for n in range(1, N + 1):
        # <b_p, H_n> = 2 phi(t) He_{n-1}(t) / sqrt(n!)
        alpha.append(4 * phi**2 * He[n - 1] ** 2 / mp.factorial(n))
    return t, alpha


def h_p_direct(p, rho):
    """E[b_p(X) b_p(Y)] = 1 - 4 (p - Phi_2(t, t; rho)) by quadrature."""
    t = mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)
    rho = mp.mpf(rho)
    if rho == 1:
        return mp.mpf(1)
    s = mp.sqrt(1 - rho**2)
    Phi2 = mp.quad(lambda x: mp.npdf(x) * mp.ncdf((t - rho * x) / s), [-mp.inf, 0, t])
    return 1 - 4 * (p - Phi2)


def main():
    data = {}
    data["reversion_polynomials"] = reversion_polynomials(7)

    kriv = mp.pi / (2 * mp.log(1 + mp.sqrt(2)))
    data["krivine_bound"] = f(kriv)
    data["krivine_radius"] = f(1 / kriv)
    q = mp.pi / 2
    trunc5 = lambda r: q * r + (q * r) ** 3 / 6 + (q * r) ** 5 / 120 - 1  # noqa: E731
    data["sign_bound_order5"] = f(1 / mp.findroot(trunc5, 0.56))

    data["hyp2f1"] = [[a, b, c, z, f(mp.hyp2f1(a, b, c, z))] for a, b, c, z in [
        (0.5, 0.5, 1.5, 0.25), (0.5, 0.5, 2, 1), (0.5, 0.5, 2, 0.25), (0.5, 0.5, 2.5, 0.81),
        (1, 1, 2, -0.5), (0.3, 1.7, 3.1, 0.9), (0.5, 0.5, 6, 0.49)]]
    data["hyp3f2"] = [[*args, f(mp.hyp3f2(*args))] for args in [
        (0.5, 0.5, 1.5, 0.5, 1.5, 0.3), (1, 1, 1.5, 1.5, 1.5, 0.36),
        (2, 2, 2.5, 1.5, 4.5, 0.64), (1.5, 1.5, 1, 0.5, 3.5, 0.25)]]
    data["norm_ppf"] = [[p, f(mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1))]
                        for p in (1e-10, 0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999999)]
    data["hermite"] = [[n, x, f(mp.hermite(n, x / mp.sqrt(2)) * mp.mpf(2) ** (-mp.mpf(n) / 2) / mp.sqrt(mp.factorial(n)))]
                       for n, x in [(2, 0.0), (3, 1.2), (7, -0.4), (15, 2.5), (30, 1.0), (60, 3.0)]]

    def moment(d, m, rho):
        rho = mp.mpf(rho)
        G = mp.gamma
        if m % 2:
            c = 2 / mp.sqrt(mp.pi) * G((d + 1) / mp.mpf(2)) ** 2 * G((m + 2) / mp.mpf(2)) / (G(d / mp.mpf(2)) * G((m + d + 1) / mp.mpf(2)))
            return c * (1 - rho**2) ** (mp.mpf(d) / 2) * rho * mp.hyp3f2((d + 1) / mp.mpf(2), (d + 1) / mp.mpf(2), (m + 2) / mp.mpf(2), 1.5, (m + d + 1) / mp.mpf(2), rho**2)
        c = 1 / mp.sqrt(mp.pi) * G(d / mp.mpf(2)) * G((m + 1) / mp.mpf(2)) / G((m + d) / mp.mpf(2))
        return c * (1 - rho**2) ** (mp.mpf(d) / 2) * mp.hyp3f2(d / mp.mpf(2), d / mp.mpf(2), (m + 1) / mp.mpf(2), 0.5, (m + d) / mp.mpf(2), rho**2)

    def moment_quad(d, m, rho):
        """Independent route: for d = 2 the angle between X and Y has an explicit density."""
        rho = mp.mpf(rho)
        # density of the angle difference of a rho-correlated planar Gaussian pair
        def dens(th):
            b = rho * mp.cos(th)
            return (1 - rho**2) / (2 * mp.pi) / (1 - b**2) * (1 + b / mp.sqrt(1 - b**2) * (mp.pi / 2 + mp.asin(b)))
        return mp.quad(lambda th: dens(th) * mp.cos(th) ** m, [-mp.pi, 0, mp.pi])

    data["moment"] = [[d, m, rho, f(moment(d, m, rho))] for d, m, rho in [
        (1, 1, 0.6), (1, 2, 0.3), (2, 1, 0.5), (2, 3, -0.4), (3, 1, 0.5), (3, 2, 0.4), (5, 3, 0.7), (10, 2, -0.8)]]
    data["moment_d2_quadrature"] = [[2, m, rho, f(moment_quad(2, m, rho))] for m, rho in [
        (1, 0.5), (2, 0.3), (3, -0.4), (4, 0.8)]]

    data["c_of_p"] = [[p, f(2 * mp.pi * p * (1 - p) * mp.exp((mp.sqrt(2) * mp.erfinv(2 * mp.mpf(p) - 1)) ** 2))]
                      for p in (0.1, 0.3, 0.5, 0.7, 0.9)]

    thr = {}
    for p in (0.3, 0.45, 0.7):
        t, al = threshold_alphas(p, 40)
        a0 = al[0]
        psi = [mp.mpf(0)] + [v / (1 - a0) for v in al[1:]]
        beta = mp_revert(psi, 25)
        thr[str(p)] = {"alpha": [f(v) for v in al[:21]], "beta": [f(v) for v in beta[1:26]]}
    data["threshold"] = thr
    data["h_p"] = [[p, rho, f(h_p_direct(mp.mpf(p), rho))]
                   for p in (0.3, 0.5, 0.7) for rho in (-0.8, -0.3, 0.0, 0.4, 0.9, 1.0)]

    OUT.write_text(json.dumps(data, indent=1) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
