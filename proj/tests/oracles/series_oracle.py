"""Symbolic oracle for the slow-manifold coefficient recursion.

Prints P_k(theta, eps) with F_k = P_k / c^(2k-1) and checks the graph
invariance residual against the (K+1)-th term at the sample points used by
the unit tests. Independent of the C++ implementation (sympy + mpmath).
"""
import sympy as sp
import mpmath as mp

th, ep, c = sp.symbols("theta epsilon c", positive=True)
K_MAX = 8
F = {1: th * (1 - th) / c}
for k in range(2, K_MAX + 2):
    F[k] = sp.expand(sum((sp.diff(F[j], th) * ep + j * F[j]) * F[k - j] for j in range(1, k)) / c)

for k in range(1, K_MAX + 1):
    P = sp.Poly(sp.expand(F[k] * c ** (2 * k - 1)), th, ep)
    coeffs = P.coeffs()
    print(f"P_{k}: max|coeff| = {max(abs(x) for x in coeffs)}, terms = {len(coeffs)}")
print("F2 check:", sp.simplify(F[2] - th * (1 - th) * (th * (1 - th) + ep * (1 - 2 * th)) / c ** 3) == 0)

mp.mp.dps = 50


def term(k, t, e, cv):
    Fk = F[k].subs({th: t, ep: e, c: cv})
    return mp.mpf(2) ** -k * mp.mpf(sp.N(Fk, 60)) * e ** (-3 * k + 1) * mp.e ** (-k * (1 - t) / e)


def hK(t, e, cv, K):
    return sum(term(k, t, e, cv) for k in range(1, K + 1))


for cv in (1, 2):
    for e in ("0.05", "0.1"):
        for t in ("0.2", "0.5", "0.7"):
            for K in (1, 2, 3):
                tt, ee = mp.mpf(t), mp.mpf(e)
                h = hK(tt, ee, cv, K)
                dh = mp.diff(lambda x: hK(x, ee, cv, K), tt)
                om = tt * (1 - tt) * mp.e ** (-(1 - tt) / ee) / (2 * ee ** 2)
                res = abs(cv * h - om - h * dh)
                nxt = abs(term(K + 1, tt, ee, cv))
                print(f"c={cv} eps={e} theta={t} K={K} residual/|t_K+1| = {mp.nstr(res / nxt, 6)}")
