"""Independent high-precision reference values for the unit and acceptance tests.

Run with: python3 tests/oracles/oracle_values.py
Uses mpmath only; nothing here shares code with the C++ implementation.
"""
import mpmath as mp

mp.mp.dps = 40


def omega(theta, eps):
    return theta * (1 - theta) * mp.e ** (-(1 - theta) / eps) / (2 * eps ** 2)


def hs(x):
    return -mp.sign(x) * mp.sqrt(1 + (x - 1) * mp.e ** x)


def f1(y, e1):
    return y * mp.sqrt(1 - (1 / e1 + 1) * mp.e ** (-1 / e1) / y ** 2)


def F1(r1, y, e1, c):
    f = f1(y, e1)
    return mp.mpf(1) / 2 / y / e1 ** 2 * mp.e ** (-1 / e1) * (f - c) / (f - c * r1)


def report(name, value):
    print(f"{name:40s} {mp.nstr(value, 20)}")


report("omega(0.5, 0.1)", omega(mp.mpf("0.5"), mp.mpf("0.1")))
report("vf eta' (0.5,0.2) c=1.5 eps=0.1", mp.mpf("1.5") * mp.mpf("0.2") - omega(mp.mpf("0.5"), mp.mpf("0.1")))
scale = mp.mpf("0.01") / (1 + mp.e ** (mp.mpf("-0.5") / mp.mpf("0.1")) / 2)
report("normalized (0.5,0.3) c=1 eps=0.1 d0", mp.mpf("0.3") * scale)
report("normalized (0.5,0.3) c=1 eps=0.1 d1", (mp.mpf("0.3") - omega(mp.mpf("0.5"), mp.mpf("0.1"))) * scale)
report("k2 eta' (-1,1) c=1 eps=0.1", -mp.e ** -1 / 2 + mp.mpf("0.1") * (1 + mp.e ** -1 / 2))
report("hs(-1)", hs(mp.mpf(-1)))
report("hs(-12)", hs(mp.mpf(-12)))
report("hs(-16)", hs(mp.mpf(-16)))
report("1 - hs(-12)", 1 - hs(mp.mpf(-12)))
report("1.5 - hs(-12)", mp.mpf("1.5") - hs(mp.mpf(-12)))
report("F1_chart(0,1,0.5,1)", F1(0, 1, mp.mpf("0.5"), 1))
report("slow eta K=1 (0.5,0.1,c=2)", omega(mp.mpf("0.5"), mp.mpf("0.1")) / 2)

I = mp.quad(lambda x: 1 - hs(x), [-mp.inf, -20, -5, -1, 0])
report("int_{-inf}^0 (1-hs)", I)
report("I - 1", I - 1)
report("cbar_linear(0.05)", 1 + (I - 1) * mp.mpf("0.05"))
report("cbar_linear(0.01)", 1 + (I - 1) * mp.mpf("0.01"))


def b_eps(delta, sign):
    d = mp.mpf(delta)
    inner = mp.quad(lambda s: s ** -4 * mp.e ** (-1 / s) / f1(1, s), [0, d / 4, d / 2, d])
    outer = mp.quad(lambda s: s ** -2 * f1(1, s), [d, 1, 10, 100, mp.inf])
    return 1 + (-f1(1, d) / d + sign * inner / 2 + outer)


for delta in ("0.1", "0.2", "0.5"):
    report(f"b_eps corrected (-1/2 int) d={delta}", b_eps(delta, -1))
    report(f"b_eps as printed (+1/2 int) d={delta}", b_eps(delta, +1))

report("int_0^inf s^-4 e^-1/s / 2", mp.quad(lambda s: s ** -4 * mp.e ** (-1 / s) / 2, [0, 1, mp.inf]))
