"""High-precision reference values for the extension constants.

Run with mpmath; the printed values are frozen into tests/test_orders.cpp
and the acceptance suite.
"""
import mpmath as mp

mp.mp.dps = 40


def d_const(s):
    s = mp.mpf(s)
    return mp.gamma(1 - s) / (2 ** (2 * s - 1) * mp.gamma(s))


def c_pv(s):
    s = mp.mpf(s)
    return 2 ** (2 * s) * mp.gamma(mp.mpf(1) / 2 + s) / (mp.sqrt(mp.pi) * abs(mp.gamma(-s)))


def poisson_c(s):
    s = mp.mpf(s)
    return mp.gamma((1 + 2 * s) / 2) / (mp.sqrt(mp.pi) * mp.gamma(s))


if __name__ == "__main__":
    for k in range(1, 10):
        s = mp.mpf(k) / 10
        print(f"d({float(s):.1f}) = {mp.nstr(d_const(s), 20)}")
    print("d(0.25) =", mp.nstr(d_const("0.25"), 20))
    print("d(0.75) =", mp.nstr(d_const("0.75"), 20))
    for s in ["0.25", "0.5", "0.75"]:
        print(f"C_pv({s}) =", mp.nstr(c_pv(s), 20))
    # d(s+h)-d(s-h) over 2h at s=0.3 (continuity oracle)
    h = mp.mpf("1e-6")
    print("dd/ds(0.3) =", mp.nstr((d_const(mp.mpf("0.3") + h) - d_const(mp.mpf("0.3") - h)) / (2 * h), 20))
