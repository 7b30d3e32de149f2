"""Reference values for the separated-variable kernels, computed with mpmath
directly from the closed forms (independent of the Rust implementation).

A lattice point (n, nu) is x = nu - i n/2, xbar = nu + i n/2. A field point is
given by its holomorphic and antiholomorphic parts (h, hb), and
a(h, hb) = Gamma(1 - hb) / Gamma(h). (-1)^q is exp(i pi q).
"""
import mpmath as mp

mp.mp.dps = 40
I = mp.mpc(0, 1)


def lat(n, nu):
    return (mp.mpf(nu) - I * mp.mpf(n) / 2, mp.mpf(nu) + I * mp.mpf(n) / 2)


def a(h, hb):
    return mp.gamma(1 - hb) / mp.gamma(h)


def spin(n, mu):
    return (mp.mpf(n) / 2 + mu, -mp.mpf(n) / 2 + mu)


def a_one_minus_i(y):
    return a(1 - I * y[0], 1 - I * y[1])


def add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def s_pm(s, x, sign):
    return (s[0] + sign * I * x[0], s[1] + sign * I * x[1])


def b_kernel(x, xp, s):
    return (mp.pi ** 2 * a_one_minus_i(add(xp, x)) * a_one_minus_i(sub(xp, x))
            * a(*s_pm(s, x, 1)) * a(*s_pm(s, x, -1)) / a(*s_pm(s, xp, -1)) ** 2)


def bracket(x):
    return x[0] * x[1]


def mu_b(xs):
    n = len(xs) + 1
    v = mp.mpf(1)
    for k in range(len(xs)):
        for j in range(k + 1, len(xs)):
            v *= bracket(sub(xs[k], xs[j]))
    return v * 2 * mp.pi ** (-n * n) / (2 * mp.pi) ** n / mp.factorial(len(xs))


def s_b(xs, xps, s, s_label):
    n = len(xs) + 1
    v = mp.exp(I * mp.pi * s_label * n * (n - 1)) * mp.pi ** (mp.mpf(n * (3 * n - 1)) / 2)
    for x in xs:
        v *= (a(*s_pm(s, x, 1)) * a(*s_pm(s, x, -1))) ** n
    for xp in xps:
        v /= a(*s_pm(s, xp, -1)) ** n
    for x in xs:
        for xp in xps:
            v *= a_one_minus_i(add(xp, x)) * a_one_minus_i(sub(xp, x))
    for k in range(len(xps)):
        for j in range(k + 1, len(xps)):
            v /= a_one_minus_i(add(xps[k], xps[j]))
    return v


def show(name, v):
    v = mp.mpc(v)
    print(f"{name}: ({mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)})")


if __name__ == "__main__":
    s0 = spin(0, mp.mpf(0.5) + 0.3 * I)
    s1 = spin(1, mp.mpf(0.5) - 0.1 * I)
    show("b_kernel x=(1,0.37) x'=(-2,0.21) s=(0,1/2+0.3i)", b_kernel(lat(1, 0.37), lat(-2, 0.21), s0))
    show("b_kernel x=(0,-0.45) x'=(3,0.8) s=(1,1/2-0.1i)", b_kernel(lat(0, -0.45), lat(3, 0.8), s1))
    show("mu_b x=(0,0.3),(1,-0.2)", mu_b([lat(0, 0.3), lat(1, -0.2)]))
    show("s_b N=2 x=(1,0.25) x'=(0,-0.4) s=(0,1/2+0.3i)", s_b([lat(1, 0.25)], [lat(0, -0.4)], s0, 0))
    show("s_b N=2 x=(-1,0.6) x'=(2,0.15) s=(1,1/2-0.1i)", s_b([lat(-1, 0.6)], [lat(2, 0.15)], s1, 1))
