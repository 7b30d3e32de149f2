"""Closed-form right-hand sides at fixed parameters, computed with mpmath.

A field point (m, mu) has G(m, mu) = Gamma(m/2 + mu) / Gamma(1 + m/2 - mu);
sums of points add labels and exponents.
"""
import mpmath as mp

mp.mp.dps = 40


def G(p):
    m, mu = p
    return mp.gamma(mp.mpf(m) / 2 + mu) / mp.gamma(1 + mp.mpf(m) / 2 - mu)


def add(*ps):
    return (sum(p[0] for p in ps), sum(p[1] for p in ps))


def neg(p):
    return (-p[0], -p[1])


def chain(z, w):
    v = mp.mpc(1)
    for zk in z:
        for wj in w:
            v *= G(add(zk, wj))
    return v / G(add(*z, *w))


def open_chain(z):
    v = mp.mpc(1)
    for j in range(len(z)):
        for k in range(j + 1, len(z)):
            v *= G(add(z[j], z[k]))
    return v / G(add(*z))


def g3(z, w):
    v = mp.mpc(1)
    for zk in z:
        for wj in w:
            v *= G(add(zk, wj)) * G(add(zk, neg(wj)))
    for k in range(len(z)):
        for m in range(k + 1, len(z)):
            v /= G(add(z[k], z[m]))
    return v


c = mp.mpc
cases = {
    "chain2": chain([(1, c(0.12, 0.3)), (-2, c(0.2, -0.1))], [(0, c(0.15, 0.2)), (2, c(0.1, 0))]),
    "chain2_half": chain([(1.5, c(0.12, 0.3)), (-0.5, c(0.2, -0.1))], [(0.5, c(0.15, 0.2)), (2.5, c(0.1, 0))]),
    "chain3": chain([(1, c(0.1, 0.3)), (0, c(0.12, -0.2)), (-1, c(0.08, 0.1))],
                    [(2, c(0.1, 0)), (0, c(0.15, 0.25)), (-2, c(0.07, -0.4))]),
    "open2": open_chain([(1, c(0.12, 0.3)), (-2, c(0.2, -0.1)), (0, c(0.15, 0.2)), (2, c(0.1, 0))]),
    "open3": open_chain([(1, c(0.1, 0.3)), (0, c(0.12, -0.2)), (-1, c(0.08, 0.1)),
                         (2, c(0.1, 0)), (0, c(0.15, 0.25)), (-2, c(0.07, -0.4))]),
    "g3_3": g3([(1, c(0.2, 0.3)), (0, c(0.25, -0.2)), (-2, c(0.3, 0.1))], [(1, c(0.03, 0.2)), (0, c(-0.02, -0.3))]),
}
for k, v in cases.items():
    print(f"{k}: ({mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)})")
