"""Print reference values of the principal log-gamma for the Rust test table.

Usage: python3 tools/loggamma_table.py > table.txt
"""
import random
import mpmath as mp

mp.mp.dps = 40
random.seed(20240517)
pts = []
for _ in range(80):
    r = 50 * random.random() ** 0.7
    th = random.uniform(-mp.pi, mp.pi)
    z = mp.mpc(float(r * mp.cos(th)), float(r * mp.sin(th)))
    if abs(z.imag) < 1e-3 and z.real < 0.5:
        continue
    pts.append(z)
pts += [mp.mpc(0.3, 1e-6), mp.mpc(-7.25, 0.5), mp.mpc(-7.25, -0.5), mp.mpc(0.5, 40), mp.mpc(-40.5, 3)]
for z in pts:
    v = mp.loggamma(z)
    print("    (%r, %r, %r, %r)," % (float(z.real), float(z.imag), float(v.real), float(v.imag)))
