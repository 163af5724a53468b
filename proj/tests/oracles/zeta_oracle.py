"""Reference values for tests/test_zeta.cpp and the acceptance run.

R(x) from mpmath; pi(x) from a numpy sieve; zero corrections through
scipy's Ei on the bundled zero heights.
"""
import numpy as np
import mpmath
from scipy.special import expi

mpmath.mp.dps = 30
zs = np.loadtxt(__file__.rsplit("/", 2)[0] + "/../data/zeta_zeros.txt")


def mobius(n):
    r, p, m = 1, 2, n
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            r = -r
        p += 1
    return -r if m > 1 else r


for x in (1000, 10**4, 10**6):
    print(f"R({x}) = {mpmath.nstr(mpmath.riemannr(x), 20)}")

N = 10**6
s = np.ones(N + 1, bool)
s[:2] = False
for i in range(2, 1001):
    if s[i]:
        s[i * i :: i] = False
pi = np.cumsum(s)

xs = np.unique(np.round(np.geomspace(1e3, 1e6, 50)).astype(int))
Rs = np.array([float(mpmath.riemannr(int(x))) for x in xs])


def correction(x, T):
    w = (0.5 + 1j * zs[:T]) * np.log(x)
    return sum(mobius(n) / n * np.sum(2 * expi(w / n).real) for n in range(1, int(np.log2(x)) + 1) if mobius(n))


for T in (0, 50, 100, 300, 1000):
    est = np.array([Rs[i] - (correction(x, T) if T else 0.0) for i, x in enumerate(xs)])
    print(f"T={T}: mean |err| = {np.mean(np.abs(est - pi[xs])):.6f}")
