"""Reference values for tests/test_special.cpp (mpmath, 30 digits)."""
from mpmath import mp, mpc, hyp1f1, hyperu, gamma, digamma, ei, mpf

mp.dps = 30

def show(name, v):
    v = mpc(v)
    print(f"{name}: {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")

a = mpc(0.75, -0.25)
show("M(a,3/2,4i)", hyp1f1(a, 1.5, mpc(0, 4)))
show("M(a,3/2,i)", hyp1f1(a, 1.5, mpc(0, 1)))
show("U(a,3/2,i)", hyperu(a, 1.5, mpc(0, 1)))
show("M(a,3/2,40i)", hyp1f1(a, 1.5, mpc(0, 40)))
show("U(a,3/2,40i)", hyperu(a, 1.5, mpc(0, 40)))
show("M(a,3/2,1000i)", hyp1f1(a, 1.5, mpc(0, 1000)))
show("U(a,3/2,1000i)", hyperu(a, 1.5, mpc(0, 1000)))
show("M(a,3/2,10000i)", hyp1f1(a, 1.5, mpc(0, 10000)))
b = mpc(0.5, 0.25)
show("M(b,1,-9i)", hyp1f1(b, 1, mpc(0, -9)))
show("U(b,1,-9i)", hyperu(b, 1, mpc(0, -9)))
show("U(b,1,-49i)", hyperu(b, 1, mpc(0, -49)))
show("M(b,1,-49i)", hyp1f1(b, 1, mpc(0, -49)))
show("gamma(0.25-0.25i)", gamma(mpc(0.25, -0.25)))
show("gamma(-1.5+2i)", gamma(mpc(-1.5, 2)))
show("digamma(0.75-0.25i)", digamma(mpc(0.75, -0.25)))
show("digamma(-2.3+0.1i)", digamma(mpc(-2.3, 0.1)))
show("Ei(2+3i)", ei(mpc(2, 3)))
show("Ei(0.5+30i)", ei(mpc(0.5, 30)))
show("Ei(3.45-97.6i)", ei(mpc(3.45, -97.6)))
show("Ei(60+5i)", ei(mpc(60, 5)))
show("Ei(-7+0.5i)", ei(mpc(-7, 0.5)))
show("Ei(25)", ei(mpf(25)))
show("Ei(-3)", ei(mpf(-3)))
