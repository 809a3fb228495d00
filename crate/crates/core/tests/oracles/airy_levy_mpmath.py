"""Reference values computed with mpmath at 40 digits.

Airy-case scaled density: 2^(10/3) 3^(-3/2) A^(-10/3) sum_k l_k^2 e^(-z) U(-5/6, 4/3, z),
z = 4 l_k^3 / (27 A^2), l_k = |a_k| the Airy zeros.

One-sided stable law of index 2/3 from its Kummer representation
2^(4/3) / (3^(3/2) sqrt(pi) x^(7/3)) e^(-y) U(1/6, 4/3, y), y = 4/(27 x^2),
and its Laplace transform checked against exp(-s^(2/3)).
"""
from mpmath import mp, mpf, airyaizero, hyperu, exp, sqrt, pi, quad, inf

mp.dps = 40


def airy_pdf(a):
    a = mpf(a)
    pref = mpf(2) ** (mpf(10) / 3) / (mpf(3) ** mpf(1.5) * a ** (mpf(10) / 3))
    total = mpf(0)
    k = 1
    while True:
        lam = -airyaizero(k)
        z = 4 * lam**3 / (27 * a * a)
        term = lam**2 * exp(-z) * hyperu(mpf(-5) / 6, mpf(4) / 3, z)
        total += term
        if abs(term) < mpf(10) ** -45 * abs(total) and k > 5:
            break
        k += 1
    return pref * total


def levy(x):
    x = mpf(x)
    y = 4 / (27 * x * x)
    return mpf(2) ** (mpf(4) / 3) / (mpf(3) ** mpf(1.5) * sqrt(pi) * x ** (mpf(7) / 3)) * exp(-y) * hyperu(mpf(1) / 6, mpf(4) / 3, y)


for a in ("0.5", "1", "2", "3"):
    print(f"airy_pdf({a}) = {mp.nstr(airy_pdf(a), 25)}")
for x in ("0.05", "0.5", "10"):
    print(f"levy({x}) = {mp.nstr(levy(x), 25)}")
mp.dps = 20
print("levy mass =", mp.nstr(quad(levy, [0, 0.1, 1, 10, inf]), 15))
