"""Brute-force infinitesimal automorphisms of a rigid tube-like hypersurface.

Solves for holomorphic vector fields X = f d/dz + g d/dw with polynomial
f, g of bounded degree, vanishing at 0, such that Re X(rho) = 0 on
Im w = F(z, conj z).  Pure linear algebra in sympy; shares no code with crjet.
"""
import itertools

import sympy as sp


def isotropy_dimension(F, degree=2):
    x, y, u = sp.symbols("x y u", real=True)
    z = x + sp.I * y
    zb = x - sp.I * y
    Fxy = sp.expand(F(z, zb))
    w = u + sp.I * Fxy
    monos = [(a, b) for a, b in itertools.product(range(degree + 1), repeat=2) if 0 < a + b <= degree]
    unknowns = []
    f = 0
    g = 0
    for comp in ("f", "g"):
        for a, b in monos:
            re, im = sp.symbols(f"{comp}_{a}{b}_re {comp}_{a}{b}_im", real=True)
            unknowns += [re, im]
            term = (re + sp.I * im) * z ** a * w ** b
            if comp == "f":
                f += term
            else:
                g += term
    # rho = (w - conj w)/(2i) - F;  X rho = g/(2i) - f * dF/dz
    zs, zbs = sp.symbols("zs zbs")
    dFdz = sp.diff(F(zs, zbs), zs).subs({zs: z, zbs: zb})
    Xrho = g / (2 * sp.I) - f * dFdz
    cond = sp.expand(Xrho + sp.conjugate(Xrho))
    cond = sp.expand(sp.re(cond))
    poly = sp.Poly(cond, x, y, u)
    rows = []
    for c in poly.coeffs():
        rows.append([sp.diff(c, v) for v in unknowns])
    M = sp.Matrix(rows)
    return len(unknowns) - M.rank()
