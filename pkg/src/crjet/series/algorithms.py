"""Implicit functions, Weierstrass division and related series algorithms."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .core import (
    Precision,
    SeriesError,
    TruncatedSeries,
    _layout,
    _unpack,
    invert_unit,
    mul_trunc,
    pack,
    substitute,
)
from .rings import RingError


def solve_matrix(M, rhs):
    """Solve ``M x = rhs`` over a ring by elimination with unit pivots.

    ``M`` is a list of rows of ring elements or series; ``rhs`` a list of the
    same kind (or a list of such lists for several right-hand sides).
    """
    n = len(M)
    A = [list(r) for r in M]
    multi = isinstance(rhs[0], list)
    b = [list(r) if multi else [r] for r in rhs]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if _unit(A[r][col]):
                piv = r
                break
        if piv is None:
            raise RingError("singular matrix at the origin")
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        inv = _inverse(A[col][col])
        A[col] = [x * inv for x in A[col]]
        b[col] = [x * inv for x in b[col]]
        for r in range(n):
            if r == col:
                continue
            f = A[r][col]
            if _nonzero(f):
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
                b[r] = [x - f * y for x, y in zip(b[r], b[col])]
    return [r if multi else r[0] for r in b]


def _unit(x) -> bool:
    if isinstance(x, TruncatedSeries):
        c = x.constant_term()
        return bool(c) and c.is_unit()
    return bool(x) and x.is_unit()


def _nonzero(x) -> bool:
    return bool(x)


def _inverse(x):
    if isinstance(x, TruncatedSeries):
        return invert_unit(x)
    return x.inverse()


def solve_implicit(G, unknowns, max_rounds: int | None = None):
    """Solve ``G(x, u) = 0`` for ``u = u(x)`` with ``u(0) = 0``.

    ``G`` is a list of series over variables containing ``unknowns``; the
    remaining variables are ``x``.  Degree-graded fixed-point iteration with
    the inverse Jacobian at the origin.  Returns the list of series ``u_j(x)``
    truncated to the projection of G's precision onto ``x``.
    """
    G = list(G)
    unknowns = list(unknowns)
    if len(G) != len(unknowns):
        raise SeriesError("need as many equations as unknowns")
    allv = G[0].vars
    ring = G[0].ring
    xvars = tuple(v for v in allv if v not in unknowns)
    for g in G:
        if g.vars != allv:
            raise SeriesError("equations must share variables")
        if g.constant_term():
            raise SeriesError("G(0, 0) must vanish")
    p = G[0].prec
    caps = None
    if p.caps is not None:
        cm = dict(zip(allv, p.caps))
        caps = tuple(cm[v] for v in xvars)
    xprec = Precision(p.degree, caps)
    J = []
    for g in G:
        row = []
        for u in unknowns:
            e = [0] * len(allv)
            e[allv.index(u)] = 1
            row.append(g.coeff(e))
        J.append(row)
    ident = [[ring.one() if i == j else ring.zero() for j in range(len(G))] for i in range(len(G))]
    Jinv = solve_matrix(J, ident)
    zero = TruncatedSeries.zero(xvars, xprec, ring)
    u = [zero for _ in unknowns]
    if max_rounds is None:
        if xprec.degree is not None:
            max_rounds = xprec.degree + 2
        elif caps is not None and all(c is not None for c in caps):
            max_rounds = sum(caps) + 2
        else:
            max_rounds = 10 ** 6
    if xprec.degree is not None:
        # after round r the solution is right through degree r, so the
        # residual only has to be formed one degree higher
        for r in range(1, xprec.degree + 1):
            pr = Precision(r, caps)
            pg = Precision(r, p.caps)
            assign = {v: ui.truncate(pr) for v, ui in zip(unknowns, u)}
            res = [substitute(g.truncate(pg), assign, xvars, pr) for g in G]
            if any(not x.is_zero() for x in res):
                step = [sum_scaled(Jinv[i], res, zero.truncate(pr)) for i in range(len(u))]
                u = [ui - s.relabel_precision(xprec) for ui, s in zip(u, step)]
    for _ in range(max_rounds):
        assign = dict(zip(unknowns, u))
        res = [substitute(g, assign, xvars, xprec) for g in G]
        if all(r.is_zero() for r in res):
            return u
        u = [ui - sum_scaled(Jinv[i], res, zero) for i, ui in enumerate(u)]
    raise SeriesError("implicit solve did not converge within the truncation")


def sum_scaled(coeffs, series, zero):
    acc = zero
    for c, s in zip(coeffs, series):
        if c:
            acc = acc + s.scale(c)
    return acc


# ---------------------------------------------------------------------------
# Weierstrass division
# ---------------------------------------------------------------------------

def z1_order(B: TruncatedSeries) -> int | None:
    """Order in the first variable of ``B(z1, 0, ..., 0)``, None if that vanishes."""
    nv = B.nvars
    best = None
    for k in B.terms:
        e = _unpack(k, nv)
        if all(x == 0 for x in e[1:]):
            if best is None or e[0] < best:
                best = e[0]
    return best


def _shift_down(f: TruncatedSeries, m: int, keep_low: bool):
    """Split ``f`` by first-variable degree: returns the quotient by ``z1^m`` or the low part."""
    nv = f.nvars
    _, shifts = _layout(nv)
    degshift = _layout(nv)[0]
    step = (m << shifts[0]) + (m << degshift)
    mask = (1 << 16) - 1
    out = {}
    for k, c in f.terms.items():
        e1 = (k >> shifts[0]) & mask
        if keep_low:
            if e1 < m:
                out[k] = c
        elif e1 >= m:
            out[k - step] = c
    if keep_low:
        return TruncatedSeries._raw(f.vars, out, f.prec, f.ring)
    return TruncatedSeries._raw(f.vars, out, f.prec.lower(m, 0), f.ring)


@dataclass(frozen=True)
class Division:
    quotient: TruncatedSeries
    remainder: dict  # p -> series in z' (the variables after the first)
    order: int


def weierstrass_divide(F: TruncatedSeries, B: TruncatedSeries, j: int = 1) -> Division:
    """``F = Q * B**j + sum_{p<K} r_p(z') z1**p`` with ``K = j * ord_{z1} B(z1, 0)``.

    ``B`` must have no terms of total degree below its pure-``z1`` order
    (which is what :func:`regularize` produces), so that the quotient is
    determined to degree ``D - K``.
    """
    if F.vars != B.vars:
        raise SeriesError("F and B must share variables")
    m = z1_order(B)
    if m is None:
        raise SeriesError("B is not z1-regular; apply regularize first")
    if B.order() < m:
        raise SeriesError("B has terms of degree below its z1-order; apply regularize first")
    G = B ** j if j != 1 else B
    K = m * j
    if F.prec.degree is None:
        raise SeriesError("F must carry a finite truncation degree")
    P = _shift_down(G, K, keep_low=True)
    E = _shift_down(G, K, keep_low=False)
    qprec = F.prec.lower(K, 0)
    Einv = invert_unit(E.truncate(qprec)) if E.prec != qprec else invert_unit(E)
    # Q~ = q(F) - q(Q~ E^-1 P): each round gains one degree since ord P >= K + 1 in z'
    EP = mul_trunc(Einv.relabel_precision(F.prec), P, F.prec)
    qF = _shift_down(F, K, keep_low=False)
    Qt = TruncatedSeries.zero(F.vars, qprec, F.ring)
    for _ in range((F.prec.degree or 0) + 2):
        prod = mul_trunc(Qt.relabel_precision(F.prec), EP, F.prec)
        new = qF - _shift_down(prod, K, keep_low=False).relabel_precision(qprec)
        if new.terms == Qt.terms:
            break
        Qt = new
    else:
        raise SeriesError("Weierstrass iteration did not stabilize")
    Q = Qt * Einv
    low = _shift_down(F, K, keep_low=True) - _shift_down(
        mul_trunc(Qt.relabel_precision(F.prec), EP, F.prec), K, keep_low=True)
    nv = F.nvars
    rem = {}
    rest_vars = F.vars[1:]
    caps = None if F.prec.caps is None else F.prec.caps[1:]
    for p in range(K):
        terms = {}
        for k, c in low.terms.items():
            e = _unpack(k, nv)
            if e[0] == p:
                terms[pack(e[1:])] = c
        d = None if F.prec.degree is None else F.prec.degree - p
        rem[p] = TruncatedSeries._raw(rest_vars, terms, Precision(d, caps), F.ring)
    return Division(Q, rem, K)


def linear_change(f: TruncatedSeries, L, names=None) -> TruncatedSeries:
    """Substitute ``z_i -> sum_k L[i][k] z_k`` for the variables ``names`` (default: all)."""
    names = list(names or f.vars)
    assign = {}
    for i, v in enumerate(names):
        acc = TruncatedSeries.zero(f.vars, f.prec, f.ring)
        for k, w in enumerate(names):
            if L[i][k]:
                acc = acc + TruncatedSeries.variable(f.vars, w, f.prec, f.ring, coeff=f.ring.const(L[i][k]))
        assign[v] = acc
    return substitute(f, assign, f.vars, f.prec)


def regularize(B: TruncatedSeries, search: int = 3):
    """Find an invertible integer linear change ``z -> L z`` making ``B`` z1-regular.

    Returns ``(L, B o L)`` where the transformed series has pure-``z1`` order
    equal to its total order.  Changes are of the form ``z_k -> z_k + c_k z_1``.
    """
    if B.is_zero():
        raise SeriesError("B vanishes to the truncation degree")
    nv = B.nvars
    ident = [[1 if i == j else 0 for j in range(nv)] for i in range(nv)]
    m = B.order()
    if z1_order(B) == m:
        return ident, B
    rng = [0] + [s * c for c in range(1, search + 1) for s in (1, -1)]
    for cs in product(rng, repeat=nv - 1):
        L = [row[:] for row in ident]
        for k, c in enumerate(cs, start=1):
            L[k][0] = c
        nb = linear_change(B, L)
        if z1_order(nb) == m:
            return L, nb
    raise SeriesError("no regularizing change found in the search box")


def invert_integer_matrix(L):
    from .rings import GaussianRational
    n = len(L)
    M = [[GaussianRational(x) for x in row] for row in L]
    ident = [[GaussianRational(1 if i == j else 0) for j in range(n)] for i in range(n)]
    return solve_matrix(M, ident)


# ---------------------------------------------------------------------------
# meromorphic bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeromorphicElement:
    """``numerator / A**pole_order`` for a fixed distinguished series ``A``."""

    numerator: TruncatedSeries
    pole_order: int
    A: TruncatedSeries

    def normalized(self) -> "MeromorphicElement":
        num, k = self.numerator, self.pole_order
        if self.A.nvars == 1:
            while k > 0 and not num.is_zero():
                try:
                    d = weierstrass_divide(num, self.A, 1)
                except SeriesError:
                    break
                if any(not r.is_zero() for r in d.remainder.values()):
                    break
                num, k = d.quotient, k - 1
        return MeromorphicElement(num, k, self.A)

    def _lift(self, k: int) -> TruncatedSeries:
        return self.numerator * (self.A ** (k - self.pole_order)) if k > self.pole_order else self.numerator

    def __mul__(self, o: "MeromorphicElement") -> "MeromorphicElement":
        p = self.numerator.prec.degree
        q = o.numerator.prec.degree
        a, b = self.numerator, o.numerator
        if p != q:
            d = min(p, q)
            a, b = a.truncate_degree(d), b.truncate_degree(d)
        return MeromorphicElement(a * b, self.pole_order + o.pole_order, self.A)

    def __add__(self, o: "MeromorphicElement") -> "MeromorphicElement":
        k = max(self.pole_order, o.pole_order)
        a, b = self._lift(k), o._lift(k)
        d = min(a.prec.degree, b.prec.degree)
        return MeromorphicElement(a.truncate_degree(d) + b.truncate_degree(d), k, self.A)

    def scale(self, c) -> "MeromorphicElement":
        return MeromorphicElement(self.numerator.scale(c), self.pole_order, self.A)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def holomorphic_value(self) -> TruncatedSeries:
        """The element as a series, when the pole cancels exactly."""
        m = self.normalized()
        if m.pole_order:
            raise SeriesError("element has a genuine pole along A = 0")
        return m.numerator
