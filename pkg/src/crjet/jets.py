"""Jet groups, the map eta, restriction to the complexification and reflection identities."""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement
from math import factorial

from .dsl import Coords
from .hypersurface import NormalForm
from .series import (
    NUMERIC_RING,
    Precision,
    SeriesTuple,
    SymbolicRing,
    TruncatedSeries,
    relabel_series,
    solve_matrix,
    substitute,
)
from gmpy2 import mpq

from .series.rings import GaussianRational, RingError
from .series.serialize import coeff_from_json, coeff_to_json


class JetError(ValueError):
    pass


def _monomials(n: int, k: int):
    """Exponent tuples (alpha, j) of the (z, w) monomials of degree 1..k, graded order."""
    out = []
    for d in range(1, k + 1):
        level = set()
        for combo in combinations_with_replacement(range(n + 1), d):
            e = [0] * (n + 1)
            for v in combo:
                e[v] += 1
            level.add(tuple(e))
        out.extend(sorted(level, reverse=True))
    return out


@lru_cache(maxsize=None)
def _labels(n: int, k: int, g0: bool):
    labels = []
    for comp in range(n + 1):
        for e in _monomials(n, k):
            if g0 and comp == n and e[n] == 0:
                continue
            labels.append((comp, e))
    return tuple(labels)


def monomial_string(coords: Coords, e) -> str:
    parts = []
    for v, k in zip(coords.Z, e):
        if k:
            parts.append(f"{v}^{k}")
    return " ".join(parts)


def parse_monomial_string(coords: Coords, s: str):
    e = [0] * len(coords.Z)
    for tok in s.split():
        m = re.fullmatch(r"([A-Za-z]+\d*)(?:\^(\d+))?", tok)
        if not m or m.group(1) not in coords.Z:
            raise JetError(f"bad monomial {s!r}")
        e[coords.Z.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(e)


@dataclass(frozen=True)
class JetSpace:
    """Coordinates of G^k (or of the subgroup G^k_0 when ``g0``)."""

    n: int
    k: int
    g0: bool = False

    @property
    def labels(self):
        return _labels(self.n, self.k, self.g0)

    @property
    def coords(self) -> Coords:
        return Coords(self.n)

    def __len__(self):
        return len(self.labels)

    def name(self, label) -> str:
        comp, e = label
        idx = "_".join(str(x) for x in e)
        if comp == self.n:
            return f"mu_{idx}"
        if self.n == 1:
            return f"lam_{idx}"
        return f"lam{comp + 1}_{idx}"

    def names(self):
        return [self.name(lb) for lb in self.labels]

    def symbolic_ring(self) -> SymbolicRing:
        return SymbolicRing(self.names())


class JetGroupElement:
    """An invertible k-jet at 0, stored by its derivative coordinates.

    ``values[(comp, e)]`` is ``d^e H_comp (0)`` for every monomial of degree
    1..k; components ``0..n-1`` are the lambdas, component ``n`` is mu.
    """

    __slots__ = ("n", "k", "values", "ring")

    def __init__(self, n, k, values, ring=NUMERIC_RING):
        self.n = n
        self.k = k
        self.ring = ring
        full = _labels(n, k, False)
        vals = {}
        for lb in full:
            v = values.get(lb)
            vals[lb] = ring.zero() if v is None else (ring.const(v) if _plain(v) else v)
        extra = set(values) - set(full)
        if extra:
            raise JetError(f"unknown jet coordinates {sorted(extra)[:3]}")
        self.values = vals

    # constructors -------------------------------------------------------------
    @classmethod
    def identity(cls, n, k, ring=NUMERIC_RING):
        vals = {}
        for c in range(n + 1):
            e = [0] * (n + 1)
            e[c] = 1
            vals[(c, tuple(e))] = ring.one()
        return cls(n, k, vals, ring)

    @classmethod
    def symbolic(cls, space: JetSpace, ring: SymbolicRing | None = None, conjugate=False):
        """Generic element of ``space`` with one ring variable per coordinate."""
        ring = ring or space.symbolic_ring()
        vals = {}
        for lb in space.labels:
            nm = space.name(lb)
            vals[lb] = ring.var(nm + "_bar" if conjugate else nm)
        return cls(space.n, space.k, vals, ring)

    # views -------------------------------------------------------------------------
    @property
    def in_G0(self) -> bool:
        return all(not v for (c, e), v in self.values.items() if c == self.n and e[self.n] == 0)

    def linear_part(self):
        n = self.n
        M = []
        for c in range(n + 1):
            row = []
            for v in range(n + 1):
                e = [0] * (n + 1)
                e[v] = 1
                row.append(self.values[(c, tuple(e))])
            M.append(row)
        return M

    def is_invertible(self) -> bool:
        try:
            solve_matrix(self.linear_part(), [[self.ring.one() if i == j else self.ring.zero()
                                               for j in range(self.n + 1)] for i in range(self.n + 1)])
        except RingError:
            return False
        return True

    def coordinates(self, space: JetSpace | None = None):
        space = space or JetSpace(self.n, self.k, False)
        return [self.values[lb] for lb in space.labels]

    def conj(self) -> "JetGroupElement":
        return JetGroupElement(self.n, self.k, {lb: v.conj() for lb, v in self.values.items()}, self.ring)

    def truncate(self, k: int) -> "JetGroupElement":
        return JetGroupElement(self.n, k, {lb: v for lb, v in self.values.items() if sum(lb[1]) <= k},
                               self.ring)

    def to_ring(self, ring) -> "JetGroupElement":
        return JetGroupElement(self.n, self.k, {lb: ring.const(v) for lb, v in self.values.items()}, ring)

    def polynomial_map(self, prec: Precision | None = None, variables=None) -> SeriesTuple:
        """Polynomial representative ``sum d^e H(0) Z^e / e!`` over ``variables``."""
        c = Coords(self.n)
        variables = tuple(variables or c.Z)
        prec = prec or Precision(self.k)
        comps = []
        for comp in range(self.n + 1):
            terms = {}
            for (cc, e), v in self.values.items():
                if cc != comp or not v:
                    continue
                terms[e] = v * inv_factorial(e)
            comps.append(TruncatedSeries(variables, terms, prec, self.ring))
        return SeriesTuple(tuple(comps))

    def __eq__(self, o):
        return isinstance(o, JetGroupElement) and self.n == o.n and self.k == o.k and self.values == o.values

    def __hash__(self):
        return hash((self.n, self.k))

    def __repr__(self):
        nz = {self._label_str(lb): str(v) for lb, v in self.values.items() if v}
        return f"JetGroupElement(k={self.k}, {nz})"

    def _label_str(self, lb):
        comp, e = lb
        head = "mu" if comp == self.n else ("lambda" if self.n == 1 else f"lambda{comp + 1}")
        return f"{head}[{monomial_string(Coords(self.n), e)}]"

    # json ----------------------------------------------------------------------------
    def to_json(self) -> dict:
        c = Coords(self.n)
        lam, mu = {}, {}
        for (comp, e), v in self.values.items():
            if not v:
                continue
            key = monomial_string(c, e)
            if comp == self.n:
                mu[key] = coeff_to_json(v)
            elif self.n == 1:
                lam[key] = coeff_to_json(v)
            else:
                lam.setdefault(key, [None] * self.n)[comp] = coeff_to_json(v)
        if self.n > 1:
            zero = GaussianRational(0).to_json()
            lam = {k: [x if x is not None else zero for x in v] for k, v in lam.items()}
        return {"order": self.k, "n": self.n, "lambda": lam, "mu": mu}

    @classmethod
    def from_json(cls, d, ring=NUMERIC_RING) -> "JetGroupElement":
        n = d.get("n", 1)
        c = Coords(n)
        vals = {}
        for key, v in d.get("lambda", {}).items():
            e = parse_monomial_string(c, key)
            if n == 1:
                vals[(0, e)] = coeff_from_json(v, ring)
            else:
                for comp, x in enumerate(v):
                    vals[(comp, e)] = coeff_from_json(x, ring)
        for key, v in d.get("mu", {}).items():
            vals[(n, parse_monomial_string(c, key))] = coeff_from_json(v, ring)
        return cls(n, d["order"], vals, ring)


def _plain(v) -> bool:
    return isinstance(v, (int, GaussianRational)) or type(v).__name__ == "mpq"


def _efact(e) -> int:
    m = 1
    for x in e:
        m *= factorial(x)
    return m


def inv_factorial(e) -> GaussianRational:
    return GaussianRational(mpq(1, _efact(e)))


def jet_from_map(H: SeriesTuple, k: int) -> JetGroupElement:
    """Derivative coordinates of a map given over ``(z.., w)`` (no checks)."""
    n = len(H) - 1
    vals = {}
    for comp, f in enumerate(H):
        for e in _monomials(n, k):
            cf = f.coeff(e)
            if cf:
                vals[(comp, e)] = cf * _efact(e)
    return JetGroupElement(n, k, vals, H[0].ring)


def eta(H: SeriesTuple, k: int) -> JetGroupElement:
    """k-jet of a map fixing 0 with invertible Jacobian."""
    for f in H:
        if f.constant_term():
            raise JetError("the map does not fix the origin")
    j = jet_from_map(H, k)
    if not j.is_invertible():
        raise JetError("the map has a singular Jacobian at 0")
    return j


def jet_compose(a: JetGroupElement, b: JetGroupElement) -> JetGroupElement:
    """``a . b``: the jet of (representative of a) o (representative of b)."""
    if a.k != b.k or a.n != b.n:
        raise JetError("jet orders differ")
    prec = Precision(a.k)
    A = a.polynomial_map(prec)
    B = b.polynomial_map(prec)
    assign = dict(zip(Coords(a.n).Z, B.components))
    C = A.substitute(assign, Coords(a.n).Z, prec)
    return jet_from_map(C, a.k)


def jet_invert(a: JetGroupElement) -> JetGroupElement:
    """Inverse jet: solves ``a(x) = y`` by fixed-point iteration on the nonlinear part."""
    if not a.is_invertible():
        raise JetError("singular linear part")
    n, k = a.n, a.k
    ring = a.ring
    Z = Coords(n).Z
    prec = Precision(k)
    L = a.linear_part()
    ident = [[ring.one() if i == j else ring.zero() for j in range(n + 1)] for i in range(n + 1)]
    Linv = solve_matrix(L, ident)
    A = a.polynomial_map(prec)
    lin = []
    for comp in range(n + 1):
        lin.append(sum((TruncatedSeries.variable(Z, Z[v], prec, ring, coeff=L[comp][v])
                        for v in range(n + 1) if L[comp][v]), TruncatedSeries.zero(Z, prec, ring)))
    nonlin = [f - l for f, l in zip(A, lin)]
    y = [TruncatedSeries.variable(Z, v, prec, ring) for v in Z]
    x = [TruncatedSeries.zero(Z, prec, ring) for _ in Z]
    for _ in range(k + 1):
        assign = dict(zip(Z, x))
        N = [substitute(f, assign, Z, prec) for f in nonlin]
        rhs = [yi - ni for yi, ni in zip(y, N)]
        x = [sum((rhs[j].scale(Linv[i][j]) for j in range(n + 1) if Linv[i][j]),
                 TruncatedSeries.zero(Z, prec, ring)) for i in range(n + 1)]
    return jet_from_map(SeriesTuple(tuple(x)), k)


# ---------------------------------------------------------------------------
# functions on the complexification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RestrictedFunction:
    """A function on the complexified hypersurface with ``tau = Qbar(chi, z, w)`` eliminated."""

    series: TruncatedSeries  # over (z, w, chi)

    def cr_derivative(self, j: int, coords: Coords) -> "RestrictedFunction":
        return RestrictedFunction(self.series.diff(coords.chis[j]))


def restrict_to_M(f: TruncatedSeries, nf: NormalForm, prec: Precision | None = None) -> RestrictedFunction:
    """Eliminate ``tau`` from ``f(z, w, chi, tau)`` via ``tau = Qbar(chi, z, w)``."""
    c = nf.coords
    V = c.zs + ("w",) + c.chis
    Qb = nf.Qbar()
    if prec is None:
        prec = Qb.prec if f.prec.exact else Precision(
            min(d for d in (f.prec.degree, Qb.prec.degree) if d is not None))
    Qb = Qb if Qb.prec == prec else Qb._clip(prec).relabel_precision(prec)
    if f.ring != Qb.ring:
        Qb = Qb.to_ring(f.ring)
    out = substitute(f, {"tau": Qb}, V, prec)
    return RestrictedFunction(out)


def reflection_coefficients(X, Y, fields, order: int, level_prec):
    """Iterated CR derivatives of the tangency identity.

    With ``P_beta`` the chi-derivatives of the target's conjugate defining
    function evaluated along the map, ``L^alpha Y = sum_beta c[alpha][beta] P_beta``.
    ``fields[j](h, level)`` applies the j-th CR field and truncates to the
    precision of ``level``; ``level_prec(level)`` is that precision.

    Returns ``(c, LY)`` as dicts keyed by multi-indices.
    """
    n = len(X)
    zero_idx = (0,) * n
    LX = [[fields[j](X[k], 1) for k in range(n)] for j in range(n)]
    one = TruncatedSeries.constant(Y.vars, Y.ring.one(), level_prec(0), Y.ring)
    c = {zero_idx: {zero_idx: one}}
    LY = {zero_idx: Y}
    for level in range(1, order + 1):
        pl = level_prec(level)
        LXl = [[x.truncate(pl) if x.prec != pl else x for x in row] for row in LX] if level > 1 else LX
        for alpha in _level(n, level):
            j = next(i for i, a in enumerate(alpha) if a)
            prev = tuple(a - (1 if i == j else 0) for i, a in enumerate(alpha))
            LY[alpha] = fields[j](LY[prev], level)
            row = {}
            for beta, cb in c[prev].items():
                if sum(beta) > 0:
                    t = fields[j](cb, level)
                    if t.terms:
                        row[beta] = t
                for k in range(n):
                    nb = tuple(b + (1 if i == k else 0) for i, b in enumerate(beta))
                    prod = cb.truncate(pl) * LXl[j][k] if cb.prec != pl else cb * LXl[j][k]
                    if prod.terms:
                        row[nb] = row[nb] + prod if nb in row else prod
            c[alpha] = row
    return c, LY


def _level(n: int, d: int):
    out = set()
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for v in combo:
            e[v] += 1
        out.add(tuple(e))
    return sorted(out, reverse=True)


def solve_reflection(c, LY, order: int, n: int, locus, final_prec):
    """Solve the triangular system level by level for ``P_beta``, ``1 <= |beta| <= order``.

    ``locus`` maps chart series to the locus; all results are truncated to
    ``final_prec`` (a precision on the locus variables).
    """
    P = {}
    for level in range(1, order + 1):
        alphas = _level(n, level)
        rows, rhs = [], []
        for alpha in alphas:
            r = locus(LY[alpha]).truncate(final_prec)
            for beta, cb in c[alpha].items():
                if 0 < sum(beta) < level:
                    r = r - locus(cb).truncate(final_prec) * P[beta]
            rhs.append(r)
            rows.append([locus(c[alpha].get(beta, _zero_like(LY[alpha]))).truncate(final_prec)
                         for beta in alphas])
        sol = solve_matrix(rows, rhs)
        for beta, s in zip(alphas, sol):
            P[beta] = s
    return P


def _zero_like(f):
    return TruncatedSeries.zero(f.vars, f.prec, f.ring)


def conj_jet_map(jet_bar: JetGroupElement, chis, tau, variables, prec) -> SeriesTuple:
    """``Hbar(chi, tau)`` from the conjugated jet, as polynomials over ``variables``."""
    n = jet_bar.n
    names = tuple(chis) + (tau,)
    comps = []
    for comp in range(n + 1):
        terms = {}
        for (cc, e), v in jet_bar.values.items():
            if cc != comp or not v:
                continue
            full = [0] * len(variables)
            for name, k in zip(names, e):
                full[variables.index(name)] = k
            terms[tuple(full)] = v * inv_factorial(e)
        comps.append(TruncatedSeries(variables, terms, prec, jet_bar.ring))
    return SeriesTuple(tuple(comps))


def target_Pbar_derivative(nf2: NormalForm, alpha, ring=NUMERIC_RING) -> TruncatedSeries:
    """``Qbar'_{chi^alpha}(chi', z', w')`` for the target, over ``(chi'.., z'.., w')``.

    Variables are named ``cp*`` (the chi slot), ``xp*`` (the z slot) and ``tp``.
    """
    c = nf2.coords
    n = c.n
    Qb = nf2.Qbar()  # over (z, w, chi), value Qbar(chi, z, w)
    for j, a in enumerate(alpha):
        if a:
            Qb = Qb.diff(c.chis[j], a)
    cp = tuple(f"cp{k}" for k in range(n))
    xp = tuple(f"xp{k}" for k in range(n))
    relabel = dict(zip(c.chis, cp))
    relabel.update(zip(c.zs, xp))
    relabel["w"] = "tp"
    return relabel_series(Qb, relabel, cp + xp + ("tp",)).to_ring(ring)


__all__ = [
    "JetSpace", "JetGroupElement", "JetError", "eta", "jet_compose", "jet_invert", "jet_from_map",
    "RestrictedFunction", "restrict_to_M", "reflection_coefficients", "solve_reflection",
    "conj_jet_map", "target_Pbar_derivative",
]
