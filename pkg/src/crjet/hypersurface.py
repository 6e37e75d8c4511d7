"""Defining functions, normal coordinates and the nondegeneracy order."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import factorial

from .dsl import Coords, parse_equation, parse_point
from .series import (
    EXACT,
    GaussianRational,
    Precision,
    SeriesTuple,
    TruncatedSeries,
    conjugate_series,
    relabel_series,
    solve_implicit,
    substitute,
)
from .series.rings import I, ONE, ZERO


class HypersurfaceError(ValueError):
    """A mathematical precondition on the hypersurface or base point failed."""


@dataclass(frozen=True)
class DefiningFunction:
    """Complexified defining function rho(z, w, chi, tau) of a real hypersurface."""

    rho: TruncatedSeries
    coords: Coords
    source: str = ""

    @property
    def n(self) -> int:
        return self.coords.n

    def conjugate(self) -> TruncatedSeries:
        return conjugate_series(self.rho, self.coords.conj_map(), self.coords.all)

    def value_at(self, point) -> GaussianRational:
        """rho(p, conj p) for a point given in (z.., w) coordinates."""
        c = self.coords
        vals = dict(zip(c.Z, point))
        vals.update(zip(c.zeta, (x.conj() for x in point)))
        acc = ZERO
        for e, coef in self.rho.items():
            t = coef
            for v, k in zip(self.rho.vars, e):
                if k:
                    t = t * vals[v] ** k
            acc = acc + t
        return acc


def check_reality(rho: TruncatedSeries, coords: Coords) -> bool:
    """True if conj(rho) = c * rho for a nonzero constant c."""
    cr = conjugate_series(rho, coords.conj_map(), coords.all)
    if rho.is_zero():
        return False
    e, c = rho.items()[0]
    ratio = cr.coeff(e) / c
    if not ratio:
        return False
    return (cr - rho.scale(ratio)).is_zero()


def parse_hypersurface(text: str, D: int | None = None) -> DefiningFunction:
    """Parse a DSL equation into a complexified defining function.

    The polynomial is kept exact; ``D`` is accepted for interface symmetry and
    only used to validate that it is positive.
    """
    if D is not None and D < 1:
        raise ValueError("truncation degree must be positive")
    rho, coords = parse_equation(text)
    if not check_reality(rho, coords):
        raise HypersurfaceError("the equation is not real: conj(rho) is not a multiple of rho")
    return DefiningFunction(rho, coords, text.strip())


def recenter(df: DefiningFunction, point) -> DefiningFunction:
    """Translate so that ``point`` (on M) becomes the origin."""
    point = tuple(GaussianRational.coerce(x) for x in point)
    c = df.coords
    if len(point) != len(c.Z):
        raise HypersurfaceError(f"a point needs {len(c.Z)} coordinates")
    if df.value_at(point):
        raise HypersurfaceError("the base point does not lie on M")
    if all(not x for x in point):
        return df
    assign = {}
    for v, p in zip(c.Z, point):
        assign[v] = TruncatedSeries.variable(c.all, v) + p
    for v, p in zip(c.zeta, point):
        assign[v] = TruncatedSeries.variable(c.all, v) + p.conj()
    rho = substitute(df.rho, assign, c.all, EXACT)
    return DefiningFunction(rho, c, df.source)


@dataclass(frozen=True)
class NormalForm:
    """``w = Q(z, chi, tau)`` with ``Q(z,0,tau) = Q(0,chi,tau) = tau``.

    ``to_original`` expresses the original coordinates minus the base point
    as a map of the normal coordinates ``(z, w)``.
    """

    Q: TruncatedSeries
    coords: Coords
    degree: int
    base_point: tuple
    to_original: SeriesTuple
    steps: tuple = field(default_factory=tuple)

    @property
    def n(self) -> int:
        return self.coords.n

    def Qbar(self) -> TruncatedSeries:
        """``conj Q`` evaluated as ``Qbar(chi, z, w)``, a series over ``(z, w, chi)``."""
        c = self.coords
        relabel = dict(zip(c.zs, c.chis))
        relabel.update(zip(c.chis, c.zs))
        relabel["tau"] = "w"
        return conjugate_series(self.Q, relabel, c.zs + ("w",) + c.chis)

    def check(self) -> dict:
        c = self.coords
        Q = self.Q
        tau = TruncatedSeries.variable(c.Q_vars, "tau", Q.prec)
        at_chi0 = Q.set_zero(c.chis).rebase(c.Q_vars, Q.prec)
        at_z0 = Q.set_zero(c.zs).rebase(c.Q_vars, Q.prec)
        normal1 = at_chi0.equal_terms(tau)
        normal2 = at_z0.equal_terms(tau)
        inv = involution_residual(self)
        return {"normal_chi": normal1, "normal_z": normal2, "involution": inv.is_zero()}


def involution_residual(nf: NormalForm) -> TruncatedSeries:
    """``Q(z, chi, Qbar(chi, z, w)) - w`` over (z, w, chi)."""
    c = nf.coords
    Qb = nf.Qbar()
    V = Qb.vars
    prec = Precision(nf.degree)
    assign = {v: TruncatedSeries.variable(V, v, prec) for v in c.zs + c.chis}
    assign["tau"] = Qb
    lhs = substitute(nf.Q, assign, V, prec)
    return lhs - TruncatedSeries.variable(V, "w", prec)


def _linear_coeff(rho, var):
    e = [0] * rho.nvars
    e[rho.vars.index(var)] = 1
    return rho.coeff(e)


def normal_coordinates(df: DefiningFunction, point=None, D: int = 8) -> NormalForm:
    """Normal coordinates at ``point`` (default: the origin), exact to degree ``D``."""
    c = df.coords
    n = c.n
    if point is None:
        point = (ZERO,) * (n + 1)
    point = tuple(GaussianRational.coerce(x) for x in point)
    base = recenter(df, point)
    rho = base.rho
    if rho.constant_term():
        raise HypersurfaceError("the base point does not lie on M")
    steps = []
    allv = c.all
    prec = Precision(D)
    # linear part, rotate so that rho_w(0) is a unit
    perm = list(c.Z)  # perm[k]: original coordinate standing at slot k after the swap
    if not _linear_coeff(rho, "w"):
        k = next((k for k, z in enumerate(c.zs) if _linear_coeff(rho, z)), None)
        if k is None:
            raise HypersurfaceError("degenerate gradient at the base point")
        z, chi = c.zs[k], c.chis[k]
        rho = relabel_series(rho, {z: "w", "w": z, chi: "tau", "tau": chi}, allv)
        perm[k], perm[-1] = perm[-1], perm[k]
        steps.append(f"swap w<->{z}")
    a = _linear_coeff(rho, "w")
    scale = (GaussianRational(0, 2) * a).inverse()
    if scale != ONE:
        assign = {"w": TruncatedSeries.variable(allv, "w", coeff=scale),
                  "tau": TruncatedSeries.variable(allv, "tau", coeff=scale.conj())}
        rho = substitute(rho, assign, allv, EXACT)
        steps.append(f"w -> ({scale}) w")
    # make the curve M cap {z=0} the real axis: w = s + i v(s)
    sv = ("s", "v")
    sp = Precision(D)
    gs = {z: TruncatedSeries.zero(sv, sp) for z in c.zs + c.chis}
    s_ = TruncatedSeries.variable(sv, "s", sp)
    v_ = TruncatedSeries.variable(sv, "v", sp)
    gs["w"] = s_ + v_.scale(I)
    gs["tau"] = s_ - v_.scale(I)
    G = substitute(rho.truncate_degree(D) if not rho.prec.exact else rho, gs, sv, sp)
    vs = solve_implicit([G], ["v"])[0]
    omega = None
    if not vs.is_zero():
        for _, coef in vs.items():
            if coef.im:
                raise HypersurfaceError("curve realization produced non-real data")
        omega = relabel_series(vs, {"s": "w"}).scale(I) + TruncatedSeries.variable(("w",), "w", Precision(D))
        wv = TruncatedSeries.variable(allv, "w", prec)
        tv = TruncatedSeries.variable(allv, "tau", prec)
        vw = substitute(vs, {"s": wv}, allv, prec)
        vt = substitute(vs, {"s": tv}, allv, prec)
        rho = substitute(rho, {"w": wv + vw.scale(I), "tau": tv - vt.scale(I)}, allv, prec)
        steps.append("w -> w + i v(w) (curve realization)")
    rho_t = rho.truncate(prec) if not rho.prec.exact else rho._clip(prec).relabel_precision(prec)
    Qt = solve_implicit([rho_t], ["w"])[0]  # over (z.., chi.., tau)
    QV = c.Q_vars
    Qt = Qt.rebase(QV, prec)
    tau = TruncatedSeries.variable(QV, "tau", prec)
    Qt0 = Qt.set_zero(c.chis)  # Qt(z, 0, tau)
    if Qt0.equal_terms(tau.set_zero(c.chis)):
        Q = Qt
        omega2 = None
    else:
        # w = Qt(z, 0, W) defines the new coordinate W
        relabel = dict(zip(c.zs, c.chis))
        Qt0_bar = conjugate_series(Qt0, relabel, c.chis + ("tau",)).rebase(QV, prec)
        inner = substitute(Qt, {"tau": Qt0_bar}, QV, prec)
        GV = QV + ("W",)
        lhs = substitute(Qt0, {"tau": TruncatedSeries.variable(GV, "W", prec)}, GV, prec)
        Geq = lhs - inner.rebase(GV, prec)
        Q = solve_implicit([Geq], ["W"])[0]
        omega2 = Qt0
        steps.append("w -> Qt(z, 0, w) (normalization)")
    # coordinate change: normal (z, w) -> original minus base point
    Zv = c.Z
    zprec = Precision(D)
    wn = TruncatedSeries.variable(Zv, "w", zprec)
    if omega2 is not None:
        wn = substitute(omega2, {"tau": wn, **{z: TruncatedSeries.variable(Zv, z, zprec) for z in c.zs}},
                        Zv, zprec)
    if omega is not None:
        wn = substitute(omega, {"w": wn}, Zv, zprec)
    wn = wn.scale(scale)
    comps = [TruncatedSeries.variable(Zv, z, zprec) for z in c.zs] + [wn]
    orig = [None] * (n + 1)
    for slot, name in enumerate(perm):
        orig[c.Z.index(name)] = comps[slot]
    if base.rho.prec.exact and _solves_exactly(base.rho, Q, orig, c):
        Q = Q.relabel_precision(EXACT)
        orig = [f.relabel_precision(EXACT) for f in orig]
    nf = NormalForm(Q, c, D, point, SeriesTuple(tuple(orig)), tuple(steps))
    chk = nf.check()
    if not all(chk.values()):
        raise HypersurfaceError(f"normal form postconditions failed: {chk}")
    return nf


def _solves_exactly(rho, Q, orig, c) -> bool:
    """True if the truncated data are polynomials that put ``rho`` in normal form exactly."""
    D = Q.prec.degree
    if Q.max_degree() >= D or any(f.max_degree() >= D for f in orig):
        return False
    QV = c.Q_vars
    Qx = Q.relabel_precision(EXACT)
    assign = {v: TruncatedSeries.variable(QV, v) for v in c.zs + c.chis}
    assign["w"] = Qx
    assign["tau"] = TruncatedSeries.variable(QV, "tau")
    back = dict(zip(c.zs, c.chis))
    back["w"] = "tau"
    img = {}
    for name, f in zip(c.Z, orig):
        fx = f.relabel_precision(EXACT)
        img[name] = substitute(fx, {v: assign[v] for v in c.Z}, QV, EXACT)
        fb = conjugate_series(fx, back, c.chis + ("tau",))
        img[back[name]] = fb.rebase(QV, EXACT)
    return substitute(rho, img, QV, EXACT).is_zero()


# ---------------------------------------------------------------------------
# nondegeneracy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NondegeneracyReport:
    k0: int | None  # None means degenerate to the examined order
    witness: tuple
    witness_minor: GaussianRational | None
    k_max: int

    @property
    def degenerate(self) -> bool:
        return self.k0 is None

    def to_json(self) -> dict:
        return {
            "k0": self.k0 if self.k0 is not None else f"degenerate-to-order-{self.k_max}",
            "witness": [list(a) for a in self.witness],
            "witness_minor": self.witness_minor.to_json() if self.witness_minor is not None else None,
        }


def multi_indices(n: int, degree: int):
    """Multi-indices of total degree ``degree`` in graded-lex order (last variable first)."""
    out = set()
    for combo in combinations_with_replacement(range(n), degree):
        e = [0] * n
        for k in combo:
            e[k] += 1
        out.add(tuple(e))
    return sorted(out)


def nondegeneracy_vector(nf: NormalForm, alpha) -> list:
    """``d_z Qbar_{chi^alpha}(0)`` as a list over k."""
    c = nf.coords
    n = c.n
    af = 1
    for a in alpha:
        af *= factorial(a)
    vec = []
    QV = c.Q_vars
    for k in range(n):
        e = [0] * len(QV)
        for j, a in enumerate(alpha):
            e[j] = a  # z^alpha
        e[n + k] += 1  # chi_k
        vec.append(nf.Q.coeff(e).conj() * af)
    return vec


def rank(rows) -> int:
    """Rank over Q(i) by row reduction."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    r = 0
    for col in range(len(m[0])):
        piv = next((k for k in range(r, len(m)) if m[k][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col].inverse()
        for k in range(len(m)):
            if k != r and m[k][col]:
                f = m[k][col] * inv
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        r += 1
    return r


def determinant(M) -> GaussianRational:
    m = [list(r) for r in M]
    n = len(m)
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def nondegeneracy(nf: NormalForm, k_max: int | None = None) -> NondegeneracyReport:
    """Smallest k for which the vectors ``d_z Qbar_{chi^alpha}(0)``, ``|alpha| <= k``, span C^n."""
    if k_max is None:
        k_max = nf.degree - 1
    if k_max > nf.degree - 1:
        raise ValueError("k_max must be at most D - 1")
    n = nf.n
    chosen, rows = [], []
    for k in range(1, k_max + 1):
        for alpha in multi_indices(n, k):
            v = nondegeneracy_vector(nf, alpha)
            if rank(rows + [v]) > len(rows):
                rows.append(v)
                chosen.append(alpha)
            if len(rows) == n:
                return NondegeneracyReport(k, tuple(chosen), determinant(rows), k_max)
    return NondegeneracyReport(None, tuple(chosen), None, k_max)


def load_hypersurface(path_or_text: str) -> DefiningFunction:
    """Parse from a file path, or directly from DSL text if no such file exists."""
    import os
    if os.path.exists(path_or_text):
        with open(path_or_text, encoding="utf-8") as fh:
            return parse_hypersurface(fh.read())
    return parse_hypersurface(path_or_text)


def point_from_text(text: str):
    return parse_point(text)
