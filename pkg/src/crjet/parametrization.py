"""Jet parametrization of local biholomorphisms between hypersurfaces in normal form.

Given normal forms of a source and a target hypersurface, a jet ``Lambda`` in
``G^{2k0}_0`` is pushed through the reflection identities to produce a
polynomial map ``K_Lambda`` and the equations (c, d, e) whose common zeros are
the jets of genuine maps.  Every step is generic over the coefficient ring of
``Lambda`` (NUMERIC, DUAL or SYMBOLIC).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .hypersurface import NormalForm, nondegeneracy
from .jets import (
    JetError,
    JetGroupElement,
    JetSpace,
    conj_jet_map,
    jet_from_map,
    reflection_coefficients,
    solve_reflection,
    target_Pbar_derivative,
)
from .series import (
    EXACT,
    Precision,
    PrecisionError,
    SeriesTuple,
    TruncatedSeries,
    conjugate_series,
    invert_unit,
    linear_change,
    regularize,
    relabel_series,
    solve_implicit,
    substitute,
    weierstrass_divide,
)
from .series import NUMERIC_RING, SymbolicRing
from .series.algorithms import invert_integer_matrix
from .series.core import _coarser
from .series.rings import eval_gauss_poly
from .series.serialize import (
    coeff_from_json,
    coeff_to_json,
    gauss_poly_from_json,
    gauss_poly_to_json,
    series_from_json,
    series_to_json,
    symbolic_from_terms,
)


class ParametrizationError(ValueError):
    """A precondition of the parametrization failed."""


def fit(f: TruncatedSeries, prec: Precision) -> TruncatedSeries:
    """Truncate ``f`` to ``prec``, refusing when ``f`` is not known that far."""
    if f.prec.exact or _coarser(prec, f.prec):
        return f.relabel_precision(prec)
    raise PrecisionError(f"series known to {f.prec} but {prec} is required")


# ---------------------------------------------------------------------------
# data containers
# ---------------------------------------------------------------------------

@dataclass
class ThetaData:
    """The distinguished series of the source used to clear the Segre-map poles.

    ``A = Q_{chi_lead}(z, 0, 0)``, ``B = A**2`` and ``psi(z, t)`` inverts
    ``t = u + sum_{j>=2} C_j(z) u**j`` with ``C_j = A_j A**(j-2)``.
    """

    lead: int
    A: TruncatedSeries
    A_coeffs: list
    B: TruncatedSeries
    C: dict
    psi: TruncatedSeries
    order_A: int
    m: int
    E_z: int
    L: list
    L_inv: list
    B_reg: TruncatedSeries

    def check(self) -> bool:
        """``Q(z, A psi e_lead, 0) = B t``, i.e. ``Q(z, theta(z, w), 0) = w`` after ``t = w / B``."""
        V = self.psi.vars
        p = self.psi.prec
        A = fit(self.A.rebase(V), p)
        Apsi = A * self.psi
        acc = TruncatedSeries.zero(V, p)
        power = Apsi
        for j, Aj in enumerate(self.A_coeffs):
            if j == 0:
                continue
            if j > 1:
                power = power * Apsi
            if Aj.terms:
                acc = acc + fit(Aj.rebase(V), p) * power
        t = TruncatedSeries.variable(V, "t", p)
        return (acc - fit(self.B.rebase(V), p) * t).is_zero()


@dataclass
class Equation:
    family: str  # "c", "d" or "e"
    index: tuple
    value: object


@dataclass
class ParamSystem:
    """The map ``K_Lambda`` and the equations for a jet ``Lambda``."""

    jet: JetGroupElement
    K: SeriesTuple
    equations: list
    metadata: dict = field(default_factory=dict)

    def family(self, name: str):
        return [e for e in self.equations if e.family == name]

    def nonzero(self):
        return [e for e in self.equations if e.value]

    def is_zero(self) -> bool:
        return not self.nonzero()

    def to_json(self) -> dict:
        """Polynomial form: symbolic equations are emitted as numerator and denominator."""
        ring = self.jet.ring
        meta = dict(self.metadata)
        eqs = []
        if isinstance(ring, SymbolicRing):
            meta["mode"] = "symbolic"
            meta["jet_variables"] = list(ring.base_names)
            ident = _identity_point(self.jet)
            for e in self.equations:
                if not e.value:
                    continue
                den = e.value.denominator_terms()
                if not eval_gauss_poly(den, ring.names, ident):
                    raise ParametrizationError(f"denominator of {e.family}{e.index} vanishes at the identity")
                eqs.append({"family": e.family, "index": _index_to_json(e.index),
                            "poly": gauss_poly_to_json(e.value.numerator_terms(), ring.names),
                            "den": gauss_poly_to_json(den, ring.names)})
        else:
            meta["mode"] = "numeric"
            meta["jet"] = self.jet.to_json()
            for e in self.equations:
                if e.value:
                    eqs.append({"family": e.family, "index": _index_to_json(e.index),
                                "value": coeff_to_json(e.value)})
        meta["jet_order"] = self.jet.k
        return {"metadata": meta, "equations": eqs, "K": [series_to_json(k) for k in self.K]}

    @classmethod
    def from_json(cls, d) -> "ParamSystem":
        meta = dict(d["metadata"])
        n = len(d["K"]) - 1
        k = meta["jet_order"]
        if meta.get("mode") == "symbolic":
            ring = SymbolicRing(meta["jet_variables"])
            jet = JetGroupElement.symbolic(JetSpace(n, k, g0=True), ring)
            eqs = []
            for e in d["equations"]:
                names, num = gauss_poly_from_json(e["poly"])
                _, den = gauss_poly_from_json(e["den"])
                val = symbolic_from_terms(ring, names, num) / symbolic_from_terms(ring, names, den)
                eqs.append(Equation(e["family"], _index_from_json(e["index"]), val))
        else:
            ring = NUMERIC_RING
            jet = JetGroupElement.from_json(meta["jet"])
            eqs = [Equation(e["family"], _index_from_json(e["index"]), coeff_from_json(e["value"]))
                   for e in d["equations"]]
        K = SeriesTuple(tuple(series_from_json(s, ring) for s in d["K"]))
        return cls(jet, K, eqs, meta)


# ---------------------------------------------------------------------------
# the engine
# ---------------------------------------------------------------------------

class Parametrization:
    """Precomputed data for maps from ``(M, 0)`` to ``(M', 0)`` in normal coordinates."""

    def __init__(self, source: NormalForm, target: NormalForm, D: int, k0: int | None = None):
        if source.n != target.n:
            raise ParametrizationError("source and target have different dimensions")
        self.source = source
        self.target = target
        self.n = source.n
        self.coords = source.coords
        self.D = D
        rs = nondegeneracy(source, min(D - 1, source.degree - 1))
        rt = nondegeneracy(target, min(D - 1, target.degree - 1))
        if rs.degenerate or rt.degenerate:
            raise ParametrizationError("a hypersurface is not finitely nondegenerate to the examined order")
        self.k0 = k0 if k0 is not None else max(rs.k0, rt.k0)
        if self.k0 < max(rs.k0, rt.k0):
            raise ParametrizationError("k0 is below the nondegeneracy order")
        self.witness = rt.witness
        self.source_report = rs
        self.target_report = rt
        if D < 2 * self.k0:
            raise ParametrizationError("the truncation degree must be at least 2 k0")
        self.space = JetSpace(self.n, 2 * self.k0, g0=True)
        self.theta = self._theta()
        self._cache = {}

    # -- helpers -------------------------------------------------------------------
    def _numeric(self, key, build, ring):
        k = (key, ring)
        if k not in self._cache:
            base = self._cache.get((key, None))
            if base is None:
                base = build()
                self._cache[(key, None)] = base
            self._cache[k] = base if ring is None else _to_ring(base, ring)
        return self._cache[k]

    def _S(self, prec_key, ring):
        """Solution ``X = S(cp, tp, r)`` of ``Qbar'_{chi^alpha_j}(cp, X, Q'(X, cp, tp)) = r_j``."""
        return self._numeric(("S", prec_key), lambda: self._build_S(*prec_key), ring)

    def _build_S(self, degree, cp_cap, tp_cap):
        n = self.n
        tc = self.target.coords
        cp = tuple(f"cp{k}" for k in range(n))
        xs = tuple(f"X{k}" for k in range(n))
        rs = tuple(f"r{k}" for k in range(n))
        V = cp + ("tp",) + rs + xs
        prec = Precision(degree, (cp_cap,) * n + (tp_cap,) + (None,) * (2 * n))
        relabel = dict(zip(tc.zs, xs))
        relabel.update(zip(tc.chis, cp))
        relabel["tau"] = "tp"
        Qp = fit(relabel_series(self.target.Q, relabel, V), prec)
        G = []
        for j, alpha in enumerate(self.witness):
            P = target_Pbar_derivative(self.target, alpha)
            assign = {f"xp{k}": TruncatedSeries.variable(V, xs[k], prec) for k in range(n)}
            assign["tp"] = Qp
            Pj = substitute(P, assign, V, prec)
            G.append(Pj - TruncatedSeries.variable(V, rs[j], prec))
        sol = solve_implicit(G, list(xs))
        return SeriesTuple(tuple(sol))

    # -- step 1 --------------------------------------------------------------------
    def psi(self, jet_bar: JetGroupElement, J: int, zcaps) -> SeriesTuple:
        """``Psi``: the map on ``(z, w)`` to w-order ``J`` from the conjugate jet of order ``k0 + J``."""
        n, k0 = self.n, self.k0
        ring = jet_bar.ring
        c = self.coords
        if jet_bar.k < k0 + J:
            raise JetError(f"a jet of order {k0 + J} is needed")
        zcaps = tuple(zcaps)
        V = c.zs + ("w",) + c.chis
        V4 = V + ("tau",)

        def lp(level):
            return Precision(None, zcaps + (J,) + (k0 - level,) * n)

        p0 = lp(0)
        Hb = conj_jet_map(jet_bar.truncate(k0 + J), c.chis, "tau", V4, EXACT)
        Qb = fit(self.source.Qbar(), p0).to_ring(ring)
        XY = [substitute(f, {"tau": Qb}, V, p0) for f in Hb]
        X, Y = XY[:n], XY[n]

        def field_(j):
            return lambda h, level: h.diff(c.chis[j]).truncate(lp(level))

        fields = [field_(j) for j in range(n)]
        coef, LY = reflection_coefficients(X, Y, fields, k0, lp)
        final = Precision(None, zcaps + (J,))

        def locus(h):
            return h.set_zero(c.chis)

        P = solve_reflection(coef, LY, k0, n, locus, final)
        R = [P[a] for a in self.witness]
        cpi = [fit(locus(x), final) for x in X]
        tpi = fit(locus(Y), final)
        return self._apply_S(cpi, tpi, R, c.Z, final, ring, sum(zcaps) + J, J, J)

    def _apply_S(self, cpi, tpi, R, variables, final, ring, degree, cp_cap, tp_cap):
        n = self.n
        S = self._S((degree, cp_cap, tp_cap), ring)
        assign = {f"cp{k}": cpi[k] for k in range(n)}
        assign["tp"] = tpi
        assign.update({f"r{k}": R[k] for k in range(n)})
        f = [substitute(s, assign, variables, final) for s in S]
        tc = self.target.coords
        Qp = self.target.Q.to_ring(ring)
        a2 = dict(zip(tc.zs, f))
        a2.update(zip(tc.chis, cpi))
        a2["tau"] = tpi
        g = substitute(fit(Qp, _q_box(Qp, degree)), a2, variables, final)
        return SeriesTuple(tuple(f) + (g,))

    # -- step 2 --------------------------------------------------------------------
    def phi(self, H_psi: SeriesTuple) -> SeriesTuple:
        """``Phi(z, chi) = H(z, Q(z, chi, 0))`` from ``Psi`` through the second Segre set."""
        n, k0, D = self.n, self.k0, self.D
        th = self.theta
        ring = H_psi[0].ring
        c = self.coords
        V = c.zs + c.chis + ("tau",)
        Ez = th.E_z

        def lp(level):
            chi = tuple((D if j == th.lead else 0) + k0 - level for j in range(n))
            return Precision(None, (Ez,) * n + chi + (k0 - level,))

        p0 = lp(0)
        back = dict(zip(c.zs, c.chis))
        back["w"] = "tau"
        Hb = [fit(conjugate_series(h, back, c.chis + ("tau",)).rebase(V), p0) for h in H_psi]
        X, Y = Hb[:n], Hb[n]
        cj = self._numeric(("cfields", p0), lambda: self._cr_coefficients(lp), ring)

        def field_(j):
            def apply(h, level):
                p = lp(level)
                a = h.diff(c.chis[j]).truncate(p)
                b = h.diff("tau").truncate(p)
                return a + fit(cj[j], p) * b if b.terms else a
            return apply

        fields = [field_(j) for j in range(n)]
        coef, LY = reflection_coefficients(X, Y, fields, k0, lp)
        final = Precision(None, (Ez,) * n + tuple(D if j == th.lead else 0 for j in range(n)))

        def locus(h):
            return h.set_zero(("tau",))

        P = solve_reflection(coef, LY, k0, n, locus, final)
        R = [P[a] for a in self.witness]
        cpi = [fit(locus(x), final) for x in X]
        tpi = TruncatedSeries.zero(c.zs + c.chis, final, ring)
        return self._apply_S(cpi, tpi, R, c.zs + c.chis, final, ring, n * Ez + D, D, 0)

    def _cr_coefficients(self, lp):
        """``c_j = -Q_{chi_j} / Q_tau`` on the graph chart."""
        c = self.coords
        p0 = lp(0)
        wide = Precision(None, tuple(x + 1 for x in p0.caps))
        Q = fit(self.source.Q, wide)
        Qt = invert_unit(Q.diff("tau").truncate(p0))
        return [-(Q.diff(ch).truncate(p0) * Qt) for ch in c.chis]

    # -- step 3 --------------------------------------------------------------------
    def _theta(self) -> ThetaData:
        n, D = self.n, self.D
        c = self.coords
        Q = self.source.Q
        lead = None
        for j, ch in enumerate(c.chis):
            Aj = Q.set_zero(("tau",) + tuple(x for x in c.chis if x != ch)).coefficient_in(ch, 1)
            if not Aj.is_zero():
                lead = j
                break
        if lead is None:
            raise ParametrizationError("Q_chi(z, 0, 0) vanishes identically: the source is Levi-flat")
        ch = c.chis[lead]
        line = Q.set_zero(("tau",) + tuple(x for x in c.chis if x != ch))
        ordA = line.coefficient_in(ch, 1).order()
        m = 2 * ordA
        Ez = D * m
        zp = Precision(Ez)
        if not Q.prec.exact and Q.prec.degree < n * Ez + D + 1:
            raise PrecisionError(f"the source normal form must be known to degree {n * Ez + D + 1}")
        box = Precision(None, (Ez,) * n)
        A_coeffs = [fit(line.coefficient_in(ch, j), box) for j in range(D + 1)]
        A = A_coeffs[1]
        B = A * A
        PV = c.zs + ("t", "u")
        pp = Precision(None, (Ez,) * n + (D, D))
        u = TruncatedSeries.variable(PV, "u", pp)
        G = u - TruncatedSeries.variable(PV, "t", pp)
        Cs = {}
        Apow = TruncatedSeries.constant(c.zs, 1, box)
        upow = u
        for j in range(2, D + 1):
            upow = upow * u
            Cj = A_coeffs[j] * Apow
            Apow = Apow * A
            Cs[j] = Cj
            if Cj.terms:
                G = G + Cj.rebase(PV, pp) * upow
        psi = solve_implicit([G], ["u"])[0]
        if n > 1:
            L, B_reg = regularize(fit(B, zp))
            L_inv = invert_integer_matrix(L)
        else:
            L = L_inv = [[1]]
            B_reg = fit(B, zp)
        return ThetaData(lead, A, A_coeffs, B, Cs, psi, ordA, m, Ez, L, L_inv, B_reg)

    def segre_F(self, Phi: SeriesTuple) -> SeriesTuple:
        """``F(z, t) = Phi(z, A psi e_lead)`` over ``(z, t)``."""
        th = self.theta
        c = self.coords
        ring = Phi[0].ring
        TV = c.zs + ("t",)
        tp = Precision(None, (th.E_z,) * self.n + (self.D,))
        Apsi = self._numeric(("Apsi",), lambda: fit(th.A.rebase(TV), tp) * th.psi, ring)
        assign = {ch: (Apsi if j == th.lead else TruncatedSeries.zero(TV, tp, ring))
                  for j, ch in enumerate(c.chis)}
        return SeriesTuple(tuple(substitute(f, assign, TV, tp) for f in Phi))

    # -- step 4 --------------------------------------------------------------------
    def divide(self, F: SeriesTuple):
        """Divide the t-coefficients of ``F`` by powers of ``B``; returns ``(K, c-equations)``."""
        th = self.theta
        n, D = self.n, self.D
        c = self.coords
        ring = F[0].ring
        zp = Precision(th.E_z)
        Bj = self._numeric(("Breg",), lambda: th.B_reg, ring)
        KP = Precision(D)
        eqs = []
        comps = []
        for i, Fi in enumerate(F):
            terms = {}
            for j in range(D + 1):
                Fj = fit(Fi.coefficient_in("t", j), zp)
                if j == 0:
                    for e, v in Fj.items():
                        if sum(e) <= D:
                            terms[tuple(e) + (0,)] = v
                    continue
                if n > 1:
                    Fj = linear_change(Fj, th.L)
                div = weierstrass_divide(Fj, Bj, j)
                for p, r in sorted(div.remainder.items()):
                    for e, v in r.items():
                        eqs.append(Equation("c", (i, j, (p,) + tuple(e)), v))
                Qj = div.quotient
                if n > 1:
                    Qj = linear_change(Qj, th.L_inv)
                for e, v in Qj.items():
                    if sum(e) + j <= D:
                        terms[tuple(e) + (j,)] = v
            comps.append(TruncatedSeries(c.Z, terms, KP, ring))
        return SeriesTuple(tuple(comps)), eqs

    # -- step 5 --------------------------------------------------------------------
    def e_equations(self, K: SeriesTuple):
        """Coefficients of the tangency residual of ``K`` (see :func:`tangency_residual`)."""
        res = tangency_residual(K, self.source, self.target, self.D)
        return [Equation("e", tuple(e), v) for e, v in res.items()]

    def d_equations(self, K: SeriesTuple, jet: JetGroupElement):
        jk = jet_from_map(K, 2 * self.k0)
        eqs = []
        for lb in JetSpace(self.n, 2 * self.k0).labels:
            v = jk.values[lb] - jet.values[lb]
            if v:
                eqs.append(Equation("d", lb, v))
        return eqs

    # -- drivers ---------------------------------------------------------------------
    def K_map(self, jet: JetGroupElement):
        """``(K_Lambda, c-equations, intermediate maps)`` for a jet of order 2 k0 in G_0."""
        k0 = self.k0
        if jet.n != self.n or jet.k != 2 * k0:
            raise JetError(f"expected a jet of order {2 * k0} in {self.n + 1} variables")
        if not jet.in_G0:
            raise JetError("the jet is not in G_0 (a mu coefficient of a pure z monomial is nonzero)")
        zcaps = tuple((self.D if j == self.theta.lead else 0) + k0 for j in range(self.n))
        Hpsi = self.psi(jet.conj(), k0, zcaps)
        Phi = self.phi(Hpsi)
        F = self.segre_F(Phi)
        K, ceqs = self.divide(F)
        return K, ceqs, {"psi": Hpsi, "phi": Phi, "F": F}

    def run(self, jet: JetGroupElement) -> ParamSystem:
        K, ceqs, _ = self.K_map(jet)
        eqs = ceqs + self.d_equations(K, jet) + self.e_equations(K)
        return ParamSystem(jet, K, eqs, self.metadata())

    def T(self, jet_bar: JetGroupElement) -> JetGroupElement:
        """``Lambda = T(Lambdabar)``: jets of ``K`` to order 3 k0 fed back through ``Psi``."""
        k0 = self.k0
        if self.D < 3 * k0:
            raise ParametrizationError("T needs a truncation degree of at least 3 k0")
        lam = jet_bar.conj()
        K, _, _ = self.K_map(lam)
        high = jet_from_map(K, 3 * k0)
        H = self.psi(high.conj(), 2 * k0, (2 * k0,) * self.n)
        return jet_from_map(H, 2 * k0)

    def metadata(self) -> dict:
        return {
            "k0": self.k0,
            "D": self.D,
            "witness": [list(a) for a in self.witness],
            "lead": self.theta.lead,
            "basepoints": {"source": [p.to_json() for p in self.source.base_point],
                           "target": [p.to_json() for p in self.target.base_point]},
            "E_z": self.theta.E_z,
        }


def tangency_residual(H: SeriesTuple, source: NormalForm, target: NormalForm, D: int) -> TruncatedSeries:
    """``g - Q'(f, fbar, gbar)`` on the complexified source, over ``(z, w, chi)`` mod degree ``D + 1``.

    ``fbar, gbar`` are evaluated at ``(chi, Qbar(chi, z, w))``; the map is
    tangent to order ``D`` exactly when this vanishes.
    """
    c = source.coords
    n = c.n
    ring = H[0].ring
    V = c.zs + ("w",) + c.chis
    p = Precision(D)
    Qb = fit(source.Qbar(), p).to_ring(ring)
    back = dict(zip(c.zs, c.chis))
    back["w"] = "tau"
    Hp = [fit(h, p) for h in H]
    Hb = [substitute(conjugate_series(h, back, c.chis + ("tau",)), {"tau": Qb}, V, p) for h in Hp]
    Hz = [h.rebase(V, p) for h in Hp]
    tc = target.coords
    a = dict(zip(tc.zs, Hz[:n]))
    a.update(zip(tc.chis, Hb[:n]))
    a["tau"] = Hb[n]
    return Hz[n] - substitute(fit(target.Q, p).to_ring(ring), a, V, p)


def _index_to_json(index):
    return [_index_to_json(x) if isinstance(x, tuple) else x for x in index]


def _index_from_json(index):
    return tuple(_index_from_json(x) if isinstance(x, list) else x for x in index)


def _identity_point(jet: JetGroupElement) -> dict:
    ident = JetGroupElement.identity(jet.n, jet.k)
    space = JetSpace(jet.n, jet.k, g0=True)
    point = {}
    for lb in space.labels:
        v = ident.values[lb]
        point[space.name(lb)] = v
        point[space.name(lb) + "_bar"] = v.conj()
    return point


def _q_box(Q, degree):
    return EXACT if Q.prec.exact else Precision(min(degree, Q.prec.degree))


def _to_ring(obj, ring):
    if isinstance(obj, TruncatedSeries):
        return obj.to_ring(ring)
    if isinstance(obj, SeriesTuple):
        return SeriesTuple(tuple(f.to_ring(ring) for f in obj))
    if isinstance(obj, list):
        return [_to_ring(x, ring) for x in obj]
    raise TypeError(type(obj).__name__)


def identity_jet(par: Parametrization, ring=None) -> JetGroupElement:
    return JetGroupElement.identity(par.n, 2 * par.k0, ring or NUMERIC_RING)


__all__ = [
    "Parametrization", "ParamSystem", "Equation", "ThetaData", "ParametrizationError",
    "fit", "identity_jet", "tangency_residual",
]
