"""Verification, reconstruction and the dimension of the stability algebra."""
from __future__ import annotations

from dataclasses import dataclass, field

import flint
from gmpy2 import mpq

from .hypersurface import DefiningFunction, HypersurfaceError, NormalForm, nondegeneracy, normal_coordinates
from .jets import JetError, JetGroupElement, JetSpace, eta
from .parametrization import (
    Equation,
    ParamSystem,
    Parametrization,
    ParametrizationError,
    fit,
    tangency_residual,
)
from .series import (
    DUAL_RING,
    I,
    ONE,
    Dual,
    GaussianRational,
    Precision,
    PrecisionError,
    RingError,
    SeriesError,
    SeriesTuple,
    Symbolic,
    TruncatedSeries,
)


class OutOfChartError(ValueError):
    """A denominator of the parametrization vanishes at the given jet."""


class FormalCheckError(ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    verified: bool
    residual_degree: int | None  # None: zero mod D
    invertible: bool
    jet: JetGroupElement | None
    D: int
    first_residual: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {
            "verified": self.verified,
            "tangency_residual_degree": "zero mod D" if self.residual_degree is None else self.residual_degree,
            "invertible": self.invertible,
            "D": self.D,
        }
        if self.jet is not None:
            out["jet"] = self.jet.to_json()
        if self.first_residual:
            out["first_residual_terms"] = [
                {"exp": list(e), **c.to_json()} for e, c in self.first_residual]
        return out


def verify_map(H: SeriesTuple, source: NormalForm, target: NormalForm, D: int,
               jet_order: int | None = None) -> VerificationReport:
    """Check that ``H`` sends the source into the target to order ``D``."""
    res = tangency_residual(H, source, target, D)
    deg = None
    first = []
    if not res.is_zero():
        deg = res.order()
        first = [(e, c) for e, c in res.items() if sum(e) == deg][:4]
    try:
        inv = all(not h.constant_term() for h in H) and eta(H, 1).is_invertible()
    except JetError:
        inv = False
    jet = None
    if inv and jet_order:
        jet = eta(SeriesTuple(tuple(fit(h, Precision(jet_order)) if not h.prec.exact else h for h in H)),
                  jet_order)
    return VerificationReport(deg is None and inv, deg, inv, jet, D, first)


# ---------------------------------------------------------------------------
# residuals of the parametrization system
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    zero: bool
    counts: dict
    nonzero: list  # first few (family, index, value)
    D: int
    k0: int

    def to_json(self) -> dict:
        return {
            "zero": self.zero,
            "D": self.D,
            "k0": self.k0,
            "nonzero_counts": dict(sorted(self.counts.items())),
            "first_nonzero": [
                {"family": f, "index": _index_json(i), "value": v.to_json()} for f, i, v in self.nonzero],
        }


def _index_json(index):
    out = []
    for x in index:
        out.append(_index_json(x) if isinstance(x, tuple) else x)
    return out


def _report(equations, D, k0, limit=6) -> ResidualReport:
    counts = {"c": 0, "d": 0, "e": 0}
    nz = []
    for e in equations:
        if e.value:
            counts[e.family] += 1
            if len(nz) < limit:
                nz.append((e.family, e.index, e.value))
    return ResidualReport(not nz, counts, nz, D, k0)


def evaluate_system(ps, jet0: JetGroupElement) -> ResidualReport:
    """Exact residuals of the c/d/e equations at a numeric jet of order 2 k0.

    ``ps`` is a :class:`Parametrization` (the pipeline is run at ``jet0``) or a
    symbolic :class:`ParamSystem` (its equations are evaluated at ``jet0``).
    """
    if isinstance(ps, Parametrization):
        try:
            sysm = ps.run(jet0)
        except RingError as exc:
            raise OutOfChartError(f"the jet lies outside the chart of the parametrization: {exc}") from exc
        return _report(sysm.equations, ps.D, ps.k0)
    point = symbolic_point(ps, jet0)
    eqs = []
    for e in ps.equations:
        eqs.append(Equation(e.family, e.index, _eval_symbolic(e.value, point)))
    return _report(eqs, ps.metadata["D"], ps.metadata["k0"])


def symbolic_point(ps: ParamSystem, jet0: JetGroupElement) -> dict:
    """Values of the jet variables and of their conjugates at ``jet0``."""
    space = JetSpace(jet0.n, jet0.k, g0=True)
    if not jet0.in_G0:
        raise JetError("the jet is not in G_0")
    point = {}
    for lb in space.labels:
        nm = space.name(lb)
        v = jet0.values[lb]
        point[nm] = v
        point[nm + "_bar"] = v.conj()
    return point


def _eval_symbolic(v, point):
    if isinstance(v, Symbolic):
        try:
            return v.evaluate(point)
        except RingError as exc:
            raise OutOfChartError("a denominator vanishes at the given jet") from exc
    return v


def reconstruct(ps, jet0: JetGroupElement, check: bool = True) -> SeriesTuple:
    """``K`` at ``jet0``: the unique map with this jet, after checking the residuals."""
    if isinstance(ps, Parametrization):
        try:
            sysm = ps.run(jet0)
        except RingError as exc:
            raise OutOfChartError(str(exc)) from exc
        if check and not sysm.is_zero():
            raise FormalCheckError("the jet does not satisfy the parametrization system",
                                   _report(sysm.equations, ps.D, ps.k0))
        return sysm.K
    point = symbolic_point(ps, jet0)
    if check:
        rep = evaluate_system(ps, jet0)
        if not rep.zero:
            raise FormalCheckError("the jet does not satisfy the parametrization system", rep)
    comps = []
    for k in ps.K:
        comps.append(TruncatedSeries(k.vars, {e: _eval_symbolic(c, point) for e, c in k.items()},
                                     k.prec))
    return SeriesTuple(tuple(comps))


# ---------------------------------------------------------------------------
# linearization at the identity
# ---------------------------------------------------------------------------

@dataclass
class LieDimReport:
    dim_hol0: int
    rank: int
    slots: int
    D: int
    jet_order: int
    point: tuple = ()
    error: str | None = None

    def to_json(self) -> dict:
        out = {"dim_hol0": self.dim_hol0, "rank": self.rank, "real_jet_dimension": self.slots,
               "D": self.D, "jet_order": self.jet_order}
        if self.point:
            out["point"] = [p.to_json() for p in self.point]
        if self.error:
            out["error"] = self.error
        return out


def dual_identity_jet(n: int, k: int) -> JetGroupElement:
    """Identity jet with slots ``2c`` (real) and ``2c + 1`` (imaginary) on the c-th G_0 coordinate."""
    space = JetSpace(n, k, g0=True)
    ident = JetGroupElement.identity(n, k)
    vals = {}
    for c, lb in enumerate(space.labels):
        vals[lb] = Dual(ident.values[lb], {2 * c: ONE, 2 * c + 1: I})
    return JetGroupElement(n, k, vals, DUAL_RING)


def lie_dim(ps) -> LieDimReport:
    """Real corank of the linearized system at the identity jet."""
    if isinstance(ps, Parametrization):
        n, k = ps.n, 2 * ps.k0
        sysm = ps.run(dual_identity_jet(n, k))
        grads = []
        for e in sysm.equations:
            v = e.value
            if v.value:
                raise ParametrizationError("the identity jet does not satisfy the system (M and M' differ?)")
            grads.append(v.eps)
        D = ps.D
    else:
        n, k = ps.jet.n, ps.jet.k
        grads = [_symbolic_gradient(e.value, ps) for e in ps.equations]
        D = ps.metadata["D"]
    slots = 2 * len(JetSpace(n, k, g0=True))
    rows = []
    for g in grads:
        if not g:
            continue
        re = [0] * slots
        im = [0] * slots
        for s, c in g.items():
            re[s] = c.re
            im[s] = c.im
        for r in (re, im):
            if any(r):
                rows.append(r)
    rk = _rank(rows, slots)
    return LieDimReport(slots - rk, rk, slots, D, k)


def _rank(rows, ncols) -> int:
    if not rows:
        return 0
    entries = []
    for r in rows:
        for x in r:
            x = mpq(x)
            entries.append(flint.fmpq(int(x.numerator), int(x.denominator)))
    return flint.fmpq_mat(len(rows), ncols, entries).rank()


def _symbolic_gradient(v, ps: ParamSystem) -> dict:
    """Slot gradient of a symbolic equation at the identity jet (same slot layout as DUAL).

    The identity jet is real, so numerator parts and denominator are evaluated
    as rational polynomials.
    """
    if not isinstance(v, Symbolic):
        return {}
    ring = v.ring
    space = JetSpace(ps.jet.n, ps.jet.k, g0=True)
    ident = JetGroupElement.identity(space.n, space.k)
    base = {}
    for lb in space.labels:
        x = ident.values[lb].re
        base[space.name(lb)] = base[space.name(lb) + "_bar"] = flint.fmpq(int(x.numerator), int(x.denominator))
    pt = [base[nm] for nm in ring.names]

    def at(p):
        r = p(*pt)
        return mpq(int(r.p), int(r.q))

    den = at(v.den)
    re, im = at(v.re), at(v.im)
    out = {}
    for c, lb in enumerate(space.labels):
        parts = []
        for nm in (space.name(lb), space.name(lb) + "_bar"):
            k = ring.index[nm]
            dd = at(v.den.derivative(k))
            dre = (at(v.re.derivative(k)) * den - re * dd) / (den * den)
            dim = (at(v.im.derivative(k)) * den - im * dd) / (den * den)
            parts.append(GaussianRational(dre, dim))
        d, db = parts
        # lambda = identity + x + i y, so d/dx = d + db and d/dy = i (d - db)
        gx = d + db
        gy = (d - db) * I
        if gx:
            out[2 * c] = gx
        if gy:
            out[2 * c + 1] = gy
    return out


# ---------------------------------------------------------------------------
# formal maps and sweeps
# ---------------------------------------------------------------------------

def formal_to_convergent(H: SeriesTuple, ps: Parametrization) -> SeriesTuple:
    """Reconstruct a formal map from its 2 k0-jet and check agreement to order ``D``."""
    D = ps.D
    rep = verify_map(H, ps.source, ps.target, D)
    if not rep.verified:
        raise FormalCheckError("the map is not tangent to order D (or not invertible)", rep)
    jet = eta(SeriesTuple(tuple(fit(h, Precision(2 * ps.k0)) for h in H)), 2 * ps.k0)
    sysm = ps.run(jet)
    res = _report(sysm.equations, D, ps.k0)
    if not res.zero:
        raise FormalCheckError("the jet of the map does not satisfy the parametrization system", res)
    K = sysm.K
    p = Precision(D)
    for h, k in zip(H, K):
        if not fit(h, p).equal_terms(fit(k, p)):
            raise FormalCheckError("the reconstructed map disagrees with the formal map", res)
    return K


def required_normal_form(df: DefiningFunction, point, D: int, k0: int | None = None) -> NormalForm:
    """Normal form at ``point`` precise enough for a parametrization with truncation ``D``."""
    nf = normal_coordinates(df, point, D=max(D, 4))
    if nf.Q.prec.exact:
        return nf
    # non-polynomial normal form: the Segre chart needs degree n E_z + D + 1
    c = nf.coords
    Q = nf.Q
    order_A = None
    for ch in c.chis:
        line = Q.set_zero(("tau",) + tuple(x for x in c.chis if x != ch)).coefficient_in(ch, 1)
        if not line.is_zero():
            order_A = line.order()
            break
    if order_A is None:
        raise HypersurfaceError("Q_chi(z, 0, 0) vanishes to the examined degree")
    need = c.n * D * 2 * order_A + D + 1
    return normal_coordinates(df, point, D=need)


def lie_dim_sweep(df: DefiningFunction, points, D: int | None = None) -> list:
    """``lie_dim`` at each point of ``M``; failures are reported and the sweep continues."""
    out = []
    for pt in points:
        pt = tuple(GaussianRational.coerce(x) for x in pt)
        try:
            probe = normal_coordinates(df, pt, D=max(D or 8, 8))
            rep = nondegeneracy(probe)
            if rep.degenerate:
                raise HypersurfaceError("not finitely nondegenerate to the examined order")
            d = D if D is not None else 2 * rep.k0 + 4
            nf = required_normal_form(df, pt, d)
            par = Parametrization(nf, nf, d)
            r = lie_dim(par)
            r.point = pt
            out.append(r)
        except (HypersurfaceError, ParametrizationError, PrecisionError, SeriesError, RingError) as exc:
            out.append(LieDimReport(-1, 0, 0, D or 0, 0, pt, str(exc)))
    return out


__all__ = [
    "VerificationReport", "verify_map", "ResidualReport", "evaluate_system", "reconstruct",
    "LieDimReport", "lie_dim", "dual_identity_jet", "formal_to_convergent", "lie_dim_sweep",
    "required_normal_form", "OutOfChartError", "FormalCheckError",
]
