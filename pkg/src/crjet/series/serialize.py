"""JSON encoding of coefficients, polynomials and truncated series."""
from __future__ import annotations

import flint

from .core import Precision, TruncatedSeries
from .rings import (
    NUMERIC_RING,
    GaussianRational,
    Symbolic,
    SymbolicRing,
    _normalize,
)


def gauss_poly_to_json(terms, names) -> dict:
    """``{exponents: GaussianRational}`` to the polynomial JSON object."""
    rows = []
    for e in sorted(terms, key=lambda e: (sum(e), e)):
        row = {"exp": list(e)}
        row.update(terms[e].to_json())
        rows.append(row)
    return {"vars": list(names), "terms": rows}


def gauss_poly_from_json(d):
    names = tuple(d["vars"])
    return names, {tuple(t["exp"]): GaussianRational.from_json(t) for t in d["terms"]}


def coeff_to_json(c):
    if isinstance(c, GaussianRational):
        return c.to_json()
    if isinstance(c, Symbolic):
        return {"num": gauss_poly_to_json(c.numerator_terms(), c.ring.names),
                "den": gauss_poly_to_json(c.denominator_terms(), c.ring.names)}
    raise TypeError(f"cannot serialize coefficient of type {type(c).__name__}")


def symbolic_from_terms(ring: SymbolicRing, names, terms) -> Symbolic:
    idx = [ring.index[n] for n in names]
    nv = len(ring.names)
    re, im = {}, {}
    for e, c in terms.items():
        full = [0] * nv
        for i, k in zip(idx, e):
            full[i] = k
        full = tuple(full)
        if c.re:
            re[full] = flint.fmpq(int(c.re.numerator), int(c.re.denominator))
        if c.im:
            im[full] = flint.fmpq(int(c.im.numerator), int(c.im.denominator))
    return _normalize(ring, ring.ctx.from_dict(re), ring.ctx.from_dict(im), ring._one)


def coeff_from_json(d, ring=NUMERIC_RING):
    if "num" in d:
        names, num = gauss_poly_from_json(d["num"])
        _, den = gauss_poly_from_json(d["den"])
        a = symbolic_from_terms(ring, names, num)
        b = symbolic_from_terms(ring, names, den)
        return a / b
    return ring.const(GaussianRational.from_json(d))


def series_to_json(f: TruncatedSeries) -> dict:
    out = {"vars": list(f.vars), "degree": f.prec.degree}
    if f.prec.caps is not None:
        out["caps"] = list(f.prec.caps)
    rows = []
    for e, c in f.items():
        row = {"exp": list(e)}
        row.update(coeff_to_json(c))
        rows.append(row)
    out["terms"] = rows
    return out


def series_from_json(d, ring=NUMERIC_RING) -> TruncatedSeries:
    caps = tuple(d["caps"]) if d.get("caps") else None
    prec = Precision(d.get("degree"), caps)
    terms = {}
    for t in d["terms"]:
        terms[tuple(t["exp"])] = coeff_from_json(t, ring)
    return TruncatedSeries(d["vars"], terms, prec, ring)

