"""Sparse truncated multivariate power series.

Exponent vectors are packed into one Python int: the total degree sits in the
top field and variable ``v`` in field ``nv-1-v`` below it, 16 bits each.  Sorting
keys therefore sorts terms graded-lexicographically with the first variable
most significant, and adding two keys multiplies the monomials.

A :class:`Precision` is a total-degree bound plus optional per-variable caps.
Terms outside the box are dropped by every operation.  ``Precision(None)`` is an
exact polynomial and mixes freely with truncated series; two different finite
precisions never mix silently.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from fractions import Fraction

from gmpy2 import mpq

from .rings import NUMERIC_RING, GaussianRational, RingError

_MPQ = type(mpq(0))

FIELD = 16
GUARD = 1 << 15
MAX_EXP = (1 << 14) - 1


class PrecisionError(ValueError):
    """Operands have different variables or truncations; rebase explicitly."""


class SeriesError(ValueError):
    pass


@dataclass(frozen=True)
class Precision:
    degree: int | None = None
    caps: tuple | None = None  # one entry per variable, None for "no cap"

    def __post_init__(self):
        if self.caps is not None and all(c is None for c in self.caps):
            object.__setattr__(self, "caps", None)

    @property
    def exact(self) -> bool:
        return self.degree is None and self.caps is None

    def admits(self, exps) -> bool:
        if self.degree is not None and sum(exps) > self.degree:
            return False
        if self.caps is not None:
            for e, c in zip(exps, self.caps):
                if c is not None and e > c:
                    return False
        return True

    def lower(self, k: int = 1, var: int | None = None) -> "Precision":
        d = None if self.degree is None else self.degree - k
        caps = self.caps
        if caps is not None and var is not None and caps[var] is not None:
            caps = caps[:var] + (caps[var] - k,) + caps[var + 1:]
        return Precision(d, caps)

    def to_json(self, nv: int):
        return {"degree": self.degree, "caps": list(self.caps) if self.caps else None}


EXACT = Precision(None)


def combine(p: Precision, q: Precision) -> Precision:
    if p == q or q.exact:
        return p
    if p.exact:
        return q
    raise PrecisionError(f"precision mismatch {p} vs {q}; rebase explicitly")


@lru_cache(maxsize=None)
def _layout(nv: int):
    degshift = FIELD * nv
    shifts = tuple(FIELD * (nv - 1 - v) for v in range(nv))
    return degshift, shifts


@lru_cache(maxsize=4096)
def _cap_masks(nv: int, caps):
    if caps is None:
        return 0, 0
    _, shifts = _layout(nv)
    bias = guard = 0
    for v, c in enumerate(caps):
        if c is None:
            continue
        if c < 0:
            c = -1
        bias += (GUARD - 1 - c) << shifts[v]
        guard += GUARD << shifts[v]
    return bias, guard


def pack(exps) -> int:
    nv = len(exps)
    degshift, shifts = _layout(nv)
    k = sum(exps) << degshift
    for e, s in zip(exps, shifts):
        if e < 0 or e > MAX_EXP:
            raise SeriesError(f"exponent {e} out of range")
        k |= e << s
    return k


@lru_cache(maxsize=1 << 18)
def _unpack(k: int, nv: int):
    _, shifts = _layout(nv)
    m = (1 << FIELD) - 1
    return tuple((k >> s) & m for s in shifts)


def _key_ok(key, degshift, D, bias, guard):
    if D is not None and (key >> degshift) > D:
        return False
    return not (guard and ((key + bias) & guard))


class TruncatedSeries:
    """Sparse series over a coefficient ring, truncated to a :class:`Precision`."""

    __slots__ = ("vars", "prec", "terms", "ring", "_sorted")

    def __init__(self, variables, terms=None, prec: Precision = EXACT, ring=NUMERIC_RING):
        """``terms`` maps exponent tuples to coefficients; zero and out-of-box terms are dropped."""
        self.vars = tuple(variables)
        self.prec = prec
        self.ring = ring
        nv = len(self.vars)
        if prec.caps is not None and len(prec.caps) != nv:
            raise SeriesError("caps length does not match variable count")
        degshift, _ = _layout(nv)
        bias, guard = _cap_masks(nv, prec.caps)
        D = prec.degree
        out = {}
        for e, c in (terms or {}).items():
            if len(e) != nv:
                raise SeriesError("exponent length does not match variable count")
            if _is_scalar(c):
                c = ring.const(c)
            if not c:
                continue
            k = pack(e)
            if not _key_ok(k, degshift, D, bias, guard):
                continue
            out[k] = out[k] + c if k in out else c
        self.terms = {k: v for k, v in out.items() if v}
        self._sorted = None

    @classmethod
    def _raw(cls, variables, terms, prec, ring):
        s = object.__new__(cls)
        s.vars = variables
        s.prec = prec
        s.terms = terms
        s.ring = ring
        s._sorted = None
        return s

    # constructors ------------------------------------------------------------
    @classmethod
    def zero(cls, variables, prec=EXACT, ring=NUMERIC_RING):
        return cls._raw(tuple(variables), {}, prec, ring)

    @classmethod
    def constant(cls, variables, c, prec=EXACT, ring=NUMERIC_RING):
        variables = tuple(variables)
        if _is_scalar(c):
            c = ring.const(c)
        return cls._raw(variables, {0: c} if c else {}, prec, ring)

    @classmethod
    def variable(cls, variables, name, prec=EXACT, ring=NUMERIC_RING, coeff=None):
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        c = ring.one() if coeff is None else coeff
        return cls(variables, {tuple(e): c}, prec, ring)

    @classmethod
    def monomial(cls, variables, exps, coeff, prec=EXACT, ring=NUMERIC_RING):
        return cls(tuple(variables), {tuple(exps): coeff}, prec, ring)

    # basic access --------------------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def sorted_items(self):
        if self._sorted is None:
            self._sorted = sorted(self.terms.items())
        return self._sorted

    def items(self):
        """``(exponent tuple, coefficient)`` pairs in graded-lex order."""
        nv = len(self.vars)
        return [(_unpack(k, nv), c) for k, c in self.sorted_items()]

    def to_dict(self) -> dict:
        nv = len(self.vars)
        return {_unpack(k, nv): c for k, c in self.terms.items()}

    def coeff(self, exps):
        c = self.terms.get(pack(tuple(exps)))
        return self.ring.zero() if c is None else c

    def constant_term(self):
        return self.coeff((0,) * len(self.vars))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def order(self):
        """Lowest total degree present, or None for the zero series."""
        if not self.terms:
            return None
        return min(self.terms) >> _layout(len(self.vars))[0]

    def max_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.terms) >> _layout(len(self.vars))[0]

    def var_degree(self, name) -> int:
        v = self.vars.index(name)
        nv = len(self.vars)
        return max((_unpack(k, nv)[v] for k in self.terms), default=-1)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, o):
        if not isinstance(o, TruncatedSeries):
            return NotImplemented
        return self.vars == o.vars and self.prec == o.prec and self.terms == o.terms

    def __hash__(self):
        return hash((self.vars, self.prec, len(self.terms)))

    def equal_terms(self, o) -> bool:
        """Term-wise equality ignoring precision labels (variables must agree)."""
        return self.vars == o.vars and self.terms == o.terms

    def __repr__(self):
        return f"TruncatedSeries({self.vars}, {format_series(self)}, {self.prec})"

    # compatibility -------------------------------------------------------------------
    def _check(self, o) -> Precision:
        if self.vars != o.vars:
            raise PrecisionError(f"variable mismatch {self.vars} vs {o.vars}; rebase explicitly")
        if self.ring != o.ring:
            raise PrecisionError("coefficient rings differ; convert explicitly")
        return combine(self.prec, o.prec)

    def _coerce(self, o):
        if isinstance(o, TruncatedSeries):
            return o
        return TruncatedSeries.constant(self.vars, o, EXACT, self.ring)

    # arithmetic -------------------------------------------------------------------
    def __add__(self, o):
        o = self._coerce(o)
        p = self._check(o)
        a, b = self, o
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for k, c in b.terms.items():
            old = out.get(k)
            if old is None:
                out[k] = c
            else:
                c = old + c
                if c:
                    out[k] = c
                else:
                    del out[k]
        res = TruncatedSeries._raw(self.vars, out, p, self.ring)
        if p != self.prec or p != o.prec:
            res = res._clip(p)
        return res

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.vars, {k: -c for k, c in self.terms.items()}, self.prec, self.ring)

    def __sub__(self, o):
        return self + (-self._coerce(o))

    def __rsub__(self, o):
        return self._coerce(o) + (-self)

    def scale(self, c):
        if not c:
            return TruncatedSeries._raw(self.vars, {}, self.prec, self.ring)
        return TruncatedSeries._raw(self.vars, {k: v * c for k, v in self.terms.items()}, self.prec, self.ring)

    def __mul__(self, o):
        if not isinstance(o, TruncatedSeries):
            return self.scale(o)
        p = self._check(o)
        return TruncatedSeries._raw(self.vars, _mul_terms(self, o, p), p, self.ring)

    def __rmul__(self, o):
        return self.scale(o)

    def __pow__(self, e: int):
        if e < 0:
            return invert_unit(self) ** (-e)
        out = TruncatedSeries.constant(self.vars, self.ring.one(), self.prec, self.ring)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    # precision management ------------------------------------------------------------
    def _clip(self, p: Precision):
        nv = len(self.vars)
        degshift, _ = _layout(nv)
        bias, guard = _cap_masks(nv, p.caps)
        D = p.degree
        if D is None and not guard:
            return self
        terms = {k: c for k, c in self.terms.items() if _key_ok(k, degshift, D, bias, guard)}
        return TruncatedSeries._raw(self.vars, terms, p, self.ring)

    def truncate(self, prec: Precision) -> "TruncatedSeries":
        """Drop terms outside ``prec``; ``prec`` must be no finer than the current one."""
        if not self.prec.exact and not _coarser(prec, self.prec):
            raise PrecisionError(f"cannot refine {self.prec} to {prec}")
        res = self._clip(prec)
        if res is self:
            res = TruncatedSeries._raw(self.vars, self.terms, prec, self.ring)
        else:
            res.prec = prec
        return res

    def truncate_degree(self, D: int) -> "TruncatedSeries":
        return self.truncate(Precision(D if self.prec.degree is None else min(D, self.prec.degree),
                                       self.prec.caps))

    def relabel_precision(self, prec: Precision) -> "TruncatedSeries":
        """Declare a new precision without checks (caller vouches for exactness)."""
        out = TruncatedSeries._raw(self.vars, self.terms, prec, self.ring)._clip(prec)
        out.prec = prec
        return out

    def rebase(self, variables, prec: Precision | None = None) -> "TruncatedSeries":
        """Re-express over ``variables`` (a superset of the used variables) then truncate."""
        variables = tuple(variables)
        nv_old, nv = len(self.vars), len(variables)
        pos = []
        for v in self.vars:
            pos.append(variables.index(v) if v in variables else None)
        terms = {}
        for k, c in self.terms.items():
            e_old = _unpack(k, nv_old)
            e = [0] * nv
            for i, ei in enumerate(e_old):
                if ei:
                    if pos[i] is None:
                        raise SeriesError(f"variable {self.vars[i]} is used but not in the new basis")
                    e[pos[i]] = ei
            terms[pack(tuple(e))] = c
        if prec is None:
            caps = None
            if self.prec.caps is not None:
                cmap = dict(zip(self.vars, self.prec.caps))
                caps = tuple(cmap.get(v) for v in variables)
            prec = Precision(self.prec.degree, caps)
        return TruncatedSeries._raw(variables, terms, prec, self.ring)._clip(prec)

    def to_ring(self, ring) -> "TruncatedSeries":
        if ring == self.ring:
            return self
        return TruncatedSeries._raw(self.vars, {k: ring.const(c) for k, c in self.terms.items()},
                                    self.prec, ring)

    def map_coeffs(self, fn, ring=None) -> "TruncatedSeries":
        ring = self.ring if ring is None else ring
        terms = {}
        for k, c in self.terms.items():
            c = fn(c)
            if c:
                terms[k] = c
        return TruncatedSeries._raw(self.vars, terms, self.prec, ring)

    # calculus -------------------------------------------------------------------------
    def diff(self, name, times: int = 1) -> "TruncatedSeries":
        """Partial derivative; the precision drops by one in degree and in the variable's cap."""
        if name not in self.vars:
            raise SeriesError(f"unknown variable {name}")
        out = self
        for _ in range(times):
            out = out._diff1(self.vars.index(name))
        return out

    def _diff1(self, v):
        nv = len(self.vars)
        degshift, shifts = _layout(nv)
        step = (1 << shifts[v]) + (1 << degshift)
        m = (1 << FIELD) - 1
        terms = {}
        for k, c in self.terms.items():
            e = (k >> shifts[v]) & m
            if e:
                terms[k - step] = c * e
        return TruncatedSeries._raw(self.vars, terms, self.prec.lower(1, v), self.ring)

    def set_zero(self, names) -> "TruncatedSeries":
        """Substitute 0 for ``names`` and drop them from the variable list."""
        names = set(names)
        keep = [i for i, v in enumerate(self.vars) if v not in names]
        nv = len(self.vars)
        newvars = tuple(self.vars[i] for i in keep)
        terms = {}
        for k, c in self.terms.items():
            e = _unpack(k, nv)
            if any(e[i] for i in range(nv) if self.vars[i] in names):
                continue
            terms[pack(tuple(e[i] for i in keep))] = c
        caps = None if self.prec.caps is None else tuple(self.prec.caps[i] for i in keep)
        return TruncatedSeries._raw(newvars, terms, Precision(self.prec.degree, caps), self.ring)

    def coefficient_in(self, name, power: int) -> "TruncatedSeries":
        """Coefficient of ``name**power`` as a series in the remaining variables."""
        v = self.vars.index(name)
        nv = len(self.vars)
        keep = [i for i in range(nv) if i != v]
        terms = {}
        for k, c in self.terms.items():
            e = _unpack(k, nv)
            if e[v] == power:
                terms[pack(tuple(e[i] for i in keep))] = c
        d = None if self.prec.degree is None else self.prec.degree - power
        caps = None if self.prec.caps is None else tuple(self.prec.caps[i] for i in keep)
        return TruncatedSeries._raw(tuple(self.vars[i] for i in keep), terms, Precision(d, caps), self.ring)

    def substitute(self, assignment, target_vars=None, prec: Precision | None = None):
        return substitute(self, assignment, target_vars, prec)

    def conj(self, relabel=None, variables=None):
        return conjugate_series(self, relabel or {}, variables)

    def evaluate_coeffs(self, fn):
        return self.map_coeffs(fn)


def _is_scalar(c) -> bool:
    return isinstance(c, (int, Fraction, str, _MPQ, GaussianRational))


def _effective_cap(p: Precision, i: int):
    c = None if p.caps is None else p.caps[i]
    if p.degree is not None:
        c = p.degree if c is None else min(c, p.degree)
    return c


def _coarser(p: Precision, q: Precision) -> bool:
    """True when every term admitted by ``p`` is admitted by ``q``."""
    if q.degree is not None:
        if p.degree is None:
            if p.caps is None or any(c is None for c in p.caps) or sum(p.caps) > q.degree:
                return False
        elif p.degree > q.degree:
            return False
    if q.caps is not None:
        for i, c in enumerate(q.caps):
            if c is None:
                continue
            pc = _effective_cap(p, i)
            if pc is None or pc > c:
                return False
    return True


def _mul_terms(a: TruncatedSeries, b: TruncatedSeries, p: Precision) -> dict:
    nv = len(a.vars)
    degshift, _ = _layout(nv)
    bias, guard = _cap_masks(nv, p.caps)
    D = p.degree if p.degree is not None else 1 << 30
    A = a.sorted_items()
    B = b.sorted_items()
    if len(A) > len(B):
        A, B = B, A
    out = {}
    get = out.get
    Bd = [(kb >> degshift, kb, cb) for kb, cb in B]
    for ka, ca in A:
        da = ka >> degshift
        lim = D - da
        if lim < 0:
            break
        kab = ka + bias
        for db, kb, cb in Bd:
            if db > lim:
                break
            if guard and (kab + kb) & guard:
                continue
            k = ka + kb
            old = get(k)
            if old is None:
                out[k] = ca * cb
            else:
                out[k] = old + ca * cb
    return {k: c for k, c in out.items() if c}


def mul_trunc(a: TruncatedSeries, b: TruncatedSeries, prec: Precision) -> TruncatedSeries:
    """Product computed directly into ``prec`` (caller vouches that it is exact there)."""
    if a.vars != b.vars:
        raise PrecisionError("variable mismatch")
    return TruncatedSeries._raw(a.vars, _mul_terms(a, b, prec), prec, a.ring)


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def substitute(f: TruncatedSeries, assignment, target_vars=None, prec: Precision | None = None):
    """Compose ``f`` with the series in ``assignment`` (variable name -> series).

    Unassigned variables of ``f`` map to the same-named target variable.  The
    result lives over ``target_vars`` (default: the variables of the assigned
    series) with precision ``prec`` (default: theirs, capped by the degree of
    ``f`` when every image has positive order).
    """
    imgs = {k: v for k, v in assignment.items() if isinstance(v, TruncatedSeries)}
    consts = {k: v for k, v in assignment.items() if not isinstance(v, TruncatedSeries)}
    if target_vars is None:
        if imgs:
            target_vars = next(iter(imgs.values())).vars
        else:
            target_vars = tuple(v for v in f.vars if v not in consts)
    target_vars = tuple(target_vars)
    tprec = None
    for s in imgs.values():
        if s.vars != target_vars:
            raise PrecisionError("substituted series must share the target variables")
        if s.ring != f.ring:
            raise PrecisionError("coefficient rings differ")
        tprec = s.prec if tprec is None else combine(tprec, s.prec)
    ring = f.ring
    images = []
    positive = True
    for v in f.vars:
        if v in imgs:
            g = imgs[v]
            c0 = g.constant_term()
            if c0:
                positive = False
                if f.prec.degree is not None or (f.prec.caps is not None and
                                                 f.prec.caps[f.vars.index(v)] is None):
                    raise SeriesError(
                        f"image of {v} has a nonzero constant term; composition would not be finite")
            images.append(g)
        elif v in consts:
            c = consts[v]
            if c and f.prec.degree is not None:
                raise SeriesError(f"nonzero constant for {v} in a truncated series")
            images.append(c)
        else:
            if v not in target_vars:
                raise SeriesError(f"variable {v} has no image")
            images.append(("var", v))
    if prec is None:
        prec = tprec if tprec is not None else EXACT
        if tprec is None and f.prec.degree is not None:
            caps = None
            if f.prec.caps is not None:
                cmap = dict(zip(f.vars, f.prec.caps))
                caps = tuple(cmap.get(v) for v in target_vars)
            prec = Precision(f.prec.degree, caps)
        elif f.prec.degree is not None and positive and (prec.degree is None or prec.degree > f.prec.degree):
            prec = Precision(f.prec.degree, prec.caps)
    # materialize identity images
    for i, g in enumerate(images):
        if isinstance(g, tuple) and g[0] == "var":
            images[i] = TruncatedSeries.variable(target_vars, g[1], prec, ring)
        elif not isinstance(g, TruncatedSeries):
            images[i] = TruncatedSeries.constant(target_vars, g, prec, ring)
        else:
            images[i] = g if g.prec == prec else g._clip(prec).relabel_precision(prec)
    nv = len(f.vars)
    exps = [(_unpack(k, nv), c) for k, c in f.terms.items()]
    exps.sort(key=lambda t: t[0])
    powers = [dict() for _ in range(nv)]
    one = TruncatedSeries.constant(target_vars, ring.one(), prec, ring)

    def power(v, e):
        if e == 0:
            return one
        cache = powers[v]
        if e in cache:
            return cache[e]
        if e == 1:
            r = images[v]
        else:
            r = power(v, e - 1) * images[v]
        cache[e] = r
        return r

    def rec(terms, v):
        if v == nv:
            c = terms[0][1]
            return TruncatedSeries.constant(target_vars, c, prec, ring)
        groups = {}
        for e, c in terms:
            groups.setdefault(e[v], []).append((e, c))
        acc = None
        for ev in sorted(groups):
            sub = rec(groups[ev], v + 1)
            if not sub.terms:
                continue
            part = sub if ev == 0 else sub * power(v, ev)
            acc = part if acc is None else acc + part
        return acc if acc is not None else TruncatedSeries.zero(target_vars, prec, ring)

    if not exps:
        return TruncatedSeries.zero(target_vars, prec, ring)
    return rec(exps, 0)


def compose_tuple(fs, assignment, target_vars=None, prec=None):
    return [substitute(f, assignment, target_vars, prec) for f in fs]


# ---------------------------------------------------------------------------
# units, conjugation
# ---------------------------------------------------------------------------

def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series whose constant term is a unit."""
    c0 = f.constant_term()
    if not c0 or not c0.is_unit():
        raise RingError("constant term is not a unit")
    if f.prec.exact:
        if len(f.terms) == 1:
            return TruncatedSeries.constant(f.vars, c0.inverse(), EXACT, f.ring)
        raise SeriesError("inverse of a non-constant exact polynomial is an infinite series")
    u = c0.inverse()
    h = f - TruncatedSeries.constant(f.vars, c0, EXACT, f.ring)
    r = h.scale(-u)
    term = TruncatedSeries.constant(f.vars, u, f.prec, f.ring)
    acc = term
    while True:
        term = term * r
        if not term.terms:
            break
        acc = acc + term
    return acc


def relabel_series(f: TruncatedSeries, relabel, variables=None) -> TruncatedSeries:
    """Rename variables via the bijection ``relabel`` without touching coefficients."""
    new_names = tuple(relabel.get(v, v) for v in f.vars)
    if len(set(new_names)) != len(new_names):
        raise SeriesError("relabelling is not a bijection")
    out = TruncatedSeries._raw(new_names, f.terms, f.prec, f.ring)
    if variables is not None and tuple(variables) != new_names:
        out = out.rebase(variables)
    return out


def conjugate_series(f: TruncatedSeries, relabel, variables=None) -> TruncatedSeries:
    """Conjugate coefficients and rename variables via ``relabel`` (a bijection).

    Unlisted variables keep their names.  ``variables`` orders the result.
    """
    new_names = tuple(relabel.get(v, v) for v in f.vars)
    if len(set(new_names)) != len(new_names):
        raise SeriesError("relabelling is not a bijection")
    out = TruncatedSeries._raw(new_names, {k: c.conj() for k, c in f.terms.items()}, f.prec, f.ring)
    if variables is not None and tuple(variables) != new_names:
        if set(variables) != set(new_names):
            raise SeriesError("target variable list does not match the relabelled variables")
        out = out.rebase(variables)
    return out


# ---------------------------------------------------------------------------
# formatting, small helpers
# ---------------------------------------------------------------------------

def format_series(f: TruncatedSeries) -> str:
    parts = []
    for e, c in f.items():
        mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(f.vars, e) if k)
        cs = str(c)
        parts.append(f"({cs})*{mono}" if mono else f"({cs})")
    return " + ".join(parts) if parts else "0"


def taylor_derivative(f: TruncatedSeries, exps) -> object:
    """``d^exps f (0)``: the coefficient times the multi-factorial."""
    c = f.coeff(exps)
    m = 1
    for e in exps:
        m *= factorial(e)
    return c * m


@dataclass(frozen=True)
class SeriesTuple:
    """An ordered family of series over common variables, e.g. a map ``H=(f, g)``."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if comps:
            v = comps[0].vars
            if any(c.vars != v for c in comps):
                raise PrecisionError("components must share variables")

    @property
    def vars(self):
        return self.components[0].vars

    def __len__(self):
        return len(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def substitute(self, assignment, target_vars=None, prec=None) -> "SeriesTuple":
        return SeriesTuple(tuple(substitute(c, assignment, target_vars, prec) for c in self.components))

    def truncate(self, prec) -> "SeriesTuple":
        return SeriesTuple(tuple(c.truncate(prec) for c in self.components))

    def equal_terms(self, o) -> bool:
        return len(self) == len(o) and all(a.equal_terms(b) for a, b in zip(self, o))
