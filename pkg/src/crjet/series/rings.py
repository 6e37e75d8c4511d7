"""Exact coefficient rings.

Three element types share one duck-typed interface (``+ - * /``, unary minus,
``conj()``, ``is_zero()``, ``is_unit()``):

* :class:`GaussianRational` -- ``a + b i`` with ``a, b`` exact rationals (NUMERIC).
* :class:`Dual` -- a NUMERIC value plus a sparse first-order perturbation over
  integer slots (DUAL).
* :class:`Symbolic` -- a reduced fraction of polynomials in jet variables and
  their conjugates, with Gaussian-rational coefficients (SYMBOLIC).

Each mode also has a small ring object that builds constants and tells the
series kernel how to embed NUMERIC data.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import flint
from gmpy2 import mpq

NUMERIC = "numeric"
DUAL = "dual"
SYMBOLIC = "symbolic"

_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)
_new = object.__new__


class RingError(ArithmeticError):
    """Raised for division by a non-unit or an incompatible ring operation."""


def to_mpq(x) -> mpq:
    if isinstance(x, str):
        return mpq(Fraction(x.strip()))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _gr(re, im):
    g = _new(GaussianRational)
    g.re = re
    g.im = im
    return g


class GaussianRational:
    """Exact complex rational ``re + im*i``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_mpq(re)
        self.im = to_mpq(im)

    @staticmethod
    def coerce(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            raise TypeError("floating point values are not accepted")
        return _gr(to_mpq(x), _MPQ_ZERO)

    # arithmetic ------------------------------------------------------------
    def __add__(self, o):
        if type(o) is GaussianRational:
            return _gr(self.re + o.re, self.im + o.im)
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return _gr(self.re + o, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is GaussianRational:
            return _gr(self.re - o.re, self.im - o.im)
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return _gr(self.re - o, self.im)
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return _gr(o - self.re, -self.im)
        return NotImplemented

    def __mul__(self, o):
        if type(o) is GaussianRational:
            a, b, c, d = self.re, self.im, o.re, o.im
            if not b:
                return _gr(a * c, a * d)
            if not d:
                return _gr(a * c, b * c)
            return _gr(a * c - b * d, a * d + b * c)
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return _gr(self.re * o, self.im * o)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return _gr(-self.re, -self.im)

    def __pos__(self):
        return self

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise RingError("division by zero")
        return _gr(self.re / n, -self.im / n)

    def __truediv__(self, o):
        if isinstance(o, (int, type(_MPQ_ZERO))):
            if not o:
                raise RingError("division by zero")
            return _gr(self.re / o, self.im / o)
        if type(o) is GaussianRational:
            return self * o.inverse()
        return NotImplemented

    def __rtruediv__(self, o):
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return self.inverse() * o
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = _gr(_MPQ_ONE, _MPQ_ZERO)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self):
        return _gr(self.re, -self.im)

    def norm2(self) -> mpq:
        return self.re * self.re + self.im * self.im

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_unit(self) -> bool:
        return bool(self)

    def __eq__(self, o):
        if type(o) is GaussianRational:
            return self.re == o.re and self.im == o.im
        if isinstance(o, (int, type(_MPQ_ZERO), Fraction)):
            return not self.im and self.re == o
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}*i"

    def to_json(self) -> dict:
        return {"re": [str(self.re.numerator), str(self.re.denominator)],
                "im": [str(self.im.numerator), str(self.im.denominator)]}

    @staticmethod
    def from_json(d) -> "GaussianRational":
        re = mpq(int(d["re"][0]), int(d["re"][1]))
        im = mpq(int(d["im"][0]), int(d["im"][1]))
        return _gr(re, im)


ZERO = _gr(_MPQ_ZERO, _MPQ_ZERO)
ONE = _gr(_MPQ_ONE, _MPQ_ZERO)
I = _gr(_MPQ_ZERO, _MPQ_ONE)


def gaussian(x) -> GaussianRational:
    """Coerce ints, rationals, strings like ``"3/5"`` or pairs ``(re, im)``."""
    if isinstance(x, tuple):
        return GaussianRational(x[0], x[1])
    return GaussianRational.coerce(x)


# ---------------------------------------------------------------------------
# DUAL
# ---------------------------------------------------------------------------

def _dual(value, eps):
    d = _new(Dual)
    d.value = value
    d.eps = eps
    return d


class Dual:
    """First-order perturbation ``value + sum eps[s] * e_s`` with ``e_s e_t = 0``.

    Slots stand for real perturbation parameters, so conjugation conjugates
    the value and every slot coefficient.
    """

    __slots__ = ("value", "eps")

    def __init__(self, value, eps=None):
        self.value = GaussianRational.coerce(value)
        self.eps = {k: GaussianRational.coerce(v) for k, v in (eps or {}).items() if v}

    @staticmethod
    def _lift(o):
        if type(o) is Dual:
            return o
        if type(o) is GaussianRational:
            return _dual(o, {})
        if isinstance(o, (int, type(_MPQ_ZERO))):
            return _dual(_gr(mpq(o), _MPQ_ZERO), {})
        return None

    def __add__(self, o):
        if type(o) is not Dual:
            o = Dual._lift(o)
            if o is None:
                return NotImplemented
        if not o.eps:
            return _dual(self.value + o.value, self.eps)
        if not self.eps:
            return _dual(self.value + o.value, o.eps)
        eps = dict(self.eps)
        for k, v in o.eps.items():
            c = eps.get(k)
            if c is None:
                eps[k] = v
            else:
                c = c + v
                if c:
                    eps[k] = c
                else:
                    del eps[k]
        return _dual(self.value + o.value, eps)

    __radd__ = __add__

    def __neg__(self):
        return _dual(-self.value, {k: -v for k, v in self.eps.items()})

    def __sub__(self, o):
        o = Dual._lift(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = Dual._lift(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        if type(o) is not Dual:
            if type(o) is GaussianRational or isinstance(o, (int, type(_MPQ_ZERO))):
                if not o:
                    return _dual(ZERO, {})
                return _dual(self.value * o, {k: v * o for k, v in self.eps.items()})
            return NotImplemented
        a, b = self.value, o.value
        eps = {}
        if b:
            for k, v in self.eps.items():
                eps[k] = v * b
        if a:
            for k, v in o.eps.items():
                c = eps.get(k)
                w = v * a
                if c is None:
                    eps[k] = w
                else:
                    c = c + w
                    if c:
                        eps[k] = c
                    else:
                        del eps[k]
        return _dual(a * b, eps)

    __rmul__ = __mul__

    def inverse(self):
        if not self.value:
            raise RingError("dual number with zero value part is not a unit")
        inv = self.value.inverse()
        f = -(inv * inv)
        return _dual(inv, {k: v * f for k, v in self.eps.items()})

    def __truediv__(self, o):
        o = Dual._lift(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = Dual._lift(o)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conj(self):
        return _dual(self.value.conj(), {k: v.conj() for k, v in self.eps.items()})

    def is_zero(self) -> bool:
        return not self.value and not self.eps

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self) -> bool:
        return bool(self.value)

    def __eq__(self, o):
        o = Dual._lift(o)
        if o is None:
            return NotImplemented
        return self.value == o.value and self.eps == o.eps

    def __hash__(self):
        return hash((self.value, tuple(sorted(self.eps.items()))))

    def __repr__(self):
        return f"Dual({self.value}, {self.eps})"


# ---------------------------------------------------------------------------
# SYMBOLIC
# ---------------------------------------------------------------------------

def conj_name(name: str) -> str:
    return name[:-4] if name.endswith("_bar") else name + "_bar"


class SymbolicRing:
    """Field of fractions Q(i)(L, conj L) for a declared list of jet variables.

    The polynomial context holds every variable together with its ``_bar``
    partner; conjugation swaps the two.
    """

    def __init__(self, names):
        names = tuple(names)
        allv = []
        for nm in names:
            allv.append(nm)
        for nm in names:
            allv.append(conj_name(nm))
        self.base_names = names
        self.names = tuple(allv)
        self.ctx = flint.fmpq_mpoly_ctx.get(self.names, "degrevlex")
        gens = self.ctx.gens()
        m = len(names)
        self._swap = tuple(gens[m:] + gens[:m])
        self.index = {nm: k for k, nm in enumerate(self.names)}
        self._zero = self.ctx.from_dict({})
        self._one = self.ctx.from_dict({(0,) * len(self.names): 1})

    def __eq__(self, o):
        return isinstance(o, SymbolicRing) and o.names == self.names

    def __hash__(self):
        return hash(self.names)

    def zero(self):
        return _sym(self, self._zero, self._zero, self._one)

    def one(self):
        return _sym(self, self._one, self._zero, self._one)

    def const(self, g) -> "Symbolic":
        g = GaussianRational.coerce(g)
        c = self.ctx.constant
        return _sym(self, c(flint.fmpq(int(g.re.numerator), int(g.re.denominator))),
                    c(flint.fmpq(int(g.im.numerator), int(g.im.denominator))), self._one)

    def var(self, name: str) -> "Symbolic":
        return _sym(self, self.ctx.gen(self.index[name]), self._zero, self._one)

    def poly(self, p) -> "Symbolic":
        return _sym(self, p, self._zero, self._one)


def _sym(ring, re, im, den):
    s = _new(Symbolic)
    s.ring = ring
    s.re = re
    s.im = im
    s.den = den
    return s


def _normalize(ring, re, im, den):
    if den.is_zero():
        raise RingError("zero denominator")
    if re.is_zero() and im.is_zero():
        return _sym(ring, ring._zero, ring._zero, ring._one)
    if not den.is_constant():
        g = den.gcd(re).gcd(im) if not re.is_zero() else den.gcd(im)
        if not g.is_one():
            re = re / g
            im = im / g
            den = den / g
    lc = den.leading_coefficient()
    if lc != 1:
        re = re / lc
        im = im / lc
        den = den / lc
    return _sym(ring, re, im, den)


class Symbolic:
    """``(re + i*im) / den`` with ``re, im, den`` rational polynomials, ``den`` monic."""

    __slots__ = ("ring", "re", "im", "den")

    def _lift(self, o):
        if type(o) is Symbolic:
            return o
        if type(o) is GaussianRational or isinstance(o, (int, type(_MPQ_ZERO))):
            return self.ring.const(o)
        return None

    def __add__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        r = self.ring
        if self.den == o.den:
            if self.den.is_one():
                return _sym(r, self.re + o.re, self.im + o.im, self.den)
            return _normalize(r, self.re + o.re, self.im + o.im, self.den)
        return _normalize(r, self.re * o.den + o.re * self.den,
                          self.im * o.den + o.im * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return _sym(self.ring, -self.re, -self.im, self.den)

    def __sub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if b.is_zero():
            re, im = a * c, a * d
        elif d.is_zero():
            re, im = a * c, b * c
        else:
            re, im = a * c - b * d, a * d + b * c
        den = self.den * o.den
        if den.is_one():
            return _sym(self.ring, re, im, den)
        return _normalize(self.ring, re, im, den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise RingError("division by the zero rational function")
        n = self.re * self.re + self.im * self.im
        return _normalize(self.ring, self.den * self.re, -(self.den * self.im), n)

    def __truediv__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def conj(self):
        sw = self.ring._swap
        ctx = self.ring.ctx
        re, im = self.re.compose(*sw, ctx=ctx), -self.im.compose(*sw, ctx=ctx)
        if self.den.is_one():
            return _sym(self.ring, re, im, self.den)
        den = self.den.compose(*sw, ctx=ctx)
        lc = den.leading_coefficient()
        if lc != 1:
            # the swap moves the leading monomial, so restore a monic denominator
            re, im, den = re / lc, im / lc, den / lc
        return _sym(self.ring, re, im, den)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_unit(self) -> bool:
        return not self.is_zero()

    def __eq__(self, o):
        o = self._lift(o)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im and self.den == o.den

    def __hash__(self):
        return hash((str(self.re), str(self.im), str(self.den)))

    def __repr__(self):
        return f"Symbolic(({self.re}) + i*({self.im}) / ({self.den}))"

    def derivative(self, name: str) -> "Symbolic":
        """Partial derivative in one ring variable (quotient rule)."""
        k = self.ring.index[name]
        dd = self.den.derivative(k)
        if dd.is_zero():
            return _normalize(self.ring, self.re.derivative(k), self.im.derivative(k), self.den)
        re = self.re.derivative(k) * self.den - self.re * dd
        im = self.im.derivative(k) * self.den - self.im * dd
        return _normalize(self.ring, re, im, self.den * self.den)

    # numerators as Gaussian polynomials ---------------------------------------
    def numerator_terms(self):
        """Terms of the numerator as ``{exponent tuple: GaussianRational}``."""
        return _gauss_terms(self.re, self.im)

    def denominator_terms(self):
        return _gauss_terms(self.den, self.ring._zero)

    def evaluate(self, point) -> GaussianRational:
        """Evaluate at ``point`` (a map from every ring variable name to a value)."""
        num = eval_gauss_poly(self.numerator_terms(), self.ring.names, point)
        den = eval_gauss_poly(self.denominator_terms(), self.ring.names, point)
        if not den:
            raise RingError("denominator vanishes at the evaluation point")
        return num / den


def _fmpq_to_mpq(c) -> mpq:
    return mpq(int(c.p), int(c.q))


def _gauss_terms(re, im):
    out = {}
    for e, c in re.terms():
        out[tuple(int(x) for x in e)] = _gr(_fmpq_to_mpq(c), _MPQ_ZERO)
    for e, c in im.terms():
        e = tuple(int(x) for x in e)
        g = out.get(e, ZERO)
        out[e] = _gr(g.re, _fmpq_to_mpq(c))
    return out


def eval_gauss_poly(terms, names, point):
    """Evaluate ``{exponents: coeff}`` at ``point`` (name -> ring element)."""
    acc = None
    powers = {}
    for e, c in terms.items():
        t = c
        for k, ek in enumerate(e):
            if ek:
                key = (k, ek)
                p = powers.get(key)
                if p is None:
                    p = _pow(point[names[k]], ek)
                    powers[key] = p
                t = p * t
        acc = t if acc is None else acc + t
    if acc is None:
        return ZERO
    return acc


def _pow(x, e):
    out = x
    for _ in range(e - 1):
        out = out * x
    return out


# ---------------------------------------------------------------------------
# ring descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NumericRing:
    mode: str = NUMERIC

    def zero(self):
        return ZERO

    def one(self):
        return ONE

    def const(self, g):
        return GaussianRational.coerce(g)


@dataclass(frozen=True)
class DualRing:
    mode: str = DUAL

    def zero(self):
        return _dual(ZERO, {})

    def one(self):
        return _dual(ONE, {})

    def const(self, g):
        return _dual(GaussianRational.coerce(g), {})


NUMERIC_RING = NumericRing()
DUAL_RING = DualRing()
SymbolicRing.mode = SYMBOLIC
