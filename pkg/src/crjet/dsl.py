"""A small expression language for real hypersurfaces, holomorphic maps and points.

Equations look like ``Im w = Re(z)*|z|^2`` or ``rho = ...``.  Expressions may use
``z`` (or ``z1..zn``), ``w``, ``conj(.)``, ``Re(.)``, ``Im(.)``, ``|.|^(2m)``,
``+ - * / ^``, rational literals and ``i``.  Juxtaposition multiplies, so
``2z`` and ``Re(z)|z|^2`` are accepted.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .series import EXACT, GaussianRational, SeriesTuple, TruncatedSeries, conjugate_series
from .series.rings import I


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Coords:
    """Variable names of the complexified space for ``n`` z-variables."""

    n: int

    @property
    def zs(self) -> tuple:
        return ("z",) if self.n == 1 else tuple(f"z{k}" for k in range(1, self.n + 1))

    @property
    def chis(self) -> tuple:
        return ("chi",) if self.n == 1 else tuple(f"chi{k}" for k in range(1, self.n + 1))

    w = "w"
    tau = "tau"

    @property
    def Z(self) -> tuple:
        return self.zs + ("w",)

    @property
    def zeta(self) -> tuple:
        return self.chis + ("tau",)

    @property
    def all(self) -> tuple:
        return self.Z + self.zeta

    @property
    def Q_vars(self) -> tuple:
        return self.zs + self.chis + ("tau",)

    def conj_map(self) -> dict:
        """Relabelling ``z <-> chi``, ``w <-> tau``."""
        m = {}
        for a, b in zip(self.Z, self.zeta):
            m[a] = b
            m[b] = a
        return m


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def tokenize(text: str):
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            toks.append(("num", num))
        elif name is not None:
            toks.append(("name", name))
        elif sym is not None and not sym.isspace():
            toks.append(("sym", sym))
    return toks


def detect_n(texts) -> int:
    names = set()
    for t in texts:
        names |= {v for k, v in tokenize(t) if k == "name"}
    if "z" in names and any(re.fullmatch(r"z\d+", v) for v in names):
        raise ParseError("mixing z with indexed z1..zn")
    idx = [int(v[1:]) for v in names if re.fullmatch(r"z\d+", v)]
    if idx:
        n = max(idx)
        if n == 1:
            raise ParseError("use z (not z1) for a single z-variable")
        return n
    return 1


class _Parser:
    def __init__(self, text: str, coords: Coords, allow_conj: bool):
        self.toks = tokenize(text)
        self.i = 0
        self.c = coords
        self.vars = coords.all
        self.allow_conj = allow_conj
        self.abs_depth = 0
        self.cmap = coords.conj_map()

    # helpers ----------------------------------------------------------------
    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else (None, None)

    def take(self, kind=None, val=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (val is not None and t[1] != val):
            raise ParseError(f"expected {val or kind} at token {self.i}, got {t[1]!r}")
        self.i += 1
        return t

    def const(self, c):
        return TruncatedSeries.constant(self.vars, GaussianRational.coerce(c), EXACT)

    def conj(self, e):
        if not self.allow_conj:
            raise ParseError("conjugation is not allowed here")
        return conjugate_series(e, self.cmap, self.vars)

    # grammar ----------------------------------------------------------------
    def parse(self):
        e = self.expr()
        if self.peek()[0] is not None:
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def _starts_atom(self):
        k, v = self.peek()
        if k in ("num", "name"):
            return True
        if k == "sym" and v == "(":
            return True
        if k == "sym" and v == "|" and self.abs_depth == 0:
            return True
        return False

    def term(self):
        e = self.unary()
        while True:
            k, v = self.peek()
            if (k, v) == ("sym", "*"):
                self.take()
                e = e * self.unary()
            elif (k, v) == ("sym", "/"):
                self.take()
                d = self.unary()
                if d.max_degree() > 0 or d.is_zero():
                    raise ParseError("division only by nonzero constants")
                e = e.scale(d.constant_term().inverse())
            elif self._starts_atom():
                e = e * self.power()
            else:
                return e

    def unary(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("sym", "+"):
            self.take()
            return self.unary()
        return self.power()

    def _exponent(self) -> int:
        if self.peek() == ("sym", "("):
            self.take()
            n = int(self.take("num")[1])
            self.take("sym", ")")
            return n
        return int(self.take("num")[1])

    def power(self):
        k, v = self.peek()
        if (k, v) == ("sym", "|"):
            self.take()
            self.abs_depth += 1
            inner = self.expr()
            self.abs_depth -= 1
            self.take("sym", "|")
            p = 1
            if self.peek() == ("sym", "^"):
                self.take()
                p = self._exponent()
            if p % 2:
                raise ParseError("|.| must be raised to an even power")
            return (inner * self.conj(inner)) ** (p // 2)
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            base = base ** self._exponent()
        return base

    def atom(self):
        k, v = self.peek()
        if k == "num":
            self.take()
            return self.const(int(v))
        if k == "sym" and v == "(":
            self.take()
            e = self.expr()
            self.take("sym", ")")
            return e
        if k == "name":
            self.take()
            if v == "i":
                return self.const(I)
            if v in ("conj", "Re", "Im"):
                if self.peek() == ("sym", "("):
                    self.take()
                    e = self.expr()
                    self.take("sym", ")")
                else:
                    e = self.power()
                if v == "conj":
                    return self.conj(e)
                ce = self.conj(e)
                if v == "Re":
                    return (e + ce).scale(GaussianRational(1, 0) / 2)
                return (e - ce).scale((GaussianRational(0, 2)).inverse())
            if v in self.c.Z:
                return TruncatedSeries.variable(self.vars, v, EXACT)
            raise ParseError(f"unknown name {v!r}")
        raise ParseError(f"unexpected token {v!r}")


def parse_expression(text: str, coords: Coords, allow_conj: bool = True) -> TruncatedSeries:
    """Parse into an exact polynomial over ``coords.all``."""
    return _Parser(text, coords, allow_conj).parse()


def parse_equation(text: str):
    """Return ``(rho, coords)`` for ``Im w = EXPR`` or ``rho = EXPR``."""
    text = " ".join(line.split("#", 1)[0] for line in text.splitlines()).strip()
    if "=" not in text:
        raise ParseError("expected an equation 'Im w = ...' or 'rho = ...'")
    lhs, rhs = text.split("=", 1)
    n = detect_n([lhs, rhs])
    c = Coords(n)
    right = parse_expression(rhs, c)
    lhs_s = lhs.strip()
    if lhs_s.replace(" ", "") == "rho":
        return right, c
    left = parse_expression(lhs_s, c)
    return left - right, c


def parse_map(text: str, n: int | None = None) -> SeriesTuple:
    """Parse ``"(f1, ..., g)"`` into an exact polynomial map over ``(z.., w)``."""
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ParseError("a map is written as a parenthesised tuple")
    parts = _split_top(body[1:-1])
    if n is None:
        n = len(parts) - 1
    if len(parts) != n + 1:
        raise ParseError(f"expected {n + 1} components, got {len(parts)}")
    c = Coords(n)
    comps = [parse_expression(p, c, allow_conj=False).rebase(c.Z) for p in parts]
    return SeriesTuple(tuple(comps))


def parse_point(text: str):
    """``"1, i"`` -> tuple of Gaussian rationals."""
    parts = _split_top(text)
    c = Coords(1)
    out = []
    for p in parts:
        e = parse_expression(p, c, allow_conj=False)
        if e.max_degree() > 0:
            raise ParseError("a point coordinate must be a constant")
        out.append(e.constant_term())
    return tuple(out)


def _split_top(s: str):
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]
