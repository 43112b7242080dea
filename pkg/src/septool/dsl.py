"""A small text format for fields and series.

Example::

    # the planar field Y_a with a(x) = x^2
    name: Y_a
    vars: x, y
    trunc: 24
    series a(x) = x^2
    assume flat a
    dx = y^2 + x^4
    dy = -x*y + x^3*a + (a/x)*y^2

Directives (one per line, ``#`` starts a comment):

``name: <text>``
    free-form label.
``vars: v1, v2[, v3]``
    coordinates, in order; required before any expression.
``trunc: N``
    truncation for divisions by units that do not terminate.
``series NAME(VAR) = <expr in VAR>`` or ``series NAME(VAR) = [c0, c1, ...] [trunc N]``
    univariate series parameter; ``NAME`` alone in an expression means
    ``NAME(VAR)``, ``NAME(<expr>)`` composes.
``assume flat NAME``
    records the hypothesis ``NAME(0) = NAME'(0) = 0`` (checked by pipelines).
``d<var> = <expr>``
    field component, one per coordinate.
``f = <expr>``
    optional function (e.g. a candidate first integral).

Expressions use ``+ - * / ^``, parentheses, integer literals, variables,
series names and ``O(N)`` (the unknown tail of total degree ``>= N``).
Division by a number is exact; division by a series must be exact
(monomial times unit).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DSLSyntaxError, NotDivisible, SeptoolError
from .fields import Field3, PlanarField
from .series import (DEFAULT_TRUNC, Series, compose_univariate, divide_exact,
                     format_rational, format_series)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),\[\]]))")


@dataclass
class Document:
    name: str
    vars: tuple
    field: object
    trunc: int | None = None
    series: dict = field(default_factory=dict)
    assumptions: list = field(default_factory=list)
    function: Series | None = None
    source: str = ""


class _Parser:
    def __init__(self, text, line, col0, env):
        self.text = text
        self.line = line
        self.col0 = col0
        self.env = env
        self.toks = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise DSLSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                     line, col0 + pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip())))
            kind = "num" if m.group(1) else "name" if m.group(2) else "op"
            val = m.group(1) or m.group(2) or m.group(3)
            if val == "**":
                val = "^"
            self.toks.append((kind, val, col0 + m.start(m.lastindex) + 1))
            pos = m.end()
        self.i = 0

    def err(self, msg, tok=None):
        col = tok[2] if tok else self.col0 + len(self.text) + 1
        raise DSLSyntaxError(msg, self.line, col)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, val=None):
        t = self.peek()
        if t is None:
            self.err(f"expected {val!r}" if val else "unexpected end of expression")
        if val is not None and t[1] != val:
            self.err(f"expected {val!r}, found {t[1]!r}", t)
        self.i += 1
        return t

    def parse(self):
        v = self.expr()
        if self.peek() is not None:
            self.err(f"unexpected {self.peek()[1]!r}", self.peek())
        return v

    def expr(self):
        v = self.term()
        while self.peek() and self.peek()[1] in "+-":
            op = self.take()[1]
            w = self.term()
            v = self.env.add(v, w) if op == "+" else self.env.add(v, self.env.neg(w))
        return v

    def term(self):
        v = self.unary()
        while self.peek() and self.peek()[1] in ("*", "/"):
            tok = self.take()
            start = self.i
            w = self.unary()
            if tok[1] == "*":
                v = self.env.mul(v, w)
            else:
                text = " ".join(t[1] for t in self.toks[start:self.i])
                try:
                    v = self.env.div(v, w)
                except NotDivisible as exc:
                    raise DSLSyntaxError(f"division by {text} is not exact: {exc}",
                                         self.line, tok[2]) from exc
        return v

    def unary(self):
        t = self.peek()
        if t and t[1] == "-":
            self.take()
            return self.env.neg(self.unary())
        if t and t[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() and self.peek()[1] == "^":
            self.take()
            sign = 1
            if self.peek() and self.peek()[1] == "-":
                self.err("negative exponents are not supported", self.peek())
            t = self.take()
            if t[0] != "num":
                self.err("exponent must be a non-negative integer", t)
            v = self.env.pow(v, sign * int(t[1]))
        return v

    def atom(self):
        t = self.take()
        kind, val, _ = t
        if kind == "num":
            return Fraction(int(val))
        if val == "(":
            v = self.expr()
            self.take(")")
            return v
        if kind == "name":
            if val == "O":
                self.take("(")
                n = self.take()
                if n[0] != "num":
                    self.err("O(...) takes an integer order", n)
                self.take(")")
                return self.env.big_o(int(n[1]), t)
            if self.peek() and self.peek()[1] == "(":
                self.take("(")
                arg = self.expr()
                self.take(")")
                return self.env.call(val, arg, t, self)
            return self.env.name(val, t, self)
        self.err(f"unexpected {val!r}", t)


class _Env:
    """Evaluates parsed expressions directly into series over ``vars``."""

    def __init__(self, vars, series, trunc):
        self.vars = vars
        self.series = series
        self.trunc = trunc

    def lift(self, v):
        return v if isinstance(v, Series) else Series.const(v, self.vars)

    def add(self, a, b):
        if not isinstance(a, Series) and not isinstance(b, Series):
            return a + b
        return self.lift(a) + self.lift(b)

    def neg(self, a):
        return -a

    def mul(self, a, b):
        if not isinstance(a, Series) or not isinstance(b, Series):
            return a * b
        return a * b

    def div(self, a, b):
        if not isinstance(b, Series):
            if b == 0:
                raise NotDivisible("division by zero")
            return a / b
        if b.is_exact and len(b) == 1 and b.constant_term() != 0:
            return a / b.constant_term()
        return divide_exact(self.lift(a), b, trunc=self.trunc or DEFAULT_TRUNC)

    def pow(self, a, k):
        return a ** k

    def big_o(self, n, tok):
        return Series.zero(self.vars, n)

    def name(self, val, tok, p):
        if val in self.vars:
            return Series.var(val, self.vars)
        if val in self.series:
            s = self.series[val]
            if s.vars[0] not in self.vars:
                p.err(f"series {val} is declared in {s.vars[0]}, not a coordinate here", tok)
            return s.embed(self.vars)
        p.err(f"undefined name {val!r}", tok)

    def call(self, fname, arg, tok, p):
        if fname not in self.series:
            p.err(f"undefined series {fname!r}", tok)
        arg = self.lift(arg)
        try:
            return compose_univariate(self.series[fname], arg)
        except SeptoolError as exc:
            p.err(f"cannot compose {fname}: {exc}", tok)


def parse_expression(text: str, vars, series=None, trunc=None, line=1, col0=0):
    env = _Env(tuple(vars), series or {}, trunc)
    v = _Parser(text, line, col0, env).parse()
    return env.lift(v)


def _parse_series_decl(rest, line, col0, series, trunc):
    m = re.match(r"\s*([A-Za-z_]\w*)\s*\(\s*([A-Za-z_]\w*)\s*\)\s*=\s*(.*)$", rest)
    if not m:
        raise DSLSyntaxError("expected 'series NAME(VAR) = ...'", line, col0 + 1)
    name, var, body = m.group(1), m.group(2), m.group(3)
    bcol = col0 + m.start(3)
    lm = re.match(r"\s*\[(.*)\]\s*(?:trunc\s+(\d+))?\s*$", body)
    if lm:
        coeffs = []
        for piece in lm.group(1).split(","):
            if piece.strip():
                try:
                    coeffs.append(Fraction(piece.strip()))
                except ValueError:
                    raise DSLSyntaxError(f"bad coefficient {piece.strip()!r}", line, bcol + 1)
        t = int(lm.group(2)) if lm.group(2) else None
        return name, Series.from_list(coeffs, var, t)
    return name, parse_expression(body, (var,), series, trunc, line, bcol)


def parse_document(source: str, trunc_override: int | None = None) -> Document:
    name = ""
    vars = None
    trunc = trunc_override
    series: dict = {}
    comps: dict = {}
    assumptions = []
    func = None
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.lstrip()
        col0 = len(line) - len(stripped)
        m = re.match(r"(name|vars|trunc)\s*:\s*(.*)$", stripped)
        if m:
            key, val = m.group(1), m.group(2).strip()
            if key == "name":
                name = val
            elif key == "vars":
                vs = tuple(v.strip() for v in val.split(",") if v.strip())
                if len(vs) not in (2, 3) or len(set(vs)) != len(vs) \
                        or not all(re.fullmatch(r"[A-Za-z_]\w*", v) for v in vs):
                    raise DSLSyntaxError("vars needs 2 or 3 distinct identifiers", lineno, col0 + 1)
                vars = vs
            else:
                if not val.isdigit() or int(val) < 1:
                    raise DSLSyntaxError("trunc must be a positive integer", lineno, col0 + 1)
                if trunc_override is None:
                    trunc = int(val)
            continue
        if stripped.startswith("series "):
            sname, s = _parse_series_decl(stripped[len("series"):], lineno,
                                          col0 + len("series"), series, trunc)
            series[sname] = s
            continue
        m = re.match(r"assume\s+flat\s+([A-Za-z_]\w*)\s*$", stripped)
        if m:
            if m.group(1) not in series:
                raise DSLSyntaxError(f"assumption on undefined series {m.group(1)!r}", lineno, col0 + 1)
            assumptions.append(("flat", m.group(1)))
            continue
        m = re.match(r"(d([A-Za-z_]\w*)|f)\s*=\s*(.*)$", stripped)
        if m:
            if vars is None:
                raise DSLSyntaxError("'vars:' must come before expressions", lineno, col0 + 1)
            ecol = col0 + m.start(3)
            value = parse_expression(m.group(3), vars, series, trunc, lineno, ecol)
            if m.group(1) == "f":
                func = value
            else:
                v = m.group(2)
                if v not in vars:
                    raise DSLSyntaxError(f"component for unknown coordinate {v!r}", lineno, col0 + 1)
                if v in comps:
                    raise DSLSyntaxError(f"component d{v} given twice", lineno, col0 + 1)
                comps[v] = value
            continue
        raise DSLSyntaxError(f"unrecognised line {stripped[:30]!r}", lineno, col0 + 1)
    if vars is None:
        raise DSLSyntaxError("missing 'vars:' declaration", None, None)
    missing = [v for v in vars if v not in comps]
    if missing:
        raise DSLSyntaxError(f"missing component(s) {', '.join('d' + v for v in missing)}")
    cs = [comps[v] for v in vars]
    if trunc_override is not None:
        cs = [c.truncate(trunc_override) for c in cs]
    F = PlanarField(*cs) if len(vars) == 2 else Field3(*cs)
    return Document(name, vars, F, trunc, series, assumptions, func, source)


def parse_field(source: str, trunc_override: int | None = None):
    """The field described by a DSL document."""
    return parse_document(source, trunc_override).field


def parse_series(text: str, var: str = "z", trunc: int | None = None) -> Series:
    """A univariate series from an expression such as ``z^2 + z^3``."""
    return parse_expression(text, (var,), trunc=trunc)


def render_series(s: Series) -> str:
    if s.trunc is not None and s.is_zero():
        return f"O({s.trunc})"
    body = format_series(s)
    if s.trunc is not None:
        body += f" + O({s.trunc})"
    return body


def render(F, name: str | None = None) -> str:
    """DSL text that parses back to exactly ``F``."""
    lines = []
    if name:
        lines.append(f"name: {name}")
    lines.append("vars: " + ", ".join(F.vars))
    for v, c in zip(F.vars, F.components):
        lines.append(f"d{v} = {render_series(c)}")
    return "\n".join(lines) + "\n"


def rational_arg(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DSLSyntaxError(f"not an exact rational: {text!r}")


__all__ = ["Document", "parse_document", "parse_field", "parse_series", "parse_expression",
           "render", "render_series", "rational_arg", "format_rational"]
