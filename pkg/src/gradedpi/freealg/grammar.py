"""Text syntax for polynomials.

    expr    := ['+'|'-'] term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := atom ['^' INT]
    atom    := INT | '{' INT (',' INT)* '}' | 'y'INT | 'z'INT
             | '(' expr ')' | '[' expr (',' arg)+ ']'
    arg     := atom '^(' INT ')'      powered step, [u, v^(r)]
             | expr

Whitespace is ignored.  Bare scalars are only allowed as factors (the
algebra has no unit), except that ``0`` alone denotes the zero polynomial.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..ff import FieldElement, FieldError, FieldSpec
from .poly import GradedPolynomial, commutator, y, z

_TOKEN = re.compile(r"\s*(?:(\d+)|([yz])(\d+)|(\^\s*\()|(\{[^}]*\})|([-+*^()\[\],]))")


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{msg} at position {pos}" + (f": {text[:pos]}<<>>{text[pos:]}" if text else ""))


@dataclass
class _Tok:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, text)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("var", m.group(2) + m.group(3), start))
        elif m.group(4):
            toks.append(_Tok("step", "^(", start))
        elif m.group(5):
            toks.append(_Tok("lit", m.group(5), start))
        else:
            toks.append(_Tok(m.group(6), m.group(6), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Scalar:
    __slots__ = ("code",)

    def __init__(self, code: int):
        self.code = code


class _Parser:
    def __init__(self, spec: FieldSpec, text: str):
        self.spec = spec
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return ParseError(msg, tok.pos, self.text)

    def expect(self, kind):
        if self.tok.kind != kind:
            raise self.error(f"expected {kind!r}, found {self.tok.value or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t

    # -- value helpers ---------------------------------------------------------

    def as_poly(self, v, tok):
        if isinstance(v, GradedPolynomial):
            return v
        if v.code == 0:
            return GradedPolynomial.zero(self.spec)
        raise self.error("non-zero constant term (the algebra has no unit)", tok)

    def mul(self, a, b):
        if isinstance(a, _Scalar) and isinstance(b, _Scalar):
            return _Scalar(int(self.spec.mul_table[a.code, b.code]))
        if isinstance(a, _Scalar):
            return b.scale(FieldElement(self.spec, a.code))
        if isinstance(b, _Scalar):
            return a.scale(FieldElement(self.spec, b.code))
        return a * b

    # -- grammar ---------------------------------------------------------------

    def parse(self) -> GradedPolynomial:
        start = self.tok
        v = self.expr()
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.value!r}")
        return self.as_poly(v, start)

    def expr(self):
        sign = 1
        start = self.tok
        if self.tok.kind in ("+", "-"):
            sign = -1 if self.tok.kind == "-" else 1
            self.i += 1
        first = self.term()
        if sign < 0:
            first = _Scalar(int(self.spec.neg_table[first.code])) if isinstance(first, _Scalar) else -first
        if self.tok.kind not in ("+", "-"):
            return first
        acc = self.as_poly(first, start)
        while self.tok.kind in ("+", "-"):
            op = self.tok.kind
            self.i += 1
            t0 = self.tok
            t = self.as_poly(self.term(), t0)
            acc = acc + t if op == "+" else acc - t
        return acc

    def term(self):
        v = self.factor()
        while self.tok.kind == "*":
            self.i += 1
            v = self.mul(v, self.factor())
        return v

    def factor(self):
        v = self.atom()
        if self.tok.kind == "^":
            self.i += 1
            e_tok = self.expect("int")
            e = int(e_tok.value)
            if e < 1:
                raise self.error("exponent must be >= 1", e_tok)
            if isinstance(v, _Scalar):
                return _Scalar((FieldElement(self.spec, v.code) ** e).code)
            v = v**e
        return v

    def atom(self):
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return _Scalar(int(t.value) % self.spec.p)
        if t.kind == "lit":
            self.i += 1
            try:
                return _Scalar(self.spec.parse_literal(t.value))
            except FieldError as exc:
                raise self.error(str(exc), t) from None
        if t.kind == "var":
            self.i += 1
            idx = int(t.value[1:])
            if idx < 1:
                raise self.error("variable index must be >= 1", t)
            v = y(idx) if t.value[0] == "y" else z(idx)
            return GradedPolynomial.var(self.spec, v)
        if t.kind == "(":
            self.i += 1
            v = self.expr()
            self.expect(")")
            return v
        if t.kind == "[":
            self.i += 1
            head_tok = self.tok
            acc = self.as_poly(self.expr(), head_tok)
            if self.tok.kind != ",":
                raise self.error("a commutator needs at least two arguments")
            while self.tok.kind == ",":
                self.i += 1
                acc = self.arg(acc)
            self.expect("]")
            return acc
        raise self.error(f"unexpected {t.value or 'end of input'!r}")

    def arg(self, acc):
        save = self.i
        t0 = self.tok
        try:
            base = self.atom()
        except ParseError:
            base = None
        if base is not None and self.tok.kind == "step":
            self.i += 1
            r = int(self.expect("int").value)
            self.expect(")")
            if self.tok.kind not in (",", "]"):
                raise self.error("a powered step must be a whole commutator argument")
            v = self.as_poly(base, t0)
            for _ in range(r):
                acc = commutator(acc, v)
            return acc
        self.i = save
        return commutator(acc, self.as_poly(self.expr(), t0))


def parse_poly(text: str, spec: FieldSpec) -> GradedPolynomial:
    return _Parser(spec, text).parse()


def format_poly(f: GradedPolynomial) -> str:
    return str(f)
