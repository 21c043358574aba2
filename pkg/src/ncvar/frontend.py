"""Text syntax and structured documents for kernel values.

Grammar::

    expr   := sign? term (('+' | '-') term)*
    term   := rational ['*'] factor ('*' factor)* | rational | factor ('*' factor)*
    factor := jet | 'tr(' expr ')' | '(' expr ')' | 'D[' int '](' expr ')'
    jet    := name ('_' int)          -- base dimension 1
            | name ('^(' int (',' int)* ')')
    rational := int ('/' int)?

Generators are ``a1..am`` and ``b1..bm`` (plain ``a``, ``b`` when m = 1).
Operator slots are given by name; ``p[j]`` picks component ``j``.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

from . import config
from .algebra import A, B, P, Q, CyclicPoly, DiffPoly, Letter, close, letter
from .jet import DiffOperator, total_derivative
from .multivector import Multivector

SCHEMA = "ncvar-poly/1"


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# ---------------------------------------------------------------------------
# rendering


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _wrap_derivatives(core: str, sigma: tuple) -> str:
    for i, s in enumerate(sigma):
        for _ in range(s):
            core = f"D[{i + 1}]({core})"
    return core


def render_letter(l: Letter, arity: int | None = None) -> str:
    m = config.current().m
    if l.kind in (A, B):
        name = l.family if (m == 1 and l.gen == 1) else f"{l.family}{l.gen}"
        if not l.order:
            return name
        if len(l.sigma) == 1:
            return f"{name}_{l.sigma[0]}"
        return f"{name}^({','.join(map(str, l.sigma))})"
    base = "p" if l.kind == P else "q"
    name = base if (arity == 1 and l.kind == P) else f"{base}{l.slot}"
    if m > 1 or l.gen > 1:
        name = f"{name}[{l.gen}]"
    return _wrap_derivatives(name, l.sigma)


def render_word(w, arity: int | None = None) -> str:
    return "*".join(render_letter(l, arity) for l in w) or "1"


def _render_terms(items, wrap, arity=None) -> str:
    if not items:
        return "0"
    parts = []
    for idx, (w, c) in enumerate(items):
        body = wrap(render_word(w, arity)) if (w or wrap is not _plain) else None
        mag = abs(c) if idx else c
        if body is None:
            text = _format_rational(mag)
        elif mag == 1:
            text = body
        else:
            text = f"{_format_rational(mag)} {body}"
        if idx:
            parts.append((" - " if c < 0 else " + ") + text)
        else:
            parts.append(text)
    return "".join(parts)


def _plain(s: str) -> str:
    return s


def _trace(s: str) -> str:
    return f"tr({s})"


def render(value, arity: int | None = None) -> str:
    """Deterministic text form; ``parse_expression`` reads it back."""
    if isinstance(value, Multivector):
        return render(value.body)
    if isinstance(value, CyclicPoly):
        return _render_terms(value.items(), _trace)
    if isinstance(value, DiffPoly):
        return _render_terms(value.items(), _plain, arity)
    if isinstance(value, DiffOperator):
        return "; ".join(render(c, value.arity) for c in value.components)
    if isinstance(value, (tuple, list)):
        return "; ".join(render(v, arity) for v in value)
    if isinstance(value, (int, Fraction)):
        return _format_rational(Fraction(value))
    raise TypeError(f"cannot render {type(value).__name__}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<sub>_\d+)|(?P<op>[-+*/()\[\],^;]))"
)


def _tokenize(src: str):
    pos = 0
    toks = []
    src = src.rstrip()
    while pos < len(src):
        mt = _TOKEN.match(src, pos)
        if not mt:
            raise ParseError(f"unexpected character {src[pos]!r}", pos)
        kind = mt.lastgroup
        toks.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    toks.append(("end", "", len(src)))
    return toks


_GEN = re.compile(r"([ab])(\d*)$")


class _Parser:
    def __init__(self, src: str, slots=()):
        self.toks = _tokenize(src)
        self.i = 0
        self.slots = {name: r for r, name in enumerate(slots, 1)}
        self.space = config.current()
        self.in_trace = False

    # token helpers
    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def at(self, value: str) -> bool:
        return self.peek()[1] == value and self.peek()[0] == "op"

    # grammar
    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.next()[1] == "-" else 1
        total = self.term().scale(sign) if sign < 0 else self.term()
        while self.at("+") or self.at("-"):
            _, sym, pos = self.next()
            t = self.term()
            if type(t) is not type(total):
                raise ParseError("cannot add traced and untraced terms", pos)
            total = total + t if sym == "+" else total - t
        return total

    def _factor_starts(self) -> bool:
        kind, val, _ = self.peek()
        return kind == "name" or (kind == "op" and val == "(")

    def term(self):
        coeff = Fraction(1)
        kind, val, pos = self.peek()
        if kind == "num":
            coeff = self.rational()
            if self.at("*"):
                self.next()
            elif not self._factor_starts():
                return DiffPoly.const(coeff)
        elif not self._factor_starts():
            raise ParseError(f"expected a term, found {val or 'end of input'!r}", pos)
        value = self.factor()
        while self.at("*"):
            _, _, pos = self.next()
            rhs = self.factor()
            if isinstance(value, CyclicPoly) or isinstance(rhs, CyclicPoly):
                raise ParseError("a trace cannot be multiplied", pos)
            value = value * rhs
        return value.scale(coeff)

    def rational(self) -> Fraction:
        _, num, _ = self.next()
        if self.at("/"):
            self.next()
            kind, den, pos = self.next()
            if kind != "num" or int(den) == 0:
                raise ParseError("bad denominator", pos)
            return Fraction(int(num), int(den))
        return Fraction(int(num))

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.next()
            inner = self.expr()
            self.expect(")")
            return inner
        if kind != "name":
            raise ParseError(f"expected a factor, found {val or 'end of input'!r}", pos)
        self.next()
        if val == "tr" and self.at("("):
            if self.in_trace:
                raise ParseError("nested tr", pos)
            self.next()
            self.in_trace = True
            inner = self.expr()
            self.in_trace = False
            self.expect(")")
            if isinstance(inner, CyclicPoly):
                raise ParseError("nested tr", pos)
            return close(inner)
        if val == "D" and self.at("["):
            self.next()
            k, idx, ipos = self.next()
            if k != "num":
                raise ParseError("expected a base index", ipos)
            self.expect("]")
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            i = int(idx)
            if not 1 <= i <= self.space.n:
                raise ParseError(f"base index {i} out of range", ipos)
            return total_derivative(inner, i)
        return DiffPoly.of(self.jet(val, pos))

    def jet(self, name: str, pos: int) -> Letter:
        m = self.space.m
        if name in self.slots:
            gen = 1
            if self.at("["):
                self.next()
                k, g, gpos = self.next()
                if k != "num":
                    raise ParseError("expected a component index", gpos)
                self.expect("]")
                gen = int(g)
            if not 1 <= gen <= m:
                raise ParseError(f"unknown component {gen} of slot {name!r}", pos)
            return letter("p", gen, self.sigma(pos), slot=self.slots[name])
        formal = re.fullmatch(r"([pq])(\d+)", name)
        mt = _GEN.match(name)
        if mt:
            family, digits = mt.groups()
            if not digits:
                if m != 1:
                    raise ParseError(f"generator index required for {name!r} when m > 1", pos)
                gen = 1
            else:
                gen = int(digits)
            if not 1 <= gen <= m:
                raise ParseError(f"unknown generator {name!r}", pos)
            return letter(family, gen, self.sigma(pos))
        if formal and not self.slots:
            family, slot = formal.group(1), int(formal.group(2))
            gen = 1
            if self.at("["):
                self.next()
                gen = int(self.next()[1])
                self.expect("]")
            return letter(family, gen, self.sigma(pos), slot=slot)
        raise ParseError(f"unknown generator {name!r}", pos)

    def sigma(self, pos: int) -> tuple:
        n = self.space.n
        subs = []
        while self.peek()[0] == "sub":
            subs.append(int(self.next()[1][1:]))
        if self.at("^"):
            if subs:
                raise ParseError("mixed derivative notations", pos)
            self.next()
            self.expect("(")
            vals = [int(self.expect_num())]
            while self.at(","):
                self.next()
                vals.append(int(self.expect_num()))
            self.expect(")")
            if len(vals) != n:
                raise ParseError(f"multi-index needs {n} entries", pos)
            return tuple(vals)
        if not subs:
            return (0,) * n
        if n == 1:
            if len(subs) != 1:
                raise ParseError("one subscript expected for base dimension 1", pos)
            return (subs[0],)
        if len(subs) != n:
            raise ParseError(f"{n} subscripts expected", pos)
        return tuple(subs)

    def expect_num(self) -> str:
        kind, val, pos = self.next()
        if kind != "num":
            raise ParseError("expected an integer", pos)
        return val


def parse_expression(src: str, slots=()):
    """Parse text into a DiffPoly, or a CyclicPoly when the terms are traces."""
    return _Parser(src, slots).parse()


def parse_operator(src, slots=("p",)) -> DiffOperator:
    """Parse an operator linear in each named slot.

    ``src`` is one expression per output component, either as a list or
    separated by ``;``.
    """
    if isinstance(src, str):
        src = [s for s in src.split(";")]
    slots = list(slots)
    comps = []
    for piece in src:
        value = parse_expression(piece, slots)
        if isinstance(value, CyclicPoly):
            raise ParseError("operator components cannot be traces", 0)
        for w in value.words():
            used = sorted(l.slot for l in w if l.kind == P)
            if used != list(range(1, len(slots) + 1)):
                raise ParseError(f"expression is not linear in the slots {slots}", 0)
        comps.append(value)
    m = config.current().m
    if len(comps) != m:
        raise ParseError(f"expected {m} operator components, got {len(comps)}", 0)
    return DiffOperator(tuple(comps), len(slots))


# ---------------------------------------------------------------------------
# structured documents


def _letter_doc(l: Letter) -> dict:
    doc = {"family": l.family, "generator": l.gen, "sigma": list(l.sigma)}
    if l.kind in (P, Q):
        doc["slot"] = l.slot
    return doc


def _terms_doc(poly) -> list:
    return [
        {"coeff": f"{c.numerator}/{c.denominator}", "letters": [_letter_doc(l) for l in w]}
        for w, c in poly.items()
    ]


def to_document(value) -> dict:
    space = config.current()
    head = {"schema": SCHEMA, "base_dim": space.n, "gens": space.m, "commutative": space.commutative}
    return {**head, **_body_doc(value)}


def _body_doc(value) -> dict:
    if isinstance(value, Multivector):
        return {"kind": "multivector", "degree": value.degree, "terms": _terms_doc(value.body)}
    if isinstance(value, CyclicPoly):
        return {"kind": "cyclic", "terms": _terms_doc(value)}
    if isinstance(value, DiffPoly):
        return {"kind": "diffpoly", "terms": _terms_doc(value)}
    if isinstance(value, DiffOperator):
        return {"kind": "operator", "arity": value.arity, "components": [_terms_doc(c) for c in value.components]}
    if isinstance(value, (tuple, list)):
        return {"kind": "tuple", "items": [_body_doc(v) for v in value]}
    raise TypeError(f"cannot serialize {type(value).__name__}")


def serialize(value) -> str:
    return json.dumps(to_document(value), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _load_terms(cls, terms):
    out = {}
    for t in terms:
        num, den = t["coeff"].split("/")
        w = tuple(
            letter(d["family"], d["generator"], tuple(d["sigma"]), slot=d.get("slot", 0)) for d in t["letters"]
        )
        out[w] = Fraction(int(num), int(den))
    return cls(out)


def _from_body(doc):
    kind = doc["kind"]
    if kind == "multivector":
        return Multivector(doc["degree"], _load_terms(CyclicPoly, doc["terms"]))
    if kind == "cyclic":
        return _load_terms(CyclicPoly, doc["terms"])
    if kind == "diffpoly":
        return _load_terms(DiffPoly, doc["terms"])
    if kind == "operator":
        return DiffOperator(tuple(_load_terms(DiffPoly, c) for c in doc["components"]), doc["arity"])
    if kind == "tuple":
        return tuple(_from_body(d) for d in doc["items"])
    raise ValueError(f"unknown document kind {kind!r}")


def from_document(doc: dict):
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    with config.jet_space(n=doc["base_dim"], m=doc["gens"], commutative=doc["commutative"]):
        return _from_body(doc)


def deserialize(text: str):
    return from_document(json.loads(text))
