"""Letters, open words and cyclic words with Koszul signs.

A letter is one jet symbol ``q^j_sigma``.  Families ``a`` (even) and ``b``
(odd) are the dependent variables and their parity-reversed partners;
``p`` (even) and ``q`` (odd) are formal letters used as operator slots and
as fresh test variables.  Words are tuples of letters, polynomials are
sparse maps from words to exact rationals.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import chain
from typing import Iterable, Iterator, Mapping, NamedTuple, Union

from . import config

# kind codes; odd kinds sort first
B, Q, A, P = 0, 1, 2, 3
FAMILY_KIND = {"b": B, "q": Q, "a": A, "p": P}
KIND_FAMILY = {v: k for k, v in FAMILY_KIND.items()}

Scalar = Union[int, Fraction]


class Letter(NamedTuple):
    """One jet symbol.

    Field order doubles as the letter order: parity (odd first), family,
    slot, generator, total order, then the multi-index itself.
    """

    kind: int
    slot: int
    gen: int
    order: int
    sigma: tuple

    @property
    def family(self) -> str:
        return KIND_FAMILY[self.kind]

    @property
    def parity(self) -> int:
        return 1 if self.kind < A else 0

    def shifted(self, i: int, times: int = 1) -> "Letter":
        """The letter with its ``i``-th derivative order raised (``i`` is 0-based)."""
        s = list(self.sigma)
        s[i] += times
        return Letter(self.kind, self.slot, self.gen, self.order + times, tuple(s))

    def with_sigma(self, sigma: tuple) -> "Letter":
        return Letter(self.kind, self.slot, self.gen, sum(sigma), tuple(sigma))

    def relabeled(self, kind: int | None = None, slot: int | None = None, gen: int | None = None) -> "Letter":
        return Letter(
            self.kind if kind is None else kind,
            self.slot if slot is None else slot,
            self.gen if gen is None else gen,
            self.order,
            self.sigma,
        )


def letter(family: str, gen: int = 1, sigma=None, slot: int = 0) -> Letter:
    """Build a letter; ``sigma`` may be an int when the base dimension is 1."""
    n = config.current().n
    if sigma is None:
        sigma = (0,) * n
    elif isinstance(sigma, int):
        if n != 1:
            raise ValueError("integer derivative order needs base dimension 1")
        sigma = (sigma,)
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != n or any(s < 0 for s in sigma):
        raise ValueError(f"bad multi-index {sigma} for base dimension {n}")
    if gen < 1:
        raise ValueError("generators are numbered from 1")
    kind = FAMILY_KIND[family]
    if kind in (A, B) and slot:
        raise ValueError("only formal letters carry a slot")
    return Letter(kind, slot, gen, sum(sigma), sigma)


Word = tuple  # tuple[Letter, ...]


def word_parity(w: Word) -> int:
    return sum(1 for l in w if l.kind < A) & 1


def word_order(w: Word) -> int:
    return sum(l.order for l in w)


def word_key(w: Word):
    return (len(w), w)


def canonical_rotation(w: Word) -> tuple[Word, int]:
    """Least cyclic rotation of ``w`` and the Koszul sign picked up reaching it.

    Returns sign 0 when some rotation maps the word to itself with sign -1,
    i.e. the necklace is its own negative.
    """
    n = len(w)
    if n <= 1:
        return tuple(w), 1
    par = [l.parity for l in w]
    total = sum(par) & 1
    best, best_sign = None, 0
    prefix = 0
    rotations = []
    for k in range(n):
        # tr(u v) = (-1)^{|u||v|} tr(v u) with u = w[:k]
        sign = -1 if (prefix & (total ^ prefix)) & 1 else 1
        r = w[k:] + w[:k]
        rotations.append((r, sign))
        if best is None or r < best:
            best, best_sign = r, sign
        prefix = (prefix + par[k]) & 1
    for r, sign in rotations:
        if r == best and sign != best_sign:
            return best, 0
    return best, best_sign


def sort_word(w: Word) -> tuple[Word, int]:
    """Graded-commutative normal form: sort letters, count odd transpositions."""
    if len(w) <= 1:
        return tuple(w), 1
    odd = [l for l in w if l.kind < A]
    inv = 0
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if odd[j] < odd[i]:
                inv += 1
            elif odd[j] == odd[i]:
                return tuple(sorted(w)), 0
    return tuple(sorted(w)), (-1 if inv & 1 else 1)


def necklace(w: Word) -> tuple[Word, int]:
    """Canonical representative of the trace of ``w`` in the current mode."""
    if config.current().commutative:
        return sort_word(w)
    return canonical_rotation(w)


def _open_canon(w: Word) -> tuple[Word, int]:
    if config.current().commutative:
        return sort_word(w)
    return w, 1


class _Poly:
    """Sparse rational combination of words; immutable."""

    __slots__ = ("_terms", "_hash")
    _canon = None  # set by subclasses

    def __init__(self, terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            canon = type(self)._canon
            for w, c in items:
                if not c:
                    continue
                w, s = canon(tuple(w))
                if s == 0:
                    continue
                acc[w] = acc.get(w, 0) + (c if s > 0 else -c)
        self._terms = {w: Fraction(c) for w, c in acc.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict):
        """Wrap an already canonical, zero-free dict without copying checks."""
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls):
        return cls._raw({})

    # container protocol
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list[tuple[Word, Fraction]]:
        """Terms in the deterministic word order."""
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def words(self) -> list[Word]:
        return sorted(self._terms, key=word_key)

    def coefficient(self, w: Word) -> Fraction:
        return self._terms.get(tuple(w), Fraction(0))

    def __iter__(self) -> Iterator[tuple[Word, Fraction]]:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self._terms
        if type(other) is not type(self):
            # zero is the same value in every representation
            if isinstance(other, _Poly) and not self._terms and not other._terms:
                return True
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if not self._terms:
            return hash(0)
        if self._hash is None:
            self._hash = hash((type(self).__name__, frozenset(self._terms.items())))
        return self._hash

    # linear structure
    def __add__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return type(self)._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)) and other == 0:
            return self
        if type(other) is not type(self):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar):
        c = Fraction(c)
        if not c:
            return type(self).zero()
        return type(self)._raw({w: c * v for w, v in self._terms.items()})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1) / Fraction(other))
        return NotImplemented

    # gradings
    def letters(self) -> set:
        return set(chain.from_iterable(self._terms))

    def max_order(self) -> int:
        return max((word_order(w) for w in self._terms), default=0)

    def b_degrees(self) -> set:
        return {sum(1 for l in w if l.kind == B) for w in self._terms}

    def max_gen(self) -> int:
        return max((l.gen for l in self.letters() if l.kind in (A, B)), default=0)

    def map_words(self, f):
        """Apply ``f: word -> poly-like of the same class`` to each term, linearly."""
        out = type(self).zero()
        for w, c in self._terms.items():
            out = out + f(w).scale(c)
        return out

    def __repr__(self) -> str:
        from .frontend import render

        return f"{type(self).__name__}({render(self)!r})"


class DiffPoly(_Poly):
    """Noncommutative differential polynomial: a combination of open words."""

    __slots__ = ()
    _canon = staticmethod(_open_canon)

    @classmethod
    def one(cls) -> "DiffPoly":
        return cls._raw({(): Fraction(1)})

    @classmethod
    def const(cls, c: Scalar) -> "DiffPoly":
        return cls({(): c})

    @classmethod
    def of(cls, *letters: Letter, coeff: Scalar = 1) -> "DiffPoly":
        return cls({tuple(letters): coeff})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, DiffPoly):
            return NotImplemented
        return concat(self, other)

    def __pow__(self, k: int) -> "DiffPoly":
        out = DiffPoly.one()
        for _ in range(k):
            out = out * self
        return out


class CyclicPoly(_Poly):
    """Combination of necklaces (traces of words) with graded cyclic symmetry."""

    __slots__ = ()
    _canon = staticmethod(necklace)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented


def concat(p: DiffPoly, q: DiffPoly) -> DiffPoly:
    """Bilinear concatenation of open words."""
    if config.current().commutative:
        return DiffPoly((u + v, a * b) for u, a in p._terms.items() for v, b in q._terms.items())
    out: dict = {}
    for u, a in p._terms.items():
        for v, b in q._terms.items():
            w = u + v
            c = out.get(w, 0) + a * b
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return DiffPoly._raw(out)


def close(p: DiffPoly) -> CyclicPoly:
    """Take the trace: each open word becomes its necklace."""
    return CyclicPoly(p._terms)


def parity_of(p: _Poly) -> str:
    """``'even'``, ``'odd'`` or ``'mixed'``; the zero polynomial counts as even."""
    pars = {word_parity(w) for w in p._terms}
    if len(pars) > 1:
        return "mixed"
    return "odd" if pars == {1} else "even"


def parity_bit(p: _Poly) -> int:
    """Parity as 0/1; raises on mixed input."""
    par = parity_of(p)
    if par == "mixed":
        raise ValueError("parity-inhomogeneous polynomial")
    return 1 if par == "odd" else 0


def grading(w: Word) -> tuple:
    """Per-generator letter multiset and weight vector of a word."""
    n = len(w[0].sigma) if w else config.current().n
    weight = [0] * n
    for l in w:
        for i, s in enumerate(l.sigma):
            weight[i] += s
    return tuple(sorted((l.kind, l.slot, l.gen) for l in w)), tuple(weight)
