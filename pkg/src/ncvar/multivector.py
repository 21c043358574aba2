"""Variational multivectors, the Schouten bracket and odd evolutionary fields.

A ``k``-vector is a functional whose density has exactly ``k`` odd letters
``b``.  The bracket pairs right variational derivatives of the first
argument with left variational derivatives of the second::

    [[xi, eta]] = sum_j < dxi/da_j . deta/db_j >  -  < dxi/db_j . deta/da_j >
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from . import config
from .algebra import B, CyclicPoly, DiffPoly, close, letter
from .jet import (
    DiffOperator,
    apply_operator,
    couple,
    evolutionary,
    normal_form,
    slot_letter,
    variational_derivative,
)


def permutation_sign(perm) -> int:
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return -1 if inv & 1 else 1


def n_gens(*values) -> int:
    """Number of generators needed to cover the given values and the session."""
    m = config.current().m
    for v in values:
        body = v.body if isinstance(v, Multivector) else v
        m = max(m, body.max_gen())
    return m


def b_vector(m: int) -> tuple:
    return tuple(DiffPoly.of(letter("b", j)) for j in range(1, m + 1))


@dataclass(frozen=True)
class Multivector:
    """A ``degree``-vector stored as the normal form of its density."""

    degree: int
    body: CyclicPoly

    def __post_init__(self):
        degs = self.body.b_degrees()
        if degs and degs != {self.degree}:
            raise ValueError(f"density has b-degrees {sorted(degs)}, expected {self.degree}")
        object.__setattr__(self, "body", normal_form(self.body))

    def __add__(self, other: "Multivector") -> "Multivector":
        if not isinstance(other, Multivector):
            return NotImplemented
        if not self.body:
            return other
        if not other.body:
            return self
        if other.degree != self.degree:
            raise ValueError("cannot add multivectors of different degree")
        return Multivector(self.degree, self.body + other.body)

    def __neg__(self) -> "Multivector":
        return Multivector(self.degree, -self.body)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def scale(self, c) -> "Multivector":
        return Multivector(self.degree, self.body.scale(c))

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __bool__(self) -> bool:
        return bool(self.body)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        if not self.body and not other.body:
            return True
        return self.degree == other.degree and self.body == other.body

    def __hash__(self) -> int:
        return hash((self.degree, self.body)) if self.body else 0


def multivector_from_density(c, degree: int | None = None) -> Multivector:
    """Wrap a b-homogeneous density; ``degree`` is only needed for zero input."""
    if isinstance(c, DiffPoly):
        c = close(c)
    degs = c.b_degrees()
    if len(degs) > 1:
        raise ValueError(f"mixed b-degree density: {sorted(degs)}")
    if degs:
        (k,) = degs
        if degree is not None and degree != k:
            raise ValueError(f"density has b-degree {k}, not {degree}")
        degree = k
    return Multivector(degree or 0, c)


def _polarize(p: DiffPoly) -> DiffPoly:
    """Replace the b letters of every word, in order of appearance, by slots 1, 2, ..."""
    out = {}
    for w, c in p._terms.items():
        slot = 0
        nw = []
        for l in w:
            if l.kind == B:
                slot += 1
                nw.append(slot_letter(l.gen, l.sigma, slot=slot))
            else:
                nw.append(l)
        out[tuple(nw)] = c
    return DiffPoly(out)


def normalize_to_operator(xi: Multivector) -> tuple[int, DiffOperator]:
    """Operator ``A`` of arity ``k-1`` with ``xi = <b, A(b, ..., b)> / k!``.

    ``A(b,...,b)`` is ``(k-1)!`` times the left b-derivative of ``xi``;
    the argument slots are its b letters in order of appearance.
    """
    k = xi.degree
    if k < 1:
        raise ValueError("a 0-vector has no operator form")
    m = n_gens(xi)
    f = factorial(k - 1)
    comps = tuple(
        _polarize(variational_derivative(xi.body, "b", j, "left")).scale(f) for j in range(1, m + 1)
    )
    return k, DiffOperator(comps, k - 1)


def expand_operator(k: int, A: DiffOperator) -> Multivector:
    """``<b, A(b, ..., b)> / k!`` as a multivector."""
    bvec = b_vector(A.m)
    vals = apply_operator(A, [bvec] * (k - 1))
    total = CyclicPoly.zero()
    for bj, vj in zip(bvec, vals):
        total = total + close(bj * vj)
    return Multivector(k, total / factorial(k))


def evaluate(xi: Multivector, ps) -> CyclicPoly:
    """Value of a ``k``-vector on ``k`` even covectors.

    Arguments are shuffled with signs; the slot order built into the
    operator form is never changed.
    """
    ps = [tuple(p) if not isinstance(p, DiffPoly) else (p,) for p in ps]
    k = xi.degree if xi.body else len(ps)
    if len(ps) != k:
        raise ValueError(f"{k}-vector evaluated on {len(ps)} covectors")
    if k == 0:
        return xi.body
    if not xi.body:
        return CyclicPoly.zero()
    _, A = normalize_to_operator(xi)
    m = A.m
    ps = [p + (DiffPoly.zero(),) * (m - len(p)) for p in ps]
    total = CyclicPoly.zero()
    for perm in permutations(range(k)):
        args = [ps[i] for i in perm[1:]]
        term = couple(ps[perm[0]], apply_operator(A, args))
        total = total + term.scale(permutation_sign(perm))
    return normal_form(total / factorial(k))


def schouten(xi: Multivector, eta: Multivector) -> Multivector:
    """Variational Schouten bracket; the result has degree ``k + l - 1``."""
    m = n_gens(xi, eta)
    total = CyclicPoly.zero()
    for j in range(1, m + 1):
        ra = variational_derivative(xi.body, "a", j, "right")
        if ra:
            lb = variational_derivative(eta.body, "b", j, "left")
            total = total + close(ra * lb)
        rb = variational_derivative(xi.body, "b", j, "right")
        if rb:
            la = variational_derivative(eta.body, "a", j, "left")
            total = total - close(rb * la)
    return Multivector(xi.degree + eta.degree - 1, total)


@dataclass(frozen=True)
class OddField:
    """Evolutionary superfield ``d^(a)_{phi_a} + d^(b)_{phi_b}``.

    ``shift`` is the change of b-degree; its parity is the parity of the
    field as a derivation.
    """

    phi_a: tuple
    phi_b: tuple
    shift: int

    @property
    def parity(self) -> int:
        return self.shift & 1

    def apply(self, value):
        if isinstance(value, Multivector):
            body = self.apply(value.body)
            return Multivector(value.degree + self.shift, body)
        return evolutionary(self.phi_a, value, "a", self.parity) + evolutionary(
            self.phi_b, value, "b", self.parity
        )

    __call__ = apply

    def padded(self, m: int) -> "OddField":
        z = (DiffPoly.zero(),)
        return OddField(
            self.phi_a + z * (m - len(self.phi_a)), self.phi_b + z * (m - len(self.phi_b)), self.shift
        )


def odd_field(xi: Multivector) -> OddField:
    """``Q^xi = -d^(a)_{dxi/db} + d^(b)_{dxi/da}`` (right derivatives), so ``Q^xi(eta) = [[xi, eta]]``."""
    m = n_gens(xi)
    phi_a = tuple(-variational_derivative(xi.body, "b", j, "right") for j in range(1, m + 1))
    phi_b = tuple(variational_derivative(xi.body, "a", j, "right") for j in range(1, m + 1))
    return OddField(phi_a, phi_b, xi.degree - 1)


def commutator(Q1: OddField, Q2: OddField) -> OddField:
    """Graded commutator ``Q1 Q2 - (-1)^{|Q1||Q2|} Q2 Q1``."""
    m = max(len(Q1.phi_a), len(Q1.phi_b), len(Q2.phi_a), len(Q2.phi_b))
    Q1, Q2 = Q1.padded(m), Q2.padded(m)
    s = -1 if (Q1.parity and Q2.parity) else 1
    phi_a = tuple(Q1(x) - Q2(y).scale(s) for x, y in zip(Q2.phi_a, Q1.phi_a))
    phi_b = tuple(Q1(x) - Q2(y).scale(s) for x, y in zip(Q2.phi_b, Q1.phi_b))
    return OddField(phi_a, phi_b, Q1.shift + Q2.shift)
