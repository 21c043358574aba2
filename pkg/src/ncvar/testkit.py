"""Seeded random generators and independent oracles.

``bruteforce_bracket`` recomputes the Schouten bracket by literally
spinning both necklaces letter by letter until the paired variations
meet, expanding derivatives with multinomial coefficients.  It shares no
code with the variational-derivative route except the final normal form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import factorial

from . import config
from .algebra import A, B, CyclicPoly, DiffPoly, Letter, close, letter, word_parity
from .jet import DiffOperator, evolutionary, normal_form, slot_letter
from .multivector import Multivector


@dataclass(frozen=True)
class GenSpec:
    """Bounds for random values; equal specs give equal sample streams."""

    seed: int = 0
    max_len: int = 3
    max_order: int = 2
    max_bdeg: int = 2
    m: int = 1
    n: int = 1
    commutative: bool = False
    max_terms: int = 3
    max_coeff: int = 3

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _random_sigma(rng: random.Random, n: int, order: int) -> tuple:
    s = [0] * n
    for _ in range(order):
        s[rng.randrange(n)] += 1
    return tuple(s)


def _random_coeff(rng: random.Random, spec: GenSpec) -> Fraction:
    c = 0
    while c == 0:
        c = rng.randint(-spec.max_coeff, spec.max_coeff)
    return Fraction(c)


def random_word(rng: random.Random, spec: GenSpec, length: int, bdeg: int = 0) -> tuple:
    """A word of given length with exactly ``bdeg`` letters ``b``."""
    fams = ["b"] * bdeg + ["a"] * (length - bdeg)
    rng.shuffle(fams)
    budget = rng.randint(0, spec.max_order)
    orders = [0] * length
    for _ in range(budget):
        if length:
            orders[rng.randrange(length)] += 1
    return tuple(
        letter(f, rng.randint(1, spec.m), _random_sigma(rng, spec.n, o)) for f, o in zip(fams, orders)
    )


def random_poly(rng: random.Random, spec: GenSpec, bdeg: int | None = None, cls=DiffPoly, min_len: int = 0):
    with config.jet_space(n=spec.n, commutative=spec.commutative):
        terms = {}
        for _ in range(rng.randint(1, spec.max_terms)):
            k = rng.randint(0, spec.max_bdeg) if bdeg is None else bdeg
            length = rng.randint(max(k, min_len), max(k, spec.max_len, min_len))
            terms[random_word(rng, spec, length, k)] = _random_coeff(rng, spec)
        return cls(terms)


def random_density(spec: GenSpec, rng: random.Random | None = None, bdeg: int | None = None) -> CyclicPoly:
    """Random combination of necklaces within the bounds of ``spec``."""
    rng = rng or spec.rng()
    return random_poly(rng, spec, bdeg, CyclicPoly, min_len=1)


def random_multivector(rng: random.Random, spec: GenSpec, k: int) -> Multivector:
    for _ in range(50):
        body = random_poly(rng, spec, k, CyclicPoly, min_len=max(k, 1))
        with config.jet_space(n=spec.n, commutative=spec.commutative):
            mv = Multivector(k, body)
        if mv:
            return mv
    return mv


def random_operator(rng: random.Random, spec: GenSpec, max_terms: int = 3, coeff_len: int = 1) -> DiffOperator:
    """Random linear m x m operator with a-coefficients and order at most ``spec.max_order``."""
    with config.jet_space(n=spec.n, commutative=spec.commutative):
        return _random_operator(rng, spec, max_terms, coeff_len)


def _random_operator(rng, spec, max_terms, coeff_len):
    comps = [dict() for _ in range(spec.m)]
    for _ in range(rng.randint(1, max_terms)):
        i, j = rng.randint(1, spec.m), rng.randint(1, spec.m)
        sub = GenSpec(m=spec.m, n=spec.n, max_order=1)
        left = random_word(rng, sub, rng.randint(0, coeff_len))
        right = random_word(rng, sub, rng.randint(0, coeff_len))
        sigma = _random_sigma(rng, spec.n, rng.randint(0, spec.max_order))
        w = left + (slot_letter(j, sigma),) + right
        comps[i - 1][w] = comps[i - 1].get(w, 0) + _random_coeff(rng, spec)
    return DiffOperator(tuple(DiffPoly(c) for c in comps), 1)


def random_covector(rng: random.Random, spec: GenSpec) -> tuple:
    return tuple(random_poly(rng, spec, 0) for _ in range(spec.m))


# ---------------------------------------------------------------------------
# commutative degeneration


def commutative_projection(value):
    """Image of a noncommutative value in the graded-commutative calculus.

    Words are sorted with Koszul signs; functionals and multivectors are
    brought to the commutative normal form.
    """
    with config.jet_space(commutative=True):
        if isinstance(value, Multivector):
            return Multivector(value.degree, CyclicPoly(value.body.terms))
        if isinstance(value, CyclicPoly):
            return normal_form(CyclicPoly(value.terms))
        if isinstance(value, DiffPoly):
            return DiffPoly(value.terms)
        if isinstance(value, DiffOperator):
            return DiffOperator(tuple(DiffPoly(c.terms) for c in value.components), value.arity)
        if isinstance(value, tuple):
            return tuple(commutative_projection(v) for v in value)
    raise TypeError(f"cannot project {type(value).__name__}")


# ---------------------------------------------------------------------------
# brute-force Schouten bracket


def _spin(word: tuple, pos: int, to_end: bool) -> tuple[tuple, int]:
    """Rotate one letter at a time until ``word[pos]`` is last (or first).

    Returns the rotated word and the accumulated sign; each step moves the
    first letter to the back past everything else.
    """
    w = list(word)
    sign = 1
    target = len(w) - 1 if to_end else 0
    while pos != target:
        first = w.pop(0)
        if first.parity and word_parity(tuple(w)):
            sign = -sign
        w.append(first)
        pos = (pos - 1) % len(w)
    return tuple(w), sign


def _multinomial_derivative(word: tuple, sigma: tuple) -> dict:
    """``D^sigma`` of a word, expanded as a sum over distributions of ``sigma``."""
    n = len(sigma)
    L = len(word)
    if L == 0:
        return {(): 1} if not any(sigma) else {}

    def splits(total, parts):
        if parts == 1:
            yield (total,)
            return
        for k in range(total + 1):
            for rest in splits(total - k, parts - 1):
                yield (k,) + rest

    out: dict = {}
    per_coord = [list(splits(s, L)) for s in sigma]
    for combo in product(*per_coord):
        coeff = 1
        for i in range(n):
            c = factorial(sigma[i])
            for part in combo[i]:
                c //= factorial(part)
            coeff *= c
        new = []
        for pos, l in enumerate(word):
            s = tuple(l.sigma[i] + combo[i][pos] for i in range(n))
            new.append(Letter(l.kind, l.slot, l.gen, sum(s), s))
        key = tuple(new)
        out[key] = out.get(key, 0) + coeff
    return out


def bruteforce_bracket(xi: Multivector, eta: Multivector, max_len: int = 8) -> Multivector:
    """Schouten bracket by direct enumeration of all variation pairings.

    For every ``a`` (resp. ``b``) letter of a term of ``xi`` and every
    ``b`` (resp. ``a``) letter of the same generator in a term of ``eta``:
    spin the first necklace until the letter is last and the second until
    its partner is first, throw the derivatives off both variations,
    detach them and join the two open strings.
    """
    for w in list(xi.body.words()) + list(eta.body.words()):
        if len(w) > max_len:
            raise ValueError(f"word longer than {max_len} letters")
    total: dict = {}
    for w1, c1 in xi.body.items():
        for i, l1 in enumerate(w1):
            if l1.kind not in (A, B):
                continue
            sign_pair = 1 if l1.kind == A else -1
            partner = B if l1.kind == A else A
            r1, s1 = _spin(w1, i, to_end=True)
            left = _multinomial_derivative(r1[:-1], l1.sigma)
            for w2, c2 in eta.body.items():
                for k, l2 in enumerate(w2):
                    if l2.kind != partner or l2.gen != l1.gen:
                        continue
                    r2, s2 = _spin(w2, k, to_end=False)
                    right = _multinomial_derivative(r2[1:], l2.sigma)
                    sgn = sign_pair * s1 * s2 * (-1) ** (l1.order + l2.order)
                    for u, cu in left.items():
                        for v, cv in right.items():
                            key = u + v
                            total[key] = total.get(key, 0) + sgn * c1 * c2 * cu * cv
    return Multivector(xi.degree + eta.degree - 1, CyclicPoly(total))


def one_vector_oracle(phi1: DiffPoly, phi2: DiffPoly) -> Multivector:
    """``<b, -(d_{phi1} phi2 - d_{phi2} phi1)>`` for a single generator."""
    b = DiffPoly.of(letter("b"))
    inner = evolutionary(phi1, phi2, "a") - evolutionary(phi2, phi1, "a")
    return Multivector(1, close(b * (-inner)))


def selftest(seed: int = 0, cases: int = 20) -> dict:
    """Cross-check the kernel on ``cases`` random inputs per property.

    Returns ``{property: (passed, total)}``.
    """
    from .jet import euler, total_derivative
    from .multivector import schouten

    rng = random.Random(seed)
    spec = GenSpec(seed=seed)
    report = {}

    def tally(name, ok):
        passed, total = report.get(name, (0, 0))
        report[name] = (passed + bool(ok), total + 1)

    for _ in range(cases):
        f = random_density(spec, rng, bdeg=0)
        with config.jet_space(n=spec.n, m=spec.m):
            exact = not any(euler(CyclicPoly(total_derivative(DiffPoly(f.terms)).terms), "a"))
        tally("euler-exactness", exact)

        x = random_multivector(rng, spec, rng.randint(0, 2))
        y = random_multivector(rng, spec, rng.randint(0, 2))
        xy = schouten(x, y)
        tally("oracle-bracket", xy == bruteforce_bracket(x, y))
        sign = -((-1) ** ((x.degree - 1) * (y.degree - 1)))
        tally("skew-symmetry", xy == schouten(y, x).scale(sign))
        with config.jet_space(commutative=True):
            projected = schouten(commutative_projection(x), commutative_projection(y))
        tally("commutative-projection", commutative_projection(xy) == projected)
    return report
