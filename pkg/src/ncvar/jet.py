"""Calculus on the noncommutative jet space.

Total derivatives, evolutionary derivations, variational derivatives,
the normal form of densities modulo total derivatives, the coupling of
covectors with vectors, and linear/multilinear total differential
operators with their adjoints.

Coefficients never depend on the base point explicitly, so every total
derivative acts on letters only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from . import config
from .algebra import (
    A,
    B,
    FAMILY_KIND,
    P,
    CyclicPoly,
    DiffPoly,
    Letter,
    Word,
    close,
    grading,
    letter,
    necklace,
    parity_bit,
    word_parity,
)
from .linalg import Echelon

Covector = tuple  # tuple[DiffPoly, ...], one open word per generator
VectorCharacteristic = tuple  # tuple[DiffPoly, ...]
Functional = CyclicPoly  # a CyclicPoly in normal form


# ---------------------------------------------------------------------------
# total derivatives


def _check_index(i: int) -> None:
    n = config.current().n
    if not 1 <= i <= n:
        raise IndexError(f"base index {i} out of range 1..{n}")


def _d_word(w: Word, i: int) -> dict:
    out: dict = {}
    for pos, l in enumerate(w):
        nw = w[:pos] + (l.shifted(i),) + w[pos + 1:]
        out[nw] = out.get(nw, 0) + 1
    return out


def total_derivative(p, i: int = 1):
    """``D_i`` applied to a DiffPoly or CyclicPoly (Leibniz rule, even)."""
    _check_index(i)
    acc: dict = {}
    for w, c in p._terms.items():
        for nw, k in _d_word(w, i - 1).items():
            acc[nw] = acc.get(nw, 0) + k * c
    return type(p)(acc)


def derivative(p, sigma: Sequence[int]):
    """``D^sigma`` for a multi-index ``sigma``."""
    for i, s in enumerate(sigma):
        for _ in range(s):
            p = total_derivative(p, i + 1)
    return p


# ---------------------------------------------------------------------------
# evolutionary derivations


def _as_tuple(phi) -> tuple:
    if isinstance(phi, DiffPoly):
        return (phi,)
    return tuple(phi)


def characteristic_parity(phi) -> int:
    pars = {parity_bit(c) for c in _as_tuple(phi) if c}
    if len(pars) > 1:
        raise ValueError("characteristic components differ in parity")
    return pars.pop() if pars else 0


def evolutionary(phi, p, family: str = "a", parity: int | None = None):
    """Evolutionary derivation along ``phi`` acting on ``family`` letters.

    Each letter ``q^j_sigma`` is replaced by ``D^sigma(phi^j)``; the
    derivation acts from the left, so an odd one picks up the parity of
    the prefix it passes.  ``parity`` is the parity of the derivation and
    is inferred from ``phi`` when omitted.
    """
    phi = _as_tuple(phi)
    kind = FAMILY_KIND[family]
    if parity is None:
        parity = characteristic_parity(phi) ^ (1 if kind == B else 0)
    cache: dict = {}

    def image(l: Letter) -> DiffPoly:
        key = (l.gen, l.sigma)
        if key not in cache:
            src = phi[l.gen - 1] if l.gen <= len(phi) else DiffPoly.zero()
            cache[key] = derivative(src, l.sigma)
        return cache[key]

    out = DiffPoly.zero()
    for w, c in p._terms.items():
        prefix = 0
        for pos, l in enumerate(w):
            if l.kind == kind:
                img = image(l)
                if img:
                    sign = -1 if (parity and prefix) else 1
                    piece = DiffPoly.of(*w[:pos]) * img * DiffPoly.of(*w[pos + 1:])
                    out = out + piece.scale(sign * c)
            prefix ^= l.parity
    if isinstance(p, CyclicPoly):
        return close(out)
    return out


# ---------------------------------------------------------------------------
# horizontal cohomology


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _unique_permutations(items: tuple):
    if not items:
        yield ()
        return
    seen = set()
    for i, x in enumerate(items):
        if x in seen:
            continue
        seen.add(x)
        for rest in _unique_permutations(items[:i] + items[i + 1:]):
            yield (x,) + rest


@lru_cache(maxsize=None)
def _necklaces(space: config.JetSpace, mult: tuple, weight: tuple) -> tuple:
    """All nonzero canonical necklaces with given letter multiset and weight."""
    L = len(mult)
    if L == 0:
        return ((),) if not any(weight) else ()
    if space.commutative:
        arrangements = [mult]
    else:
        first = mult[0]
        rest = mult[1:]
        arrangements = [(first,) + r for r in _unique_permutations(rest)]
    per_coord = [list(_compositions(wi, L)) for wi in weight]
    found = set()
    for arr in arrangements:
        for combo in product(*per_coord):
            w = tuple(
                Letter(kind, slot, gen, sum(c[pos] for c in combo), tuple(c[pos] for c in combo))
                for pos, (kind, slot, gen) in enumerate(arr)
            )
            cw, s = necklace(w)
            if s:
                found.add(cw)
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def _image_echelon(space: config.JetSpace, mult: tuple, weight: tuple) -> Echelon:
    ech = Echelon()
    for i in range(len(weight)):
        if weight[i] == 0:
            continue
        lower = tuple(w - (k == i) for k, w in enumerate(weight))
        for neck in _necklaces(space, mult, lower):
            vec: dict = {}
            for nw, k in _d_word(neck, i).items():
                cw, s = necklace(nw)
                if s:
                    vec[cw] = vec.get(cw, 0) + s * k
            ech.insert(vec)
    return ech


def normal_form(c: CyclicPoly) -> Functional:
    """Canonical representative of ``c`` modulo the image of total derivatives.

    Works one graded component (letter multiset, weight) at a time; the
    image of ``D_i`` is row-reduced with pivots at the least necklace.
    """
    space = config.current()
    groups: dict = {}
    for w, coeff in c._terms.items():
        groups.setdefault(grading(w), {})[w] = coeff
    out: dict = {}
    for (mult, weight), vec in groups.items():
        if any(weight):
            vec = _image_echelon(space, mult, weight).reduce(vec)
        out.update(vec)
    return CyclicPoly._raw({w: x for w, x in out.items() if x})


def functional(p) -> Functional:
    """Normal form of a density given either open or closed."""
    if isinstance(p, DiffPoly):
        p = close(p)
    return normal_form(p)


def is_exact(c: CyclicPoly) -> bool:
    return not normal_form(c)


# ---------------------------------------------------------------------------
# variational derivatives


def variational_derivative(F, family: str, j: int = 1, side: str = "right") -> DiffPoly:
    """Cyclic Euler operator with respect to ``family`` generator ``j``.

    ``side='right'`` returns ``R`` with ``dF = <R * delta>``, the variation
    sitting at the right end; ``side='left'`` returns ``L`` with
    ``dF = <delta * L>``.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    kind = FAMILY_KIND[family]
    if isinstance(F, DiffPoly):
        F = close(F)
    acc = DiffPoly.zero()
    for w, c in F._terms.items():
        for pos, l in enumerate(w):
            if l.kind != kind or l.gen != j:
                continue
            u, v = w[:pos], w[pos + 1:]
            pu, pv = word_parity(u), word_parity(v)
            if side == "right":
                # tr(u l v) = (-1)^{|ul||v|} tr(v u l)
                odd = ((pu + l.parity) * pv) & 1
            else:
                # tr(u l v) = (-1)^{|u||lv|} tr(l v u)
                odd = (pu * (l.parity + pv)) & 1
            sign = -1 if (odd ^ (l.order & 1)) else 1
            acc = acc + derivative(DiffPoly.of(*(v + u)), l.sigma).scale(sign * c)
    return acc


def euler(F, family: str = "a", side: str = "right", m: int | None = None) -> tuple:
    """All components ``delta F / delta q^j`` for ``j = 1..m``."""
    m = m or max(config.current().m, F.max_gen())
    return tuple(variational_derivative(F, family, j, side) for j in range(1, m + 1))


# ---------------------------------------------------------------------------
# coupling


def couple(p: Covector, phi: VectorCharacteristic) -> Functional:
    """``<p, phi> = sum_j [p^j * phi^j]`` in normal form."""
    p, phi = _as_tuple(p), _as_tuple(phi)
    if len(p) != len(phi):
        raise ValueError(f"covector has {len(p)} components, vector has {len(phi)}")
    total = CyclicPoly.zero()
    for pj, fj in zip(p, phi):
        total = total + close(pj * fj)
    return normal_form(total)


# ---------------------------------------------------------------------------
# total differential operators


def slot_letter(gen: int = 1, sigma=None, slot: int = 1) -> Letter:
    """Placeholder for component ``gen`` of the ``slot``-th argument."""
    return letter("p", gen, sigma, slot=slot)


def _slot_positions(w: Word) -> dict:
    return {l.slot: pos for pos, l in enumerate(w) if l.kind == P}


@dataclass(frozen=True)
class DiffOperator:
    """Matrix of total differential operators, possibly multilinear.

    ``components[i]`` is the ``i``-th output, a DiffPoly in which each
    argument slot ``r`` appears exactly once per word as a formal letter
    ``p`` with slot ``r``, generator ``j`` (argument component) and
    multi-index ``sigma`` (the derivative falling on it).
    """

    components: tuple
    arity: int = 1

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        want = set(range(1, self.arity + 1))
        for comp in self.components:
            for w in comp.words():
                slots = [l.slot for l in w if l.kind == P]
                if sorted(slots) != sorted(want):
                    raise ValueError(f"operator word {w} is not linear in each of {self.arity} slots")

    @property
    def m(self) -> int:
        return len(self.components)

    def terms(self):
        """Linear case: ``(i, j, coeff, left, sigma, right)`` with 1-based indices."""
        if self.arity != 1:
            raise ValueError("terms() is only defined for linear operators")
        out = []
        for i, comp in enumerate(self.components, 1):
            for w, c in comp.items():
                pos = _slot_positions(w)[1]
                s = w[pos]
                out.append((i, s.gen, c, w[:pos], s.sigma, w[pos + 1:]))
        return out

    def order(self) -> int:
        return max(
            (l.order for comp in self.components for w in comp.words() for l in w if l.kind == P),
            default=0,
        )

    @classmethod
    def from_terms(cls, m: int, terms) -> "DiffOperator":
        """Build a linear operator from ``(i, j, coeff, left, sigma, right)`` tuples."""
        comps = [DiffPoly.zero() for _ in range(m)]
        for i, j, c, left, sigma, right in terms:
            comps[i - 1] = comps[i - 1] + DiffPoly({tuple(left) + (slot_letter(j, sigma),) + tuple(right): c})
        return cls(tuple(comps), 1)

    @classmethod
    def derivation(cls, sigma, m: int = 1) -> "DiffOperator":
        """Scalar ``D^sigma`` on every component."""
        return cls.from_terms(m, [(j, j, 1, (), sigma, ()) for j in range(1, m + 1)])

    def _combine(self, other, f):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        if (self.arity, self.m) != (other.arity, other.m):
            raise ValueError("operators differ in shape")
        return DiffOperator(tuple(f(x, y) for x, y in zip(self.components, other.components)), self.arity)

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __neg__(self):
        return DiffOperator(tuple(-c for c in self.components), self.arity)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator(tuple(x.scale(c) for x in self.components), self.arity)

    def __rmul__(self, c):
        if isinstance(c, (int, Fraction)):
            return self.scale(c)
        return NotImplemented

    def __bool__(self) -> bool:
        return any(self.components)

    def __call__(self, *args):
        return apply_operator(self, args)


def apply_operator(A: DiffOperator, args) -> VectorCharacteristic:
    """Substitute ``D^sigma(arg_r^j)`` for every slot letter of ``A``."""
    args = [_as_tuple(a) for a in args]
    if len(args) != A.arity:
        raise ValueError(f"operator takes {A.arity} arguments, got {len(args)}")
    cache: dict = {}

    def image(l: Letter) -> DiffPoly:
        key = (l.slot, l.gen, l.sigma)
        if key not in cache:
            arg = args[l.slot - 1]
            if l.gen > len(arg):
                raise ValueError(f"argument {l.slot} has no component {l.gen}")
            cache[key] = derivative(arg[l.gen - 1], l.sigma)
        return cache[key]

    out = []
    for comp in A.components:
        acc = DiffPoly.zero()
        for w, c in comp._terms.items():
            term = DiffPoly.const(c)
            run: list = []
            for l in w:
                if l.kind == P:
                    term = term * DiffPoly.of(*run) * image(l)
                    run = []
                else:
                    run.append(l)
            acc = acc + term * DiffPoly.of(*run)
        out.append(acc)
    return tuple(out)


def linearize(phi: VectorCharacteristic, gens: int | None = None) -> DiffOperator:
    """Linearization of an ``a``-characteristic: split each word at each ``a`` letter.

    With ``gens`` set, letters of higher generators are treated as constants.
    """
    phi = _as_tuple(phi)
    comps = []
    for comp in phi:
        acc: dict = {}
        for w, c in comp._terms.items():
            for pos, l in enumerate(w):
                if l.kind == A and (gens is None or l.gen <= gens):
                    nw = w[:pos] + (slot_letter(l.gen, l.sigma),) + w[pos + 1:]
                    acc[nw] = acc.get(nw, 0) + c
        comps.append(DiffPoly(acc))
    return DiffOperator(tuple(comps), 1)


def adjoint(A_op: DiffOperator, argument_parity: int = 0) -> DiffOperator:
    """Adjoint with respect to the coupling, with the generator matrix transposed.

    Each term ``u D^sigma(.) v`` becomes ``(-1)^{|sigma|} D^sigma(v . u)``
    after moving ``v`` around the circle.  ``argument_parity=1`` gives the
    graded version for odd arguments (the argument letter is then counted
    when ``v`` passes it).
    """
    if A_op.arity != 1:
        raise ValueError("adjoint needs a linear operator; use cyclic_multilinear_adjoint")
    m = A_op.m
    comps = [DiffPoly.zero() for _ in range(m)]
    for i, j, c, u, sigma, v in A_op.terms():
        pu, pv = word_parity(u), word_parity(v)
        odd = (sum(sigma) + pv * (pu + argument_parity)) & 1
        moved = derivative(DiffPoly.of(*(v + (slot_letter(i),) + u)), sigma)
        comps[j - 1] = comps[j - 1] + moved.scale(-c if odd else c)
    return DiffOperator(tuple(comps), 1)


def cyclic_multilinear_adjoint(A_op: DiffOperator) -> DiffOperator:
    """Operator ``B`` with ``<p1, A(p2..pk)> = <p2, B(p3..pk, p1)>`` for even covectors.

    For odd arguments substituted in place the two sides differ by the
    Koszul sign of the rotation; for k = 2 and k = 3 this is ``(-1)^(k-1)``.
    """
    r = A_op.arity
    if r < 1:
        raise ValueError("cyclic adjoint needs at least one argument slot")
    m = A_op.m
    comps = [DiffPoly.zero() for _ in range(m)]

    def relabel(word):
        return tuple(l.relabeled(slot=l.slot - 1) if l.kind == P else l for l in word)

    for i, comp in enumerate(A_op.components, 1):
        for w, c in comp._terms.items():
            pos = _slot_positions(w)[1]
            s = w[pos]
            u, v = relabel(w[:pos]), relabel(w[pos + 1:])
            odd = (s.order + word_parity(u) * word_parity(v)) & 1
            moved = derivative(DiffPoly.of(*(v + (slot_letter(i, slot=r),) + u)), s.sigma)
            comps[s.gen - 1] = comps[s.gen - 1] + moved.scale(-c if odd else c)
    return DiffOperator(tuple(comps), r)


def lift_covector_velocity(phi: VectorCharacteristic, p: Covector) -> Covector:
    """Velocity of a covector under the flow ``a_t = phi``.

    ``p_t = d_phi(p) + adjoint(linearize(phi))(p)``.
    """
    phi, p = _as_tuple(phi), _as_tuple(p)
    ell_dag = adjoint(linearize(phi))
    transported = apply_operator(ell_dag, (p,))
    return tuple(evolutionary(phi, pj, "a") + tj for pj, tj in zip(p, transported))
