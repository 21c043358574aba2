"""Poisson brackets of skew-adjoint operators and the Hamiltonian test.

Two independent routes decide whether a skew-adjoint operator ``A`` is
Hamiltonian:

* ``master``: the bivector ``pi = <b, A(b)> / 2`` satisfies ``[[pi, pi]] = 0``;
* ``involutive``: the commutator of two image vectors ``A(p1)``, ``A(p2)``
  lies again in the image of ``A``, decided by an exact linear solve over
  a bounded ansatz for the preimage.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from . import config
from .algebra import A as A_KIND, P as P_KIND, CyclicPoly, DiffPoly, close, letter
from .jet import (
    DiffOperator,
    _compositions,
    _unique_permutations,
    adjoint,
    apply_operator,
    couple,
    evolutionary,
    linearize,
    normal_form,
    variational_derivative,
)
from .linalg import Echelon
from .multivector import Multivector, permutation_sign, schouten


class NotSkewAdjointError(ValueError):
    """Raised for an operator with ``A + adjoint(A) != 0``; carries that defect."""

    def __init__(self, defect: DiffOperator):
        super().__init__("operator is not skew-adjoint")
        self.defect = defect


class InvalidHamiltonianError(ValueError):
    pass


@dataclass(frozen=True)
class PoissonVerdict:
    """Outcome of a Hamiltonian test.

    ``hamiltonian`` is None when the involutivity ansatz was too small to
    decide.  ``residual`` is ``[[pi, pi]]`` on the master route;
    ``certificate`` is the preimage ``q`` found on the involutive route.
    """

    hamiltonian: bool | None
    route: str
    residual: Multivector | None = None
    certificate: tuple | None = None
    order_bound: int | None = None

    @property
    def status(self) -> str:
        if self.hamiltonian is None:
            return "inconclusive"
        return "true" if self.hamiltonian else "false"


def skew_defect(A: DiffOperator) -> DiffOperator:
    return A + adjoint(A)


def require_skew(A: DiffOperator) -> None:
    if A.arity != 1:
        raise ValueError("Hamiltonian operators are linear")
    defect = skew_defect(A)
    if defect:
        raise NotSkewAdjointError(defect)


def bivector_of(A: DiffOperator) -> Multivector:
    """``pi = <b, A(b)> / 2`` for a skew-adjoint ``A``."""
    require_skew(A)
    bvec = tuple(DiffPoly.of(letter("b", j)) for j in range(1, A.m + 1))
    (vals,) = [apply_operator(A, [bvec])]
    total = CyclicPoly.zero()
    for bj, vj in zip(bvec, vals):
        total = total + close(bj * vj)
    return Multivector(2, total / 2)


def gradient(H: CyclicPoly, m: int) -> tuple:
    """``delta H / delta a`` for a functional free of ``b``."""
    if any(H.b_degrees()):
        raise InvalidHamiltonianError("Hamiltonian functionals must not contain b")
    return tuple(variational_derivative(H, "a", j, "right") for j in range(1, m + 1))


def poisson_bracket(H1: CyclicPoly, H2: CyclicPoly, A: DiffOperator) -> CyclicPoly:
    """``{H1, H2}_A = < dH1/da, A(dH2/da) >``."""
    require_skew(A)
    g1, g2 = gradient(H1, A.m), gradient(H2, A.m)
    return couple(g1, apply_operator(A, [g2]))


def hamiltonian_flow(A: DiffOperator, H: CyclicPoly) -> tuple:
    """Characteristic ``A(dH/da)`` of the Hamiltonian flow."""
    require_skew(A)
    return apply_operator(A, [gradient(H, A.m)])


def jacobiator(H1: CyclicPoly, H2: CyclicPoly, H3: CyclicPoly, A: DiffOperator) -> CyclicPoly:
    """Signed sum over S_3 of ``d_{A(dH_s3)} ( <dH_s1, A(dH_s2)> / 2 )``.

    Vanishes for every triple exactly when ``{,}_A`` obeys the Jacobi
    identity; equals minus the cyclic sum of nested brackets.
    """
    require_skew(A)
    grads = [gradient(H, A.m) for H in (H1, H2, H3)]
    images = [apply_operator(A, [g]) for g in grads]
    total = CyclicPoly.zero()
    for perm in permutations(range(3)):
        i, j, k = perm
        dens = CyclicPoly.zero()
        for gi, vj in zip(grads[i], images[j]):
            dens = dens + close(gi * vj)
        flowed = evolutionary(images[k], dens / 2, "a")
        total = total + flowed.scale(permutation_sign(perm))
    return normal_form(total)


def check_master(A: DiffOperator) -> PoissonVerdict:
    """Decide ``[[pi, pi]] = 0`` for ``pi = <b, A(b)>/2``."""
    pi = bivector_of(A)
    residual = schouten(pi, pi)
    return PoissonVerdict(not residual, "master", residual=residual)


# ---------------------------------------------------------------------------
# involutivity of the image


def _formal_covector(slot: int, m: int) -> tuple:
    return tuple(DiffPoly.of(letter("p", j, slot=slot)) for j in range(1, m + 1))


def _a_degree(w) -> int:
    return sum(1 for l in w if l.kind == A_KIND)


def image_commutator(A: DiffOperator, lifted: bool = False) -> tuple:
    """``d_{A(p1)} A(p2) - d_{A(p2)} A(p1)`` with ``p1, p2`` inert formal covectors.

    With ``lifted=True`` the covectors move by the induced velocity
    ``adjoint(linearize(A(p_i)))(p_j)``, which only adds an element of
    ``im A``.
    """
    m = A.m
    p1, p2 = _formal_covector(1, m), _formal_covector(2, m)
    v1, v2 = apply_operator(A, [p1]), apply_operator(A, [p2])
    c = tuple(evolutionary(v1, y, "a") - evolutionary(v2, x, "a") for x, y in zip(v1, v2))
    if lifted:
        dp2 = _transport(v1, p2, m)
        dp1 = _transport(v2, p1, m)
        extra = apply_operator(A, [tuple(x - y for x, y in zip(dp2, dp1))])
        c = tuple(x + y for x, y in zip(c, extra))
    return c


def _swap_formal(p: DiffPoly, m: int, freeze: bool) -> DiffPoly:
    """Trade formal covector letters for constant generators above ``m`` and back."""

    def f(l):
        if freeze and l.kind == P_KIND:
            return l.relabeled(kind=A_KIND, slot=0, gen=m * l.slot + l.gen)
        if not freeze and l.kind == A_KIND and l.gen > m:
            slot, gen = divmod(l.gen - 1, m)
            return l.relabeled(kind=P_KIND, slot=slot, gen=gen + 1)
        return l

    return p.map_words(lambda w: DiffPoly.of(*map(f, w)))


def _transport(v: tuple, p: tuple, m: int) -> tuple:
    """``adjoint(linearize(v))(p)`` for a characteristic holding formal letters."""
    frozen = tuple(_swap_formal(x, m, True) for x in v)
    out = apply_operator(adjoint(linearize(frozen, gens=m)), [tuple(_swap_formal(x, m, True) for x in p)])
    return tuple(_swap_formal(x, m, False) for x in out)


def _ansatz_words(m: int, max_a: int, order_bound: int) -> list:
    """Words with one ``p1`` letter, one ``p2`` letter and up to ``max_a`` ``a`` letters."""
    n = config.current().n
    words = set()
    for d in range(max_a + 1):
        for g1, g2 in product(range(1, m + 1), repeat=2):
            for agens in _multisets(m, d):
                kinds = tuple(sorted([(3, 1, g1), (3, 2, g2)] + [(A_KIND, 0, g) for g in agens]))
                L = len(kinds)
                for arr in _unique_permutations(kinds):
                    for total in range(order_bound + 1):
                        for weight in _compositions(total, n):
                            per = [list(_compositions(wi, L)) for wi in weight]
                            for combo in product(*per):
                                w = tuple(
                                    letter(
                                        "p" if kind == 3 else "a",
                                        gen,
                                        tuple(c[pos] for c in combo),
                                        slot=slot,
                                    )
                                    for pos, (kind, slot, gen) in enumerate(arr)
                                )
                                for cw in DiffPoly.of(*w).words():
                                    words.add(cw)
    return sorted(words, key=lambda w: (len(w), w))


def _multisets(m: int, d: int):
    if d == 0:
        yield ()
        return
    for first in range(1, m + 1):
        for rest in _multisets(m, d - 1):
            if not rest or rest[0] >= first:
                yield (first,) + rest


def _as_vector(vals: tuple) -> dict:
    vec = {}
    for i, comp in enumerate(vals):
        for w, c in comp._terms.items():
            vec[(i, len(w), w)] = c
    return vec


def check_involutive(A: DiffOperator, order_bound: int | None = None, lifted: bool = False) -> PoissonVerdict:
    """Decide ``[im A, im A] in im A`` by solving ``c = A(q)`` over a bounded ansatz.

    ``q`` ranges over expressions bilinear in the formal covectors with
    total differential order at most ``order_bound`` (default: order of
    ``c`` plus 2).  No solution is reported as False when the bound is at
    least the order of ``c`` and as inconclusive otherwise.
    """
    require_skew(A)
    m = A.m
    c = image_commutator(A, lifted=lifted)
    c_order = max((comp.max_order() for comp in c), default=0)
    if order_bound is None:
        order_bound = c_order + 2
    if not any(c):
        zero = tuple(DiffPoly.zero() for _ in range(m))
        return PoissonVerdict(True, "involutive", certificate=zero, order_bound=order_bound)
    c_deg = max(_a_degree(w) for comp in c for w in comp.words())
    a_min = min((_a_degree(w) for comp in A.components for w in comp.words()), default=0)
    max_a = max(c_deg - a_min, 0)
    ech = Echelon(track=True)
    labels = []
    for j in range(m):
        for w in _ansatz_words(m, max_a, order_bound):
            q = [DiffPoly.zero()] * m
            q[j] = DiffPoly.of(*w)
            labels.append((j, w))
            ech.insert(_as_vector(apply_operator(A, [tuple(q)])), label=len(labels) - 1)
    sol = ech.solve(_as_vector(c))
    if sol is None:
        verdict = None if order_bound < c_order else False
        return PoissonVerdict(verdict, "involutive", order_bound=order_bound)
    q = [DiffPoly.zero()] * m
    for idx, x in sol.items():
        j, w = labels[idx]
        q[j] = q[j] + DiffPoly({w: Fraction(x)})
    return PoissonVerdict(True, "involutive", certificate=tuple(q), order_bound=order_bound)


def is_hamiltonian(A: DiffOperator, route: str = "master", order_bound: int | None = None) -> PoissonVerdict:
    """Run one route, or both (``route='both'``) and require agreement.

    With both routes the master verdict is returned; an involutive verdict
    that is conclusive and disagrees raises RuntimeError.
    """
    if route == "master":
        return check_master(A)
    if route == "involutive":
        return check_involutive(A, order_bound)
    if route != "both":
        raise ValueError(f"unknown route {route!r}")
    master = check_master(A)
    inv = check_involutive(A, order_bound)
    if inv.hamiltonian is not None and inv.hamiltonian != master.hamiltonian:
        raise RuntimeError("master and involutive routes disagree")
    return PoissonVerdict(master.hamiltonian, "both", master.residual, inv.certificate, inv.order_bound)
