"""Acceptance gate: one test per criterion, exact rational arithmetic throughout.

Run with ``pytest tests/test_acceptance.py`` (or execute this file); the
terminal summary prints one PASS/FAIL line per criterion.
"""
import random
import time

import pytest

from ncvar import (
    CyclicPoly,
    DiffOperator,
    DiffPoly,
    Multivector,
    adjoint,
    check_involutive,
    check_master,
    close,
    commutator,
    couple,
    deserialize,
    evolutionary,
    jacobiator,
    jet_space,
    letter,
    lift_covector_velocity,
    linearize,
    multivector_from_density,
    normal_form,
    odd_field,
    parse_expression,
    parse_operator,
    poisson_bracket,
    render,
    schouten,
    serialize,
    total_derivative,
    variational_derivative,
)
from ncvar.cli import run
from ncvar.jet import apply_operator
from ncvar.testkit import (
    GenSpec,
    commutative_projection,
    one_vector_oracle,
    random_covector,
    random_density,
    random_multivector,
    random_operator,
    random_poly,
)

HAMILTONIAN = {
    "D": ("D[1](p)", False),
    "D3": ("D[1](D[1](D[1](p)))", False),
    "ad_a": ("a*p - p*a", False),
    "a2D+Da2": ("a*a*D[1](p) + D[1](a*a*p)", True),
}
NON_HAMILTONIAN = ("a_1*D[1](p) + D[1](a_1*p)", True)


def _operator(src, commutative):
    with jet_space(commutative=commutative):
        return parse_operator(src)


def _skew_sign(k, l):
    return -((-1) ** ((k - 1) * (l - 1)))


def _functional_of_a(rng, spec):
    return random_density(spec, rng, bdeg=0)


def test_criterion_01_euler_exactness():
    rng = random.Random(101)
    start = time.perf_counter()
    for case in range(200):
        m = 1 + case % 2
        spec = GenSpec(max_len=4, max_order=3, m=m, max_bdeg=2)
        f = random_density(spec, rng)
        with jet_space(m=m):
            df = close(total_derivative(DiffPoly(f.terms)))
            for j in range(1, m + 1):
                assert not variational_derivative(df, "a", j), render(f)
                assert not variational_derivative(df, "b", j), render(f)
    assert time.perf_counter() - start < 30


def test_criterion_02_adjoint_identity():
    rng = random.Random(202)
    for case in range(100):
        m = 1 + case % 2
        spec = GenSpec(max_order=3, m=m, max_len=2)
        with jet_space(m=m):
            A = random_operator(rng, spec, max_terms=3)
            p1, p2 = random_covector(rng, spec), random_covector(rng, spec)
            Ad = adjoint(A)
            assert couple(p1, A(p2)) == couple(p2, Ad(p1))
            assert adjoint(Ad) == A


def test_criterion_03_covector_velocity():
    rng = random.Random(303)
    spec = GenSpec(max_order=2, max_len=2, max_bdeg=0)
    for _ in range(100):
        phi, p, psi = (random_covector(rng, spec) for _ in range(3))
        lhs = normal_form(evolutionary(phi, couple(p, psi), "a"))
        moved = tuple(evolutionary(phi, x, "a") for x in psi)
        ell = apply_operator(linearize(phi), [psi])
        rhs = couple(lift_covector_velocity(phi, p), psi) + couple(
            p, tuple(x - y for x, y in zip(moved, ell))
        )
        assert lhs == normal_form(rhs)


def test_criterion_04_graded_skew_symmetry():
    rng = random.Random(404)
    spec = GenSpec(max_len=3, max_order=2, max_bdeg=3)
    for _ in range(100):
        k, l = rng.randint(0, 3), rng.randint(0, 3)
        x, y = random_multivector(rng, spec, k), random_multivector(rng, spec, l)
        assert schouten(x, y) == schouten(y, x).scale(_skew_sign(k, l))


def test_criterion_05_jacobi_identity():
    rng = random.Random(505)
    spec = GenSpec(max_len=4, max_order=2, max_bdeg=3, max_terms=3)
    start = time.perf_counter()
    for _ in range(25):
        k, l, r = (rng.randint(0, 3) for _ in range(3))
        x, y, z = (random_multivector(rng, spec, d) for d in (k, l, r))
        lhs = schouten(x, schouten(y, z))
        rhs = schouten(schouten(x, y), z) + schouten(y, schouten(x, z)).scale((-1) ** ((k - 1) * (l - 1)))
        assert lhs == rhs
    assert time.perf_counter() - start < 300


def test_criterion_06_one_vector_formula():
    xi = multivector_from_density(parse_expression("tr(b*a*a)"))
    eta = multivector_from_density(parse_expression("tr(b*a*a*a)"))
    assert schouten(xi, eta) == multivector_from_density(parse_expression("-tr(b*a*a*a*a)"))

    rng = random.Random(606)
    spec = GenSpec(max_len=3, max_order=2, max_bdeg=0)
    b = DiffPoly.of(letter("b"))
    for _ in range(50):
        phi1, phi2 = random_poly(rng, spec, 0), random_poly(rng, spec, 0)
        v1, v2 = Multivector(1, close(b * phi1)), Multivector(1, close(b * phi2))
        assert schouten(v1, v2) == one_vector_oracle(phi1, phi2)


def test_criterion_07_field_correspondence():
    rng = random.Random(707)
    spec = GenSpec(max_len=3, max_order=2, max_terms=2)
    for _ in range(25):
        x = random_multivector(rng, spec, rng.randint(0, 2))
        y = random_multivector(rng, spec, rng.randint(0, 2))
        bracket_field = commutator(odd_field(x), odd_field(y))
        field_of_bracket = odd_field(schouten(x, y))
        for _ in range(10):
            probe = random_multivector(rng, spec, rng.randint(0, 2))
            assert bracket_field(probe) == field_of_bracket(probe)


def test_criterion_08_hamiltonian_verdicts():
    for src, commutative in HAMILTONIAN.values():
        A = _operator(src, commutative)
        with jet_space(commutative=commutative):
            assert check_master(A).hamiltonian is True, src
            assert check_involutive(A).hamiltonian is True, src

    src, commutative = NON_HAMILTONIAN
    A = _operator(src, commutative)
    with jet_space(commutative=True):
        verdict = check_master(A)
        assert verdict.hamiltonian is False
        assert verdict.residual == multivector_from_density(parse_expression("-4 tr(b*b_1*b_3*a)"))
        assert check_involutive(A).hamiltonian is False


def test_criterion_09_poisson_layer():
    rng = random.Random(909)
    spec = GenSpec(max_len=3, max_order=2, max_bdeg=0)
    for _ in range(100):
        B = random_operator(rng, spec, max_terms=2)
        A = B - adjoint(B)
        if not A:
            continue
        h1, h2 = _functional_of_a(rng, spec), _functional_of_a(rng, spec)
        assert poisson_bracket(h1, h2, A) == -poisson_bracket(h2, h1, A)

    small = GenSpec(max_len=3, max_order=1, max_bdeg=0, max_terms=2)
    cases = list(HAMILTONIAN.values())
    for i in range(20):
        src, commutative = cases[i % len(cases)]
        A = _operator(src, commutative)
        with jet_space(commutative=commutative):
            hs = [_functional_of_a(rng, small) for _ in range(3)]
            if commutative:
                hs = [commutative_projection(h) for h in hs]
            assert not jacobiator(*hs, A), src

    src, _ = NON_HAMILTONIAN
    A = _operator(src, True)
    with jet_space(commutative=True):
        hs = [CyclicPoly(parse_expression(s).terms) for s in ("tr(a*a)", "tr(a*a*a)", "tr(a_1*a_1)")]
        assert jacobiator(*hs, A)


def test_criterion_10_commutative_degeneration():
    rng = random.Random(1010)
    spec = GenSpec(max_len=3, max_order=2, max_bdeg=2)
    for _ in range(100):
        p = random_poly(rng, spec)
        with jet_space(commutative=True):
            assert commutative_projection(total_derivative(p)) == total_derivative(commutative_projection(p))

        F = random_density(spec, rng)
        proj_F = commutative_projection(F)
        for fam in ("a", "b"):
            lhs = commutative_projection(variational_derivative(F, fam))
            with jet_space(commutative=True):
                assert lhs == variational_derivative(proj_F, fam)

        q, psi = random_poly(rng, spec, 0), random_poly(rng, spec, 0)
        lhs = commutative_projection(couple((q,), (psi,)))
        with jet_space(commutative=True):
            assert lhs == couple((commutative_projection(q),), (commutative_projection(psi),))

        x = random_multivector(rng, spec, rng.randint(0, 2))
        y = random_multivector(rng, spec, rng.randint(0, 2))
        lhs = commutative_projection(schouten(x, y))
        with jet_space(commutative=True):
            assert lhs == schouten(commutative_projection(x), commutative_projection(y))


def _random_value(rng, i):
    m = 1 + i % 2
    n = 1 + (i // 2) % 2
    commutative = i % 5 == 4
    spec = GenSpec(m=m, n=n, commutative=commutative, max_len=4, max_order=3)
    kind = i % 4
    with jet_space(m=m, n=n, commutative=commutative):
        if kind == 0:
            return (m, n, commutative), random_poly(rng, spec)
        if kind == 1:
            return (m, n, commutative), random_density(spec, rng)
        if kind == 2:
            return (m, n, commutative), random_multivector(rng, spec, rng.randint(0, 3))
        return (m, n, commutative), random_operator(rng, spec, max_terms=4, coeff_len=2)


def test_criterion_11_frontend_roundtrip_and_exit_codes():
    rng = random.Random(1111)
    for i in range(500):
        (m, n, commutative), value = _random_value(rng, i)
        with jet_space(m=m, n=n, commutative=commutative):
            text = render(value)
            if isinstance(value, DiffOperator):
                back = parse_operator(text)
            elif isinstance(value, Multivector):
                back = multivector_from_density(parse_expression(text), value.degree)
            else:
                back = parse_expression(text)
            assert back == value, text
            assert render(back) == text
            doc = serialize(value)
            assert deserialize(doc) == value
            assert serialize(deserialize(doc)) == doc

    for src, commutative in HAMILTONIAN.values():
        flags = ["--commutative"] if commutative else []
        for route in ("master", "involutive", "both"):
            code, out = run(["is-hamiltonian", "--op", src, "--route", route, *flags])
            assert (code, out) == (0, "true"), (src, route)
    src, _ = NON_HAMILTONIAN
    for route in ("master", "involutive", "both"):
        assert run(["is-hamiltonian", "--commutative", "--op", src, "--route", route]) == (1, "false")
    code, out = run(["is-hamiltonian", "--commutative", "--op", src, "--route", "involutive", "--order-bound", "1"])
    assert (code, out) == (2, "inconclusive")
    assert run(["is-hamiltonian", "--op", "a*D[1](p)"])[0] > 2
    assert run(["euler", "tr(a*"])[0] >= 64
    with pytest.raises(SystemExit) as exc:
        run(["no-such-command"])
    assert exc.value.code >= 64


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
