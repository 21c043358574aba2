import random

import pytest

from ncvar import DiffPoly, jet_space, letter, multivector_from_density, parse_expression as P, schouten
from ncvar.testkit import (
    GenSpec,
    bruteforce_bracket,
    commutative_projection,
    one_vector_oracle,
    random_density,
    random_multivector,
    selftest,
)


def test_same_spec_same_stream():
    spec = GenSpec(seed=42, max_len=4)
    assert random_density(spec) == random_density(spec)
    r1, r2 = spec.rng(), spec.rng()
    assert [random_density(spec, r1) for _ in range(5)] == [random_density(spec, r2) for _ in range(5)]


def test_single_letter_spec():
    rng = random.Random(0)
    spec = GenSpec(max_len=1, max_order=0)
    for _ in range(20):
        assert all(len(w) == 1 and w[0].order == 0 for w in random_density(spec, rng).words())


def test_even_spec():
    rng = random.Random(1)
    spec = GenSpec(max_bdeg=0)
    for _ in range(20):
        assert random_density(spec, rng).b_degrees() <= {0}


def test_projection_examples():
    a, a1 = letter("a"), letter("a", sigma=1)
    b, b1 = letter("b"), letter("b", sigma=1)
    with jet_space(commutative=True):
        assert commutative_projection(DiffPoly.of(a1, a)) == DiffPoly.of(a, a1)
        assert not commutative_projection(DiffPoly.of(b, b))
        assert commutative_projection(DiffPoly.of(b1, b)) == -DiffPoly.of(b, b1)
    with pytest.raises(TypeError):
        commutative_projection(3)


def test_projection_is_multiplicative():
    rng = random.Random(2)
    spec = GenSpec(max_len=3)
    from ncvar.testkit import random_poly

    for _ in range(30):
        p, q = random_poly(rng, spec), random_poly(rng, spec)
        with jet_space(commutative=True):
            assert commutative_projection(p * q) == commutative_projection(p) * commutative_projection(q)


def test_oracle_examples():
    xi = multivector_from_density(P("tr(b*a*a)"))
    eta = multivector_from_density(P("tr(b*a*a*a)"))
    assert bruteforce_bracket(xi, eta) == multivector_from_density(P("-tr(b*a*a*a*a)"))
    assert one_vector_oracle(P("a*a"), P("a*a*a")) == bruteforce_bracket(xi, eta)
    assert not bruteforce_bracket(multivector_from_density(P("tr(a*a)")), multivector_from_density(P("tr(a*a*a)")))


def test_oracle_matches_schouten_on_random_pairs():
    rng = random.Random(4)
    spec = GenSpec(max_len=3, max_order=2, max_bdeg=3)
    for _ in range(100):
        x = random_multivector(rng, spec, rng.randint(0, 3))
        y = random_multivector(rng, spec, rng.randint(0, 3))
        assert bruteforce_bracket(x, y) == schouten(x, y)


def test_oracle_with_two_generators_and_dimensions():
    rng = random.Random(5)
    spec = GenSpec(m=2, n=2, max_len=3, max_order=2)
    with jet_space(m=2, n=2):
        for _ in range(20):
            x = random_multivector(rng, spec, rng.randint(0, 2))
            y = random_multivector(rng, spec, rng.randint(0, 2))
            assert bruteforce_bracket(x, y) == schouten(x, y)


def test_oracle_size_bound():
    big = multivector_from_density(P("tr(b*a*a*a*a*a*a)"))
    with pytest.raises(ValueError):
        bruteforce_bracket(big, big, max_len=4)


def test_selftest_report():
    report = selftest(seed=1, cases=4)
    assert set(report) == {"euler-exactness", "oracle-bracket", "skew-symmetry", "commutative-projection"}
    assert all(ok == total == 4 for ok, total in report.values())
