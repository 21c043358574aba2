import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncvar import (
    CyclicPoly,
    DiffPoly,
    ParseError,
    deserialize,
    jet_space,
    letter,
    parse_expression as P,
    parse_operator,
    render,
    serialize,
)
from ncvar.frontend import SCHEMA, to_document
from ncvar.testkit import GenSpec, random_density


def test_parse_examples():
    assert P("tr(a*a*a)") == CyclicPoly({(letter("a"),) * 3: 1})
    assert P("a_2") == DiffPoly.of(letter("a", sigma=2))
    assert P("tr(b*D[1](b))") == CyclicPoly({(letter("b"), letter("b", sigma=1)): 1})


def test_parse_rationals_and_grouping():
    assert P("3/2 a") == P("a").scale(3) / 2
    assert P("2*(a + a_1)*a") == P("2 a*a + 2 a_1*a")
    assert P("-a + 1") == DiffPoly.one() - P("a")
    assert P("tr(a) - tr(a)") == 0


def test_multi_index_syntax():
    with jet_space(n=2):
        assert P("a^(1,2)") == P("D[1](D[2](D[2](a)))")
        with pytest.raises(ParseError):
            P("a_1")


def test_generator_names():
    with jet_space(m=2):
        assert P("a2*b1") == DiffPoly.of(letter("a", 2), letter("b", 1))
        with pytest.raises(ParseError):
            P("a3")
    with pytest.raises(ParseError):
        P("a2")


@pytest.mark.parametrize(
    "src, pos",
    [("tr(a*", 5), ("a +* a", 3), ("tr(tr(a))", 3), ("c", 0), ("a_", 1), ("D[2](a)", 2)],
)
def test_syntax_errors_carry_positions(src, pos):
    with pytest.raises(ParseError) as exc:
        P(src)
    assert exc.value.pos == pos


def test_operator_parsing():
    assert render(parse_operator("a*D[1](p)*a_1")) == "a*D[1](p)*a_1"
    A = parse_operator("a*p - p*a")
    assert A.arity == 1 and len(list(A.terms())) == 2
    with pytest.raises(ParseError):
        parse_operator("p*p")
    with pytest.raises(ParseError):
        parse_operator("a")
    with pytest.raises(ParseError):
        parse_operator("r")
    with jet_space(m=2):
        with pytest.raises(ParseError):
            parse_operator("p[1]")
        B = parse_operator("p[2]; -p[1]")
        assert render(B) == "p[2]; -1 p[1]"


def test_render_examples():
    assert render(P("tr(a*a_1)")) == "tr(a*a_1)"
    assert render(CyclicPoly.zero()) == "0"
    assert render(-P("tr(b*a*a*a*a)")) == "-1 tr(b*a*a*a*a)"
    assert render(P("1/3 a - 2")) == "-2 + 1/3 a"


def test_document_shape():
    doc = to_document(P("-1/2 tr(a*a_1)"))
    assert doc["schema"] == SCHEMA
    assert doc["kind"] == "cyclic"
    assert doc["terms"] == [
        {
            "coeff": "-1/2",
            "letters": [
                {"family": "a", "generator": 1, "sigma": [0]},
                {"family": "a", "generator": 1, "sigma": [1]},
            ],
        }
    ]
    text = serialize(P("a"))
    assert json.loads(text)["kind"] == "diffpoly"


def test_document_rejects_unknown_schema():
    doc = json.loads(serialize(P("a")))
    doc["schema"] = "other/9"
    with pytest.raises(ValueError):
        deserialize(json.dumps(doc))


def test_document_restores_the_jet_space():
    with jet_space(m=2, n=2, commutative=True):
        value = P("a2^(1,0)*a1")
        text = serialize(value)
    with jet_space(m=2, n=2, commutative=True):
        assert deserialize(text) == value


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_render_parse_round_trip(seed):
    spec = GenSpec(seed=seed, max_len=4, max_order=3, max_coeff=7)
    value = random_density(spec)
    assert P(render(value)) == value
    assert deserialize(serialize(value)) == value
