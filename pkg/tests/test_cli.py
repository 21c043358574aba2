import json
import subprocess
import sys

import pytest

from ncvar import deserialize, parse_expression, render
from ncvar.cli import EXIT_DATA, EXIT_USAGE, main, run


def test_euler():
    assert run(["euler", "--var", "a", "tr(a*a*a)"]) == (0, "3 a*a")
    expected = render(parse_expression("a*b_1 + b_1*a + b*a_1"))
    assert run(["euler", "--var", "b", "--side", "left", "tr(b*a*b_1)"]) == (0, expected)


def test_schouten():
    assert run(["schouten", "tr(b*a*a)", "tr(b*a*a*a)"]) == (0, "-1 tr(b*a*a*a*a)")


def test_normal_form_and_couple():
    assert run(["normal-form", "tr(a*a_2)"]) == (0, "-1 tr(a_1*a_1)")
    assert run(["couple", "a", "a_2"]) == (0, "-1 tr(a_1*a_1)")


def test_adjoint():
    assert run(["adjoint", "--op", "a*D[1](p)*a_1"]) == (0, "-1 a_1*p*a_1 - a_1*D[1](p)*a - a_2*p*a")
    code, out = run(["adjoint", "--cyclic", "--slots", "p1,p2", "--op", "a*p1*D[1](p2) - p2*a_1*p1"])
    assert (code, out) == (0, "D[1](p1)*p2*a - p2*p1*a_1")


def test_two_generators_and_repeated_op():
    code, out = run(["adjoint", "--gens", "2", "--op", "a2*p[2]", "--op", "0"])
    assert (code, out) == (0, "0; p[1]*a2")
    assert run(["--gens", "2", "is-hamiltonian", "--op", "p[2]", "--op=-p[1]"]) == (0, "true")


def test_evaluate_and_q_field():
    assert run(["evaluate", "tr(b*b*a)", "a", "a_1"])[0] == 0
    assert run(["q-field", "tr(b*a*a)"]) == (0, "-1 a*a; b*a + a*b")
    assert run(["q-field", "tr(b*a*a)", "--apply", "tr(b*a*a*a)"]) == (0, "-1 tr(b*a*a*a*a)")


def test_poisson_and_jacobiator():
    assert run(["poisson", "--op", "D[1](p)", "tr(a*a*a)", "tr(a*a)"]) == (0, "0")
    code, out = run(["jacobiator", "--commutative", "--op", "a_1*D[1](p) + D[1](a_1*p)", "tr(a*a)", "tr(a*a*a)", "tr(a_1*a_1)"])
    assert code == 0 and out != "0"


def test_is_hamiltonian_exit_codes():
    assert run(["is-hamiltonian", "--gens", "1", "--op", "D[1](p)"]) == (0, "true")
    assert run(["is-hamiltonian", "--op", "a*D[1](p) + D[1](p*a)"]) == (1, "false")
    bounded = ["is-hamiltonian", "--commutative", "--route", "involutive", "--order-bound", "1"]
    assert run([*bounded, "--op", "a_1*D[1](p) + D[1](a_1*p)"]) == (2, "inconclusive")
    assert run(["is-hamiltonian", "--op", "a*D[1](p)"])[0] == EXIT_DATA


def test_json_output():
    code, out = run(["schouten", "--json", "tr(b*a*a)", "tr(b*a*a*a)"])
    assert code == 0
    assert render(deserialize(out)) == "-1 tr(b*a*a*a*a)"
    code, out = run(["is-hamiltonian", "--json", "--route", "both", "--op", "a*p - p*a"])
    doc = json.loads(out)
    assert doc["verdict"] == "true"
    assert render(deserialize(json.dumps(doc["certificate"]))) == "p1*p2 - p2*p1"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        run(["is-hamiltonian", "--route", "sideways", "--op", "p"])
    assert exc.value.code == EXIT_USAGE
    assert run(["is-hamiltonian"])[0] == EXIT_USAGE
    assert run(["schouten", "a", "tr(a)"])[0] == EXIT_USAGE
    assert run(["euler", "tr(a*"])[0] == EXIT_DATA
    assert "position 5" in capsys.readouterr().err


def test_selftest():
    code, out = run(["selftest", "--seed", "3", "--cases", "5"])
    assert code == 0
    assert "oracle-bracket: 5/5 ok" in out


def test_main_prints_and_module_entry_point():
    assert main(["euler", "tr(a*a)"]) == 0
    proc = subprocess.run(
        [sys.executable, "-m", "ncvar", "euler", "tr(a*a*a)"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout.strip() == "3 a*a"
