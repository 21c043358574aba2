"""Multivectors, the Schouten bracket and odd evolutionary fields."""
from ncvar import (
    commutator,
    evaluate,
    multivector_from_density,
    normalize_to_operator,
    odd_field,
    parse_expression as P,
    render,
    schouten,
)
from ncvar.testkit import bruteforce_bracket, one_vector_oracle


def mv(src):
    return multivector_from_density(P(src))


# Two one-vectors: the bracket is minus the commutator of their flows.
x, y = mv("tr(b*a*a)"), mv("tr(b*a*a*a)")
print("[[x, y]]            =", render(schouten(x, y)))
print("flow commutator     =", render(one_vector_oracle(P("a*a"), P("a*a*a"))))
print("direct enumeration  =", render(bruteforce_bracket(x, y)))

# A bivector as an operator and as a skew form on covectors.
pi = mv("tr(b*b*a) + 1/2 tr(b*b_1)")
k, A = normalize_to_operator(pi)
print("pi as operator      =", render(A))
print("pi(a, a_1)          =", render(evaluate(pi, [(P("a"),), (P("a_1"),)])))

# The field of a bracket is the commutator of the fields.
eta = mv("tr(b*a_1*a)")
probe = mv("tr(b*a*a)")
lhs = commutator(odd_field(pi), odd_field(eta))(probe)
rhs = odd_field(schouten(pi, eta))(probe)
print("[Q_pi, Q_eta](probe) =", render(lhs))
print("Q_[[pi,eta]](probe)  =", render(rhs))
print("equal:", lhs == rhs)
