"""Deciding whether an operator is Hamiltonian, by two independent routes."""
from ncvar import (
    bivector_of,
    check_involutive,
    check_master,
    jacobiator,
    jet_space,
    parse_expression as P,
    parse_operator,
    poisson_bracket,
    render,
)

CASES = [
    ("D[1](p)", False),
    ("D[1](D[1](D[1](p)))", False),
    ("a*p - p*a", False),
    ("a*D[1](p) + D[1](p*a)", False),
    ("a*a*D[1](p) + D[1](a*a*p)", True),
    ("a_1*D[1](p) + D[1](a_1*p)", True),
]

for src, commutative in CASES:
    with jet_space(commutative=commutative):
        A = parse_operator(src)
        master = check_master(A)
        inv = check_involutive(A)
        mode = "commutative" if commutative else "free"
        print(f"{src:28s} {mode:11s} master={master.status:5s} involutive={inv.status}")
        if master.residual:
            print("    [[pi, pi]] =", render(master.residual))
        if inv.certificate and any(inv.certificate):
            print("    preimage q =", render(inv.certificate))

A = parse_operator("a*p - p*a")
print("pi for a*p - p*a     =", render(bivector_of(A)))
h1, h2 = P("tr(a*a*a)"), P("tr(a_1*a_1)")
print("{h1, h2}             =", render(poisson_bracket(h1, h2, A)))
print("jacobiator           =", render(jacobiator(h1, h2, P("tr(a*a)"), A)))
