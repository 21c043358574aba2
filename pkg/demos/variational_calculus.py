"""Variational derivatives, operators and their adjoints."""
from ncvar import (
    adjoint,
    close,
    couple,
    euler,
    lift_covector_velocity,
    linearize,
    parse_expression as P,
    parse_operator,
    render,
    total_derivative,
    variational_derivative,
)

H = P("tr(a*a*a + 1/2 a_1*a_1)")
print("H          =", render(H))
print("dH/da      =", render(euler(H, "a")))

# Total derivatives are invisible to the Euler operator.
f = P("a*a_1*a")
print("D(f)       =", render(total_derivative(f)))
print("d/da <D f> =", render(variational_derivative(close(total_derivative(f)), "a")))

# Adjoints move the coefficient words around the circle.
A = parse_operator("a*D[1](p)*a_1")
print("A          =", render(A))
print("A^+        =", render(adjoint(A)))
p1, p2 = (P("a"),), (P("a_1*a"),)
print("<p1, A p2> =", render(couple(p1, A(p2))))
print("<p2, A+p1> =", render(couple(p2, adjoint(A)(p1))))

# Covectors drift under a flow by the adjoint linearization.
phi = (P("a*a_1"),)
print("l_phi      =", render(linearize(phi)))
print("p velocity =", render(lift_covector_velocity(phi, (P("a_1"),))))
