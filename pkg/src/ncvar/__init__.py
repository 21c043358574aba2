"""Exact calculus of noncommutative variational multivectors.

Densities are words in jet letters of even generators ``a`` and their odd
partners ``b``; functionals are necklaces modulo total derivatives.  On top
of this sit variational derivatives, operator adjoints, the Schouten
bracket and a verifier for Hamiltonian operators.
"""
from .algebra import CyclicPoly, DiffPoly, Letter, canonical_rotation, close, concat, letter
from .config import JetSpace, current, jet_space
from .frontend import ParseError, deserialize, parse_expression, parse_operator, render, serialize
from .jet import (
    DiffOperator,
    adjoint,
    couple,
    cyclic_multilinear_adjoint,
    evolutionary,
    euler,
    functional,
    is_exact,
    lift_covector_velocity,
    linearize,
    normal_form,
    total_derivative,
    variational_derivative,
)
from .multivector import (
    Multivector,
    OddField,
    commutator,
    evaluate,
    expand_operator,
    multivector_from_density,
    normalize_to_operator,
    odd_field,
    schouten,
)
from .poisson import (
    InvalidHamiltonianError,
    NotSkewAdjointError,
    PoissonVerdict,
    bivector_of,
    check_involutive,
    check_master,
    hamiltonian_flow,
    is_hamiltonian,
    jacobiator,
    poisson_bracket,
)

__version__ = "0.1.0"

__all__ = [
    "adjoint",
    "bivector_of",
    "canonical_rotation",
    "check_involutive",
    "check_master",
    "close",
    "commutator",
    "concat",
    "couple",
    "current",
    "cyclic_multilinear_adjoint",
    "CyclicPoly",
    "deserialize",
    "DiffOperator",
    "DiffPoly",
    "euler",
    "evaluate",
    "evolutionary",
    "expand_operator",
    "functional",
    "hamiltonian_flow",
    "InvalidHamiltonianError",
    "is_exact",
    "is_hamiltonian",
    "jacobiator",
    "jet_space",
    "JetSpace",
    "Letter",
    "letter",
    "lift_covector_velocity",
    "linearize",
    "Multivector",
    "multivector_from_density",
    "normal_form",
    "normalize_to_operator",
    "NotSkewAdjointError",
    "odd_field",
    "OddField",
    "parse_expression",
    "parse_operator",
    "ParseError",
    "poisson_bracket",
    "PoissonVerdict",
    "render",
    "schouten",
    "serialize",
    "total_derivative",
    "variational_derivative",
]
