"""The commutative world as the image of the free one."""
import random

from ncvar import jet_space, render, schouten
from ncvar.testkit import GenSpec, commutative_projection, random_multivector

rng = random.Random(0)
spec = GenSpec(max_len=3, max_order=2)
x = random_multivector(rng, spec, 1)
y = random_multivector(rng, spec, 2)
print("x =", render(x))
print("y =", render(y))

free = commutative_projection(schouten(x, y))
with jet_space(commutative=True):
    px, py = commutative_projection(x), commutative_projection(y)
    print("projected x =", render(px))
    print("projected y =", render(py))
    print("project then bracket =", render(schouten(px, py)))
print("bracket then project =", render(free))
