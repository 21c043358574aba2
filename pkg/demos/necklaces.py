"""Cyclic words and the trace.

Letters of the odd family ``b`` anticommute when a rotation carries them
past each other, so some necklaces equal their own negative and vanish.
"""
from ncvar import canonical_rotation, close, normal_form, parse_expression, render
from ncvar.frontend import render_word

# Closing an open word takes its trace; rotations become the same necklace.
p = parse_expression("a_1*a + a*a_1")
print("open  :", render(p))
print("closed:", render(close(p)))

# A word whose rotation returns it with a minus sign is zero.
bb = parse_expression("b*b").words()[0]
word, sign = canonical_rotation(bb)
print(f"least rotation of b*b is {render_word(word)} with sign {sign}")
print("tr(b*b) =", render(parse_expression("tr(b*b)")))

# Modulo total derivatives every density has one canonical representative.
for src in ("tr(a*a_2)", "tr(a*a*a_1)", "tr(a_3*a*a)", "tr(b*b_2)"):
    print(f"{src:28s} ~ {render(normal_form(parse_expression(src)))}")
