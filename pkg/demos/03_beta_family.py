"""
The beta family as modular forms
================================

Each admissible index (i, j, k) should come with a form f of weight
i(p^2 - 1), non-zero mod p, vanishing to high order at the cusp, with no
weight drop mod p^k, and with f(q^ell) - f(q) a level-ell form of weight
t = i(p^2 - 1) - j(p - 1).  Here the forms are found, checked at a second
level, and contrasted with forms that fail one condition.
"""

from modbeta import (
    MRWIndex,
    PrimeContext,
    beta_group,
    beta_search,
    converse_check,
    mrw_enumerate,
    rigidity_check,
)
from modbeta.chromatic import precision_for
from modbeta.level1 import ModularForm, delta, eisenstein
from modbeta.qseries import reduce_mod

ctx = PrimeContext(5, 2, (3,))

print("admissible indices at p = 5 with stem degree <= 300:")
for x in mrw_enumerate(5, 300):
    print(f"  (i,j,k) = {x.as_tuple()}  degree {x.degree}  weight {x.weight}")

# the first group: B_{20/1,1} is cyclic of order 5, generated by a unit times Delta^2
g = beta_group(20, 1, 1, ctx)
print("\nB_{20/1,1} orders", g.orders, "generator", [g.forms[0].qexp[n] for n in range(g.precision)])

for idx in [(1, 1, 1), (2, 1, 1), (5, 5, 1)]:
    cert = beta_search(MRWIndex(5, *idx), ctx)
    rep = rigidity_check(cert, [2, 3])
    print(f"{idx}: weight {cert.weight}, ord_q f = {cert.f.qexp.ord_q()}, levels 2 and 3 pass: {rep.passed}")

# forms that are not beta elements are rejected with the condition they fail
N = precision_for(24, 2)
d2 = ModularForm(24, reduce_mod(delta(N).qexp ** 2, 5, 1))
e24 = ModularForm(24, reduce_mod(eisenstein(24, N).qexp, 5, 1))
print("\nDelta^2:", converse_check(d2, 1, 1, ctx))
print("E_24:", converse_check(e24, 1, 1, ctx))
print("5 Delta^2:", converse_check(ModularForm(24, d2.qexp.scale(5)), 1, 1, ctx))
N = precision_for(28, 2)
e4d2 = ModularForm(28, reduce_mod(eisenstein(4, N).qexp * delta(N).qexp ** 2, 5, 1))
print("E_4 Delta^2:", converse_check(e4d2, 2, 1, ctx))
