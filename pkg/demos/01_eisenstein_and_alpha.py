"""
Eisenstein congruences and the alpha family
===========================================

E_{p-1} is congruent to 1 mod p, and its p-power powers push the congruence
to higher powers of p.  The kernel of d0 - d1 on M_t mod p^j is then spanned
by E_t, with order read off from the Bernoulli denominator of B_t / t.
"""

from modbeta import PrimeContext, alpha_group, alpha_infinity, bernoulli, eisenstein, nu_p
from modbeta.level1 import sturm_level1
from modbeta.qseries import reduce_mod

# E_4, E_20 and E_100 reduce to 1 mod 5, 25 and 125, checked to the Sturm bound
for k, j in [(4, 1), (20, 2), (100, 3)]:
    N = sturm_level1(k)
    r = reduce_mod(eisenstein(k, N).qexp, 5, j)
    print(f"E_{k} mod 5^{j}:", [r[n] for n in range(N)])

# Bernoulli denominators carry every prime q with (q - 1) | k
for k in (4, 12, 20, 60):
    b = bernoulli(k)
    print(f"B_{k} = {b}")

# the alpha family at p = 5 with ell = 2: compare the kernel with the denominator of B_t/t
ctx = PrimeContext(5, 2, (3,))
print("\n  t  order  nu_5(den B_t/t)")
for t in range(4, 61, 4):
    a = alpha_infinity(t, ctx)
    v = nu_p((bernoulli(t) / t).denominator, 5)
    print(f"{t:3d}  {a.order:5d}  {v}")

# the finite-level groups are cut off at p^j and vanish when (p - 1) does not divide t
for t, j in [(4, 1), (20, 1), (20, 2), (20, 3), (6, 2)]:
    a = alpha_group(t, j, ctx)
    print(f"A_{{{t}/{j}}} has order {a.order}")
