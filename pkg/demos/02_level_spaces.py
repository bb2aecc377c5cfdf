"""
Certified spaces of level-ell modular forms
===========================================

M_w(Gamma_0(ell)) is built from q-expansions of products of E_4, E_6, Delta,
their q -> q^ell images and the weight-two form W_ell.  The rows are
saturated at p, so a congruence mod p^k can be tested by one echelon solve.
"""

from modbeta import build_space, dimension, membership_mod
from modbeta.level1 import basis, eisenstein
from modbeta.level_ell import SUPPORTED_LEVELS
from modbeta.qseries import QExpansion, Zmod, reduce_mod, verschiebung

print("dim M_w(Gamma_0(ell)) for w = 0, 2, ..., 20")
for ell in SUPPORTED_LEVELS:
    print(f"  ell={ell:2d}:", [dimension(w, ell) for w in range(0, 21, 2)])

# weight 4, level 2: two forms, E_4(q) and E_4(q^2)
space = build_space(4, 2, 5, 6)
print("\nM_4(Gamma_0(2)) spanned by", space.names, "certificate", space.rank_certificate)

e4 = eisenstein(4, 6).qexp
f = reduce_mod(e4 + verschiebung(eisenstein(4, 3).qexp, 2), 5, 2)
print("E_4(q) + E_4(q^2) mod 25:", membership_mod(space, f, 2))
q = QExpansion([0, 1, 0, 0, 0, 0], 0, 6, Zmod(5))
print("the series q mod 5:", membership_mod(space, q, 1))

# level 13 in low weight needs quotients by Delta to fill the space
s13 = build_space(4, 13, 5)
print("\nM_4(Gamma_0(13)) spanned by", s13.names)

# every level-one form and its image under q -> q^ell lie in the level-ell space
w, ell, p, k = 24, 3, 5, 3
s = build_space(w, ell, p)
for b in basis(w, 0, p, s.precision).elements:
    low = membership_mod(s, reduce_mod(b.qexp, p, k), k)
    high = membership_mod(s, reduce_mod(verschiebung(b.qexp, ell).truncate(s.precision), p, k), k)
    print(f"{b.name:>12}: b(q) {bool(low)}, b(q^{ell}) {bool(high)}")
