"""The alpha and beta families as congruence classes of modular forms.

The zeroth cohomology of the two-term complex

    M_k  --(d0 - d1)-->  M_k  (+)  M_k(Gamma_0(ell)),
    d0 f = (ell^k f(q^ell), ell^k f(q)),   d1 f = (f(q), f(q)),

reduced mod p^j (alpha) or mod (p^k, E_{p-1}^j) (beta), is computed here by
residue linear algebra on q-expansions, and compared against closed-form
predictions: Bernoulli denominators for alpha, the Miller-Ravenel-Wilson
index set for beta.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import CrossCheckMismatch, InsufficientPrecision, NonIntegralWeightRatio, NotFound
from .level1 import (
    ModularForm,
    basis_indices,
    basis_mod,
    eisenstein,
    iota_image_test,
    serre_weight_drop,
    sturm_level1,
)
from .level_ell import build_space, membership_mod, sturm
from .numtheory import PrimeContext, alpha_order, nu_p
from .qseries import QExpansion, Zmod, reduce_mod, verschiebung
from .residue_linalg import GroupStructure, ResidueMatrix, kernel_mod, rank_mod_prime

# -- precision ---------------------------------------------------------------------


def precision_for(w: int, ell: int, pole_cap: int = 0) -> int:
    """Coefficients needed for exact mod p^k statements at weight w, level ell."""
    return max(sturm(w, ell), sturm_level1(w) * ell) + pole_cap * ell


# -- cofaces -----------------------------------------------------------------------


def coface_d0(f: ModularForm, ell: int):
    """(ell^k f(q^ell) at level ell, ell^k f(q) at level 1)."""
    c = ell**f.weight
    up = ModularForm(f.weight, verschiebung(f.qexp, ell).scale(c), ell, f.holomorphic, f.pole_cap)
    return up, f.scale(c)


def coface_d1(f: ModularForm, ell: int):
    return replace(f, level=ell, name=""), f


# -- alpha ---------------------------------------------------------------------------


@dataclass
class AlphaGroupResult:
    t: int
    j: int
    p: int
    ell: int
    order: int | float
    generator: ModularForm | None
    method: str

    @property
    def is_trivial(self) -> bool:
        return self.order == 1


def _alpha_criterion(t: int, j: int, p: int, ell: int, N: int) -> AlphaGroupResult:
    ring = Zmod(p**j)
    if t == 0:
        gen = ModularForm(0, QExpansion.constant(1, N, ring))
        return AlphaGroupResult(t, j, p, ell, p**j, gen, "criterion")
    if t % (p - 1):
        return AlphaGroupResult(t, j, p, ell, 1, None, "criterion")
    i = nu_p(ell**t - 1, p)
    e = min(i, j)
    gen = eisenstein(t, N, ring).scale(p ** (j - e)) if t >= 4 else None
    return AlphaGroupResult(t, j, p, ell, p**e, gen, "criterion")


def _alpha_bruteforce(t: int, j: int, p: int, ell: int, N: int) -> AlphaGroupResult:
    m = p**j
    b = basis_mod(t, p, j, N)
    if not b.indices:
        return AlphaGroupResult(t, j, p, ell, 1, None, "brute-force")
    lt = pow(ell, t, m)
    cols = []
    for el in b.elements:
        f = el.qexp
        vf = verschiebung(f, ell)
        col = [(lt - 1) * f[n] % m for n in range(N)]
        col += [(lt * vf[n] - f[n]) % m for n in range(N)]
        cols.append(col)
    rows = [list(r) for r in zip(*cols)]
    ker = kernel_mod(ResidueMatrix(rows, m, len(cols)))
    if len(ker.orders) > 1:
        raise CrossCheckMismatch(f"alpha group at t={t}, j={j} is not cyclic: {ker.orders}")
    if not ker.orders:
        return AlphaGroupResult(t, j, p, ell, 1, None, "brute-force")
    gen = ModularForm(t, b.combine(ker.generators[0]))
    return AlphaGroupResult(t, j, p, ell, ker.orders[0], gen, "brute-force")


def _same_cyclic(a: ModularForm | None, b: ModularForm | None, p: int, j: int) -> bool:
    """True when the two forms mod p^j differ by a unit (or both are absent)."""
    if a is None or b is None:
        return a is None and b is None
    m = p**j
    va = [a.qexp[n] % m for n in range(min(a.precision, b.precision))]
    vb = [b.qexp[n] % m for n in range(len(va))]
    for u in range(1, m):
        if u % p and all((u * x - y) % m == 0 for x, y in zip(va, vb)):
            return True
    return False


def alpha_group(t: int, j: int, ctx: PrimeContext, ell: int | None = None) -> AlphaGroupResult:
    """The group A_{t/j}: kernel of d0 - d1 on M_t mod p^j.

    Computed from the closed form (constants killed by p^(nu_p(ell^t - 1)))
    and by brute force over the weight-t basis; any disagreement raises.
    """
    if t < 0 or t % 2:
        return AlphaGroupResult(t, j, ctx.p, ell or ctx.ell, 1, None, "criterion")
    ell = ctx.ell if ell is None else ell
    N = precision_for(t, ell)
    crit = _alpha_criterion(t, j, ctx.p, ell, N)
    brute = _alpha_bruteforce(t, j, ctx.p, ell, N)
    if crit.order != brute.order or not _same_cyclic(crit.generator, brute.generator, ctx.p, j):
        raise CrossCheckMismatch(
            f"alpha group t={t}, j={j}: criterion order {crit.order}, brute force order {brute.order}"
        )
    return crit


def alpha_infinity(t: int, ctx: PrimeContext, ell: int | None = None) -> AlphaGroupResult:
    """The contribution of weight t to A_{t/infinity}.

    The brute-force kernel is computed one power of p beyond the predicted
    order, so that the stabilized order is visible, and compared with the
    p-part of the denominator of B_t/t.
    """
    p = ctx.p
    ell = ctx.ell if ell is None else ell
    if t == 0:
        return AlphaGroupResult(0, 0, p, ell, float("inf"), None, "symbolic")
    if t < 0 or t % 2 or t % (p - 1):
        return AlphaGroupResult(t, 0, p, ell, 1, None, "criterion")
    predicted = alpha_order(t, p)
    j = nu_p(predicted, p) + 1
    N = precision_for(t, ell)
    brute = _alpha_bruteforce(t, j, p, ell, N)
    if brute.order != predicted:
        raise CrossCheckMismatch(f"alpha_infinity t={t}: kernel order {brute.order}, Bernoulli {predicted}")
    gen = eisenstein(t, N) if t >= 4 else None
    return AlphaGroupResult(t, j, p, ell, predicted, gen, "bernoulli+brute-force")


# -- Miller-Ravenel-Wilson indices --------------------------------------------------------


@dataclass(frozen=True)
class MRWIndex:
    p: int
    i: int
    j: int
    k: int

    @property
    def s(self) -> int:
        return self.i // self.p**self.n

    @property
    def n(self) -> int:
        return nu_p(self.i, self.p)

    @property
    def weight(self) -> int:
        return self.i * (self.p**2 - 1)

    @property
    def t(self) -> int:
        """The weight of the quotient M_t that the class lives over."""
        return self.weight - self.j * (self.p - 1)

    @property
    def degree(self) -> int:
        return 2 * self.weight - 2 * self.j * (self.p - 1)

    def as_tuple(self):
        return (self.i, self.j, self.k)


def _pw(p: int, e: int) -> Fraction:
    return Fraction(p) ** e


def mrw_admissible(p: int, i: int, j: int, k: int) -> bool:
    """The index conditions for i = s p^n (s prime to p), with p^m for m < 0
    read as the rational 1/p^-m.  For n = 0 only (j, k) = (1, 1) is admitted.
    """
    if i < 1 or j < 1 or k < 1:
        return False
    n = nu_p(i, p)
    if n == 0:
        return (j, k) == (1, 1)
    if j % p ** (k - 1):
        return False
    if j > _pw(p, n - k + 1) + _pw(p, n - k) - 1:
        return False
    return j > _pw(p, n - k) + _pw(p, n - k - 1) - 1 or j % p**k != 0


def mrw_enumerate(p: int, degree_bound: int) -> list:
    """All admissible (i, j, k) with degree <= degree_bound, ordered by (i, j, k)."""
    if degree_bound <= 0:
        raise ValueError("degree bound must be positive")
    out = []
    i = 1
    # the smallest degree reachable for a given i is at least 2(p-1) i (p - 1/p)
    while 2 * (p - 1) * i * (p - Fraction(1, p)) <= degree_bound:
        n = nu_p(i, p)
        for k in range(1, n + 2):
            jmax = int(_pw(p, n - k + 1) + _pw(p, n - k) - 1) if n else 1
            for j in range(1, max(jmax, 1) + 1):
                if mrw_admissible(p, i, j, k):
                    idx = MRWIndex(p, i, j, k)
                    if idx.degree <= degree_bound:
                        out.append(idx)
        i += 1
    return out


# -- beta ----------------------------------------------------------------------------------


def quotient_indices(T: int, t: int) -> list:
    """n indexing the complement of E_{p-1}^j M_t inside M_T: the basis
    elements Delta^n e_{T-12n} with ord_q = n > t/12 or n = (t-2)/12."""
    return [n for n in basis_indices(T) if 12 * n > t or 12 * n == t - 2]


@dataclass
class BetaGroup:
    t: int
    j: int
    k: int
    p: int
    ell: int
    weight: int
    precision: int
    indices: list
    structure: GroupStructure
    forms: list = field(repr=False, default_factory=list)

    @property
    def orders(self):
        return self.structure.orders

    def count_of_order(self, order: int) -> int:
        return self.structure.count_of_order(order)

    def top_generators(self):
        """Coordinate vectors of the summands of exact order p^k."""
        top = self.p**self.k
        return [g for g, o in zip(self.structure.generators, self.structure.orders) if o == top]

    def form_of(self, x) -> ModularForm:
        return _form_from_coords(self.weight, self.indices, x, self.p, self.k, self.precision)


def _form_from_coords(T, indices, x, p, k, N) -> ModularForm:
    b = basis_mod(T, p, k, N)
    pos = {n: i for i, n in enumerate(b.indices)}
    full = [0] * len(b.indices)
    for n, c in zip(indices, x):
        full[pos[n]] = c
    q = b.combine(full) if b.indices else QExpansion.zero(N, Zmod(p**k))
    return ModularForm(T, q)


def _check_j(j: int, k: int, p: int):
    if j < 1 or j % p ** (k - 1):
        raise ValueError(f"need j >= 1 divisible by p^(k-1) = {p ** (k - 1)}, got j={j}")


def beta_group(t: int, j: int, k: int, ctx: PrimeContext, ell: int | None = None) -> BetaGroup:
    """B_{t/j,k}: classes f in M_{t+j(p-1)} mod (p^k, E_{p-1}^j M_t) with

        (ell^T - 1) f(q)         in M_t              mod p^k,
        ell^T f(q^ell) - f(q)    in M_t(Gamma_0(ell)) mod p^k,

    where T = t + j(p-1).  Representatives are taken in the span of the
    quotient basis, so the answer is a subgroup of (Z/p^k)^indices.
    """
    p = ctx.p
    ell = ctx.ell if ell is None else ell
    _check_j(j, k, p)
    T = t + j * (p - 1)
    if T < 4:
        raise ValueError(f"weight t + j(p-1) = {T} is below 4")
    m = p**k
    N = precision_for(T, ell)
    idx = quotient_indices(T, t) if T % 2 == 0 else []
    if not idx:
        return BetaGroup(t, j, k, p, ell, T, N, idx, GroupStructure())
    big = basis_mod(T, p, k, N)
    F = [big.elements[big.indices.index(n)].qexp for n in idx]
    G1 = [e.qexp for e in basis_mod(t, p, k, N).elements] if t >= 0 else []
    G2 = []
    if t >= 0:
        space = build_space(t, ell, p, N, adic=k)
        G2 = [r[:N] for r in space.rows]
    lT = pow(ell, T, m)
    cols = []
    for f in F:
        vf = verschiebung(f, ell)
        top = [(lT - 1) * f[n] % m for n in range(N)]
        bottom = [(lT * vf[n] - f[n]) % m for n in range(N)]
        cols.append(top + bottom)
    for g in G1:
        cols.append([-g[n] % m for n in range(N)] + [0] * N)
    for g in G2:
        cols.append([0] * N + [-g[n] % m for n in range(N)])
    rows = [list(r) for r in zip(*cols)]
    ker = kernel_mod(ResidueMatrix(rows, m, len(cols)))
    nx = len(idx)
    gens, orders = [], []
    for g, o in zip(ker.generators, ker.orders):
        x = g[:nx]
        # the projection to the f-coordinates is injective; check it
        xo = _additive_order(x, p, k)
        if xo != o:
            raise CrossCheckMismatch(f"projection changed an order: {o} -> {xo}")
        gens.append(x)
        orders.append(o)
    structure = GroupStructure(orders, gens)
    forms = [_form_from_coords(T, idx, x, p, k, N) for x in gens]
    return BetaGroup(t, j, k, p, ell, T, N, idx, structure, forms)


def _additive_order(x, p: int, k: int) -> int:
    m = p**k
    e = min((nu_p(c % m, p) for c in x if c % m), default=k)
    return p ** (k - min(e, k))


def _embed_previous(prev: BetaGroup, cur: BetaGroup):
    """Images of prev's top generators under multiplication by
    E_{p-1}^(p^(k-1)), in cur's coordinates.

    The image is read off the q-expansion through the weight-T basis and
    compared with plain zero padding, which is what the congruences
    e_{T'-12n} = e_{T-12n} mod p^k predict.
    """
    p, k = cur.p, cur.k
    m = p**k
    b = basis_mod(cur.weight, p, k, cur.precision)
    pos = {n: i for i, n in enumerate(cur.indices)}
    out = []
    for x in prev.top_generators():
        padded = [0] * len(cur.indices)
        for n, c in zip(prev.indices, x):
            padded[pos[n]] = c % m
        f = _form_from_coords(prev.weight, prev.indices, x, p, k, cur.precision).qexp
        coords = b.coordinates(f, len(b.indices) and max(b.indices) + 1)
        if coords is None:
            raise CrossCheckMismatch("embedded class is not a weight-T form")
        via_q = [0] * len(cur.indices)
        for n, c in zip(b.indices, coords):
            if n in pos:
                via_q[pos[n]] = c % m
            elif c % m:
                raise CrossCheckMismatch(f"embedded class has a component in E^j M_t at n={n}")
        if via_q != padded:
            raise CrossCheckMismatch("zero padding disagrees with the q-expansion embedding")
        out.append(padded)
    return out


def _previous_group(t, j, k, ctx, ell):
    p = ctx.p
    jp = j - p ** (k - 1)
    if jp < 1 or t + jp * (p - 1) < 4:
        return None
    return beta_group(t, jp, k, ctx, ell)


def new_generator_count(t: int, j: int, k: int, ctx: PrimeContext, ell: int | None = None) -> int:
    """Order-p^k summands of B_{t/j,k} not coming from B_{t/(j-p^(k-1)),k}."""
    p = ctx.p
    cur = beta_group(t, j, k, ctx, ell)
    top = cur.top_generators()
    prev = _previous_group(t, j, k, ctx, ell)
    old = _embed_previous(prev, cur) if prev is not None else []
    rank_cur = rank_mod_prime(top, p) if top else 0
    rank_old = rank_mod_prime(old, p) if old else 0
    rank_all = rank_mod_prime(top + old, p) if top + old else 0
    if rank_all != rank_cur:
        raise CrossCheckMismatch("embedded generators do not lie in the larger group")
    return rank_all - rank_old


# -- certificates ---------------------------------------------------------------------------


@dataclass
class ConditionResult:
    passed: bool
    failed: int | None
    witnesses: dict
    detail: str = ""


def _reduced(f: ModularForm, p: int, k: int) -> QExpansion:
    ring = Zmod(p**k)
    if f.ring == ring:
        return f.qexp
    if f.ring.kind == "mod":
        if f.ring.modulus % (p**k):
            raise ValueError(f"form known only mod {f.ring.modulus}")
        return QExpansion([c % p**k for c in f.qexp.coeffs], f.qexp.lowest, f.qexp.precision, ring)
    return reduce_mod(f.qexp, p, k)


def check_conditions(f: ModularForm, j: int, k: int, p: int, ell: int) -> ConditionResult:
    """Conditions (1)-(4) for f of weight T with t = T - j(p-1), at level ell.

    (1) f is not 0 mod p; (2) ord_q f > t/12 or = (t-2)/12; (3) no weight
    drop mod p^k; (4) f(q^ell) - f(q) is a weight-t level-ell form mod p^k.
    """
    T = f.weight
    t = T - j * (p - 1)
    m = p**k
    N = precision_for(T, ell)
    fq = _reduced(f, p, k)
    if fq.precision < N:
        raise InsufficientPrecision(fq.precision, N, f"conditions at level {ell}")
    fq = fq.truncate(N)
    w = {}
    first = next((n for n in range(N) if fq[n] % p), None)
    if first is None:
        return ConditionResult(False, 1, w, "f vanishes mod p")
    w["1"] = {"index": first, "value": fq[first]}
    o = fq.ord_q()
    if not iota_image_test(ModularForm(T, fq), t):
        return ConditionResult(False, 2, w, f"ord_q f = {o} with t = {t}")
    w["2"] = {"ord_q": o}
    drop = serre_weight_drop(ModularForm(T, fq), p, k)
    if drop.weight != T:
        return ConditionResult(False, 3, w, f"f mod p^k already has weight {drop.weight}")
    w["3"] = {"minimal_weight": T}
    g = (verschiebung(fq, ell).truncate(N) - fq).truncate(N)
    if t < 0:
        ok = all(g[n] % m == 0 for n in range(N))
        if not ok:
            return ConditionResult(False, 4, w, f"M_{t} is zero but f(q^ell) - f(q) is not")
        w["4"] = {str(ell): {"coordinates": [], "precision": N}}
        return ConditionResult(True, None, w)
    space = build_space(t, ell, p, N, adic=k)
    res = membership_mod(space, g, k)
    if not res:
        return ConditionResult(False, 4, w, f"f(q^{ell}) - f(q) leaves M_{t}(Gamma0({ell})) at q^{res.index}")
    w["4"] = {str(ell): {"coordinates": res.coordinates, "precision": N}}
    return ConditionResult(True, None, w)


@dataclass
class BetaCertificate:
    p: int
    index: MRWIndex | tuple
    weight: int
    j: int
    k: int
    coordinates: list
    f: ModularForm
    witnesses: dict
    verified_levels: list = field(default_factory=list)

    @property
    def t(self) -> int:
        return self.weight - self.j * (self.p - 1)

    @property
    def indices(self) -> list:
        return quotient_indices(self.weight, self.t)

    def expansion(self, N: int) -> ModularForm:
        """f re-expanded from its basis coordinates to precision N."""
        return _form_from_coords(self.weight, self.indices, self.coordinates, self.p, self.k, N)

    def to_json(self) -> str:
        return certificate_to_json(self)


@dataclass
class VerificationReport:
    passed: bool
    ell: int
    failed: int | None = None
    detail: str = ""


def verify_certificate(cert: BetaCertificate, ell: int) -> VerificationReport:
    """Re-check conditions (1)-(4) at level ell from the certificate's data.

    The form is re-expanded from its coordinates to the precision level ell
    needs, the stored expansion must agree with it, and stored witnesses must
    match what is recomputed.  Condition 0 flags an inconsistent certificate.
    """
    p, k, T = cert.p, cert.k, cert.weight
    N = precision_for(T, ell)
    f = cert.expansion(max(N, cert.f.precision))
    stored = cert.f.qexp
    if any(stored[n] % p**k != f.qexp[n] for n in range(stored.precision)):
        return VerificationReport(False, ell, 0, "stored expansion disagrees with coordinates")
    res = check_conditions(f, cert.j, k, p, ell)
    if not res.passed:
        return VerificationReport(False, ell, res.failed, res.detail)
    for key in ("1", "2", "3"):
        if key in cert.witnesses and cert.witnesses[key] != res.witnesses[key]:
            return VerificationReport(False, ell, int(key), f"stored witness {key} does not re-verify")
    stored4 = cert.witnesses.get("4", {}).get(str(ell))
    if stored4 is not None and not _witness4_ok(cert, f, ell, stored4):
        return VerificationReport(False, ell, 4, "stored membership coordinates do not re-verify")
    if ell not in cert.verified_levels:
        cert.verified_levels.append(ell)
    return VerificationReport(True, ell)


def _witness4_ok(cert, f: ModularForm, ell: int, stored: dict) -> bool:
    p, k = cert.p, cert.k
    m = p**k
    N = stored["precision"]
    t = cert.t
    fq = f.qexp.truncate(N)
    g = (verschiebung(fq, ell).truncate(N) - fq).truncate(N)
    if t < 0:
        return not stored["coordinates"] and all(g[n] % m == 0 for n in range(N))
    space = build_space(t, ell, p, N, adic=k)
    coords = stored["coordinates"]
    if len(coords) != space.dim:
        return False
    for n in range(N):
        s = sum(c * r[n] for c, r in zip(coords, space.rows))
        if (s - g[n]) % m:
            return False
    return True


def _mod_p_echelon_add(rows, pivots, x, p: int, m: int):
    """Reduce x against unit-pivot rows mod m; if x survives mod p, normalize
    it at its first unit entry, add it, and return its pivot."""
    x = [c % m for c in x]
    for r, c in zip(rows, pivots):
        if x[c]:
            f = x[c]
            x = [(a - f * b) % m for a, b in zip(x, r)]
    piv = next((i for i, c in enumerate(x) if c % p), None)
    if piv is None:
        return None
    inv = pow(x[piv], -1, m)
    x = [c * inv % m for c in x]
    for i, r in enumerate(rows):
        if r[piv]:
            f = r[piv]
            rows[i] = [(a - f * b) % m for a, b in zip(r, x)]
    rows.append(x)
    pivots.append(piv)
    return piv


def beta_candidates(t: int, j: int, k: int, ctx: PrimeContext, ell: int | None = None):
    """Coordinate vectors of the new order-p^k classes of B_{t/j,k}, in a
    deterministic normal form, sorted by ord_q."""
    p = ctx.p
    m = p**k
    cur = beta_group(t, j, k, ctx, ell)
    prev = _previous_group(t, j, k, ctx, ell)
    old = _embed_previous(prev, cur) if prev is not None else []
    rows, pivots = [], []
    for x in old:
        if _mod_p_echelon_add(rows, pivots, x, p, m) is None:
            raise CrossCheckMismatch("old generators are dependent mod p")
    n_old = len(rows)
    for x in cur.top_generators():
        _mod_p_echelon_add(rows, pivots, x, p, m)
    new = sorted(zip(pivots[n_old:], rows[n_old:]))
    return cur, [x for _, x in new]


def beta_search(index: MRWIndex, ctx: PrimeContext, ell: int | None = None) -> BetaCertificate:
    """Find the form attached to an index by solving for B_{t/j,k} and
    testing its new order-p^k classes against conditions (1)-(4)."""
    p = ctx.p
    ell = ctx.ell if ell is None else ell
    if isinstance(index, tuple):
        index = MRWIndex(p, *index)
    T, j, k, t = index.weight, index.j, index.k, index.t
    cur, cands = beta_candidates(t, j, k, ctx, ell)
    failures = []
    N = max(precision_for(T, q) for q in ctx.ells)
    for x in cands:
        f = _form_from_coords(T, cur.indices, x, p, k, N)
        res = check_conditions(f, j, k, p, ell)
        if res.passed:
            coords = [c % p**k for c in x]
            return BetaCertificate(p, index, T, j, k, coords, f, res.witnesses, [ell])
        failures.append((x, res.failed, res.detail))
    if not cands:
        failures.append((None, None, "no new class of order p^k"))
    raise NotFound(f"no certificate for {index.as_tuple()} at p={p}, ell={ell}", failures)


# -- converse and rigidity ----------------------------------------------------------------------


@dataclass
class BetaIndexed:
    i: int
    j: int
    k: int


@dataclass
class PowerOfPException:
    i: int


@dataclass
class Rejected:
    condition: int
    detail: str = ""


def converse_check(f: ModularForm, j: int, k: int, ctx: PrimeContext, ell: int | None = None):
    """Classify a form passing conditions (1)-(4): its weight must be
    i(p^2 - 1), and i = p^n with j < p^n is the exceptional case."""
    p = ctx.p
    ell = ctx.ell if ell is None else ell
    T = f.weight
    if T % ((p - 1) * p ** (k - 1)):
        raise ValueError(f"weight {T} is not divisible by (p-1)p^(k-1)")
    res = check_conditions(f, j, k, p, ell)
    if not res.passed:
        return Rejected(res.failed, res.detail)
    i, r = divmod(T, p * p - 1)
    if r or i <= 0:
        raise NonIntegralWeightRatio(f"weight {T} passes conditions (1)-(4) but is not a multiple of {p * p - 1}")
    n = nu_p(i, p)
    if i == p**n and j < p**n:
        return PowerOfPException(i)
    return BetaIndexed(i, j, k)


@dataclass
class RigidityReport:
    passed: bool
    reports: list

    @property
    def violations(self):
        return [r for r in self.reports if not r.passed]


def rigidity_check(cert: BetaCertificate, ells) -> RigidityReport:
    reports = [verify_certificate(cert, ell) for ell in ells]
    return RigidityReport(all(r.passed for r in reports), reports)


# -- serialization -----------------------------------------------------------------------


def _strs(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, dict):
        return {str(a): _strs(b) for a, b in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_strs(x) for x in obj]
    return obj


def _ints(obj):
    if isinstance(obj, str) and obj.lstrip("-").isdigit():
        return int(obj)
    if isinstance(obj, dict):
        return {a: _ints(b) for a, b in obj.items()}
    if isinstance(obj, list):
        return [_ints(x) for x in obj]
    return obj


def certificate_to_dict(cert: BetaCertificate) -> dict:
    idx = cert.index.as_tuple() if isinstance(cert.index, MRWIndex) else tuple(cert.index)
    return _strs(
        {
            "p": cert.p,
            "index": {"i": idx[0], "j": idx[1], "k": idx[2]},
            "weight": cert.weight,
            "t": cert.t,
            "modulus": cert.p**cert.k,
            "precision": cert.f.precision,
            "coefficients": list(cert.f.qexp.coeffs),
            "coordinates": cert.coordinates,
            "quotient_indices": cert.indices,
            "witnesses": cert.witnesses,
            "verified_levels": sorted(cert.verified_levels),
        }
    )


def certificate_to_json(cert: BetaCertificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=True, indent=2) + "\n"


def certificate_from_json(text: str) -> BetaCertificate:
    d = _ints(json.loads(text))
    p = d["p"]
    idx = d["index"]
    i, j, k = idx["i"], idx["j"], idx["k"]
    m = d["modulus"]
    if m != p**k:
        raise ValueError("modulus does not match p^k")
    f = ModularForm(d["weight"], QExpansion(d["coefficients"], 0, d["precision"], Zmod(m)))
    index = MRWIndex(p, i, j, k) if d["weight"] == i * (p * p - 1) else (i, j, k)
    cert = BetaCertificate(p, index, d["weight"], j, k, d["coordinates"], f, d["witnesses"], list(d["verified_levels"]))
    if cert.t != d["t"] or cert.indices != d["quotient_indices"]:
        raise ValueError("certificate header is inconsistent")
    return cert
