"""Level one modular forms over Z_(p) and Z/p^k.

Everything here is expressed through q-expansions.  The working basis of
``M_t`` is the echelon family ``Delta^n e_{t-12n}`` whose n-th member starts
``q^n + ...``; converting an expansion into coordinates is then a triangular
solve.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from ._cache import once
from .errors import InsufficientPrecision
from .numtheory import bernoulli, sigma_table
from .qseries import QQ, ZZ, QExpansion, Ring, Zmod, reduce_mod

INF = float("inf")


@dataclass(frozen=True)
class ModularForm:
    weight: int
    qexp: QExpansion
    level: int = 1
    holomorphic: bool = True
    pole_cap: int = 0
    name: str = ""

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError("only even weights occur")
        if self.holomorphic and self.qexp.ord_q() < 0:
            raise ValueError("holomorphic form with a pole at infinity")
        if not self.holomorphic and self.qexp.ord_q() < -self.pole_cap:
            raise ValueError("pole order exceeds pole_cap")

    @property
    def ring(self) -> Ring:
        return self.qexp.ring

    @property
    def precision(self) -> int:
        return self.qexp.precision

    def reduce(self, p: int, k: int) -> "ModularForm":
        return replace(self, qexp=reduce_mod(self.qexp, p, k))

    def scale(self, c) -> "ModularForm":
        return replace(self, qexp=self.qexp.scale(c))

    def __add__(self, other: "ModularForm") -> "ModularForm":
        if other.weight != self.weight:
            raise ValueError("cannot add forms of different weight")
        return replace(
            self,
            qexp=self.qexp + other.qexp,
            level=max(self.level, other.level),
            holomorphic=self.holomorphic and other.holomorphic,
            pole_cap=max(self.pole_cap, other.pole_cap),
            name="",
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __mul__(self, other):
        if not isinstance(other, ModularForm):
            return self.scale(other)
        return ModularForm(
            self.weight + other.weight,
            self.qexp * other.qexp,
            max(self.level, other.level),
            self.holomorphic and other.holomorphic,
            self.pole_cap + other.pole_cap,
        )

    def __pow__(self, e: int):
        q = self.qexp**e
        hol = self.holomorphic and e >= 0
        cap = max(0, -q.ord_q()) if q.ord_q() != INF else 0
        return ModularForm(self.weight * e, q, self.level, hol, cap if not hol else 0)

    def truncate(self, n: int) -> "ModularForm":
        return replace(self, qexp=self.qexp.truncate(n))


def sturm_level1(w: int) -> int:
    return w // 12 + 1


# -- Eisenstein series and Delta -------------------------------------------------


def eisenstein_constant(k: int) -> Fraction:
    """-2k / B_k, the coefficient multiplying sigma_{k-1}(n) in E_k."""
    return Fraction(-2 * k) / bernoulli(k)


@once
def _eisenstein_series(k: int, N: int, ring: Ring) -> QExpansion:
    c = eisenstein_constant(k)
    sig = sigma_table(k - 1, N - 1)
    if ring.kind == "mod":
        cm = ring.coerce(c)
        m = ring.modulus
        vals = [1] + [cm * (s % m) % m for s in sig[1:]]
    else:
        if c.denominator == 1:
            ring = ZZ
            ci = c.numerator
            vals = [1] + [ci * s for s in sig[1:]]
        else:
            ring = QQ
            vals = [1] + [c * s for s in sig[1:]]
    return QExpansion(vals, 0, N, ring)


def eisenstein(k: int, N: int, ring: Ring = QQ) -> ModularForm:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n to precision N.

    With ``ring=Zmod(p^j)`` the constant -2k/B_k must be p-integral.
    """
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series need even k >= 4")
    return ModularForm(k, _eisenstein_series(k, N, ring), name=f"E{k}")


@once
def _delta_exact(N: int) -> QExpansion:
    e4 = _eisenstein_series(4, N, ZZ)
    e6 = _eisenstein_series(6, N, ZZ)
    num = e4**3 - e6**2
    vals = []
    for c in num.coeffs:
        q, r = divmod(c, 1728)
        if r:
            raise ArithmeticError("E4^3 - E6^2 not divisible by 1728")
        vals.append(q)
    return QExpansion(vals, 0, N, ZZ)


def delta(N: int, ring: Ring = ZZ) -> ModularForm:
    """The discriminant (E4^3 - E6^2)/1728 = q - 24q^2 + ... to precision N."""
    q = _delta_exact(N)
    if ring.kind == "mod":
        q = QExpansion([ring.coerce(c) for c in q.coeffs], 0, N, ring)
    return ModularForm(12, q, name="Delta")


def hasse_lift(p: int, N: int, ring: Ring = QQ) -> ModularForm:
    """E_{p-1}, whose reduction mod p is the Hasse invariant."""
    return eisenstein(p - 1, N, ring)


# -- the forms e_k -------------------------------------------------------------------


def monomial_exponents(k: int) -> tuple[int, int]:
    """Lexicographically least (a, b) with 4a + 6b = k."""
    for a in range(k // 4 + 1):
        rest = k - 4 * a
        if rest >= 0 and rest % 6 == 0:
            return a, rest // 6
    raise ValueError(f"no monomial E4^a E6^b of weight {k}")


def e_form_recipe(k: int, p: int) -> tuple:
    """How e_k is assembled: ("one",), ("monomial", a, b) or ("product", base, m)
    meaning e_base * E_m."""
    if k % 2 or k < 0 or k == 2:
        raise ValueError(f"e_k is undefined for k={k}")
    if k == 0:
        return ("one",)
    if k < p - 1 or k == p + 1:
        return ("monomial", *monomial_exponents(k))
    r = k % (p - 1)
    base = p + 1 if r == 2 else r
    return ("product", base, k - base)


@once
def _e_series(k: int, p: int, N: int, ring: Ring) -> QExpansion:
    recipe = e_form_recipe(k, p)
    if recipe[0] == "one":
        return QExpansion.constant(1, N, ring if ring.kind == "mod" else ZZ)
    if recipe[0] == "monomial":
        _, a, b = recipe
        r = ring if ring.kind == "mod" else ZZ
        out = QExpansion.constant(1, N, r)
        if a:
            out = out * _eisenstein_series(4, N, r) ** a
        if b:
            out = out * _eisenstein_series(6, N, r) ** b
        return out
    _, base, m = recipe
    big = _eisenstein_series(m, N, ring)
    if base == 0:
        return big
    return _e_series(base, p, N, ring) * big


def e_form(k: int, p: int, N: int, ring: Ring = QQ) -> ModularForm:
    """The p-integral form e_k = 1 + O(q) of weight k (e_k = E_k when (p-1) | k)."""
    return ModularForm(k, _e_series(k, p, N, ring), name=f"e{k}")


# -- bases -----------------------------------------------------------------------------


def basis_indices(t: int, pole_cap: int = 0) -> list[int]:
    """n with -pole_cap <= n and t - 12n in {0, 4, 6, 8, ...}."""
    if t % 2:
        return []
    out = []
    n = -pole_cap
    while t - 12 * n >= 0:
        r = t - 12 * n
        if r != 2:
            out.append(n)
        n += 1
    return out


@dataclass
class Level1Basis:
    weight: int
    p: int
    precision: int
    ring: Ring
    indices: list
    elements: list = field(repr=False)
    pole_cap: int = 0

    def __len__(self):
        return len(self.elements)

    def coordinates(self, f: QExpansion, check_to: int | None = None):
        """Coordinates of f in this basis, or None if f is not in the span.

        The residual is required to vanish below ``check_to`` (default: the
        basis precision).
        """
        check_to = self.precision if check_to is None else check_to
        if f.precision < check_to:
            raise InsufficientPrecision(f.precision, check_to, "coordinates")
        if check_to > self.precision:
            raise InsufficientPrecision(self.precision, check_to, "basis")
        ring = self.ring
        lo = min(f.lowest, -self.pole_cap)
        resid = [ring.coerce(f[n]) if n >= f.lowest else 0 for n in range(lo, check_to)]
        coords = []
        idx = set(self.indices)
        for n in range(lo, check_to):
            c = resid[n - lo]
            if n in idx:
                coords.append(c)
                if c:
                    b = self.elements[self.indices.index(n)].qexp
                    for m in range(n, check_to):
                        bm = b._get0(m)
                        if bm:
                            resid[m - lo] -= c * bm
                    if ring.kind == "mod":
                        mod = ring.modulus
                        for m in range(n, check_to):
                            resid[m - lo] %= mod
            elif c:
                return None
        return coords

    def combine(self, coords) -> QExpansion:
        out = QExpansion.zero(self.precision, self.ring, -self.pole_cap)
        for c, b in zip(coords, self.elements):
            if c:
                out = out + b.qexp.scale(c)
        return out


@once
def _basis(t: int, pole_cap: int, p: int, N: int, ring: Ring) -> Level1Basis:
    idx = basis_indices(t, pole_cap)
    work = N + 2 * pole_cap + 2
    d = _delta_exact(work)
    if ring.kind == "mod":
        d = QExpansion([ring.coerce(c) for c in d.coeffs], 0, work, ring)
    elements = []
    for n in idx:
        r = t - 12 * n
        part = _e_series(r, p, work, ring) if r else QExpansion.constant(1, work, ring if ring.kind == "mod" else ZZ)
        if n:
            part = part * d**n
        if part.precision < N:
            raise InsufficientPrecision(part.precision, N, "basis element")
        q = part.truncate(N)
        if ring.kind != "mod" and q.ring != ring:
            q = QExpansion(q.coeffs, q.lowest, q.precision, ring)
        elements.append(
            ModularForm(t, q, holomorphic=n >= 0, pole_cap=max(0, -n), name=_basis_name(n, r))
        )
    return Level1Basis(t, p, N, ring, idx, elements, pole_cap)


def _basis_name(n: int, r: int) -> str:
    parts = []
    if n:
        parts.append("Delta" if n == 1 else f"Delta^{n}")
    if r or not n:
        parts.append(f"e{r}")
    return "*".join(parts)


def basis(t: int, pole_cap: int, p: int, N: int, ring: Ring = QQ) -> Level1Basis:
    """The basis {Delta^n e_{t-12n}} of M_t (pole_cap=0) or of its Laurent
    extension allowing Delta^-pole_cap, sorted by ord_q = n."""
    if N < 1:
        raise ValueError("precision must be positive")
    return _basis(t, pole_cap, p, N, ring)


def basis_mod(t: int, p: int, k: int, N: int, pole_cap: int = 0) -> Level1Basis:
    return _basis(t, pole_cap, p, N, Zmod(p**k))


def dimension_level1(t: int) -> int:
    return len(basis_indices(t))


# -- splittings, the image of iota, weight filtration ----------------------------------------


def _ring_pk(ring: Ring, p: int):
    if ring.kind != "mod":
        return None
    m, k = ring.modulus, 0
    while m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise ValueError(f"{ring!r} is not a power of {p}")
    return k


def splitting_r(f: ModularForm, t: int, p: int) -> ModularForm:
    """r_m : M_{t+m} -> M_t on the echelon basis.

    Delta^n e_{t+m-12n} goes to Delta^n e_{t-12n} when t - 12n is 0 or at
    least 4, and to 0 otherwise.
    """
    m = f.weight - t
    if m < 0 or m % 2:
        raise ValueError("target weight must be below the source by an even amount")
    N = f.precision
    cap = f.pole_cap
    src = _basis(f.weight, cap, p, N, f.ring if f.ring.kind == "mod" else QQ)
    coords = src.coordinates(f.qexp)
    if coords is None:
        raise ValueError("form is not in the span of the weight basis at this precision")
    dst = _basis(t, cap, p, N, src.ring)
    dst_pos = {n: i for i, n in enumerate(dst.indices)}
    out = [0] * len(dst.indices)
    for n, c in zip(src.indices, coords):
        r = t - 12 * n
        if r == 0 or (r >= 4):
            out[dst_pos[n]] = c
    q = dst.combine(out) if dst.indices else QExpansion.zero(N, src.ring)
    return ModularForm(t, q, holomorphic=f.holomorphic, pole_cap=cap)


def iota_image_test(f: ModularForm, t: int) -> bool:
    """ord_q f > t/12 or ord_q f = (t-2)/12."""
    need = -(-t // 12) + 2
    o = f.qexp.ord_q()
    if o == INF and f.precision < need:
        raise InsufficientPrecision(f.precision, need, "iota image test")
    if o == INF:
        return True
    if o <= t / 12 and f.precision < need:
        raise InsufficientPrecision(f.precision, need, "iota image test")
    return Fraction(o) > Fraction(t, 12) or Fraction(o) == Fraction(t - 2, 12)


@dataclass
class WeightDrop:
    weight: int
    witness: ModularForm | None
    original_weight: int

    @property
    def dropped(self) -> bool:
        return self.weight < self.original_weight


def serre_weight_drop(f: ModularForm, p: int, k: int | None = None) -> WeightDrop:
    """Least w' = w - s(p-1)p^(k-1), s >= 0, such that f mod p^k is the
    expansion of a weight w' form.  Membership is checked to the Sturm bound of
    the original weight, which makes each test exact."""
    if k is None:
        k = _ring_pk(f.ring, p)
        if k is None:
            raise ValueError("give k for exact forms")
    fq = f.qexp if f.ring == Zmod(p**k) else reduce_mod(f.qexp, p, k)
    w = f.weight
    need = sturm_level1(w)
    if fq.precision < need:
        raise InsufficientPrecision(fq.precision, need, "serre_weight_drop")
    step = (p - 1) * p ** (k - 1)
    best = WeightDrop(w, f if f.ring == Zmod(p**k) else replace(f, qexp=fq), w)
    w2 = w - step
    while w2 >= 0:
        b = basis_mod(w2, p, k, need)
        coords = b.coordinates(fq, need)
        if coords is None:
            break
        witness = ModularForm(w2, b.combine(coords) if b.indices else QExpansion.zero(need, b.ring))
        best = WeightDrop(w2, witness, w)
        w2 -= step
    return best
