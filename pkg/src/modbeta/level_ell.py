"""Spaces M_w(Gamma_0(ell)) for the genus-zero primes ell, as certified lattices
of truncated q-expansions, saturated at a prime p.

A space is spanned greedily by products of level-one forms, their images
under q -> q^ell, and the weight-two form W_ell.  Where those products fall
short (level 13 in low weight) forms F/Delta are added, with F cut out by
vanishing conditions at both cusps.

Independence is decided modulo an auxiliary prime: a rank there is a lower
bound for the rank over Q, and the forms lie in a space of known dimension.
The lattice is carried p-adically to a tracked number of digits and
saturated at p, so reduction mod p^k commutes with taking spans and
membership mod p^k is one echelon reduction.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._cache import once
from .errors import InsufficientPrecision, SpanDeficient, UnsaturatedSpace, UnsupportedLevel
from .level1 import _delta_exact, _eisenstein_series, sturm_level1
from .numtheory import is_prime, sigma_table
from .qseries import QQ, ZZ, QExpansion, Zmod, verschiebung
from .residue_linalg import left_kernel_mod_prime, rank_mod_prime

SUPPORTED_LEVELS = (2, 3, 5, 7, 13)
# below 2^25, so a product of residues times a few thousand rows fits in int64
CHOICE_PRIME = 2**25 - 39
DEFAULT_ADIC = 8

_default_cache_dir = None


def set_cache_dir(path) -> None:
    """Directory used by build_space when no cache_dir is passed (None: off)."""
    global _default_cache_dir
    _default_cache_dir = os.fspath(path) if path else None


def _legendre_minus1(ell: int) -> int:
    return 1 if ell % 4 == 1 else -1


def _legendre_minus3(ell: int) -> int:
    return 1 if ell % 3 == 1 else -1


def dimension(w: int, ell: int) -> int:
    """dim M_w(Gamma_0(ell)) for prime ell (ell = 1 gives level one)."""
    if w < 0 or w % 2:
        return 0
    if w == 0:
        return 1
    if ell == 1:
        return 0 if w == 2 else w // 12 + (0 if w % 12 == 2 else 1)
    if not is_prime(ell):
        raise ValueError("level must be prime")
    e2 = 1 if ell == 2 else 1 + _legendre_minus1(ell)
    e3 = 1 if ell == 3 else 1 + _legendre_minus3(ell)
    mu, cusps = ell + 1, 2
    g12 = 12 + mu - 3 * e2 - 4 * e3 - 6 * cusps
    assert g12 % 12 == 0
    g = g12 // 12
    return (w - 1) * (g - 1) + (w // 4) * e2 + (w // 3) * e3 + (w // 2) * cusps


def sturm(w: int, ell: int) -> int:
    mu = 1 if ell == 1 else ell + 1
    return w * mu // 12 + 1


def W_ell(ell: int, N: int) -> QExpansion:
    """1 + (24/(ell-1)) sum (sigma_1(n) - ell sigma_1(n/ell)) q^n."""
    if 24 % (ell - 1):
        raise UnsupportedLevel(ell)
    c = 24 // (ell - 1)
    s = sigma_table(1, N - 1)
    vals = [1] + [c * (s[n] - (ell * s[n // ell] if n % ell == 0 else 0)) for n in range(1, N)]
    return QExpansion(vals, 0, N, ZZ)


# -- building blocks -----------------------------------------------------------------


def _ring(m: int):
    return ZZ if m == 0 else Zmod(m)


def _reduce(f: QExpansion, m: int) -> QExpansion:
    if m == 0:
        return f
    return QExpansion([c % m for c in f.coeffs], f.lowest, f.precision, Zmod(m))


@once
def _exact_generators(ell: int, N: int):
    M = -(-N // ell) + 1

    def vl(f):
        return verschiebung(f, ell).truncate(N)

    out = [(2, "W", W_ell(ell, N))]
    for k, name, f, fl in (
        (4, "E4", _eisenstein_series(4, N, ZZ), vl(_eisenstein_series(4, M, ZZ))),
        (6, "E6", _eisenstein_series(6, N, ZZ), vl(_eisenstein_series(6, M, ZZ))),
        (12, "Delta", _delta_exact(N), vl(_delta_exact(M))),
    ):
        out.append((k, name, f))
        out.append((k, f"{name}(q^{ell})", fl))
    out.sort(key=lambda g: g[0])
    return tuple(out)


@once
def _generators(ell: int, N: int, m: int):
    """(weight, name, expansion mod m to precision N); m = 0 means exact."""
    return tuple((k, name, _reduce(f, m)) for k, name, f in _exact_generators(ell, N))


@once
def _local_data(ell: int):
    """Exact expansions to precision ell + 1 of each generator and of its
    Fricke image, which is its expansion at the cusp 0.

    E_k(q) and E_k(q^ell) swap up to ell^(+-k/2); W_ell changes sign.
    """
    R = ell + 1
    gens = {name: f.truncate(R) for _, name, f in _exact_generators(ell, R)}
    out = {"W": (gens["W"], gens["W"].scale(-1))}
    for k, name in ((4, "E4"), (6, "E6"), (12, "Delta")):
        f, fl = gens[name], gens[f"{name}(q^{ell})"]
        out[name] = (f, fl.scale(Fraction(ell) ** (k // 2)))
        out[f"{name}(q^{ell})"] = (fl, f.scale(Fraction(ell) ** (-(k // 2))))
    return out


class _IncrementalRank:
    """Reduced echelon form mod CHOICE_PRIME, grown one vector at a time."""

    def __init__(self, ncols: int):
        self.P = CHOICE_PRIME
        self.rows = np.zeros((0, ncols), dtype=np.int64)
        self.pivots = []

    def try_add(self, f: QExpansion) -> bool:
        P = self.P
        v = np.array([c % P for c in f.coeffs[: self.rows.shape[1]]], dtype=np.int64)
        if self.pivots:
            v = (v - (v[self.pivots] @ self.rows) % P) % P
        nz = np.flatnonzero(v)
        if not len(nz):
            return False
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, P) % P
        if self.pivots:
            self.rows = (self.rows - np.outer(self.rows[:, c], v) % P) % P
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(c)
        return True


def _monomial_name(parts):
    counts = {}
    for x in parts:
        counts[x] = counts.get(x, 0) + 1
    return "*".join(x if c == 1 else f"{x}^{c}" for x, c in counts.items())


def _choice_precision(w: int, ell: int) -> int:
    # a power of two at or above the Sturm bound, so nearby weights share work
    return 1 << (sturm(w, ell) - 1).bit_length()


@once
def _monomial_choice(w: int, ell: int):
    """Greedy independent monomials of weight w; may fall short of the dimension.

    Each entry is (generator position, entry of the lower-weight choice,
    factor names).  Independence is tested mod CHOICE_PRIME at or above the
    Sturm bound, so it holds over Q at every larger precision.
    """
    dim = dimension(w, ell)
    if w == 0:
        return ((None, None, ()),)
    N = _choice_precision(w, ell)
    gens = _generators(ell, N, CHOICE_PRIME)
    out = []
    tracker = _IncrementalRank(N)
    for gi, (gw, gname, g) in enumerate(gens):
        if gw > w or len(out) == dim:
            continue
        sub = _monomial_choice(w - gw, ell)
        subf = _monomial_eval(w - gw, ell, N, CHOICE_PRIME)
        # W * M_(w-2) comes first; after it the products most likely to be
        # new are those with the W-free monomials, listed last in each choice
        order = range(len(sub)) if gname == "W" else reversed(range(len(sub)))
        for si in order:
            if tracker.try_add(g * subf[si]):
                out.append((gi, si, (gname, *sub[si][2])))
                if len(out) == dim:
                    break
    return tuple(out)


@once
def _monomial_eval(w: int, ell: int, N: int, m: int):
    """The chosen monomials of weight w mod m (exact for m = 0), to precision N."""
    choice = _monomial_choice(w, ell)
    if w == 0:
        return (QExpansion.constant(1, N, _ring(m)),)
    gens = _generators(ell, N, m)
    out = []
    for gi, si, _ in choice:
        gw, _, g = gens[gi]
        out.append(g * _monomial_eval(w - gw, ell, N, m)[si])
    return tuple(out)


def _monomial_local(parts, ell: int):
    """Exact (expansion at infinity, Fricke image) to precision ell + 1."""
    data = _local_data(ell)
    a = QExpansion.constant(1, ell + 1, QQ)
    b = QExpansion.constant(1, ell + 1, QQ)
    for name in parts:
        x, y = data[name]
        a, b = a * x, b * y
    return a, b


@once
def _quotient_choice(w: int, ell: int):
    """Integer vectors c over the weight w + 12 monomials such that
    F = sum c_i m_i vanishes at infinity and to order ell at the cusp 0, so
    F/Delta lies in M_w.  Only those raising the rank are kept."""
    big = _monomial_choice(w + 12, ell)
    if len(big) != dimension(w + 12, ell):
        return ()
    local = [_monomial_local(parts, ell) for _, _, parts in big]
    conds = [[Fraction(a[0]) for a, _ in local]]
    for n in range(ell):
        conds.append([Fraction(b[n]) for _, b in local])
    N = _choice_precision(w, ell)
    tracker = _IncrementalRank(N)
    for f in _monomial_eval(w, ell, N, CHOICE_PRIME):
        tracker.try_add(f)
    chosen = []
    for vec in _rational_kernel(conds, len(big)):
        den = math.lcm(*(x.denominator for x in vec))
        coeffs = [int(x * den) for x in vec]
        g = math.gcd(*coeffs)
        coeffs = tuple(c // g for c in coeffs)
        if not _check_holomorphic(coeffs, w, ell):
            raise ArithmeticError(f"Delta-quotient in weight {w}, level {ell} is not holomorphic")
        # the content of an integral form is visible below its Sturm bound
        exact = _quotient_eval((coeffs, 1), w, ell, sturm(w, ell), 0)
        q = (coeffs, math.gcd(*exact.coeffs))
        if tracker.try_add(_quotient_eval(q, w, ell, N, CHOICE_PRIME)):
            chosen.append(q)
    return tuple(chosen)


def _quotient_eval(quotient, w: int, ell: int, N: int, m: int) -> QExpansion:
    """(sum c_i m_i) / (content * Delta) mod m, for quotient = (c, content)."""
    coeffs, content = quotient
    mm = m * content
    F = QExpansion.zero(N + 1, _ring(mm))
    for c, f in zip(coeffs, _monomial_eval(w + 12, ell, N + 1, mm)):
        if c:
            F = F + f.scale(c)
    if F[0]:
        raise ArithmeticError("combination does not vanish at infinity")
    # Delta = q (1 - 24 q + ...), and the bracket is a unit power series
    unit = _reduce(_delta_exact(N + 1).shift(-1), mm).inverse()
    G = F.shift(-1).truncate(N) * unit.truncate(N)
    vals = [G._get0(n) for n in range(N)]
    if any(v % content for v in vals):
        raise ArithmeticError("Delta-quotient content does not divide its coefficients")
    return QExpansion([v // content for v in vals], 0, N, _ring(m))


def _rational_kernel(rows, n):
    """Basis of {x in Q^n : rows . x = 0} by Gaussian elimination."""
    A = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r0 = 0
    for c in range(n):
        sel = next((i for i in range(r0, len(A)) if A[i][c]), None)
        if sel is None:
            continue
        A[r0], A[sel] = A[sel], A[r0]
        pv = A[r0][c]
        A[r0] = [x / pv for x in A[r0]]
        for i in range(len(A)):
            if i != r0 and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r0])]
        pivots.append(c)
        r0 += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n
        x[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            x[pc] = -A[i][fc]
        basis.append(x)
    return basis


def _check_holomorphic(coeffs, w: int, ell: int) -> bool:
    """G * W_ell^6 must lie in M_(w+12) for G = F/Delta; checked exactly to the
    Sturm bound of weight w + 24, which rules out a pole of G at the cusp 0."""
    need = sturm(w + 24, ell)
    G = _quotient_eval((coeffs, 1), w, ell, need, 0)
    H = G * W_ell(ell, need) ** 6
    basis = [list(f.coeffs) for f in _monomial_eval(w + 12, ell, need, 0)]
    # H lies in the span iff some relation among basis + [H] involves H
    rel = _rational_kernel(list(zip(*(basis + [list(H.coeffs)]))), len(basis) + 1)
    return any(r[-1] for r in rel)


def _spanning(w: int, ell: int, N: int, m: int):
    """Names and expansions mod m of forms spanning M_w(Gamma_0(ell)) over Q."""
    dim = dimension(w, ell)
    choice = _monomial_choice(w, ell)
    names = [_monomial_name(parts) or "1" for _, _, parts in choice]
    forms = list(_monomial_eval(w, ell, N, m))
    if len(forms) < dim:
        for n, q in enumerate(_quotient_choice(w, ell)):
            names.append(f"Q{n + 1}")
            forms.append(_quotient_eval(q, w, ell, N, m))
    if len(forms) != dim:
        raise SpanDeficient(w, ell, len(forms), dim)
    return tuple(names), tuple(forms)


# -- saturation -----------------------------------------------------------------------


def saturate(rows, p: int):
    """Enlarge a row lattice until its rank mod p equals its number of rows.

    Each round divides by p every combination that vanishes mod p, so the
    rows stay a basis of the enlarged lattice.  For rows known only mod p^R
    each round costs one p-digit.  Returns (rows, rounds).
    """
    rows = [list(r) for r in rows]
    rounds = 0
    while rows:
        kernel = left_kernel_mod_prime(rows, p)
        if not kernel:
            break
        rounds += 1
        # kernel vectors are in reduced echelon form: each has a unit at a
        # private position, naming the row it replaces
        new_rows = [list(r) for r in rows]
        for c in kernel:
            piv = next(i for i, x in enumerate(c) if x % p)
            inv = pow(c[piv], -1, p)
            comb = [0] * len(rows[0])
            for ci, r in zip(c, rows):
                ci = ci * inv % p
                if ci:
                    comb = [a + ci * b for a, b in zip(comb, r)]
            if any(x % p for x in comb):
                raise ArithmeticError("left kernel vector does not vanish mod p")
            new_rows[piv] = [x // p for x in comb]
        rows = new_rows
    return rows, rounds


# -- the space --------------------------------------------------------------------------


@dataclass
class Member:
    coordinates: list

    def __bool__(self):
        return True


@dataclass
class NotMember:
    index: int

    def __bool__(self):
        return False


@dataclass
class LevelEllSpace:
    """Basis rows of the saturated lattice, known mod p^adic_precision."""

    weight: int
    ell: int
    p: int
    precision: int
    sturm_bound: int
    rows: list = field(repr=False)
    adic_precision: int = DEFAULT_ADIC
    names: tuple = ()
    rank_certificate: dict = field(default_factory=dict)
    saturated: bool = False
    _echelons: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def form(self, i: int) -> QExpansion:
        return QExpansion(self.rows[i], 0, self.precision, Zmod(self.p**self.adic_precision))

    def _echelon(self, k: int, P: int):
        key = (k, P)
        if key not in self._echelons:
            self._echelons[key] = _UnitEchelon([r[:P] for r in self.rows], self.p, k)
        return self._echelons[key]

    def membership_mod(self, f: QExpansion, k: int | None = None, upto: int | None = None):
        return membership_mod(self, f, k, upto)


class _UnitEchelon:
    """Reduced echelon form mod p^k of rows of full rank mod p, together with
    the transformation back to the original rows."""

    def __init__(self, rows, p: int, k: int):
        m = p**k
        self.m = m
        n = len(rows)
        ncols = len(rows[0]) if rows else 0
        work = [[x % m for x in r] for r in rows]
        trans = [[int(i == j) for j in range(n)] for i in range(n)]
        pivots = []
        r0 = 0
        for c in range(ncols):
            if r0 == n:
                break
            sel = next((i for i in range(r0, n) if work[i][c] % p), None)
            if sel is None:
                continue
            work[r0], work[sel] = work[sel], work[r0]
            trans[r0], trans[sel] = trans[sel], trans[r0]
            inv = pow(work[r0][c], -1, m)
            work[r0] = [x * inv % m for x in work[r0]]
            trans[r0] = [x * inv % m for x in trans[r0]]
            for i in range(n):
                if i != r0 and work[i][c]:
                    f = work[i][c]
                    work[i] = [(a - f * b) % m for a, b in zip(work[i], work[r0])]
                    trans[i] = [(a - f * b) % m for a, b in zip(trans[i], trans[r0])]
            pivots.append(c)
            r0 += 1
        if r0 < n:
            raise UnsaturatedSpace(f"rank mod p is {r0}, expected {n}")
        self.rows, self.trans, self.pivots = work, trans, pivots

    def solve(self, v):
        m = self.m
        v = [x % m for x in v]
        pivset = {c: i for i, c in enumerate(self.pivots)}
        coeffs = []
        for c in range(len(v)):
            if not v[c]:
                continue
            if c not in pivset:
                return NotMember(c)
            i = pivset[c]
            f = v[c]
            v = [(a - f * b) % m for a, b in zip(v, self.rows[i])]
            coeffs.append((i, f))
        x = [0] * len(self.rows)
        for i, f in coeffs:
            x = [(a + f * b) % m for a, b in zip(x, self.trans[i])]
        return Member(x)


# -- construction, caching ------------------------------------------------------------------


def _cache_path(cache_dir, w, ell, p, N):
    return os.path.join(cache_dir, f"M{w}_G0_{ell}_p{p}_N{N}.txt")


def _write_cache(space: LevelEllSpace, path: str):
    tmp = f"{path}.{os.getpid()}.tmp"
    with open(tmp, "w") as fh:
        fh.write(f"{space.weight} {space.ell} {space.p} {space.precision} {space.dim} {int(space.saturated)}\n")
        fh.write(f"padic {space.adic_precision}\n")
        fh.write(" ".join(space.names) + "\n")
        for r in space.rows:
            fh.write(" ".join(str(x) for x in r) + "\n")
    os.replace(tmp, path)


def load_space(path: str) -> LevelEllSpace:
    """Reload a cached space, re-checking its rank against the dimension."""
    with open(path) as fh:
        w, ell, p, N, rank, sat = (int(x) for x in fh.readline().split())
        tag, adic = fh.readline().split()
        names = tuple(fh.readline().split())
        rows = [[int(x) for x in line.split()] for line in fh if line.strip()]
    if tag != "padic" or len(rows) != rank or any(len(r) != N for r in rows):
        raise ValueError(f"malformed cache file {path}")
    return _certify(w, ell, p, N, rows, int(adic), names, bool(sat))


def _certify(w, ell, p, N, rows, adic, names, saturated):
    """Rank mod p of integral rows bounds their rank over Q from below, so a
    full rank mod p proves the rows are a basis of M_w(Gamma_0(ell))."""
    dim = dimension(w, ell)
    if len(rows) != dim:
        raise SpanDeficient(w, ell, len(rows), dim)
    rp = rank_mod_prime(rows, p) if rows else 0
    if saturated and rp != dim:
        raise UnsaturatedSpace(f"weight {w} level {ell}: rank mod {p} is {rp} < {dim}")
    cert = {"dimension": dim, "rank_mod_p": rp, "p_adic_digits": adic}
    return LevelEllSpace(w, ell, p, N, sturm(w, ell), rows, adic, tuple(names), cert, saturated)


@once
def _build(w: int, ell: int, p: int, N: int, adic: int):
    R = adic + 2
    while True:
        names, forms = _spanning(w, ell, N, p**R)
        rows, rounds = saturate([list(f.coeffs) for f in forms], p)
        if R - rounds >= adic:
            break
        R = adic + rounds + 2
    known = R - rounds
    rows = [[x % p**known for x in r] for r in rows]
    return _certify(w, ell, p, N, rows, known, names, True)


def build_space(
    w: int, ell: int, p: int, N: int | None = None, cache_dir=None, adic: int = DEFAULT_ADIC
) -> LevelEllSpace:
    """The lattice of M_w(Gamma_0(ell)) saturated at p, to precision N
    (default: the Sturm bound), with rows known mod at least p^adic."""
    if ell not in SUPPORTED_LEVELS:
        raise UnsupportedLevel(ell)
    if w % 2 or w < 0:
        raise ValueError("weight must be even and non-negative")
    if p == ell:
        raise ValueError("p must differ from the level")
    need = sturm(w, ell)
    N = need if N is None else N
    if N < need:
        raise InsufficientPrecision(N, need, f"M_{w}(Gamma_0({ell}))")
    adic = max(adic, DEFAULT_ADIC)
    cache_dir = cache_dir or _default_cache_dir
    if not cache_dir:
        return _build(w, ell, p, N, adic)
    path = _cache_path(cache_dir, w, ell, p, N)
    if os.path.exists(path):
        space = load_space(path)
        if space.adic_precision >= adic:
            return space
    space = _build(w, ell, p, N, adic)
    os.makedirs(cache_dir, exist_ok=True)
    _write_cache(space, path)
    return space


def membership_mod(space: LevelEllSpace, f: QExpansion, k: int | None = None, upto: int | None = None):
    """Member(coordinates) if f agrees mod p^k below ``upto`` (default: the
    space precision) with a combination of the basis, else NotMember(index)
    naming the first q-coefficient where no combination can match."""
    if not space.saturated:
        raise UnsaturatedSpace("membership needs a space saturated at p")
    p = space.p
    if k is None:
        if f.ring.kind != "mod":
            raise ValueError("give k for exact expansions")
        m, k = f.ring.modulus, 0
        while m % p == 0:
            m //= p
            k += 1
    if k > space.adic_precision:
        raise InsufficientPrecision(space.adic_precision, k, "p-adic digits of the basis")
    upto = space.precision if upto is None else upto
    if upto < space.sturm_bound:
        raise InsufficientPrecision(upto, space.sturm_bound, "membership")
    if f.precision < upto:
        raise InsufficientPrecision(f.precision, upto, "membership")
    if upto > space.precision:
        raise InsufficientPrecision(space.precision, upto, "membership basis")
    if f.ord_q() < 0:
        raise ValueError("expansion has a pole; use membership_mod_meromorphic")
    mod = p**k
    if f.ring.kind == "mod" and f.ring.modulus % mod:
        raise ValueError(f"expansion known only mod {f.ring.modulus}, not mod {mod}")
    v = [_to_mod(f[n], mod) for n in range(upto)]
    if space.dim == 0:
        first = next((i for i, x in enumerate(v) if x), None)
        return Member([]) if first is None else NotMember(first)
    return space._echelon(k, upto).solve(v)


def _to_mod(c, mod):
    if isinstance(c, Fraction):
        return c.numerator * pow(c.denominator, -1, mod) % mod
    return c % mod


def membership_mod_meromorphic(f: QExpansion, w: int, ell: int, p: int, k: int, pole_cap: int, cache_dir=None):
    """Membership of a form with poles of order <= pole_cap at the cusps, by
    clearing them with (Delta(q) Delta(q^ell))^pole_cap and testing in weight
    w + 24 pole_cap."""
    if pole_cap == 0:
        space = build_space(w, ell, p, max(f.precision, sturm(w, ell)), cache_dir, adic=k)
        return membership_mod(space, f, k)
    N = f.precision
    M = -(-N // ell) + 1
    clear = (_delta_exact(N + 2 * pole_cap) * verschiebung(_delta_exact(M + 2 * pole_cap), ell).truncate(N + 2 * pole_cap)) ** pole_cap
    if f.ring.kind == "mod":
        clear = _reduce(clear, f.ring.modulus)
    g = f * clear
    w2 = w + 24 * pole_cap
    need = sturm(w2, ell)
    if g.precision < need:
        raise InsufficientPrecision(g.precision, need, "cleared meromorphic form")
    g = QExpansion([g._get0(n) for n in range(g.precision)], 0, g.precision, g.ring)
    return membership_mod(build_space(w2, ell, p, g.precision, cache_dir, adic=k), g, k)


def level1_dimension(w: int) -> int:
    return dimension(w, 1)


__all__ = [
    "SUPPORTED_LEVELS",
    "LevelEllSpace",
    "Member",
    "NotMember",
    "W_ell",
    "build_space",
    "dimension",
    "load_space",
    "membership_mod",
    "membership_mod_meromorphic",
    "saturate",
    "set_cache_dir",
    "sturm",
    "sturm_level1",
]
