"""Dense linear algebra over Z and over the chain rings Z/p^k.

Matrices are plain lists of integer rows.  Over ``Z/p^k`` every elimination
picks the pivot of least p-adic valuation (ties: lowest column, then lowest
row), so outputs are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .numtheory import is_prime


@dataclass
class ResidueMatrix:
    """Rows over Z/modulus, or over Z when ``modulus == 0``."""

    rows: list
    modulus: int = 0
    ncols: int | None = None

    def __post_init__(self):
        self.rows = [list(r) for r in self.rows]
        if self.ncols is None:
            self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")
        if self.modulus:
            m = self.modulus
            self.rows = [[x % m for x in r] for r in self.rows]

    @property
    def shape(self):
        return len(self.rows), self.ncols

    def __eq__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        return (self.modulus, self.ncols, self.rows) == (other.modulus, other.ncols, other.rows)


@dataclass
class GroupStructure:
    """A finite Z/p^k-module as a direct sum of cyclic pieces.

    ``generators[i]`` generates a cyclic summand of order ``orders[i]``.
    """

    orders: list = field(default_factory=list)
    generators: list = field(default_factory=list)

    @property
    def size(self) -> int:
        out = 1
        for o in self.orders:
            out *= o
        return out

    def is_trivial(self) -> bool:
        return not self.orders

    def count_of_order(self, order: int) -> int:
        return sum(1 for o in self.orders if o == order)


def prime_power(m: int) -> tuple[int, int]:
    """Split m = p^k; raises if m is not a prime power."""
    for p in range(2, m + 1):
        if m % p == 0:
            k = 0
            n = m
            while n % p == 0:
                n //= p
                k += 1
            if n != 1 or not is_prime(p):
                raise ValueError(f"{m} is not a prime power")
            return p, k
    raise ValueError(f"{m} is not a prime power")


def valuation_mod(x: int, p: int, k: int) -> int:
    """Valuation of a residue mod p^k, with v(0) = k."""
    x %= p**k
    if x == 0:
        return k
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _unit_part_inverse(x: int, p: int, v: int, m: int) -> int:
    return pow((x // p**v) % m, -1, m)


def _rows_of(M):
    if isinstance(M, ResidueMatrix):
        return M.rows, M.modulus, M.ncols
    rows = [list(r) for r in M]
    return rows, 0, len(rows[0]) if rows else 0


# -- Howell form ----------------------------------------------------------------


def howell_rows(rows, modulus: int, ncols: int | None = None, pivot_cols: int | None = None):
    """Howell form of the row span of ``rows`` over Z/modulus.

    Returns the nonzero rows, each with leading entry p^e in strictly increasing
    columns, entries above a pivot reduced into [0, p^e).  ``pivot_cols`` limits
    pivots to the first columns (trailing columns ride along, e.g. a transform).
    """
    p, k = prime_power(modulus)
    m = modulus
    ncols = len(rows[0]) if ncols is None and rows else (ncols or 0)
    pivot_cols = ncols if pivot_cols is None else pivot_cols
    pool = [[x % m for x in r] for r in rows]
    pool = [r for r in pool if any(r)]
    done = []
    for c in range(pivot_cols):
        best = None
        for i, r in enumerate(pool):
            if r[c]:
                v = valuation_mod(r[c], p, k)
                if best is None or v < best[0]:
                    best = (v, i)
                    if v == 0:
                        break
        if best is None:
            continue
        v, i = best
        piv = pool.pop(i)
        u = _unit_part_inverse(piv[c], p, v, m)
        piv = [x * u % m for x in piv]
        pv = p**v
        rest = []
        for r in pool:
            if r[c]:
                f = r[c] // pv
                r = [(a - f * b) % m for a, b in zip(r, piv)]
            if any(r):
                rest.append(r)
        if v > 0:
            extra = [x * p ** (k - v) % m for x in piv]
            if any(extra):
                rest.append(extra)
        pool = rest
        for j, r in enumerate(done):
            f = r[c] // pv
            if f:
                done[j] = [(a - f * b) % m for a, b in zip(r, piv)]
        done.append(piv)
    return done


def howell_form(M) -> ResidueMatrix:
    rows, modulus, ncols = _rows_of(M)
    if not modulus:
        raise ValueError("howell_form needs a modulus p^k")
    h = howell_rows(rows, modulus, ncols)
    h = h + [[0] * ncols for _ in range(max(0, len(rows) - len(h)))]
    return ResidueMatrix(h, modulus, ncols)


def _leading(row):
    for j, x in enumerate(row):
        if x:
            return j
    return None


def reduce_by_howell(v, howell, modulus: int):
    """Reduce v against Howell rows; returns (remainder, coefficients)."""
    m = modulus
    v = [x % m for x in v]
    coeffs = []
    for r in howell:
        c = _leading(r)
        if c is None:
            coeffs.append(0)
            continue
        lead = r[c]
        f = v[c] // lead if v[c] % lead == 0 else 0
        if f:
            v = [(a - f * b) % m for a, b in zip(v, r)]
        coeffs.append(f)
    return v, coeffs


def in_row_span(v, rows, modulus: int) -> bool:
    h = howell_rows(rows, modulus, len(v))
    rem, _ = reduce_by_howell(v, h, modulus)
    return not any(rem)


# -- Smith form over Z/p^k ----------------------------------------------------------


def smith_mod(rows, modulus: int, ncols: int | None = None):
    """Smith form over Z/p^k: returns (diag_valuations, U, V) with U*A*V diagonal.

    ``diag_valuations[i]`` is e_i with D[i][i] = p^e_i (e_i = k means zero).
    U and V are invertible over Z/p^k.
    """
    p, k = prime_power(modulus)
    m = modulus
    A = [[x % m for x in r] for r in rows]
    nr = len(A)
    nc = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = [[int(i == j) for j in range(nr)] for i in range(nr)]
    V = [[int(i == j) for j in range(nc)] for i in range(nc)]
    diag = []
    for s in range(min(nr, nc)):
        best = None
        for j in range(s, nc):
            for i in range(s, nr):
                if A[i][j]:
                    v = valuation_mod(A[i][j], p, k)
                    if best is None or v < best[0]:
                        best = (v, i, j)
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != s:
            A[s], A[i] = A[i], A[s]
            U[s], U[i] = U[i], U[s]
        if j != s:
            for r in A:
                r[s], r[j] = r[j], r[s]
            for r in V:
                r[s], r[j] = r[j], r[s]
        u = _unit_part_inverse(A[s][s], p, v, m)
        A[s] = [x * u % m for x in A[s]]
        U[s] = [x * u % m for x in U[s]]
        pv = p**v
        for i2 in range(nr):
            if i2 != s and A[i2][s]:
                f = A[i2][s] // pv
                A[i2] = [(a - f * b) % m for a, b in zip(A[i2], A[s])]
                U[i2] = [(a - f * b) % m for a, b in zip(U[i2], U[s])]
        for j2 in range(s + 1, nc):
            if A[s][j2]:
                f = A[s][j2] // pv
                for r in A:
                    r[j2] = (r[j2] - f * r[s]) % m
                for r in V:
                    r[j2] = (r[j2] - f * r[s]) % m
        diag.append(v)
    return diag, U, V


def kernel_mod(M) -> GroupStructure:
    """{x : M x = 0} over Z/p^k, as a sum of cyclic submodules."""
    rows, modulus, ncols = _rows_of(M)
    if not modulus:
        raise ValueError("kernel_mod needs a modulus p^k")
    p, k = prime_power(modulus)
    diag, _, V = smith_mod(rows, modulus, ncols)
    gens, orders = [], []
    for i in range(ncols):
        e = diag[i] if i < len(diag) else k
        if e == 0:
            continue
        scale = p ** (k - e)
        gens.append([V[r][i] * scale % modulus for r in range(ncols)])
        orders.append(p**e)
    return GroupStructure(orders, gens)


def submodule_structure(rows, modulus: int, ncols: int | None = None) -> GroupStructure:
    """Cyclic decomposition of the row span of ``rows`` inside (Z/p^k)^n."""
    p, k = prime_power(modulus)
    if not rows:
        return GroupStructure()
    ncols = len(rows[0]) if ncols is None else ncols
    diag, U, _ = smith_mod(rows, modulus, ncols)
    gens, orders = [], []
    for i, e in enumerate(diag):
        if e >= k:
            continue
        g = [sum(U[i][r] * rows[r][c] for r in range(len(rows))) % modulus for c in range(ncols)]
        gens.append(g)
        orders.append(p ** (k - e))
    return GroupStructure(orders, gens)


def mat_vec(rows, x, modulus: int = 0):
    out = [sum(a * b for a, b in zip(r, x)) for r in rows]
    return [v % modulus for v in out] if modulus else out


@dataclass
class Solution:
    x: list


@dataclass
class Inconsistent:
    row: int  # index of the first equation that cannot be met

    def __bool__(self):
        return False


def solve_mod(M, b):
    """A solution of M x = b over Z/p^k, or Inconsistent."""
    rows, modulus, ncols = _rows_of(M)
    if not modulus:
        raise ValueError("solve_mod needs a modulus p^k")
    nr = len(rows)
    p, k = prime_power(modulus)
    b = [x % modulus for x in b]
    diag, U, V = smith_mod(rows, modulus, ncols)
    c = mat_vec(U, b, modulus)
    y = [0] * ncols
    for i in range(nr):
        e = diag[i] if i < len(diag) else k
        if e >= k:
            if c[i]:
                return Inconsistent(_first_bad_row(rows, b, modulus))
            continue
        pe = p**e
        if c[i] % pe:
            return Inconsistent(_first_bad_row(rows, b, modulus))
        y[i] = (c[i] // pe) % modulus
    x = mat_vec(V, y, modulus)
    return Solution(x)


def _first_bad_row(rows, b, modulus):
    # smallest i such that equations 0..i are already inconsistent
    for i in range(1, len(rows) + 1):
        sub = rows[:i]
        diag, U, _ = smith_mod(sub, modulus, len(rows[0]))
        p, k = prime_power(modulus)
        c = mat_vec(U, b[:i], modulus)
        for j in range(i):
            e = diag[j] if j < len(diag) else k
            if (e >= k and c[j]) or (e < k and c[j] % p**e):
                return i - 1
    return len(rows) - 1


# -- integer Smith form ---------------------------------------------------------


def smith_form_int(M) -> list:
    """Elementary divisors d_1 | d_2 | ... of an integer matrix (nonzero ones)."""
    rows, _, ncols = _rows_of(M)
    A = [list(r) for r in rows]
    nr = len(A)
    nc = ncols
    out = []
    s = 0
    while s < min(nr, nc):
        nz = [(abs(A[i][j]), i, j) for i in range(s, nr) for j in range(s, nc) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[s], A[i] = A[i], A[s]
        for r in A:
            r[s], r[j] = r[j], r[s]
        while True:
            changed = False
            for i2 in range(s + 1, nr):
                if A[i2][s]:
                    q = A[i2][s] // A[s][s]
                    A[i2] = [a - q * b for a, b in zip(A[i2], A[s])]
                    if A[i2][s]:
                        A[s], A[i2] = A[i2], A[s]
                        changed = True
            for j2 in range(s + 1, nc):
                if A[s][j2]:
                    q = A[s][j2] // A[s][s]
                    for r in A:
                        r[j2] -= q * r[s]
                    if A[s][j2]:
                        for r in A:
                            r[s], r[j2] = r[j2], r[s]
                        changed = True
            if changed:
                continue
            d = A[s][s]
            bad = next(
                ((i2, j2) for i2 in range(s + 1, nr) for j2 in range(s + 1, nc) if A[i2][j2] % d),
                None,
            )
            if bad is None:
                break
            A[s] = [a + b for a, b in zip(A[s], A[bad[0]])]
        out.append(abs(A[s][s]))
        s += 1
    return out


# -- fields ---------------------------------------------------------------------


def rank_mod_prime(rows, P: int) -> int:
    """Rank over the field Z/P."""
    return len(echelon_mod_prime(rows, P)[0])


def echelon_mod_prime(rows, P: int):
    """Reduced echelon over Z/P; returns (nonzero rows, pivot columns)."""
    A = [[x % P for x in r] for r in rows]
    A = [r for r in A if any(r)]
    if not A:
        return [], []
    nc = len(A[0])
    out, pivots = [], []
    for c in range(nc):
        idx = next((i for i, r in enumerate(A) if r[c]), None)
        if idx is None:
            continue
        piv = A.pop(idx)
        inv = pow(piv[c], -1, P)
        piv = [x * inv % P for x in piv]
        A = [[(a - r[c] * b) % P for a, b in zip(r, piv)] if r[c] else r for r in A]
        A = [r for r in A if any(r)]
        out = [[(a - r[c] * b) % P for a, b in zip(r, piv)] if r[c] else r for r in out]
        out.append(piv)
        pivots.append(c)
        if not A:
            break
    return out, pivots


def left_kernel_mod_prime(rows, P: int) -> list:
    """Basis of {c : c^T A = 0} over Z/P."""
    n = len(rows)
    if n == 0:
        return []
    nc = len(rows[0])
    aug = [[x % P for x in r] + [int(i == j) for j in range(n)] for i, r in enumerate(rows)]
    # eliminate on the first nc columns, tracking combinations
    pivot_row = 0
    for c in range(nc):
        idx = next((i for i in range(pivot_row, n) if aug[i][c]), None)
        if idx is None:
            continue
        aug[pivot_row], aug[idx] = aug[idx], aug[pivot_row]
        inv = pow(aug[pivot_row][c], -1, P)
        aug[pivot_row] = [x * inv % P for x in aug[pivot_row]]
        for i in range(n):
            if i != pivot_row and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(a - f * b) % P for a, b in zip(aug[i], aug[pivot_row])]
        pivot_row += 1
        if pivot_row == n:
            break
    return [r[nc:] for r in aug[pivot_row:]]
