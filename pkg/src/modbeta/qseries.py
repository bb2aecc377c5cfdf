"""Truncated Laurent q-expansions with exact coefficients.

A :class:`QExpansion` stores coefficients for indices ``lowest .. precision-1``
and knows nothing past ``precision``.  Coefficients live in one of three rings:
``ZZ`` (Python ints), ``QQ`` (ints or Fractions) or ``Zmod(m)`` (residues in
``range(m)``).  ``ZZ`` silently promotes to ``QQ``; every other mix raises
:class:`RingMismatch`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InsufficientPrecision, NonIntegralCoefficient, RingMismatch

INF = math.inf


@dataclass(frozen=True)
class Ring:
    kind: str  # "ZZ", "QQ" or "mod"
    modulus: int = 0

    def __repr__(self):
        return f"Zmod({self.modulus})" if self.kind == "mod" else self.kind

    @property
    def is_exact(self) -> bool:
        return self.kind != "mod"

    def coerce(self, c):
        if self.kind == "mod":
            if isinstance(c, Fraction):
                if c.denominator == 1:
                    return c.numerator % self.modulus
                return c.numerator * pow(c.denominator, -1, self.modulus) % self.modulus
            return c % self.modulus
        if self.kind == "ZZ":
            if isinstance(c, Fraction):
                if c.denominator != 1:
                    raise RingMismatch(f"{c} is not an integer")
                return c.numerator
            return int(c)
        if isinstance(c, Fraction) and c.denominator == 1:
            return c.numerator
        return c


ZZ = Ring("ZZ")
QQ = Ring("QQ")


def Zmod(m: int) -> Ring:
    if m < 2:
        raise ValueError("modulus must be >= 2")
    return Ring("mod", m)


def common_ring(a: Ring, b: Ring) -> Ring:
    if a == b:
        return a
    if {a.kind, b.kind} == {"ZZ", "QQ"}:
        return QQ
    raise RingMismatch(f"cannot combine {a!r} and {b!r}")


# -- integer polynomial multiplication --------------------------------------


def _pack(vals, nbytes):
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in vals), "little")


def _unpack(x, nbytes, n):
    x &= (1 << (8 * nbytes * n)) - 1
    raw = x.to_bytes(nbytes * n, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(n)]


def _mul_nonneg(a, b, n):
    """First n coefficients of a*b for non-negative integer lists (Kronecker)."""
    a = a[:n]
    b = b[:n]
    ma = max(a, default=0)
    mb = max(b, default=0)
    if not ma or not mb:
        return [0] * n
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 1
    nbytes = (bits + 7) // 8
    prod = _pack(a, nbytes) * _pack(b, nbytes)
    out = _unpack(prod, nbytes, min(n, len(a) + len(b) - 1))
    return out + [0] * (n - len(out))


def _naive_mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j, y in enumerate(b[: n - i]):
            if y:
                out[i + j] += x * y
    return out


def int_poly_mul(a, b, n):
    """First n coefficients of the product of two integer coefficient lists."""
    if min(len(a), len(b), n) <= 8:
        return _naive_mul(a, b, n)
    ap = [x if x > 0 else 0 for x in a]
    an = [-x if x < 0 else 0 for x in a]
    bp = [x if x > 0 else 0 for x in b]
    bn = [-x if x < 0 else 0 for x in b]
    pos = _mul_nonneg(ap, bp, n)
    if not any(an) and not any(bn):
        return pos
    both = _mul_nonneg(an, bn, n)
    neg1 = _mul_nonneg(ap, bn, n)
    neg2 = _mul_nonneg(an, bp, n)
    return [w + x - y - z for w, x, y, z in zip(pos, both, neg1, neg2)]


def _to_common_denominator(vals):
    den = 1
    for v in vals:
        if isinstance(v, Fraction) and v.denominator != 1:
            den = den * v.denominator // math.gcd(den, v.denominator)
    if den == 1:
        return [int(v) for v in vals], 1
    return [int(v * den) for v in vals], den


def _poly_mul(a, b, n, ring: Ring):
    if ring.kind == "mod":
        m = ring.modulus
        if min(len(a), len(b), n) <= 8:
            return [c % m for c in _naive_mul(a, b, n)]
        return [c % m for c in _mul_nonneg(a, b, n)]
    if ring.kind == "ZZ":
        return int_poly_mul(a, b, n)
    ia, da = _to_common_denominator(a)
    ib, db = _to_common_denominator(b)
    prod = int_poly_mul(ia, ib, n)
    d = da * db
    if d == 1:
        return prod
    return [ring.coerce(Fraction(c, d)) for c in prod]


# -- the series type ---------------------------------------------------------


class QExpansion:
    """Immutable truncated Laurent series sum_{n >= lowest} c_n q^n + O(q^precision)."""

    __slots__ = ("coeffs", "lowest", "precision", "ring")

    def __init__(self, coeffs, lowest: int = 0, precision: int | None = None, ring: Ring = ZZ):
        coeffs = [ring.coerce(c) for c in coeffs]
        if precision is None:
            precision = lowest + len(coeffs)
        if precision <= lowest:
            raise ValueError(f"precision {precision} must exceed lowest index {lowest}")
        n = precision - lowest
        if len(coeffs) < n:
            coeffs.extend([0] * (n - len(coeffs)))
        object.__setattr__(self, "coeffs", tuple(coeffs[:n]))
        object.__setattr__(self, "lowest", lowest)
        object.__setattr__(self, "precision", precision)
        object.__setattr__(self, "ring", ring)

    def __setattr__(self, name, value):
        raise AttributeError("QExpansion is immutable")

    @classmethod
    def _raw(cls, coeffs, lowest, precision, ring):
        obj = object.__new__(cls)
        object.__setattr__(obj, "coeffs", tuple(coeffs))
        object.__setattr__(obj, "lowest", lowest)
        object.__setattr__(obj, "precision", precision)
        object.__setattr__(obj, "ring", ring)
        return obj

    # constructors
    @classmethod
    def constant(cls, c, precision: int, ring: Ring = ZZ):
        return cls([c], 0, precision, ring)

    @classmethod
    def zero(cls, precision: int, ring: Ring = ZZ, lowest: int = 0):
        return cls([], lowest, precision, ring)

    @classmethod
    def monomial(cls, n: int, precision: int, c=1, ring: Ring = ZZ):
        lo = min(n, 0)
        if n >= precision:
            return cls.zero(precision, ring, lo)
        return cls([0] * (n - lo) + [c], lo, precision, ring)

    @classmethod
    def from_dict(cls, terms: dict, precision: int, ring: Ring = ZZ):
        lo = min([0, *terms])
        vals = [0] * (precision - lo)
        for n, c in terms.items():
            if n < precision:
                vals[n - lo] = c
        return cls(vals, lo, precision, ring)

    # access
    def __getitem__(self, n: int):
        if n >= self.precision:
            raise InsufficientPrecision(self.precision, n + 1, f"coefficient of q^{n}")
        if n < self.lowest:
            return 0
        return self.coeffs[n - self.lowest]

    def coefficients(self, start: int = 0, stop: int | None = None) -> list:
        stop = self.precision if stop is None else stop
        if stop > self.precision:
            raise InsufficientPrecision(self.precision, stop)
        return [self[n] for n in range(start, stop)]

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                n = self.lowest + i
                terms.append(f"{c}" if n == 0 else f"{c}*q^{n}")
            if len(terms) >= 8:
                terms.append("...")
                break
        body = " + ".join(terms) or "0"
        return f"QExpansion({body} + O(q^{self.precision}), {self.ring!r})"

    # arithmetic
    def _coerce_other(self, other):
        if isinstance(other, QExpansion):
            return other
        return QExpansion.constant(other, max(self.precision, 1), self.ring)

    def __add__(self, other):
        other = self._coerce_other(other)
        ring = common_ring(self.ring, other.ring)
        lo = min(self.lowest, other.lowest)
        prec = min(self.precision, other.precision)
        if prec <= lo:
            raise InsufficientPrecision(prec, lo + 1, "sum")
        vals = [self._get0(n) + other._get0(n) for n in range(lo, prec)]
        if ring.kind == "mod":
            vals = [v % ring.modulus for v in vals]
        elif ring.kind == "QQ":
            vals = [ring.coerce(v) for v in vals]
        return QExpansion._raw(vals, lo, prec, ring)

    __radd__ = __add__

    def _get0(self, n):
        i = n - self.lowest
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce_other(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        ring = self.ring
        if isinstance(c, Fraction) and c.denominator != 1 and ring.kind == "ZZ":
            ring = QQ
        c = ring.coerce(c)
        vals = [ring.coerce(c * x) for x in self.coeffs]
        return QExpansion._raw(vals, self.lowest, self.precision, ring)

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            return self.scale(other)
        ring = common_ring(self.ring, other.ring)
        a, b = self.stripped(), other.stripped()
        lo = a.lowest + b.lowest
        prec = min(a.precision + b.lowest, b.precision + a.lowest)
        n = prec - lo
        vals = _poly_mul(list(a.coeffs), list(b.coeffs), n, ring)
        return QExpansion._raw(vals, lo, prec, ring)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return QExpansion.constant(1, self.precision - self.lowest, self.ring)
        base = self
        result = None
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, m: int):
        """Multiply by q^m."""
        return QExpansion._raw(self.coeffs, self.lowest + m, self.precision + m, self.ring)

    def truncate(self, precision: int):
        if precision > self.precision:
            raise InsufficientPrecision(self.precision, precision, "truncate")
        if precision <= self.lowest:
            return QExpansion.zero(precision, self.ring, min(0, precision - 1))
        return QExpansion._raw(self.coeffs[: precision - self.lowest], self.lowest, precision, self.ring)

    def stripped(self):
        """Drop stored leading zeros so that ``lowest == ord_q`` (zero series unchanged)."""
        o = self.ord_q()
        if o == INF or o == self.lowest:
            return self
        return QExpansion._raw(self.coeffs[o - self.lowest:], o, self.precision, self.ring)

    def inverse(self):
        """1/f for f whose leading stored coefficient is a unit of the ring."""
        o = self.ord_q()
        if o == INF:
            raise ZeroDivisionError("inverse of zero series")
        lead = self[o]
        ring = self.ring
        if ring.kind == "ZZ" and abs(lead) != 1:
            ring = QQ
        u = [ring.coerce(c) for c in self.coeffs[o - self.lowest:]]
        n = len(u)
        if ring.kind == "mod":
            inv0 = pow(lead, -1, ring.modulus)
        elif ring.kind == "ZZ":
            inv0 = lead
        else:
            inv0 = Fraction(1) / lead
        out = [ring.coerce(inv0)]
        for k in range(1, n):
            s = sum(u[i] * out[k - i] for i in range(1, k + 1) if u[i])
            out.append(ring.coerce(-s * inv0))
        # f = q^o * u  ->  1/f = q^-o * (1/u), known below index -o + n
        return QExpansion._raw(out, -o, n - o, ring)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        if self.precision != other.precision or self.ring != other.ring:
            return False
        lo = min(self.lowest, other.lowest)
        return all(self._get0(n) == other._get0(n) for n in range(lo, self.precision))

    __hash__ = None

    # structure
    def ord_q(self):
        for i, c in enumerate(self.coeffs):
            if c:
                return self.lowest + i
        return INF

    def is_zero(self) -> bool:
        return self.ord_q() == INF


def add(a: QExpansion, b: QExpansion) -> QExpansion:
    return a + b


def mul(a: QExpansion, b: QExpansion) -> QExpansion:
    return a * b


def ord_q(f: QExpansion):
    return f.ord_q()


def verschiebung(f: QExpansion, ell: int) -> QExpansion:
    """f(q) -> f(q^ell); known to precision ell * precision(f)."""
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell == 1:
        return f
    lo = f.lowest * ell
    prec = f.precision * ell
    vals = [0] * (prec - lo)
    for i, c in enumerate(f.coeffs):
        vals[i * ell] = c
    return QExpansion._raw(vals, lo, prec, f.ring)


def reduce_mod(f: QExpansion, p: int, k: int) -> QExpansion:
    """Reduce a p-integral series into Z/p^k."""
    m = p**k
    ring = Zmod(m)
    if f.ring.kind == "mod":
        if f.ring.modulus % m:
            raise RingMismatch(f"cannot reduce {f.ring!r} to Z/{m}")
        return QExpansion._raw([c % m for c in f.coeffs], f.lowest, f.precision, ring)
    vals = []
    for i, c in enumerate(f.coeffs):
        if isinstance(c, Fraction) and c.denominator % p == 0:
            raise NonIntegralCoefficient(f.lowest + i, c, p)
        vals.append(ring.coerce(c))
    return QExpansion._raw(vals, f.lowest, f.precision, ring)


def equal_to_precision(a: QExpansion, b: QExpansion, n: int) -> bool:
    """Compare coefficients below q^n; both inputs must be known that far."""
    for f in (a, b):
        if f.precision < n:
            raise InsufficientPrecision(f.precision, n, "equal_to_precision")
    common_ring(a.ring, b.ring)
    lo = min(a.lowest, b.lowest)
    if a.ring.kind == "mod" and b.ring == a.ring:
        return all(a._get0(i) == b._get0(i) for i in range(lo, n))
    return all(a._get0(i) - b._get0(i) == 0 for i in range(lo, n))


def to_line(f: QExpansion) -> str:
    """Serialize as ``lowest precision c_lowest ... c_{precision-1}``."""
    return " ".join([str(f.lowest), str(f.precision), *(str(c) for c in f.coeffs)])


def from_line(line: str, ring: Ring = ZZ) -> QExpansion:
    parts = line.split()
    if len(parts) < 2:
        raise ValueError("q-expansion line needs at least lowest and precision")
    lo, prec = int(parts[0]), int(parts[1])
    vals = [Fraction(x) if "/" in x else int(x) for x in parts[2:]]
    if len(vals) != prec - lo:
        raise ValueError(f"expected {prec - lo} coefficients, got {len(vals)}")
    return QExpansion(vals, lo, prec, ring)
