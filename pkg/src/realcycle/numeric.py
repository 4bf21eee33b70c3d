"""Exact univariate polynomial arithmetic over Q with certified real-root isolation.

Everything here is built on ``fractions.Fraction``: no floating point is used
anywhere, so root counts, signs and isolating intervals are certificates, not
estimates.  Polynomials are stored lowest degree first.  Points of the extended
real line carry an optional side (just left / just right of a rational), which
is how orderings of the rational function field are represented downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import BadInterval, ZeroPolynomial

Rat = Fraction

Coeffable = Union[int, Fraction]


def _frac(x: Coeffable) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class UPoly:
    """Univariate polynomial with exact rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple; otherwise the leading
    coefficient is nonzero.
    """

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*coeffs: Coeffable) -> "UPoly":
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return UPoly(tuple(cs))

    @staticmethod
    def zero() -> "UPoly":
        return UPoly(())

    @staticmethod
    def one() -> "UPoly":
        return UPoly.of(1)

    @staticmethod
    def x() -> "UPoly":
        return UPoly.of(0, 1)

    @staticmethod
    def constant(c: Coeffable) -> "UPoly":
        return UPoly.of(c)

    @staticmethod
    def from_roots(roots: Iterable[Coeffable], lead: Coeffable = 1) -> "UPoly":
        p = UPoly.of(lead)
        for r in roots:
            p = p * UPoly.of(-_frac(r), 1)
        return p

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the convention that the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __add__(self, other: "UPoly") -> "UPoly":
        cs = [a + b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0))]
        return UPoly.of(*cs)

    def __sub__(self, other: "UPoly") -> "UPoly":
        cs = [a - b for a, b in itertools.zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0))]
        return UPoly.of(*cs)

    def __neg__(self) -> "UPoly":
        return UPoly(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "UPoly") -> "UPoly":
        if self.is_zero or other.is_zero:
            return UPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UPoly.of(*out)

    def scale(self, c: Coeffable) -> "UPoly":
        c = _frac(c)
        if c == 0:
            return UPoly.zero()
        return UPoly(tuple(a * c for a in self.coeffs))

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if other.is_zero:
            raise ZeroPolynomial("division by the zero polynomial")
        rem = list(self.coeffs)
        qdeg = len(rem) - len(other.coeffs)
        if qdeg < 0:
            return UPoly.zero(), self
        quo = [Fraction(0)] * (qdeg + 1)
        dlc = other.lc
        for k in range(qdeg, -1, -1):
            c = rem[k + other.degree] / dlc
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UPoly.of(*quo), UPoly.of(*rem)

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise ValueError("inexact polynomial division")
        return q

    def deriv(self) -> "UPoly":
        return UPoly.of(*(c * i for i, c in enumerate(self.coeffs) if i))

    def eval_at(self, x: Coeffable) -> Fraction:
        x = _frac(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "UPoly":
        if self.is_zero:
            raise ZeroPolynomial("zero polynomial cannot be made monic")
        return self.scale(1 / self.lc)

    def gcd(self, other: "UPoly") -> "UPoly":
        """Monic greatest common divisor; gcd(0, 0) is the zero polynomial."""
        a, b = self, other
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a.monic()

    def to_str(self, var: str = "t") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                mono = str(abs(c))
            else:
                head = "" if abs(c) == 1 else f"{abs(c)}*"
                mono = f"{head}{var}" if i == 1 else f"{head}{var}^{i}"
            if not parts:
                parts.append(mono if c > 0 else f"-{mono}")
            else:
                parts.append(f"+ {mono}" if c > 0 else f"- {mono}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()


# --- extended points -------------------------------------------------------

SIDE_EXACT = "exact"
SIDE_PLUS = "plus"
SIDE_MINUS = "minus"

_SIDE_RANK = {SIDE_MINUS: -1, SIDE_EXACT: 0, SIDE_PLUS: 1}


@dataclass(frozen=True)
class ExtendedPoint:
    """A point of the extended real line, optionally displaced to one side.

    ``kind`` is one of ``"-inf"``, ``"+inf"`` or ``"finite"``; finite points
    carry a rational base and a side.  Side ``plus`` (resp. ``minus``) means
    "immediately to the right (resp. left) of the base"; such points never
    coincide with a root of any nonzero polynomial, which is what makes them
    usable as orderings.
    """

    kind: str
    base: Fraction | None = None
    side: str = SIDE_EXACT

    @staticmethod
    def at(x: Coeffable) -> "ExtendedPoint":
        return ExtendedPoint("finite", _frac(x), SIDE_EXACT)

    @staticmethod
    def above(x: Coeffable) -> "ExtendedPoint":
        return ExtendedPoint("finite", _frac(x), SIDE_PLUS)

    @staticmethod
    def below(x: Coeffable) -> "ExtendedPoint":
        return ExtendedPoint("finite", _frac(x), SIDE_MINUS)

    @staticmethod
    def neg_inf() -> "ExtendedPoint":
        return ExtendedPoint("-inf")

    @staticmethod
    def pos_inf() -> "ExtendedPoint":
        return ExtendedPoint("+inf")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def _key(self):
        if self.kind == "-inf":
            return (0, Fraction(0), 0)
        if self.kind == "+inf":
            return (2, Fraction(0), 0)
        return (1, self.base, _SIDE_RANK[self.side])

    def __lt__(self, other: "ExtendedPoint") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "ExtendedPoint") -> bool:
        return self._key() <= other._key()

    def describe(self) -> str:
        if self.kind != "finite":
            return self.kind
        if self.side == SIDE_EXACT:
            return str(self.base)
        return f"{self.base}{'+' if self.side == SIDE_PLUS else '-'}"


@dataclass(frozen=True)
class IsolatingInterval:
    """Open rational interval containing exactly one real root of ``poly``.

    ``poly`` is the square-free part of the polynomial whose roots were
    isolated, so it changes sign exactly once across the interval and does not
    vanish at either endpoint.
    """

    lo: Fraction
    hi: Fraction
    poly: UPoly

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def refined(self) -> "IsolatingInterval":
        """Halve the interval, keeping the unique root inside."""
        m = self.midpoint()
        fm = self.poly.eval_at(m)
        if fm == 0:
            w = (self.hi - self.lo) / 4
            return IsolatingInterval(m - w, m + w, self.poly)
        if same_sign(self.poly.eval_at(self.lo), fm):
            return IsolatingInterval(m, self.hi, self.poly)
        return IsolatingInterval(self.lo, m, self.poly)

    def contains(self, x: Coeffable) -> bool:
        x = _frac(x)
        return self.lo < x < self.hi


def same_sign(a: Fraction, b: Fraction) -> bool:
    return (a > 0) == (b > 0) and a != 0 and b != 0


def sign_of(x: Fraction) -> int:
    return (x > 0) - (x < 0)


# --- core operations --------------------------------------------------------

def squarefree_part(p: UPoly) -> UPoly:
    """p / gcd(p, p'), scaled monic and multiplied by the sign of lc(p).

    For square-free input this returns p/|lc(p)|, so the sign of the result on
    the real line agrees with the sign of p everywhere; that convention is what
    the curve-topology code relies on.
    """
    if p.is_zero:
        raise ZeroPolynomial("square-free part of the zero polynomial")
    g = p.gcd(p.deriv())
    if g.is_zero:  # p is a nonzero constant: derivative is 0, gcd convention gives 0
        g = p.monic()
    q = p // g
    return q.monic().scale(sign_of(p.lc))


def squarefree_decomposition(p: UPoly) -> list[tuple[UPoly, int]]:
    """Yun decomposition of the monic part of p: returns [(a_i, i)] with
    monic(p) = prod a_i^i, each a_i monic square-free, pairwise coprime.

    Factors that come out trivial (degree zero) are omitted.
    """
    if p.is_zero:
        raise ZeroPolynomial("square-free decomposition of the zero polynomial")
    f = p.monic()
    if f.degree == 0:
        return []
    out: list[tuple[UPoly, int]] = []
    g = f.gcd(f.deriv())
    if g.degree == 0:
        return [(f, 1)]
    c = f // g
    d = (f.deriv() // g) - c.deriv()
    i = 1
    while c.degree > 0:
        a = c.gcd(d)
        if a.degree > 0:
            out.append((a, i))
        c = c // a if not a.is_zero else c
        d = (d // a) - c.deriv()
        i += 1
    return out


def odd_multiplicity_part(p: UPoly) -> UPoly:
    """Product of the monic irreducible factors of p occurring with odd
    multiplicity (the square class of monic(p) in Q(t))."""
    out = UPoly.one()
    for factor, mult in squarefree_decomposition(p):
        if mult % 2 == 1:
            out = out * factor
    return out


def sturm_sequence(p: UPoly) -> tuple[UPoly, ...]:
    """Sturm chain of the square-free part of p.

    Degree-zero polynomials are returned as a one-element chain unchanged.
    """
    if p.is_zero:
        raise ZeroPolynomial("Sturm chain of the zero polynomial")
    if p.degree == 0:
        return (p,)
    q = squarefree_part(p)
    chain = [q, q.deriv()]
    while chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero:
            # cannot happen for a square-free q, but guard anyway
            break
        chain.append(-rem)
    return tuple(chain)


def sign_at(p: UPoly, x: ExtendedPoint) -> int:
    """Certified sign of p at an extended point.

    At a side point the factor (t - base)^k is divided out exactly before
    evaluating, so the answer is the true one-sided sign, never a sample.
    """
    if p.is_zero:
        return 0
    if x.kind == "+inf":
        return sign_of(p.lc)
    if x.kind == "-inf":
        return sign_of(p.lc) * (-1) ** p.degree
    value = p.eval_at(x.base)
    if x.side == SIDE_EXACT:
        return sign_of(value)
    if value != 0:
        return sign_of(value)
    linear = UPoly.of(-x.base, 1)
    k = 0
    u = p
    while True:
        q, r = u.divmod(linear)
        if not r.is_zero:
            break
        u = q
        k += 1
    base_sign = sign_of(u.eval_at(x.base))
    if x.side == SIDE_PLUS:
        return base_sign
    return base_sign * (-1) ** k


def _variations(signs: Sequence[int]) -> int:
    nonzero = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)


def _lower_cut(a: ExtendedPoint) -> ExtendedPoint:
    """Where to evaluate the chain so that the count starts just inside the
    open interval at a."""
    if not a.is_finite:
        return a
    if a.side == SIDE_MINUS:
        return a
    return ExtendedPoint.above(a.base)


def _upper_cut(b: ExtendedPoint) -> ExtendedPoint:
    if not b.is_finite:
        return b
    if b.side == SIDE_PLUS:
        return b
    return ExtendedPoint.below(b.base)


def count_real_roots(p: UPoly, a: ExtendedPoint, b: ExtendedPoint) -> int:
    """Number of distinct real roots of p in the open interval (a, b)."""
    if p.is_zero:
        raise ZeroPolynomial("root count of the zero polynomial")
    if not a < b:
        raise BadInterval(f"{a.describe()} is not below {b.describe()}")
    chain = sturm_sequence(p)
    lo = _lower_cut(a)
    hi = _upper_cut(b)
    va = _variations([sign_at(q, lo) for q in chain])
    vb = _variations([sign_at(q, hi) for q in chain])
    return va - vb


def root_bound(p: UPoly) -> Fraction:
    """Cauchy bound: every real root of p has absolute value strictly below it."""
    if p.is_zero:
        raise ZeroPolynomial("root bound of the zero polynomial")
    if p.degree == 0:
        return Fraction(1)
    lead = abs(p.lc)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def isolate_real_roots(p: UPoly) -> tuple[IsolatingInterval, ...]:
    """One disjoint open rational interval per distinct real root, sorted."""
    if p.is_zero:
        raise ZeroPolynomial("cannot isolate roots of the zero polynomial")
    q = squarefree_part(p)
    if q.degree <= 0:
        return ()
    chain = sturm_sequence(q)

    def var_at(point: ExtendedPoint) -> int:
        return _variations([sign_at(g, point) for g in chain])

    bound = root_bound(q)
    out: list[IsolatingInterval] = []
    work = [(-bound, bound, var_at(ExtendedPoint.at(-bound)), var_at(ExtendedPoint.at(bound)))]
    while work:
        lo, hi, vlo, vhi = work.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(lo, hi, q))
            continue
        mid = (lo + hi) / 2
        if q.eval_at(mid) != 0:
            vmid = var_at(ExtendedPoint.at(mid))
            work.append((lo, mid, vlo, vmid))
            work.append((mid, hi, vmid, vhi))
            continue
        # the midpoint is itself a root: carve out a window around it
        w = (hi - lo) / 4
        while (q.eval_at(mid - w) == 0 or q.eval_at(mid + w) == 0
               or count_real_roots(q, ExtendedPoint.at(mid - w), ExtendedPoint.at(mid + w)) != 1):
            w /= 2
        out.append(IsolatingInterval(mid - w, mid + w, q))
        vl, vr = var_at(ExtendedPoint.at(mid - w)), var_at(ExtendedPoint.at(mid + w))
        work.append((lo, mid - w, vlo, vl))
        work.append((mid + w, hi, vr, vhi))
    out.sort(key=lambda iv: iv.lo)
    return tuple(out)
